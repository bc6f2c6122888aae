#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "rpe/projections.hpp"

namespace rpe {

struct EnsembleSpec {
  int n = 16;
  int mode_cap = 3;
  int samples = 200;
  std::uint64_t seed = 20240601;
};

struct IdentityReport {
  std::map<std::string, double> max_residual;
  int samples = 0;
  double worst() const;
};

struct EstimateReport {
  std::string lemma;
  double max_ratio = 0.0;
  int samples = 0;
  int worst_sample = -1;
  std::uint64_t worst_seed = 0;
  double r = 0.0;
  double tau = 0.0;
  int n = 0;
};

enum class LemmaKind { A1, A2, A3, A4, A5, A6, A7, Planar };

std::string lemma_name(LemmaKind k);
std::vector<LemmaKind> all_lemma_kinds();

// Seed of sample i of an ensemble; the fields of a sample depend only on
// this seed and the mode cap, not on the grid size.
std::uint64_t sample_seed(const EnsembleSpec& e, int i);

enum class FieldShape { General, ZeroVerticalMean, Planar };

// Real, mean-zero field with unit-normal complex coefficients on
// max|k_i| <= cap, symmetrized.
SpectralField random_scalar(int n, int cap, std::mt19937_64& rng, FieldShape shape = FieldShape::General);
VectorField random_vector(int n, int cap, std::mt19937_64& rng, FieldShape shape = FieldShape::General);

// Unaliased pointwise products (the caller keeps spectra narrow enough).
SpectralField product(const SpectralField& a, const SpectralField& b);
// f . grad g
VectorField advect(const VectorField& f, const VectorField& g);
// (div f) g
VectorField div_times(const VectorField& f, const VectorField& g);
// (int_0^z div f ds) d_z g
VectorField vertical_transport(const VectorField& f, const VectorField& g);

struct RatioParts {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio() const;
};

RatioParts banach_ratio(const SpectralField& f, const SpectralField& g, double r, double tau);
RatioParts estimate_ratio(LemmaKind kind, const VectorField& f, const VectorField& g, const VectorField& h,
                          double r, double tau);

IdentityReport check_identities(const EnsembleSpec& e, double tau = 0.1);
EstimateReport check_banach_algebra(const EnsembleSpec& e, double r, double tau);
EstimateReport check_nonlinear_estimate(LemmaKind kind, const EnsembleSpec& e, double r, double tau);

nlohmann::json to_json(const IdentityReport& r);
nlohmann::json to_json(const EstimateReport& r);

}  // namespace rpe
