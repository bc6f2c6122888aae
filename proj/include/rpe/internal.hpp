#pragma once

#include "rpe/projections.hpp"

namespace rpe::detail {

struct Grad {
  PhysicalField f, fx, fy;
};

// Samples of f and its horizontal derivatives.
Grad phys_grad(const SpectralField& f);
SpectralField forward_dealiased(const PhysicalField& p, int n);
// Project onto barotropic, mean-zero, divergence-free, dealiased, real fields.
void enforce_barotropic(VectorField& v);

}  // namespace rpe::detail
