#pragma once

#include <cstdint>
#include <limits>
#include <span>

#include "iet/lattice.hpp"

namespace iet {

/// Largest diffusivity for which the explicit scheme is stable with unit steps.
inline constexpr double kMaxDiffusivity = 0.5;

/// Throws StabilityError unless 0 <= d <= 1/2.
void check_diffusivity(double d);

/// One explicit diffusion sweep with periodic closure:
///   out_i = (1 - 2D) c_i + D c_{i+1} + D c_{i-1}
/// evaluated from the previous level only. OpenMP-parallel across sites;
/// bitwise identical to reference::diffusion_step_into.
void diffusion_step_into(std::span<const double> in, std::span<double> out, double d);

ColorField diffusion_step(std::span<const double> field, double d);

namespace reference {
/// Serial, index-wrapping form of the same stencil. Kept for testing and benchmarks.
void diffusion_step_into(std::span<const double> in, std::span<double> out, double d);
ColorField diffusion_step(std::span<const double> field, double d);
}  // namespace reference

/// Iteration budget on a lattice of length l_new that matches the
/// dimensionless diffusivity of a reference (l_ref, t_max_ref): ceil((l_new/l_ref)^2 t_max_ref).
std::int64_t match_iterations(std::uint64_t l_ref, std::int64_t t_max_ref, std::uint64_t l_new);

/// L^2 / (D T_max); +infinity when D == 0.
double peclet_number(std::uint64_t length, double d, std::int64_t t_max);

/// D = L^2 / (Pe T_max). Throws StabilityError if the result exceeds 1/2.
double diffusivity_from_peclet(std::uint64_t length, double pe, std::int64_t t_max);

}  // namespace iet
