#include "iet/diffusion.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "iet/errors.hpp"

namespace iet {

void check_diffusivity(double d) {
  if (!(d >= 0.0 && d <= kMaxDiffusivity))
    throw StabilityError("diffusivity " + std::to_string(d) +
                         " outside the stable range [0, 0.5] of the explicit scheme");
}

namespace {

void check_step_args(std::span<const double> in, std::span<double> out, double d) {
  check_diffusivity(d);
  if (in.size() < 3) throw InputError("diffusion needs a lattice of at least 3 sites");
  if (out.size() != in.size()) throw InputError("diffusion output length mismatch");
}

// Single expression shared by both kernels so they agree bit for bit.
// Written as an increment so a locally uniform field is reproduced exactly.
inline double stencil(double left, double centre, double right, double d) {
  return centre + d * ((left - centre) + (right - centre));
}

}  // namespace

void diffusion_step_into(std::span<const double> in, std::span<double> out, double d) {
  check_step_args(in, out, d);
  const std::size_t n = in.size();
  if (d == 0.0) {
    std::copy(in.begin(), in.end(), out.begin());
    return;
  }
  const double* c = in.data();
  double* o = out.data();
  out[0] = stencil(c[n - 1], c[0], c[1], d);
  out[n - 1] = stencil(c[n - 2], c[n - 1], c[0], d);
  const auto last = static_cast<std::ptrdiff_t>(n - 1);
#pragma omp parallel for schedule(static) if (n > 4096)
  for (std::ptrdiff_t i = 1; i < last; ++i) {
    o[i] = stencil(c[i - 1], c[i], c[i + 1], d);
  }
}

ColorField diffusion_step(std::span<const double> field, double d) {
  ColorField out(field.size());
  diffusion_step_into(field, out, d);
  return out;
}

namespace reference {

void diffusion_step_into(std::span<const double> in, std::span<double> out, double d) {
  check_step_args(in, out, d);
  const std::size_t n = in.size();
  if (d == 0.0) {
    std::copy(in.begin(), in.end(), out.begin());
    return;
  }
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = stencil(in[(i + n - 1) % n], in[i], in[(i + 1) % n], d);
  }
}

ColorField diffusion_step(std::span<const double> field, double d) {
  ColorField out(field.size());
  diffusion_step_into(field, out, d);
  return out;
}

}  // namespace reference

std::int64_t match_iterations(std::uint64_t l_ref, std::int64_t t_max_ref, std::uint64_t l_new) {
  if (l_ref == 0 || l_new == 0 || t_max_ref <= 0)
    throw InputError("match_iterations needs positive arguments");
  // exact ceil(l_new^2 * t_ref / l_ref^2) in 128-bit integers
  __extension__ typedef unsigned __int128 u128;
  const u128 numer = static_cast<u128>(l_new) * l_new * static_cast<u128>(t_max_ref);
  const u128 denom = static_cast<u128>(l_ref) * l_ref;
  const u128 q = (numer + denom - 1) / denom;
  if (q > static_cast<u128>(std::numeric_limits<std::int64_t>::max()))
    throw CapacityError("matched iteration count overflows 64 bits");
  return static_cast<std::int64_t>(q);
}

double peclet_number(std::uint64_t length, double d, std::int64_t t_max) {
  if (d < 0.0 || t_max <= 0) throw InputError("peclet_number needs D >= 0 and T_max > 0");
  if (d == 0.0) return std::numeric_limits<double>::infinity();
  const double l = static_cast<double>(length);
  return l * l / (d * static_cast<double>(t_max));
}

double diffusivity_from_peclet(std::uint64_t length, double pe, std::int64_t t_max) {
  if (!(pe > 0.0) || t_max <= 0) throw InputError("diffusivity_from_peclet needs Pe > 0, T_max > 0");
  const double l = static_cast<double>(length);
  const double d = l * l / (pe * static_cast<double>(t_max));
  if (d > kMaxDiffusivity)
    throw StabilityError("Pe = " + std::to_string(pe) + " on L = " + std::to_string(length) +
                         " with T_max = " + std::to_string(t_max) + " needs D = " +
                         std::to_string(d) + " > 0.5; increase T_max");
  return d;
}

}  // namespace iet
