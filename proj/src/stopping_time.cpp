#include "iet/stopping_time.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "iet/errors.hpp"

namespace iet {

double batchelor_length(double t_hat, double pe) {
  if (!(t_hat >= 0.0) || !(pe > 0.0)) throw InputError("batchelor_length needs t_hat >= 0, Pe > 0");
  return std::numbers::pi * std::sqrt(t_hat / (2.0 * pe));
}

StoppingTimeSolution solve_stopping_time_lengths(std::span<const double> mean_lengths, double pe,
                                                 std::int64_t t_max) {
  if (t_max < 1) throw InputError("stopping time needs t_max >= 1");
  if (mean_lengths.size() < static_cast<std::size_t>(t_max) + 1)
    throw InputError("mean subsegment curve must cover T = 0..t_max");
  if (!(pe > 0.0)) throw InputError("Peclet number must be positive");

  StoppingTimeSolution sol;
  if (std::isinf(pe)) return sol;
  const double tm = static_cast<double>(t_max);
  auto gap = [&](std::int64_t t) {
    return batchelor_length(static_cast<double>(t) / tm, pe) -
           mean_lengths[static_cast<std::size_t>(t)];
  };
  for (std::int64_t t = 1; t <= t_max; ++t) {
    const double g = gap(t);
    if (g >= 0.0) {
      sol.found = true;
      sol.iteration = t;
      sol.normalized_time = static_cast<double>(t) / tm;
      const double g_prev = gap(t - 1);
      sol.interpolated_iteration =
          g == g_prev ? static_cast<double>(t) : static_cast<double>(t - 1) + (-g_prev) / (g - g_prev);
      return sol;
    }
  }
  return sol;
}

StoppingTimeSolution solve_stopping_time(std::span<const double> mean_cut_curve, double pe,
                                         std::int64_t t_max) {
  std::vector<double> lengths;
  lengths.reserve(mean_cut_curve.size());
  for (double c : mean_cut_curve) {
    if (!(c >= 0.0)) throw InputError("cut counts must be non-negative");
    lengths.push_back(1.0 / (c + 1.0));
  }
  return solve_stopping_time_lengths(lengths, pe, t_max);
}

}  // namespace iet
