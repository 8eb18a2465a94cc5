#pragma once

#include <cstdint>
#include <optional>
#include <span>

namespace iet {

/// Diffusive wash-out length pi * sqrt(t_hat / (2 Pe)) on the unit segment.
double batchelor_length(double t_hat, double pe);

/// How the mean subsegment length is formed from an ensemble of cut curves.
enum class LengthAveraging {
  reciprocal_of_mean_cuts,  ///< l_m = 1 / (mean C + 1)
  mean_of_lengths,          ///< l_m = mean of 1 / (C + 1)
};

struct StoppingTimeSolution {
  bool found = false;
  std::int64_t iteration = 0;      ///< first T >= 1 with l*(T/T_max) >= l_m(T)
  double normalized_time = 0.0;    ///< iteration / t_max
  /// Crossing of l* - l_m linearly interpolated between iteration-1 and iteration.
  double interpolated_iteration = 0.0;
};

/// First-crossing solve on the iteration grid. `mean_lengths[T]` is l_m at
/// T = 0..t_max (at least t_max + 1 entries). Returns found = false when the
/// diffusive length never reaches l_m within t_max (periodic or poorly
/// mixing protocols, or very large Pe).
StoppingTimeSolution solve_stopping_time_lengths(std::span<const double> mean_lengths, double pe,
                                                 std::int64_t t_max);

/// Same, from an ensemble-averaged cut curve with l_m = 1 / (C + 1).
StoppingTimeSolution solve_stopping_time(std::span<const double> mean_cut_curve, double pe,
                                         std::int64_t t_max);

}  // namespace iet
