#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "iet/lattice.hpp"

namespace iet {

/// Per-iteration mixing diagnostics, indexed T = 0..t_max.
struct MetricSeries {
  std::vector<std::int64_t> cut_count;
  std::vector<double> percent_unmixed;
  std::vector<double> mixing_norm;
  std::vector<double> mean_subsegment_length;
  double average_color = 0.0;  ///< frozen from T = 0
  double p = 2.0;
  /// Run-based metrics (U, l_m) describe colour runs exactly only without diffusion.
  bool runs_exact = true;

  std::size_t size() const { return cut_count.size(); }
  void reserve(std::size_t n);
};

/// Order-independent sum of values in [0, 1]: each term is rounded to a
/// 2^-100 fixed-point grid and added as a 128-bit integer, so any
/// permutation of the inputs gives the same double.
double exact_unit_sum(std::span<const double> values);

/// Adjacent pairs (i, i+1), i < L, whose colours differ. No wraparound pair.
std::int64_t cut_count(std::span<const double> field);

/// 100 * (longest run of equal adjacent values) / L, without wraparound.
double percent_unmixed(std::span<const double> field);

double average_color(std::span<const double> field);

/// (sum_i |c_i - mean|^p / L)^(1/p). Invariant (bitwise) under any permutation of the field.
double mixing_norm(std::span<const double> field, double mean, double p = 2.0);

/// Block form: sum_j |c_j - mean|^p l_j / sum_j l_j over runs of constant colour.
double mixing_norm_blocks(std::span<const double> colors, std::span<const std::uint64_t> lengths,
                          double mean, double p = 2.0);

/// 1 / (C + 1) on the unit-normalised segment.
double mean_subsegment_length(std::int64_t cuts);

/// Accumulates one snapshot into a series.
void append_metrics(MetricSeries& series, std::span<const double> field);

/// Evaluates every metric at every recorded T, with the mean colour frozen from fields[0].
MetricSeries compute_series(std::span<const ColorField> fields, double p = 2.0,
                            bool runs_exact = true);

}  // namespace iet
