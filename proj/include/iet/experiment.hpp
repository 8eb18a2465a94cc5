#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "iet/lattice.hpp"
#include "iet/metrics.hpp"
#include "iet/permutation.hpp"
#include "iet/stopping_time.hpp"
#include "iet/stretched_fit.hpp"

namespace iet {

struct EnsembleSpec {
  int n = 4;
  RationalRatio ratio{5, 4};
  double diffusivity = 0.0;
  std::int64_t t_max = 0;
  double p = 2.0;
  /// Empty means every allowed permutation of N, in lexicographic order.
  std::vector<Permutation> permutations;
};

/// One protocol family run over a set of permutations and averaged.
struct EnsembleResult {
  EnsembleSpec spec;  ///< permutations resolved
  std::uint64_t length = 0;
  std::vector<MetricSeries> series;  ///< one per permutation, same order as spec
  std::vector<double> mean_norm;
  std::vector<double> mean_cut_count;
  std::vector<double> mean_subsegment_length;  ///< mean of 1/(C+1), not 1/(mean C + 1)
  std::optional<FitResult> fit;                ///< fit of mean_norm; only when it decays
  std::optional<double> t_pe;                  ///< e-folding time of the fit

  double initial_norm() const { return mean_norm.front(); }
  std::string label() const;
};

/// Fitted tau expressed on a clock where this run's t_max maps to t_ref,
/// i.e. tau * t_ref / t_max. Used to compare lattices run for matched budgets.
double tau_on_reference_clock(const EnsembleResult& ensemble, std::int64_t t_ref);

/// Mean subsegment length curve of an ensemble under the chosen averaging.
std::vector<double> mean_length_curve(const EnsembleResult& ensemble, LengthAveraging averaging);

/// Simulates every permutation (OpenMP across permutations), then averages
/// in permutation order so results are bitwise reproducible for any
/// thread count. Throws InputError for an empty permutation set.
EnsembleResult run_ensemble(const EnsembleSpec& spec);

namespace reference {
/// Serial counterpart of iet::run_ensemble.
EnsembleResult run_ensemble(const EnsembleSpec& spec);
}  // namespace reference

/// Ensembles over the Cartesian product of ratios and diffusivities at fixed N.
/// `t_max_for(L)` picks the iteration budget per lattice.
template <class TMaxPolicy>
std::vector<EnsembleResult> sweep(int n, std::span<const RationalRatio> ratios,
                                  std::span<const double> diffusivities, TMaxPolicy&& t_max_for,
                                  double p = 2.0) {
  std::vector<EnsembleResult> out;
  for (const auto& r : ratios) {
    const auto t_max = t_max_for(total_length(n, r));
    for (double d : diffusivities) out.push_back(run_ensemble({n, r, d, t_max, p, {}}));
  }
  return out;
}

struct CollapseOptions {
  std::size_t grid_points = 200;
  double grid_max = 5.0;
};

struct RescaledCurve {
  std::string label;
  double t_pe = 0.0;
  double m = 0.0;
  std::vector<double> x;  ///< T / T_Pe
  std::vector<double> y;  ///< ||c|| / M
};

struct CollapseResult {
  std::vector<double> grid;
  std::vector<RescaledCurve> curves;  ///< averaged curve of each included ensemble
  std::vector<double> mean;           ///< mean of resampled averaged curves
  std::vector<double> stddev;         ///< spread of all per-permutation curves
  FitResult universal;                ///< fit of `mean` with M = 1
  std::vector<std::string> warnings;  ///< excluded ensembles
};

/// Rescales each ensemble's averaged norm to (T / T_Pe, ||c|| / M), resamples
/// onto a uniform grid on [0, grid_max] by linear interpolation, and fits
/// the mean curve. Ensembles without a converged fit are skipped with a
/// warning; grid points no curve reaches are dropped.
CollapseResult collapse(std::span<const EnsembleResult> ensembles,
                        const CollapseOptions& options = {});

/// Linear interpolation of (x, y) at `at`; nullopt outside [x.front(), x.back()].
std::optional<double> interpolate(std::span<const double> x, std::span<const double> y, double at);

struct SteepeningRow {
  double pe = 0.0;
  double diffusivity = 0.0;
  StoppingTimeSolution stopping;
  /// max over T of |d(||c||/M) / d(T / T_stop)| on the averaged norm curve.
  double max_slope = 0.0;
  /// Stopping time not found; max_slope is not meaningful.
  bool flagged = false;
};

struct SteepeningReport {
  std::vector<SteepeningRow> rows;
  std::vector<double> zero_diffusion_mean_cuts;
  std::vector<double> zero_diffusion_mean_lengths;  ///< l_m curve the stopping times come from
  std::vector<EnsembleResult> ensembles;            ///< one diffusive ensemble per row
};

/// Stopping times for each Pe from a D = 0 ensemble.
std::vector<StoppingTimeSolution> stopping_times(const EnsembleResult& cutting_only,
                                                 std::span<const double> pe_list,
                                                 LengthAveraging averaging);

/// For each Pe: D = L^2 / (Pe T_max), a diffusive ensemble, the stopping time
/// from the D = 0 ensemble, and the steepest rescaled slope.
/// `pe_list` must be positive and ascending.
SteepeningReport steepening_report(int n, const RationalRatio& ratio, std::int64_t t_max,
                                   std::span<const double> pe_list,
                                   LengthAveraging averaging = LengthAveraging::mean_of_lengths,
                                   std::span<const Permutation> permutations = {});

struct TableOneRow {
  RationalRatio ratio;
  std::uint64_t xi;
  std::uint64_t length;
  std::int64_t t_max;
};

/// Lattice sizes and matched iteration budgets relative to a reference ratio.
std::vector<TableOneRow> table_one(int n, const RationalRatio& reference, std::int64_t t_ref,
                                   std::span<const RationalRatio> ratios);

}  // namespace iet
