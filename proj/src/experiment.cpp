#include "iet/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "iet/diffusion.hpp"
#include "iet/errors.hpp"
#include "iet/simulation.hpp"

namespace iet {

namespace {

EnsembleSpec resolve(const EnsembleSpec& spec) {
  EnsembleSpec out = spec;
  if (out.permutations.empty()) out.permutations = enumerate_allowed(spec.n);
  if (out.permutations.empty())
    throw InputError("no allowed permutations for N = " + std::to_string(spec.n));
  for (const auto& perm : out.permutations) {
    Protocol{spec.n, spec.ratio, perm, spec.diffusivity, spec.t_max}.validate();
  }
  return out;
}

// Averages and fits after all series are gathered, in permutation order.
void reduce(EnsembleResult& result) {
  const std::size_t steps = result.series.front().size();
  const double count = static_cast<double>(result.series.size());
  result.mean_norm.assign(steps, 0.0);
  result.mean_cut_count.assign(steps, 0.0);
  result.mean_subsegment_length.assign(steps, 0.0);
  for (const auto& s : result.series) {
    for (std::size_t t = 0; t < steps; ++t) {
      result.mean_norm[t] += s.mixing_norm[t];
      result.mean_cut_count[t] += static_cast<double>(s.cut_count[t]);
      result.mean_subsegment_length[t] += s.mean_subsegment_length[t];
    }
  }
  for (std::size_t t = 0; t < steps; ++t) {
    result.mean_norm[t] /= count;
    result.mean_cut_count[t] /= count;
    result.mean_subsegment_length[t] /= count;
  }

  if (result.spec.diffusivity > 0.0 && steps >= 5) {
    std::vector<double> times(steps);
    for (std::size_t t = 0; t < steps; ++t) times[t] = static_cast<double>(t);
    try {
      result.fit = fit_stretched_exponential(times, result.mean_norm, result.initial_norm());
      result.t_pe = efolding_time(*result.fit);
    } catch (const FitError&) {
      result.fit.reset();
      result.t_pe.reset();
    }
  }
}

EnsembleResult prepare(const EnsembleSpec& spec) {
  EnsembleResult result;
  result.spec = resolve(spec);
  result.length = total_length(spec.n, spec.ratio);
  result.series.resize(result.spec.permutations.size());
  return result;
}

Protocol protocol_for(const EnsembleSpec& spec, std::size_t k) {
  return {spec.n, spec.ratio, spec.permutations[k], spec.diffusivity, spec.t_max};
}

}  // namespace

std::string EnsembleResult::label() const {
  std::ostringstream os;
  os << "N=" << spec.n << " r=" << spec.ratio.to_string() << " D=" << spec.diffusivity;
  return os.str();
}

EnsembleResult run_ensemble(const EnsembleSpec& spec) {
  EnsembleResult result = prepare(spec);
  const auto count = static_cast<std::ptrdiff_t>(result.series.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    const auto idx = static_cast<std::size_t>(k);
    result.series[idx] = simulate_series(protocol_for(result.spec, idx), spec.p);
  }
  reduce(result);
  return result;
}

namespace reference {

EnsembleResult run_ensemble(const EnsembleSpec& spec) {
  EnsembleResult result = prepare(spec);
  for (std::size_t k = 0; k < result.series.size(); ++k) {
    result.series[k] = simulate_series(protocol_for(result.spec, k), spec.p);
  }
  reduce(result);
  return result;
}

}  // namespace reference

std::optional<double> interpolate(std::span<const double> x, std::span<const double> y,
                                  double at) {
  if (x.empty() || x.size() != y.size()) return std::nullopt;
  if (at < x.front() || at > x.back()) return std::nullopt;
  const auto it = std::lower_bound(x.begin(), x.end(), at);
  const auto i = static_cast<std::size_t>(it - x.begin());
  if (x[i] == at) return y[i];
  const double w = (at - x[i - 1]) / (x[i] - x[i - 1]);
  return y[i - 1] + w * (y[i] - y[i - 1]);
}

CollapseResult collapse(std::span<const EnsembleResult> ensembles, const CollapseOptions& options) {
  if (options.grid_points < 5 || !(options.grid_max > 0.0))
    throw InputError("collapse grid needs >= 5 points on a positive range");
  CollapseResult out;

  std::vector<double> grid(options.grid_points);
  for (std::size_t k = 0; k < grid.size(); ++k)
    grid[k] = options.grid_max * static_cast<double>(k) / static_cast<double>(grid.size() - 1);

  // Resampled averaged curves and per-permutation curves.
  std::vector<std::vector<std::optional<double>>> averaged;
  std::vector<std::vector<std::optional<double>>> individual;
  for (const auto& e : ensembles) {
    if (!e.fit || !e.fit->converged || !e.t_pe || !(*e.t_pe > 0.0)) {
      out.warnings.push_back("excluded " + e.label() + ": no converged fit");
      continue;
    }
    const double t_pe = *e.t_pe;
    const double m = e.initial_norm();
    RescaledCurve curve{e.label(), t_pe, m, {}, {}};
    const std::size_t steps = e.mean_norm.size();
    curve.x.resize(steps);
    curve.y.resize(steps);
    for (std::size_t t = 0; t < steps; ++t) {
      curve.x[t] = static_cast<double>(t) / t_pe;
      curve.y[t] = e.mean_norm[t] / m;
    }
    auto resample = [&](std::span<const double> ys) {
      std::vector<std::optional<double>> r(grid.size());
      for (std::size_t k = 0; k < grid.size(); ++k) r[k] = interpolate(curve.x, ys, grid[k]);
      return r;
    };
    averaged.push_back(resample(curve.y));
    for (const auto& s : e.series) {
      std::vector<double> ys(steps);
      for (std::size_t t = 0; t < steps; ++t) ys[t] = s.mixing_norm[t] / s.mixing_norm.front();
      individual.push_back(resample(ys));
    }
    out.curves.push_back(std::move(curve));
  }
  if (out.curves.empty()) throw InputError("no ensemble with a converged fit to collapse");

  for (std::size_t k = 0; k < grid.size(); ++k) {
    double sum = 0.0;
    std::size_t cnt = 0;
    for (const auto& c : averaged) {
      if (c[k]) {
        sum += *c[k];
        ++cnt;
      }
    }
    if (cnt != averaged.size()) continue;  // keep only points every curve reaches
    const double mean = sum / static_cast<double>(cnt);
    double var = 0.0;
    std::size_t n_ind = 0;
    double ind_mean = 0.0;
    for (const auto& c : individual) {
      if (c[k]) {
        ind_mean += *c[k];
        ++n_ind;
      }
    }
    ind_mean /= static_cast<double>(std::max<std::size_t>(n_ind, 1));
    for (const auto& c : individual) {
      if (c[k]) var += (*c[k] - ind_mean) * (*c[k] - ind_mean);
    }
    out.grid.push_back(grid[k]);
    out.mean.push_back(mean);
    out.stddev.push_back(n_ind > 1 ? std::sqrt(var / static_cast<double>(n_ind - 1)) : 0.0);
  }
  out.universal = fit_stretched_exponential(out.grid, out.mean, 1.0);
  return out;
}

double tau_on_reference_clock(const EnsembleResult& ensemble, std::int64_t t_ref) {
  if (!ensemble.fit) throw InputError("ensemble " + ensemble.label() + " has no fit");
  return ensemble.fit->tau * static_cast<double>(t_ref) / static_cast<double>(ensemble.spec.t_max);
}

std::vector<double> mean_length_curve(const EnsembleResult& ensemble, LengthAveraging averaging) {
  if (averaging == LengthAveraging::mean_of_lengths) return ensemble.mean_subsegment_length;
  std::vector<double> out;
  out.reserve(ensemble.mean_cut_count.size());
  for (double c : ensemble.mean_cut_count) out.push_back(1.0 / (c + 1.0));
  return out;
}

std::vector<StoppingTimeSolution> stopping_times(const EnsembleResult& cutting_only,
                                                 std::span<const double> pe_list,
                                                 LengthAveraging averaging) {
  const auto lengths = mean_length_curve(cutting_only, averaging);
  std::vector<StoppingTimeSolution> out;
  out.reserve(pe_list.size());
  for (double pe : pe_list)
    out.push_back(solve_stopping_time_lengths(lengths, pe, cutting_only.spec.t_max));
  return out;
}

SteepeningReport steepening_report(int n, const RationalRatio& ratio, std::int64_t t_max,
                                   std::span<const double> pe_list, LengthAveraging averaging,
                                   std::span<const Permutation> permutations) {
  if (pe_list.empty()) throw InputError("empty Peclet list");
  for (std::size_t i = 0; i < pe_list.size(); ++i) {
    if (!(pe_list[i] > 0.0)) throw InputError("Peclet numbers must be positive");
    if (i > 0 && !(pe_list[i] > pe_list[i - 1]))
      throw InputError("Peclet numbers must be strictly ascending");
  }
  const std::vector<Permutation> perms(permutations.begin(), permutations.end());
  const auto length = total_length(n, ratio);

  SteepeningReport report;
  const auto cutting_only = run_ensemble({n, ratio, 0.0, t_max, 2.0, perms});
  report.zero_diffusion_mean_cuts = cutting_only.mean_cut_count;
  report.zero_diffusion_mean_lengths = mean_length_curve(cutting_only, averaging);
  const auto solutions = stopping_times(cutting_only, pe_list, averaging);

  for (std::size_t k = 0; k < pe_list.size(); ++k) {
    SteepeningRow row;
    row.pe = pe_list[k];
    row.diffusivity = diffusivity_from_peclet(length, row.pe, t_max);
    row.stopping = solutions[k];
    row.flagged = !row.stopping.found;
    auto ensemble = run_ensemble({n, ratio, row.diffusivity, t_max, 2.0, perms});
    if (row.stopping.found) {
      const double m = ensemble.initial_norm();
      const double t_stop = static_cast<double>(row.stopping.iteration);
      for (std::size_t t = 1; t < ensemble.mean_norm.size(); ++t) {
        const double dy = (ensemble.mean_norm[t] - ensemble.mean_norm[t - 1]) / m;
        row.max_slope = std::max(row.max_slope, std::abs(dy) * t_stop);
      }
    }
    report.rows.push_back(row);
    report.ensembles.push_back(std::move(ensemble));
  }
  return report;
}

std::vector<TableOneRow> table_one(int n, const RationalRatio& reference, std::int64_t t_ref,
                                   std::span<const RationalRatio> ratios) {
  const auto l_ref = total_length(n, reference);
  std::vector<TableOneRow> rows;
  rows.reserve(ratios.size());
  for (const auto& r : ratios) {
    const auto len = total_length(n, r);
    rows.push_back({r, first_length(n, r), len, match_iterations(l_ref, t_ref, len)});
  }
  return rows;
}

}  // namespace iet
