#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>

#include "json.hpp"

#include "iet/experiment.hpp"
#include "iet/lattice.hpp"
#include "iet/metrics.hpp"
#include "iet/simulation.hpp"

namespace iet {

// CSV writers. Each has a stream form and a path form; the path form throws
// std::runtime_error naming the path when the file cannot be written.

/// `T,cut_count,percent_unmixed,mixing_norm,mean_subseg_len`
void write_series_csv(std::ostream& os, const MetricSeries& series);
void write_series_csv(const std::filesystem::path& path, const MetricSeries& series);

/// `T,mean_mixing_norm,mean_cut_count,mean_subseg_len,fit_norm`
void write_ensemble_csv(std::ostream& os, const EnsembleResult& ensemble);
void write_ensemble_csv(const std::filesystem::path& path, const EnsembleResult& ensemble);

/// `r,D,tau,alpha`, one row per ensemble with a fit. With `t_ref > 0`, tau is
/// reported on the reference clock (see tau_on_reference_clock).
void write_scatter_csv(std::ostream& os, std::span<const EnsembleResult> ensembles,
                       std::int64_t t_ref = 0);
void write_scatter_csv(const std::filesystem::path& path, std::span<const EnsembleResult> ensembles,
                       std::int64_t t_ref = 0);

/// `x,mean,stddev,lower,upper,universal_fit`; lower is clipped at 0.
void write_collapse_csv(std::ostream& os, const CollapseResult& result);
void write_collapse_csv(const std::filesystem::path& path, const CollapseResult& result);

/// `Pe,D,T_stop,T_stop_interp,T_hat,found,max_slope`; max_slope is left empty when not finite.
void write_steepening_csv(std::ostream& os, const SteepeningReport& report);
void write_steepening_csv(const std::filesystem::path& path, const SteepeningReport& report);

/// `r,r_n,xi,L,T_max`
void write_table_one_csv(std::ostream& os, std::span<const TableOneRow> rows);
void write_table_one_csv(const std::filesystem::path& path, std::span<const TableOneRow> rows);

/// Binary portable graymap (P5): one row per iteration, colours [0,1] -> [0,255].
void write_spacetime_pgm(std::ostream& os, const SpaceTimeRecord& record);
void write_spacetime_pgm(const std::filesystem::path& path, const SpaceTimeRecord& record);

/// One CSV row per iteration, L columns.
void write_spacetime_csv(std::ostream& os, const SpaceTimeRecord& record);
void write_spacetime_csv(const std::filesystem::path& path, const SpaceTimeRecord& record);

/// Run metadata: {n, ratio:{num,den}, permutation, d, pe, tmax, p, seed_of_truth}.
/// `pe` is null when D = 0.
nlohmann::json protocol_metadata(const Protocol& protocol, double p);
nlohmann::json ensemble_metadata(const EnsembleSpec& spec);

void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

}  // namespace iet
