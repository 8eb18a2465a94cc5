#include "iet/export.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "iet/diffusion.hpp"

namespace iet {

namespace {

constexpr int kCsvPrecision = 15;

template <class Writer>
void to_file(const std::filesystem::path& path, std::ios::openmode mode, Writer&& write) {
  std::ofstream os(path, mode);
  if (!os) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  os.precision(kCsvPrecision);
  write(os);
  os.flush();
  if (!os) throw std::runtime_error("write to '" + path.string() + "' failed");
}

struct PrecisionGuard {
  std::ostream& os;
  std::streamsize saved;
  explicit PrecisionGuard(std::ostream& s) : os(s), saved(s.precision(kCsvPrecision)) {}
  ~PrecisionGuard() { os.precision(saved); }
};

unsigned char to_gray(double c) {
  return static_cast<unsigned char>(std::lround(std::clamp(c, 0.0, 1.0) * 255.0));
}

}  // namespace

void write_series_csv(std::ostream& os, const MetricSeries& s) {
  PrecisionGuard guard(os);
  os << "T,cut_count,percent_unmixed,mixing_norm,mean_subseg_len\n";
  for (std::size_t t = 0; t < s.size(); ++t) {
    os << t << ',' << s.cut_count[t] << ',' << s.percent_unmixed[t] << ',' << s.mixing_norm[t]
       << ',' << s.mean_subsegment_length[t] << '\n';
  }
}

void write_ensemble_csv(std::ostream& os, const EnsembleResult& e) {
  PrecisionGuard guard(os);
  os << "T,mean_mixing_norm,mean_cut_count,mean_subseg_len,fit_norm\n";
  for (std::size_t t = 0; t < e.mean_norm.size(); ++t) {
    os << t << ',' << e.mean_norm[t] << ',' << e.mean_cut_count[t] << ','
       << e.mean_subsegment_length[t] << ',';
    if (e.fit) os << stretched_exponential(static_cast<double>(t), e.fit->m, e.fit->tau, e.fit->alpha);
    os << '\n';
  }
}

void write_scatter_csv(std::ostream& os, std::span<const EnsembleResult> ensembles,
                       std::int64_t t_ref) {
  PrecisionGuard guard(os);
  os << "r,D,tau,alpha\n";
  for (const auto& e : ensembles) {
    if (!e.fit) continue;
    const double tau = t_ref > 0 ? tau_on_reference_clock(e, t_ref) : e.fit->tau;
    os << e.spec.ratio.value() << ',' << e.spec.diffusivity << ',' << tau << ',' << e.fit->alpha
       << '\n';
  }
}

void write_scatter_csv(const std::filesystem::path& path, std::span<const EnsembleResult> ensembles,
                       std::int64_t t_ref) {
  to_file(path, std::ios::out, [&](std::ostream& os) { write_scatter_csv(os, ensembles, t_ref); });
}

void write_collapse_csv(std::ostream& os, const CollapseResult& r) {
  PrecisionGuard guard(os);
  os << "x,mean,stddev,lower,upper,universal_fit\n";
  for (std::size_t k = 0; k < r.grid.size(); ++k) {
    os << r.grid[k] << ',' << r.mean[k] << ',' << r.stddev[k] << ','
       << std::max(0.0, r.mean[k] - r.stddev[k]) << ',' << r.mean[k] + r.stddev[k] << ','
       << stretched_exponential(r.grid[k], 1.0, r.universal.tau, r.universal.alpha) << '\n';
  }
}

void write_steepening_csv(std::ostream& os, const SteepeningReport& report) {
  PrecisionGuard guard(os);
  os << "Pe,D,T_stop,T_stop_interp,T_hat,found,max_slope\n";
  for (const auto& row : report.rows) {
    os << row.pe << ',' << row.diffusivity << ',';
    if (row.stopping.found) {
      os << row.stopping.iteration << ',' << row.stopping.interpolated_iteration << ','
         << row.stopping.normalized_time << ",1,";
      if (std::isfinite(row.max_slope)) os << row.max_slope;
      os << '\n';
    } else {
      os << ",,,0,\n";
    }
  }
}

void write_table_one_csv(std::ostream& os, std::span<const TableOneRow> rows) {
  PrecisionGuard guard(os);
  os << "r,r_n,xi,L,T_max\n";
  for (const auto& row : rows) {
    os << row.ratio.value() << ',' << row.ratio.num() << ',' << row.xi << ',' << row.length << ','
       << row.t_max << '\n';
  }
}

void write_spacetime_pgm(std::ostream& os, const SpaceTimeRecord& record) {
  if (record.fields.empty()) throw std::invalid_argument("empty space-time record");
  const std::size_t width = record.fields.front().size();
  os << "P5\n" << width << ' ' << record.fields.size() << "\n255\n";
  std::vector<char> row(width);
  for (const auto& f : record.fields) {
    if (f.size() != width) throw std::invalid_argument("ragged space-time record");
    std::transform(f.begin(), f.end(), row.begin(),
                   [](double c) { return static_cast<char>(to_gray(c)); });
    os.write(row.data(), static_cast<std::streamsize>(row.size()));
  }
}

void write_spacetime_csv(std::ostream& os, const SpaceTimeRecord& record) {
  PrecisionGuard guard(os);
  for (const auto& f : record.fields) {
    for (std::size_t i = 0; i < f.size(); ++i) os << (i ? "," : "") << f[i];
    os << '\n';
  }
}

#define IET_PATH_WRITER(name, type, mode)                                              \
  void name(const std::filesystem::path& path, type value) {                          \
    to_file(path, mode, [&](std::ostream& os) { name(os, value); });                 \
  }

IET_PATH_WRITER(write_series_csv, const MetricSeries&, std::ios::out)
IET_PATH_WRITER(write_ensemble_csv, const EnsembleResult&, std::ios::out)
IET_PATH_WRITER(write_collapse_csv, const CollapseResult&, std::ios::out)
IET_PATH_WRITER(write_steepening_csv, const SteepeningReport&, std::ios::out)
IET_PATH_WRITER(write_table_one_csv, std::span<const TableOneRow>, std::ios::out)
IET_PATH_WRITER(write_spacetime_pgm, const SpaceTimeRecord&, std::ios::out | std::ios::binary)
IET_PATH_WRITER(write_spacetime_csv, const SpaceTimeRecord&, std::ios::out)

#undef IET_PATH_WRITER

nlohmann::json protocol_metadata(const Protocol& protocol, double p) {
  const auto length = total_length(protocol.n, protocol.ratio);
  nlohmann::json doc;
  doc["n"] = protocol.n;
  doc["ratio"] = {{"num", protocol.ratio.num()}, {"den", protocol.ratio.den()}};
  doc["permutation"] = protocol.permutation.mapping();
  doc["d"] = protocol.diffusivity;
  doc["pe"] = protocol.diffusivity > 0.0 && protocol.t_max > 0
                  ? nlohmann::json(peclet_number(length, protocol.diffusivity, protocol.t_max))
                  : nlohmann::json(nullptr);
  doc["tmax"] = protocol.t_max;
  doc["p"] = p;
  doc["length"] = length;
  doc["seed_of_truth"] = "deterministic";
  return doc;
}

nlohmann::json ensemble_metadata(const EnsembleSpec& spec) {
  const auto length = total_length(spec.n, spec.ratio);
  nlohmann::json doc;
  doc["n"] = spec.n;
  doc["ratio"] = {{"num", spec.ratio.num()}, {"den", spec.ratio.den()}};
  auto perms = nlohmann::json::array();
  for (const auto& p : spec.permutations) perms.push_back(p.mapping());
  doc["permutation"] = perms;
  doc["d"] = spec.diffusivity;
  doc["pe"] = spec.diffusivity > 0.0 && spec.t_max > 0
                  ? nlohmann::json(peclet_number(length, spec.diffusivity, spec.t_max))
                  : nlohmann::json(nullptr);
  doc["tmax"] = spec.t_max;
  doc["p"] = spec.p;
  doc["length"] = length;
  doc["seed_of_truth"] = "deterministic";
  return doc;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
  to_file(path, std::ios::out, [&](std::ostream& os) { os << doc.dump(2) << '\n'; });
}

}  // namespace iet
