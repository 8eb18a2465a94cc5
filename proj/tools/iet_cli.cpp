#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "iet/diffusion.hpp"
#include "iet/errors.hpp"
#include "iet/experiment.hpp"
#include "iet/export.hpp"
#include "iet/simulation.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Reads a JSON object of option values; arrays become repeated inputs.
// Top-level keys belong to the verb being run; a nested object keyed by a
// verb name applies to that verb.
class JsonConfig : public CLI::Config {
 public:
  explicit JsonConfig(std::string verb) : verb_(std::move(verb)) {}

  std::string to_config(const CLI::App* app, bool, bool, std::string) const override {
    json doc;
    for (const CLI::Option* opt : app->get_options()) {
      if (opt->get_configurable() && opt->count() > 0 && !opt->get_lnames().empty()) {
        const auto values = opt->results();
        doc[opt->get_lnames().front()] = values.size() == 1 ? json(values.front()) : json(values);
      }
    }
    return doc.dump(2) + "\n";
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    json doc;
    try {
      doc = json::parse(input);
    } catch (const json::exception& e) {
      throw CLI::ConversionError("config", e.what());
    }
    if (!doc.is_object()) throw CLI::ConversionError("config", "top level must be an object");
    std::vector<CLI::ConfigItem> items;
    for (auto it = doc.begin(); it != doc.end(); ++it) {
      if (it->is_object()) {
        for (auto jt = it->begin(); jt != it->end(); ++jt) items.push_back(item(it.key(), jt.key(), *jt));
      } else if (!verb_.empty()) {
        items.push_back(item(verb_, it.key(), *it));
      }
    }
    return items;
  }

 private:
  static CLI::ConfigItem item(const std::string& parent, const std::string& name, const json& value) {
    CLI::ConfigItem out;
    out.parents = {parent};
    out.name = name;
    auto text = [](const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
    if (value.is_array()) {
      for (const auto& v : value) out.inputs.push_back(text(v));
    } else if (value.is_boolean()) {
      out.inputs.push_back(value.get<bool>() ? "true" : "false");
    } else {
      out.inputs.push_back(text(value));
    }
    return out;
  }

  std::string verb_;
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(text);
  while (std::getline(is, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<iet::RationalRatio> parse_ratios(const std::vector<std::string>& texts) {
  std::vector<iet::RationalRatio> out;
  for (const auto& t : texts)
    for (const auto& piece : split_list(t)) out.push_back(iet::RationalRatio::parse(piece));
  return out;
}

std::vector<double> parse_reals(const std::vector<std::string>& texts) {
  std::vector<double> out;
  for (const auto& t : texts)
    for (const auto& piece : split_list(t)) out.push_back(std::stod(piece));
  return out;
}

// Options shared by the verbs that build protocols.
struct Common {
  int n = 4;
  std::string ratio = "5/4";
  std::string perm;
  std::optional<double> d;
  std::optional<double> pe;
  std::optional<std::int64_t> tmax;
  std::string tmax_from;
  double p = 2.0;
  std::string out;
  std::string format = "csv";

  std::int64_t resolve_tmax(std::uint64_t length) const {
    if (tmax) return *tmax;
    const auto parts = split_list(tmax_from);
    if (parts.size() != 2) throw iet::InputError("--tmax-from expects L_ref,T_ref");
    return iet::match_iterations(std::stoull(parts[0]), std::stoll(parts[1]), length);
  }

  double resolve_d(std::uint64_t length, std::int64_t t_max) const {
    if (pe) return iet::diffusivity_from_peclet(length, *pe, t_max);
    return d.value_or(0.0);
  }
};

CLI::App* add_verb(CLI::App& app, const char* name, const char* about) {
  return app.add_subcommand(name, about);
}

// The verb named on the command line, so flat config keys can be routed to it.
std::string find_verb(const CLI::App& app, int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    for (const auto* sub : app.get_subcommands([](const CLI::App*) { return true; })) {
      if (sub->get_name() == argv[i]) return argv[i];
    }
  }
  return {};
}

void add_lattice_options(CLI::App* sub, Common& c) {
  sub->add_option("--n", c.n, "number of subsegments")->capture_default_str();
  sub->add_option("--ratio", c.ratio, "length ratio as a fraction a/b")->capture_default_str();
}

void add_time_options(CLI::App* sub, Common& c, bool required) {
  auto* t = sub->add_option("--tmax", c.tmax, "iterations");
  auto* f = sub->add_option("--tmax-from", c.tmax_from, "match iterations to a reference: L_ref,T_ref");
  t->excludes(f);
  if (required) {
    auto* g = sub->add_option_group("time", "iteration budget");
    g->add_option(t);
    g->add_option(f);
    g->require_option(1);
  }
}

void add_diffusion_options(CLI::App* sub, Common& c) {
  auto* d = sub->add_option("--d", c.d, "diffusivity in [0, 0.5]");
  auto* pe = sub->add_option("--pe", c.pe, "Peclet number; D = L^2 / (Pe T_max)");
  d->excludes(pe);
}

void add_output_options(CLI::App* sub, Common& c, std::vector<std::string> formats) {
  sub->add_option("--out", c.out, "output directory (stdout when omitted)");
  sub->add_option("--format", c.format, "output format")
      ->check(CLI::IsMember(formats))
      ->capture_default_str();
}

fs::path prepare_dir(const std::string& out) {
  fs::path dir(out);
  fs::create_directories(dir);
  return dir;
}

json series_json(const iet::MetricSeries& s) {
  return {{"cut_count", s.cut_count},
          {"percent_unmixed", s.percent_unmixed},
          {"mixing_norm", s.mixing_norm},
          {"mean_subseg_len", s.mean_subsegment_length}};
}

json fit_json(const iet::FitResult& f) {
  return {{"m", f.m},
          {"tau", f.tau},
          {"alpha", f.alpha},
          {"t_pe", iet::efolding_time(f)},
          {"sse", f.sse},
          {"iterations", f.iterations},
          {"converged", f.converged}};
}

// --- verbs -----------------------------------------------------------------

int run_simulate(const Common& c, bool spacetime) {
  const iet::RationalRatio ratio = iet::RationalRatio::parse(c.ratio);
  if (c.perm.empty()) throw iet::InputError("--perm is required");
  const auto length = iet::total_length(c.n, ratio);
  const auto t_max = c.resolve_tmax(length);
  const iet::Protocol protocol{c.n, ratio, iet::Permutation::parse(c.perm), c.resolve_d(length, t_max), t_max};
  protocol.validate();
  const auto meta = iet::protocol_metadata(protocol, c.p);

  if (c.format == "pgm" || spacetime) {
    const auto record = iet::iterate(protocol);
    if (c.out.empty()) {
      if (c.format == "pgm") iet::write_spacetime_pgm(std::cout, record);
      else iet::write_spacetime_csv(std::cout, record);
      return 0;
    }
    const auto dir = prepare_dir(c.out);
    if (c.format == "pgm") iet::write_spacetime_pgm(dir / "spacetime.pgm", record);
    else iet::write_spacetime_csv(dir / "spacetime.csv", record);
    iet::write_series_csv(dir / "series.csv", iet::compute_series(record.fields, c.p, protocol.diffusivity == 0.0));
    iet::write_json(dir / "config.json", meta);
    return 0;
  }

  const auto series = iet::simulate_series(protocol, c.p);
  if (c.format == "json") {
    json doc{{"config", meta}, {"series", series_json(series)}};
    if (c.out.empty()) std::cout << doc.dump(2) << '\n';
    else iet::write_json(prepare_dir(c.out) / "simulation.json", doc);
    return 0;
  }
  if (c.out.empty()) {
    iet::write_series_csv(std::cout, series);
  } else {
    const auto dir = prepare_dir(c.out);
    iet::write_series_csv(dir / "series.csv", series);
    iet::write_json(dir / "config.json", meta);
  }
  return 0;
}

int run_list(int n, bool all) {
  if (!all) {
    for (const auto& p : iet::enumerate_allowed(n)) std::cout << p.to_string() << '\n';
    return 0;
  }
  if (n < 2 || n > 9) throw iet::InputError("N must be in 2..9");
  std::vector<int> m(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) m[static_cast<std::size_t>(i)] = i + 1;
  do {
    const iet::Permutation p(m);
    const auto why = iet::first_violation(p);
    std::cout << p.to_string() << ' ' << (why ? iet::rule_name(*why) : "allowed") << '\n';
  } while (std::next_permutation(m.begin(), m.end()));
  return 0;
}

struct SweepArgs {
  std::vector<std::string> ratios;
  std::vector<std::string> ds;
  std::vector<std::string> pes;
  std::vector<std::string> perms;
  std::int64_t tref = 0;
};

std::vector<iet::Permutation> parse_perms(const std::vector<std::string>& texts) {
  std::vector<iet::Permutation> out;
  for (const auto& t : texts) out.push_back(iet::Permutation::parse(t));
  return out;
}

std::vector<iet::EnsembleResult> build_sweep(const Common& c, const SweepArgs& s) {
  auto ratios = parse_ratios(s.ratios);
  if (ratios.empty()) ratios.push_back(iet::RationalRatio::parse(c.ratio));
  const auto ds = parse_reals(s.ds);
  const auto pes = parse_reals(s.pes);
  if (!ds.empty() && !pes.empty()) throw iet::InputError("give diffusivities or Peclet numbers, not both");
  const auto perms = parse_perms(s.perms);
  std::vector<iet::EnsembleResult> out;
  for (const auto& r : ratios) {
    const auto length = iet::total_length(c.n, r);
    const auto t_max = c.resolve_tmax(length);
    std::vector<double> grid = ds;
    for (double pe : pes) grid.push_back(iet::diffusivity_from_peclet(length, pe, t_max));
    if (grid.empty()) grid.push_back(c.resolve_d(length, t_max));
    for (double d : grid) {
      std::cerr << "running N=" << c.n << " r=" << r.to_string() << " D=" << d << " T_max=" << t_max << '\n';
      out.push_back(iet::run_ensemble({c.n, r, d, t_max, c.p, perms}));
    }
  }
  return out;
}

std::string file_stem(const iet::EnsembleResult& e) {
  std::ostringstream os;
  os << "ensemble_n" << e.spec.n << "_r" << e.spec.ratio.num() << "-" << e.spec.ratio.den() << "_d"
     << e.spec.diffusivity;
  return os.str();
}

int run_sweep(const Common& c, const SweepArgs& s) {
  const auto ensembles = build_sweep(c, s);
  json doc = json::array();
  for (const auto& e : ensembles) {
    json item{{"config", iet::ensemble_metadata(e.spec)}};
    item["fit"] = e.fit ? fit_json(*e.fit) : json(nullptr);
    if (e.fit && s.tref > 0) item["tau_reference_clock"] = iet::tau_on_reference_clock(e, s.tref);
    doc.push_back(item);
  }
  if (c.out.empty()) {
    if (c.format == "json") std::cout << doc.dump(2) << '\n';
    else iet::write_scatter_csv(std::cout, ensembles, s.tref);
    return 0;
  }
  const auto dir = prepare_dir(c.out);
  for (const auto& e : ensembles) iet::write_ensemble_csv(dir / (file_stem(e) + ".csv"), e);
  iet::write_scatter_csv(dir / "scatter.csv", ensembles, s.tref);
  iet::write_json(dir / "sweep.json", doc);
  return 0;
}

struct FitArgs {
  std::string input;
  std::string column = "mixing_norm";
  std::int64_t tref = 0;
};

int run_fit(const Common& c, const FitArgs& f) {
  json doc;
  if (!f.input.empty()) {
    std::ifstream in(f.input);
    if (!in) throw std::runtime_error("cannot read '" + f.input + "'");
    std::string line;
    std::getline(in, line);
    const auto header = split_list(line);
    const auto col = std::find(header.begin(), header.end(), f.column);
    if (col == header.end()) throw iet::InputError("column '" + f.column + "' not in " + f.input);
    const auto idx = static_cast<std::size_t>(col - header.begin());
    std::vector<double> t, v;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto cells = split_list(line);
      if (cells.size() <= idx) throw iet::InputError("short row in " + f.input);
      t.push_back(std::stod(cells[0]));
      v.push_back(std::stod(cells[idx]));
    }
    if (v.empty()) throw iet::FitError("no samples in " + f.input);
    doc = {{"input", f.input}, {"column", f.column}, {"fit", fit_json(iet::fit_stretched_exponential(t, v, v.front()))}};
  } else {
    const auto ratio = iet::RationalRatio::parse(c.ratio);
    const auto length = iet::total_length(c.n, ratio);
    const auto t_max = c.resolve_tmax(length);
    iet::EnsembleSpec spec{c.n, ratio, c.resolve_d(length, t_max), t_max, c.p, {}};
    if (!c.perm.empty()) spec.permutations.push_back(iet::Permutation::parse(c.perm));
    const auto e = iet::run_ensemble(spec);
    if (!e.fit) throw iet::FitError("no decay to fit (D = 0?)");
    doc = {{"config", iet::ensemble_metadata(e.spec)}, {"fit", fit_json(*e.fit)}};
    if (f.tref > 0) doc["tau_reference_clock"] = iet::tau_on_reference_clock(e, f.tref);
    if (!c.out.empty()) iet::write_ensemble_csv(prepare_dir(c.out) / (file_stem(e) + ".csv"), e);
  }
  if (c.out.empty()) std::cout << doc.dump(2) << '\n';
  else iet::write_json(prepare_dir(c.out) / "fit.json", doc);
  return 0;
}

int run_collapse(const Common& c, const SweepArgs& s, const iet::CollapseOptions& opts) {
  const auto ensembles = build_sweep(c, s);
  const auto result = iet::collapse(ensembles, opts);
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
  json doc{{"universal", fit_json(result.universal)}, {"warnings", result.warnings}};
  doc["ensembles"] = json::array();
  for (const auto& e : ensembles) doc["ensembles"].push_back(iet::ensemble_metadata(e.spec));
  if (c.out.empty()) {
    if (c.format == "json") std::cout << doc.dump(2) << '\n';
    else iet::write_collapse_csv(std::cout, result);
    return 0;
  }
  const auto dir = prepare_dir(c.out);
  iet::write_collapse_csv(dir / "collapse.csv", result);
  iet::write_json(dir / "collapse.json", doc);
  return 0;
}

int run_stopping(const Common& c, const std::vector<std::string>& pe_texts, const std::string& averaging,
                 bool steepening) {
  const auto ratio = iet::RationalRatio::parse(c.ratio);
  const auto length = iet::total_length(c.n, ratio);
  const auto t_max = c.resolve_tmax(length);
  auto pes = parse_reals(pe_texts);
  if (pes.empty()) pes = {2000, 4000, 8000, 16000, 24000, 32000};
  const auto mode = averaging == "reciprocal" ? iet::LengthAveraging::reciprocal_of_mean_cuts
                                              : iet::LengthAveraging::mean_of_lengths;
  iet::SteepeningReport report;
  if (steepening) {
    report = iet::steepening_report(c.n, ratio, t_max, pes, mode);
  } else {
    const auto cutting = iet::run_ensemble({c.n, ratio, 0.0, t_max, c.p, {}});
    const auto sols = iet::stopping_times(cutting, pes, mode);
    const double l = static_cast<double>(length);
    for (std::size_t k = 0; k < pes.size(); ++k) {
      iet::SteepeningRow row;
      row.pe = pes[k];
      row.diffusivity = l * l / (pes[k] * static_cast<double>(t_max));
      row.stopping = sols[k];
      row.flagged = !sols[k].found;
      row.max_slope = std::numeric_limits<double>::quiet_NaN();
      report.rows.push_back(row);
    }
  }
  json meta{{"n", c.n},
            {"ratio", {{"num", ratio.num()}, {"den", ratio.den()}}},
            {"tmax", t_max},
            {"pe", pes},
            {"averaging", averaging},
            {"seed_of_truth", "deterministic"}};
  if (c.out.empty()) {
    iet::write_steepening_csv(std::cout, report);
  } else {
    const auto dir = prepare_dir(c.out);
    iet::write_steepening_csv(dir / "stopping_times.csv", report);
    iet::write_json(dir / "config.json", meta);
  }
  return 0;
}

int run_table1(const Common& c, const std::vector<std::string>& ratio_texts) {
  auto ratios = parse_ratios(ratio_texts);
  if (ratios.empty()) ratios = parse_ratios({"5/4,6/5,7/5,8/5,9/5,11/10,13/10"});
  const auto reference = iet::RationalRatio::parse(c.ratio);
  const auto rows = iet::table_one(c.n, reference, c.tmax.value_or(50), ratios);
  if (c.out.empty()) iet::write_table_one_csv(std::cout, rows);
  else iet::write_table_one_csv(prepare_dir(c.out) / "table1.csv", rows);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cutting-and-shuffling interval exchange with diffusion"};
  app.require_subcommand(1);
  app.fallthrough();
  Common c;

  auto* simulate = add_verb(app, "simulate", "run one protocol and write its metric series");
  bool spacetime = false;
  add_lattice_options(simulate, c);
  simulate->add_option("--perm", c.perm, "shuffling order, e.g. 3,1,4,2")->required();
  add_diffusion_options(simulate, c);
  add_time_options(simulate, c, true);
  simulate->add_option("--p", c.p, "norm exponent")->capture_default_str();
  simulate->add_flag("--spacetime", spacetime, "write the colour field at every iteration");
  add_output_options(simulate, c, {"csv", "pgm", "json"});

  auto* list = add_verb(app, "list-permutations", "allowed shuffling orders for N");
  bool list_all = false;
  list->add_option("--n", c.n, "number of subsegments")->capture_default_str();
  list->add_flag("--all", list_all, "list every permutation with the rule that excludes it");

  SweepArgs sw;
  auto* sweep = add_verb(app, "sweep", "ensembles over ratios and diffusivities");
  sweep->add_option("--n", c.n, "number of subsegments")->capture_default_str();
  sweep->add_option("--ratio,--ratios", sw.ratios, "ratios a/b (repeat or comma-separate)");
  sweep->add_option("--d", sw.ds, "diffusivities (repeat or comma-separate)");
  sweep->add_option("--pe", sw.pes, "Peclet numbers (repeat or comma-separate)");
  sweep->add_option("--perm", sw.perms, "restrict the ensemble to these permutations");
  sweep->add_option("--tref", sw.tref, "report tau on a clock where each T_max maps to this value");
  add_time_options(sweep, c, true);
  sweep->add_option("--p", c.p, "norm exponent")->capture_default_str();
  add_output_options(sweep, c, {"csv", "json"});

  FitArgs fa;
  auto* fit = add_verb(app, "fit", "stretched-exponential fit of an ensemble or a CSV column");
  add_lattice_options(fit, c);
  fit->add_option("--perm", c.perm, "single permutation instead of the allowed ensemble");
  add_diffusion_options(fit, c);
  add_time_options(fit, c, false);
  fit->add_option("--p", c.p, "norm exponent")->capture_default_str();
  fit->add_option("--input", fa.input, "CSV with T in the first column");
  fit->add_option("--column", fa.column, "column to fit")->capture_default_str();
  fit->add_option("--tref", fa.tref, "report tau on a clock where T_max maps to this value");
  add_output_options(fit, c, {"json"});

  SweepArgs co;
  iet::CollapseOptions copts;
  auto* coll = add_verb(app, "collapse", "rescale averaged norm curves and fit the universal curve");
  coll->add_option("--n", c.n, "number of subsegments")->capture_default_str();
  coll->add_option("--ratio,--ratios", co.ratios, "ratios a/b (repeat or comma-separate)")->required();
  coll->add_option("--d", co.ds, "diffusivities");
  coll->add_option("--pe", co.pes, "Peclet numbers");
  add_time_options(coll, c, true);
  coll->add_option("--grid-points", copts.grid_points, "rescaled grid size")->capture_default_str();
  coll->add_option("--grid-max", copts.grid_max, "rescaled grid extent")->capture_default_str();
  add_output_options(coll, c, {"csv", "json"});

  std::vector<std::string> pe_list;
  std::string averaging = "mean";
  bool steepen = false;
  auto* stop = add_verb(app, "stopping-time", "diffusive stopping times from the cutting-only ensemble");
  add_lattice_options(stop, c);
  stop->add_option("--pe", pe_list, "Peclet numbers (default 2000..32000)");
  add_time_options(stop, c, true);
  stop->add_option("--averaging", averaging, "l_m from the mean of lengths or the reciprocal of mean cuts")
      ->check(CLI::IsMember({"mean", "reciprocal"}))
      ->capture_default_str();
  stop->add_flag("--steepening", steepen, "also run diffusive ensembles and report the steepest rescaled slope");
  stop->add_option("--out", c.out, "output directory (stdout when omitted)");

  std::vector<std::string> table_ratios;
  auto* table = add_verb(app, "table1", "lattice sizes and matched iteration budgets");
  table->add_option("--n", c.n, "number of subsegments")->capture_default_str();
  table->add_option("--ratio", c.ratio, "reference ratio")->capture_default_str();
  table->add_option("--tmax", c.tmax, "reference iterations (default 50)");
  table->add_option("--ratios", table_ratios, "ratios to tabulate");
  table->add_option("--out", c.out, "output directory (stdout when omitted)");

  app.config_formatter(std::make_shared<JsonConfig>(find_verb(app, argc, argv)));
  app.set_config("--config", "", "JSON file of option values keyed by long option name");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) return run_simulate(c, spacetime);
    if (*list) return run_list(c.n, list_all);
    if (*sweep) return run_sweep(c, sw);
    if (*fit) return run_fit(c, fa);
    if (*coll) return run_collapse(c, co, copts);
    if (*stop) return run_stopping(c, pe_list, averaging, steepen);
    if (*table) return run_table1(c, table_ratios);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
