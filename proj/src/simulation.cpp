#include "iet/simulation.hpp"

#include <span>

namespace iet {

SpaceTimeRecord iterate(const Protocol& protocol) {
  SpaceTimeRecord record;
  record.fields.reserve(static_cast<std::size_t>(protocol.t_max) + 1);
  run_protocol(protocol, [&](std::int64_t, const ColorField& field) {
    record.fields.push_back(field);
  });
  return record;
}

MetricSeries simulate_series(const Protocol& protocol, double p) {
  MetricSeries series;
  series.p = p;
  series.runs_exact = protocol.diffusivity == 0.0;
  series.reserve(static_cast<std::size_t>(protocol.t_max) + 1);
  run_protocol(protocol, [&](std::int64_t t, const ColorField& field) {
    if (t == 0) series.average_color = average_color(field);
    append_metrics(series, field);
  });
  return series;
}

}  // namespace iet
