#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "iet/diffusion.hpp"
#include "iet/lattice.hpp"
#include "iet/metrics.hpp"

namespace iet {

/// Fields at T = 0..t_max; fields[T] is the state after the full iteration T.
struct SpaceTimeRecord {
  std::vector<ColorField> fields;
};

/// Drives one protocol: each iteration cuts and shuffles, then (if D > 0)
/// applies one diffusion sweep. `observe(T, span<const double>)` sees the
/// initial field at T = 0 and the state after every iteration.
template <class Observer>
void run_protocol(const Protocol& protocol, Observer&& observe) {
  protocol.validate();
  const auto cuts = cut_positions(protocol.n, protocol.ratio);
  ColorField current = initial_field(protocol.n, protocol.ratio);
  ColorField scratch(current.size());
  const CutShuffle shuffle(current.size(), cuts, protocol.permutation);
  const bool diffuse = protocol.diffusivity > 0.0;

  observe(std::int64_t{0}, std::as_const(current));
  for (std::int64_t t = 1; t <= protocol.t_max; ++t) {
    shuffle.apply(current, scratch);
    if (diffuse) {
      diffusion_step_into(scratch, current, protocol.diffusivity);
    } else {
      std::swap(current, scratch);
    }
    observe(t, std::as_const(current));
  }
}

SpaceTimeRecord iterate(const Protocol& protocol);

/// Metrics-only run: same trajectory as iterate() without storing fields.
MetricSeries simulate_series(const Protocol& protocol, double p = 2.0);

}  // namespace iet
