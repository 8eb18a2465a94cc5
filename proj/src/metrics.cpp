#include "iet/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "iet/errors.hpp"

namespace iet {

namespace {

constexpr int kFixedBits = 100;
constexpr double kHalfScale = 1125899906842624.0;  // 2^50

__extension__ typedef unsigned __int128 u128;

u128 to_fixed(double v) {
  // callers guarantee 0 <= v <= 1. Both halves are exact scalings, so this is
  // trunc(v * 2^100) using only 64-bit conversions.
  const double scaled = v * kHalfScale;
  const auto hi = static_cast<std::uint64_t>(scaled);
  const auto lo = static_cast<std::uint64_t>((scaled - static_cast<double>(hi)) * kHalfScale);
  return (static_cast<u128>(hi) << (kFixedBits / 2)) + lo;
}

double from_fixed(u128 acc) {
  // two exact-width halves; at most a couple of ulps from the true sum
  const auto hi = static_cast<std::uint64_t>(acc >> 64);
  const auto lo = static_cast<std::uint64_t>(acc);
  return std::ldexp(static_cast<double>(hi), 64 - kFixedBits) +
         std::ldexp(static_cast<double>(lo), -kFixedBits);
}

double deviation_power(double dev, double p) {
  if (p == 2.0) return dev * dev;
  if (p == 1.0) return dev;
  return std::pow(dev, p);
}

void check_p(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw InputError("norm exponent p must be >= 1");
}

void check_unit(double v) {
  if (!(v >= 0.0 && v <= 1.0))
    throw InputError("colour value " + std::to_string(v) + " outside [0, 1]");
}

}  // namespace

void MetricSeries::reserve(std::size_t n) {
  cut_count.reserve(n);
  percent_unmixed.reserve(n);
  mixing_norm.reserve(n);
  mean_subsegment_length.reserve(n);
}

double exact_unit_sum(std::span<const double> values) {
  if (values.size() >= (std::size_t{1} << 27))
    throw CapacityError("too many terms for the fixed-point accumulator");
  u128 acc = 0;
  for (double v : values) {
    check_unit(v);
    acc += to_fixed(v);
  }
  return from_fixed(acc);
}

std::int64_t cut_count(std::span<const double> field) {
  std::int64_t cuts = 0;
  for (std::size_t i = 1; i < field.size(); ++i) cuts += field[i] != field[i - 1] ? 1 : 0;
  return cuts;
}

double percent_unmixed(std::span<const double> field) {
  if (field.empty()) throw InputError("empty colour field");
  std::size_t longest = 1;
  std::size_t run = 1;
  for (std::size_t i = 1; i < field.size(); ++i) {
    run = field[i] == field[i - 1] ? run + 1 : 1;
    longest = std::max(longest, run);
  }
  return 100.0 * static_cast<double>(longest) / static_cast<double>(field.size());
}

double average_color(std::span<const double> field) {
  if (field.empty()) throw InputError("empty colour field");
  return exact_unit_sum(field) / static_cast<double>(field.size());
}

double mixing_norm(std::span<const double> field, double mean, double p) {
  check_p(p);
  if (field.empty()) throw InputError("empty colour field");
  check_unit(mean);
  u128 acc = 0;
  for (double c : field) {
    check_unit(c);
    acc += to_fixed(deviation_power(std::abs(c - mean), p));
  }
  const double avg = from_fixed(acc) / static_cast<double>(field.size());
  return p == 2.0 ? std::sqrt(avg) : std::pow(avg, 1.0 / p);
}

double mixing_norm_blocks(std::span<const double> colors, std::span<const std::uint64_t> lengths,
                          double mean, double p) {
  check_p(p);
  if (colors.size() != lengths.size() || colors.empty())
    throw InputError("block colours and lengths must be non-empty and of equal size");
  long double weighted = 0.0L;
  long double total = 0.0L;
  for (std::size_t j = 0; j < colors.size(); ++j) {
    const auto len = static_cast<long double>(lengths[j]);
    weighted += static_cast<long double>(deviation_power(std::abs(colors[j] - mean), p)) * len;
    total += len;
  }
  const double avg = static_cast<double>(weighted / total);
  return p == 2.0 ? std::sqrt(avg) : std::pow(avg, 1.0 / p);
}

double mean_subsegment_length(std::int64_t cuts) {
  if (cuts < 0) throw InputError("cut count must be non-negative");
  return 1.0 / (static_cast<double>(cuts) + 1.0);
}

void append_metrics(MetricSeries& series, std::span<const double> field) {
  const auto cuts = cut_count(field);
  series.cut_count.push_back(cuts);
  series.percent_unmixed.push_back(percent_unmixed(field));
  series.mixing_norm.push_back(mixing_norm(field, series.average_color, series.p));
  series.mean_subsegment_length.push_back(mean_subsegment_length(cuts));
}

MetricSeries compute_series(std::span<const ColorField> fields, double p, bool runs_exact) {
  if (fields.empty()) throw InputError("cannot compute metrics of an empty record");
  check_p(p);
  MetricSeries series;
  series.p = p;
  series.runs_exact = runs_exact;
  series.average_color = average_color(fields.front());
  series.reserve(fields.size());
  for (const auto& f : fields) append_metrics(series, f);
  return series;
}

}  // namespace iet
