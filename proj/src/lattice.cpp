#include "iet/lattice.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>

#include "iet/diffusion.hpp"
#include "iet/errors.hpp"

namespace iet {

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b, const char* what) {
  std::uint64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out))
    throw CapacityError(std::string(what) + " overflows 64-bit lattice arithmetic");
  return out;
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b, const char* what) {
  std::uint64_t out = 0;
  if (__builtin_add_overflow(a, b, &out))
    throw CapacityError(std::string(what) + " overflows 64-bit lattice arithmetic");
  return out;
}

std::uint64_t checked_pow(std::uint64_t base, int exp, const char* what) {
  std::uint64_t out = 1;
  for (int i = 0; i < exp; ++i) out = checked_mul(out, base, what);
  return out;
}

void check_n(int n) {
  if (n < 2) throw InputError("N must be at least 2, got " + std::to_string(n));
}

std::uint64_t parse_u64(std::string_view text) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw InputError("cannot parse integer '" + std::string(text) + "'");
  return v;
}

}  // namespace

RationalRatio::RationalRatio(std::uint64_t num, std::uint64_t den) {
  if (den == 0) throw InputError("ratio denominator must be positive");
  const std::uint64_t g = std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
  if (num_ <= den_)
    throw InputError("ratio must exceed 1, got " + std::to_string(num) + "/" + std::to_string(den));
}

RationalRatio RationalRatio::parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return {parse_u64(text), 1};
  return {parse_u64(text.substr(0, slash)), parse_u64(text.substr(slash + 1))};
}

std::string RationalRatio::to_string() const {
  return std::to_string(num_) + "/" + std::to_string(den_);
}

void Protocol::validate() const {
  check_n(n);
  if (permutation.size() != n)
    throw InputError("permutation " + permutation.to_string() + " does not have N = " +
                     std::to_string(n) + " entries");
  check_diffusivity(diffusivity);
  if (t_max < 0) throw InputError("t_max must be non-negative");
  if (diffusivity > 0.0 && total_length(n, ratio) < 3)
    throw InputError("diffusion needs a lattice of at least 3 sites");
}

std::vector<std::uint64_t> subsegment_lengths(int n, const RationalRatio& ratio) {
  check_n(n);
  std::vector<std::uint64_t> lengths;
  lengths.reserve(static_cast<std::size_t>(n));
  for (int j = 1; j <= n; ++j) {
    lengths.push_back(checked_mul(checked_pow(ratio.num(), j - 1, "subsegment length"),
                                  checked_pow(ratio.den(), n - j, "subsegment length"),
                                  "subsegment length"));
  }
  total_length(n, ratio);  // surfaces overflow of L alongside the lengths
  return lengths;
}
std::uint64_t total_length(int n, const RationalRatio& ratio) {
  check_n(n);
  std::uint64_t total = 0;
  for (int j = 1; j <= n; ++j) {
    const auto len = checked_mul(checked_pow(ratio.num(), j - 1, "subsegment length"),
                                 checked_pow(ratio.den(), n - j, "subsegment length"),
                                 "subsegment length");
    total = checked_add(total, len, "total length");
  }
  return total;
}

std::uint64_t first_length(int n, const RationalRatio& ratio) {
  check_n(n);
  return checked_pow(ratio.den(), n - 1, "first subsegment length");
}

ColorField initial_field(int n, const RationalRatio& ratio) {
  const auto lengths = subsegment_lengths(n, ratio);
  ColorField field;
  field.reserve(total_length(n, ratio));
  for (int j = 0; j < n; ++j) {
    const double color = static_cast<double>(j) / static_cast<double>(n - 1);
    field.insert(field.end(), lengths[static_cast<std::size_t>(j)], color);
  }
  return field;
}

std::vector<std::uint64_t> cut_positions(int n, const RationalRatio& ratio) {
  const auto lengths = subsegment_lengths(n, ratio);
  std::vector<std::uint64_t> cuts(lengths.size() - 1);
  std::partial_sum(lengths.begin(), lengths.end() - 1, cuts.begin());
  return cuts;
}

CutShuffle::CutShuffle(std::size_t length, std::span<const std::uint64_t> cuts,
                       const Permutation& perm)
    : length_(length) {
  const auto pieces = cuts.size() + 1;
  if (static_cast<std::size_t>(perm.size()) != pieces)
    throw InputError("permutation " + perm.to_string() + " needs " +
                     std::to_string(perm.size() - 1) + " cuts, got " +
                     std::to_string(cuts.size()));
  std::vector<std::size_t> bounds{0};
  for (auto c : cuts) {
    if (c == 0 || c >= length || c <= bounds.back())
      throw InputError("cut position " + std::to_string(c) +
                       " must be strictly increasing inside (0, " + std::to_string(length) + ")");
    bounds.push_back(static_cast<std::size_t>(c));
  }
  bounds.push_back(length);
  moves_.reserve(pieces);
  for (int k = 1; k <= perm.size(); ++k) {
    const auto piece = static_cast<std::size_t>(perm.at(k) - 1);
    moves_.push_back({bounds[piece], bounds[piece + 1] - bounds[piece]});
  }
}

void CutShuffle::apply(std::span<const double> src, std::span<double> dst) const {
  if (src.size() != length_ || dst.size() != length_)
    throw InputError("field length " + std::to_string(src.size()) + " does not match lattice " +
                     std::to_string(length_));
  auto out = dst.begin();
  for (const auto& m : moves_) {
    out = std::copy_n(src.begin() + static_cast<std::ptrdiff_t>(m.from), m.count, out);
  }
}

ColorField shuffle_step(std::span<const double> field, std::span<const std::uint64_t> cuts,
                        const Permutation& perm) {
  const CutShuffle map(field.size(), cuts, perm);
  ColorField out(field.size());
  map.apply(field, out);
  return out;
}

}  // namespace iet
