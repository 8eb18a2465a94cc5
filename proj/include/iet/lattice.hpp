#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "iet/permutation.hpp"

namespace iet {

/// Adjacent subsegment length ratio r = num/den, kept in lowest terms with r > 1.
class RationalRatio {
 public:
  /// Reduces the fraction; throws InputError unless num > den > 0.
  RationalRatio(std::uint64_t num, std::uint64_t den);

  /// Parses "5/4". A bare integer "2" is read as 2/1.
  static RationalRatio parse(std::string_view text);

  std::uint64_t num() const { return num_; }
  std::uint64_t den() const { return den_; }
  double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string to_string() const;

  friend bool operator==(const RationalRatio&, const RationalRatio&) = default;

 private:
  std::uint64_t num_;
  std::uint64_t den_;
};

/// Colour value per lattice site, each in [0, 1].
using ColorField = std::vector<double>;

/// One cutting-and-shuffling system.
struct Protocol {
  int n;
  RationalRatio ratio;
  Permutation permutation;
  double diffusivity = 0.0;  ///< (lattice sites)^2 per iteration
  std::int64_t t_max = 0;

  /// Throws InputError / StabilityError when an invariant is broken.
  void validate() const;
};

/// Lengths xi * r^(j-1) for j = 1..n, computed exactly as num^(j-1) * den^(n-j).
/// Throws CapacityError if any length (or their sum) overflows 64 bits.
std::vector<std::uint64_t> subsegment_lengths(int n, const RationalRatio& ratio);

std::uint64_t total_length(int n, const RationalRatio& ratio);

/// First subsegment length xi = den^(n-1).
std::uint64_t first_length(int n, const RationalRatio& ratio);

/// Piecewise-constant start: block j carries colour (j-1)/(n-1).
ColorField initial_field(int n, const RationalRatio& ratio);

/// Interior cut sites: prefix sums of the subsegment lengths, excluding L.
std::vector<std::uint64_t> cut_positions(int n, const RationalRatio& ratio);

/// Precomputed cut-and-shuffle map for a fixed lattice length and cut set.
/// Slot k of the output holds input piece perm(k).
class CutShuffle {
 public:
  CutShuffle(std::size_t length, std::span<const std::uint64_t> cuts, const Permutation& perm);

  std::size_t length() const { return length_; }

  /// dst must not alias src.
  void apply(std::span<const double> src, std::span<double> dst) const;

 private:
  struct Move {
    std::size_t from;
    std::size_t count;
  };
  std::size_t length_;
  std::vector<Move> moves_;  // in output order
};

ColorField shuffle_step(std::span<const double> field, std::span<const std::uint64_t> cuts,
                        const Permutation& perm);

}  // namespace iet
