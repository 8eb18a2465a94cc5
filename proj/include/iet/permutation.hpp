#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace iet {

/// Shuffling order of N pieces, stored 1-based: slot k receives piece at(k).
class Permutation {
 public:
  Permutation() = default;
  /// Throws InputError unless `mapping` is a bijection of {1..N}.
  explicit Permutation(std::vector<int> mapping);

  /// Parses "3,1,4,2", "3 1 4 2", "[3 1 4 2]" or the compact "3142".
  static Permutation parse(std::string_view text);
  static Permutation identity(int n);

  int size() const { return static_cast<int>(map_.size()); }
  /// 1-based access: at(k) for k in 1..N.
  int at(int k) const { return map_[static_cast<std::size_t>(k - 1)]; }
  const std::vector<int>& mapping() const { return map_; }

  /// Bracketed notation, e.g. "[3 1 4 2]".
  std::string to_string() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation& a, const Permutation& b) { return a.map_ <=> b.map_; }

 private:
  std::vector<int> map_;
};

// Design-rule predicates.
bool is_irreducible(const Permutation& perm);
bool is_rotation(const Permutation& perm);
bool has_fixed_endpoint(const Permutation& perm);
/// A run of 2..N-2 adjacent positions each mapped to itself. Inactive for N <= 3.
bool has_fixed_consecutive_block(const Permutation& perm);

enum class Rule { reducible, rotation, fixed_endpoint, fixed_consecutive_block };

std::string_view rule_name(Rule rule);

/// First rule the permutation violates, in the order (i)..(iv); nullopt if allowed.
std::optional<Rule> first_violation(const Permutation& perm);

bool is_allowed(const Permutation& perm);

/// All allowed permutations of {1..n}, lexicographic. Requires 2 <= n <= 9.
std::vector<Permutation> enumerate_allowed(int n);

}  // namespace iet
