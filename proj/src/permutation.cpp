#include "iet/permutation.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

#include "iet/errors.hpp"

namespace iet {

Permutation::Permutation(std::vector<int> mapping) : map_(std::move(mapping)) {
  const int n = size();
  if (n < 1) throw InputError("permutation must have at least one element");
  std::vector<bool> seen(static_cast<std::size_t>(n) + 1, false);
  for (int v : map_) {
    if (v < 1 || v > n || seen[static_cast<std::size_t>(v)])
      throw InputError("permutation " + to_string() + " is not a bijection of {1.." +
                       std::to_string(n) + "}");
    seen[static_cast<std::size_t>(v)] = true;
  }
}

Permutation Permutation::parse(std::string_view text) {
  std::vector<int> values;
  bool has_separator = false;
  std::string digits;
  for (char ch : text) {
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      digits.push_back(ch);
    } else if (ch == ',' || ch == ' ' || ch == '\t') {
      has_separator = true;
      if (!digits.empty()) values.push_back(std::stoi(digits));
      digits.clear();
    } else if (ch != '[' && ch != ']') {
      throw InputError("unexpected character '" + std::string(1, ch) + "' in permutation");
    }
  }
  if (!has_separator && values.empty()) {
    // compact single-digit form "3142"
    for (char ch : digits) values.push_back(ch - '0');
  } else if (!digits.empty()) {
    values.push_back(std::stoi(digits));
  }
  return Permutation(std::move(values));
}

Permutation Permutation::identity(int n) {
  std::vector<int> m(static_cast<std::size_t>(n));
  std::iota(m.begin(), m.end(), 1);
  return Permutation(std::move(m));
}

std::string Permutation::to_string() const {
  std::string out = "[";
  for (std::size_t i = 0; i < map_.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(map_[i]);
  }
  return out + "]";
}

bool is_irreducible(const Permutation& perm) {
  const int n = perm.size();
  int prefix_max = 0;
  for (int k = 1; k < n; ++k) {
    prefix_max = std::max(prefix_max, perm.at(k));
    // {perm(1..k)} == {1..k} iff the prefix maximum equals k
    if (prefix_max == k) return false;
  }
  return true;
}

bool is_rotation(const Permutation& perm) {
  const int n = perm.size();
  const int shift = perm.at(1) - 1;
  for (int k = 1; k <= n; ++k) {
    if (perm.at(k) != (k - 1 + shift) % n + 1) return false;
  }
  return true;
}

bool has_fixed_endpoint(const Permutation& perm) {
  return perm.at(1) == 1 || perm.at(perm.size()) == perm.size();
}

bool has_fixed_consecutive_block(const Permutation& perm) {
  const int n = perm.size();
  if (n <= 3) return false;
  int run = 0;
  for (int k = 1; k <= n; ++k) {
    run = perm.at(k) == k ? run + 1 : 0;
    // any fixed run of length >= 2 contains a sub-run of length 2 <= N-2
    if (run >= 2) return true;
  }
  return false;
}

std::string_view rule_name(Rule rule) {
  switch (rule) {
    case Rule::reducible: return "reducible";
    case Rule::rotation: return "rotation";
    case Rule::fixed_endpoint: return "fixed-endpoint";
    case Rule::fixed_consecutive_block: return "fixed-consecutive-block";
  }
  return "unknown";
}

std::optional<Rule> first_violation(const Permutation& perm) {
  if (!is_irreducible(perm)) return Rule::reducible;
  if (is_rotation(perm)) return Rule::rotation;
  if (has_fixed_endpoint(perm)) return Rule::fixed_endpoint;
  if (has_fixed_consecutive_block(perm)) return Rule::fixed_consecutive_block;
  return std::nullopt;
}

bool is_allowed(const Permutation& perm) { return !first_violation(perm).has_value(); }

std::vector<Permutation> enumerate_allowed(int n) {
  if (n < 2 || n > 9) throw InputError("N must be in 2..9, got " + std::to_string(n));
  std::vector<int> m(static_cast<std::size_t>(n));
  std::iota(m.begin(), m.end(), 1);
  std::vector<Permutation> out;
  do {
    Permutation p(m);
    if (is_allowed(p)) out.push_back(std::move(p));
  } while (std::next_permutation(m.begin(), m.end()));
  return out;
}

}  // namespace iet
