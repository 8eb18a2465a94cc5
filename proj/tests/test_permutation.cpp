#include <algorithm>
#include <numeric>
#include <set>

#include "doctest.h"
#include "iet/errors.hpp"
#include "iet/permutation.hpp"

using iet::Permutation;
using iet::Rule;

namespace {

Permutation P(const char* text) { return Permutation::parse(text); }

// Brute-force rule oracle written against sets rather than prefix maxima.
bool oracle_allowed(const std::vector<int>& m) {
  const int n = static_cast<int>(m.size());
  for (int k = 1; k < n; ++k) {
    std::set<int> head(m.begin(), m.begin() + k);
    if (*head.rbegin() == k && static_cast<int>(head.size()) == k) return false;
  }
  for (int s = 0; s < n; ++s) {
    bool rot = true;
    for (int i = 0; i < n; ++i) rot = rot && m[i] == (i + s) % n + 1;
    if (rot) return false;
  }
  if (m.front() == 1 || m.back() == n) return false;
  if (n >= 4) {
    for (int len = 2; len <= n - 2; ++len) {
      for (int start = 0; start + len <= n; ++start) {
        bool fixed = true;
        for (int i = start; i < start + len; ++i) fixed = fixed && m[i] == i + 1;
        if (fixed) return false;
      }
    }
  }
  return true;
}

std::vector<Permutation> oracle_enumerate(int n) {
  std::vector<int> m(n);
  std::iota(m.begin(), m.end(), 1);
  std::vector<Permutation> out;
  do {
    if (oracle_allowed(m)) out.emplace_back(m);
  } while (std::next_permutation(m.begin(), m.end()));
  return out;
}

}  // namespace

TEST_SUITE("permutation") {

TEST_CASE("parse accepts several notations") {
  const Permutation expected({3, 1, 4, 2});
  CHECK(P("3,1,4,2") == expected);
  CHECK(P("3 1 4 2") == expected);
  CHECK(P("[3 1 4 2]") == expected);
  CHECK(P("3142") == expected);
  CHECK(P(" [3, 1, 4, 2] ") == expected);
  CHECK(expected.to_string() == "[3 1 4 2]");
  CHECK(expected.at(1) == 3);
  CHECK(expected.size() == 4);
}

TEST_CASE("malformed permutations are rejected") {
  CHECK_THROWS_AS(P("3,1,3,2"), iet::InputError);
  CHECK_THROWS_AS(P("0,1,2"), iet::InputError);
  CHECK_THROWS_AS(P("1,2,5"), iet::InputError);
  CHECK_THROWS_AS(P(""), iet::InputError);
  CHECK_THROWS_AS(P("a,b"), iet::InputError);
  CHECK_THROWS_AS(Permutation(std::vector<int>{}), iet::InputError);
}

TEST_CASE("irreducibility") {
  CHECK_FALSE(iet::is_irreducible(P("2143")));
  CHECK(iet::is_irreducible(P("3142")));
  CHECK_FALSE(iet::is_irreducible(Permutation::identity(5)));
}

TEST_CASE("rotations") {
  CHECK(iet::is_rotation(P("2341")));
  CHECK(iet::is_rotation(P("1234")));
  CHECK_FALSE(iet::is_rotation(P("2413")));
}

TEST_CASE("fixed endpoints") {
  CHECK(iet::has_fixed_endpoint(P("1342")));
  CHECK(iet::has_fixed_endpoint(P("2314")));
  CHECK_FALSE(iet::has_fixed_endpoint(P("4321")));
}

TEST_CASE("fixed consecutive blocks") {
  CHECK(iet::has_fixed_consecutive_block(P("4231")));
  CHECK_FALSE(iet::has_fixed_consecutive_block(P("3421")));
  std::vector<int> m{1, 2, 3};
  do {
    CHECK_FALSE(iet::has_fixed_consecutive_block(Permutation(m)));
  } while (std::next_permutation(m.begin(), m.end()));
}

TEST_CASE("allowed set for N = 4") {
  const auto got = iet::enumerate_allowed(4);
  const std::vector<Permutation> expected{P("2413"), P("2431"), P("3142"), P("3241"), P("3421"),
                                          P("4132"), P("4213"), P("4312"), P("4321")};
  CHECK(got == expected);
  CHECK(iet::is_allowed(P("52413")));
}

TEST_CASE("small N") {
  CHECK(iet::enumerate_allowed(2).empty());
  const auto three = iet::enumerate_allowed(3);
  REQUIRE(three.size() == 1);
  CHECK(three.front() == P("321"));
  CHECK_THROWS_AS(iet::enumerate_allowed(1), iet::InputError);
  CHECK_THROWS_AS(iet::enumerate_allowed(10), iet::InputError);
}

TEST_CASE("named rejections") {
  CHECK(iet::first_violation(P("2143")) == Rule::reducible);
  CHECK(iet::first_violation(P("2341")) == Rule::rotation);
  CHECK(iet::first_violation(P("4231")) == Rule::fixed_consecutive_block);
  // a fixed endpoint always leaves a closed prefix, so rule (i) fires first
  CHECK(iet::first_violation(P("2314")) == Rule::reducible);
  CHECK(iet::first_violation(P("1342")) == Rule::reducible);
  CHECK_FALSE(iet::first_violation(P("3142")).has_value());
  CHECK(iet::rule_name(Rule::rotation).size() > 0);
}

TEST_CASE("enumeration agrees with a brute-force oracle") {
  for (int n = 2; n <= 7; ++n) {
    CAPTURE(n);
    CHECK(iet::enumerate_allowed(n) == oracle_enumerate(n));
  }
}

TEST_CASE("every excluded permutation names a rule") {
  for (int n = 3; n <= 6; ++n) {
    std::vector<int> m(n);
    std::iota(m.begin(), m.end(), 1);
    do {
      const Permutation perm(m);
      CHECK(iet::is_allowed(perm) == !iet::first_violation(perm).has_value());
      if (iet::is_rotation(perm) || iet::has_fixed_endpoint(perm)) CHECK_FALSE(iet::is_allowed(perm));
    } while (std::next_permutation(m.begin(), m.end()));
  }
}

TEST_CASE("enumeration is lexicographic") {
  const auto five = iet::enumerate_allowed(5);
  CHECK(std::is_sorted(five.begin(), five.end()));
  CHECK(std::adjacent_find(five.begin(), five.end()) == five.end());
}

}
