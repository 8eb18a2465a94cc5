#include <algorithm>
#include <numeric>

#include "doctest.h"
#include "iet/errors.hpp"
#include "iet/lattice.hpp"

using iet::Permutation;
using iet::RationalRatio;
using U = std::vector<std::uint64_t>;

namespace {

// Expands (colour, length) blocks into a lattice field.
iet::ColorField blocks(std::initializer_list<std::pair<double, int>> spec) {
  iet::ColorField f;
  for (auto [c, len] : spec) f.insert(f.end(), static_cast<std::size_t>(len), c);
  return f;
}

}  // namespace

TEST_SUITE("lattice") {

TEST_CASE("ratio parsing and reduction") {
  const auto r = RationalRatio::parse("10/8");
  CHECK(r.num() == 5);
  CHECK(r.den() == 4);
  CHECK(r.to_string() == "5/4");
  CHECK(RationalRatio::parse("2") == RationalRatio(2, 1));
  CHECK_THROWS_AS(RationalRatio(4, 5), iet::InputError);
  CHECK_THROWS_AS(RationalRatio(1, 1), iet::InputError);
  CHECK_THROWS_AS(RationalRatio(3, 0), iet::InputError);
  CHECK_THROWS_AS(RationalRatio::parse("1.25"), iet::InputError);
  CHECK_THROWS_AS(RationalRatio::parse("5/"), iet::InputError);
}

TEST_CASE("subsegment lengths") {
  CHECK(iet::subsegment_lengths(4, {5, 4}) == U{64, 80, 100, 125});
  CHECK(iet::subsegment_lengths(2, {2, 1}) == U{1, 2});
  CHECK(iet::subsegment_lengths(4, {3, 2}) == U{8, 12, 18, 27});
}

TEST_CASE("lengths follow xi r^(j-1) exactly") {
  for (auto [a, b] : {std::pair{5, 4}, {6, 5}, {7, 5}, {13, 10}, {11, 10}, {3, 2}}) {
    for (int n = 2; n <= 6; ++n) {
      const RationalRatio r(a, b);
      const auto len = iet::subsegment_lengths(n, r);
      std::uint64_t g = 0;
      for (std::size_t j = 0; j < len.size(); ++j) {
        g = std::gcd(g, len[j]);
        if (j > 0) CHECK(len[j] * r.den() == len[j - 1] * r.num());
      }
      CHECK(g == 1);
      CHECK(len.front() == iet::first_length(n, r));
    }
  }
}

TEST_CASE("total length") {
  CHECK(iet::total_length(4, {5, 4}) == 369);
  CHECK(iet::total_length(4, {13, 10}) == 6187);
  CHECK(iet::total_length(4, {3, 2}) == 65);
}

TEST_CASE("overflow is a capacity error") {
  CHECK_THROWS_AS(iet::subsegment_lengths(4, {1'000'000'007, 1'000'000'000}), iet::CapacityError);
  CHECK_THROWS_AS(iet::total_length(70, {3, 1}), iet::CapacityError);
  const RationalRatio huge(UINT64_MAX, 1);
  CHECK_THROWS_AS(iet::total_length(2, huge), iet::CapacityError);
  CHECK_THROWS_AS(iet::subsegment_lengths(2, huge), iet::CapacityError);
  CHECK_THROWS_AS(iet::total_length(1, {3, 2}), iet::InputError);
}

TEST_CASE("initial field") {
  CHECK(iet::initial_field(4, {5, 4}) ==
        blocks({{0.0, 64}, {1.0 / 3, 80}, {2.0 / 3, 100}, {1.0, 125}}));
  CHECK(iet::initial_field(2, {2, 1}) == blocks({{0.0, 1}, {1.0, 2}}));
  CHECK(iet::initial_field(5, {3, 2}) ==
        blocks({{0.0, 16}, {0.25, 24}, {0.5, 36}, {0.75, 54}, {1.0, 81}}));
}

TEST_CASE("cut positions") {
  CHECK(iet::cut_positions(4, {3, 2}) == U{8, 20, 38});
  CHECK(iet::cut_positions(2, {2, 1}) == U{1});
  CHECK(iet::cut_positions(4, {5, 4}) == U{64, 144, 244});
}

TEST_CASE("shuffle of the worked example") {
  const RationalRatio r(3, 2);
  const auto cuts = iet::cut_positions(4, r);
  const auto perm = Permutation::parse("3142");
  const auto t1 = iet::shuffle_step(iet::initial_field(4, r), cuts, perm);
  CHECK(t1 == blocks({{2.0 / 3, 18}, {0.0, 8}, {1.0, 27}, {1.0 / 3, 12}}));
  const auto t2 = iet::shuffle_step(t1, cuts, perm);
  CHECK(t2 == blocks({{0.0, 6}, {1.0, 12}, {2.0 / 3, 8}, {1.0, 15}, {1.0 / 3, 12}, {2.0 / 3, 10},
                      {0.0, 2}}));
}

TEST_CASE("identity shuffle is a no-op") {
  const auto f = iet::initial_field(4, {5, 4});
  CHECK(iet::shuffle_step(f, iet::cut_positions(4, {5, 4}), Permutation::identity(4)) == f);
}

TEST_CASE("shuffle permutes values") {
  for (const auto& perm : iet::enumerate_allowed(4)) {
    const RationalRatio r(7, 5);
    const auto cuts = iet::cut_positions(4, r);
    auto f = iet::initial_field(4, r);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] += 1e-3 * static_cast<double>(i % 17) / 17.0;
    auto g = iet::shuffle_step(f, cuts, perm);
    REQUIRE(g.size() == f.size());
    std::sort(f.begin(), f.end());
    std::sort(g.begin(), g.end());
    CHECK(f == g);
  }
}

TEST_CASE("bad cuts and sizes") {
  const auto perm = Permutation::parse("3142");
  CHECK_THROWS_AS(iet::CutShuffle(10, U{2, 5}, perm), iet::InputError);
  CHECK_THROWS_AS(iet::CutShuffle(10, U{2, 5, 12}, perm), iet::InputError);
  CHECK_THROWS_AS(iet::CutShuffle(10, U{5, 2, 7}, perm), iet::InputError);
  CHECK_THROWS_AS(iet::CutShuffle(10, U{0, 2, 7}, perm), iet::InputError);
  const iet::CutShuffle ok(10, U{2, 5, 7}, perm);
  std::vector<double> src(10), dst(9);
  CHECK_THROWS_AS(ok.apply(src, dst), iet::InputError);
}

TEST_CASE("protocol validation") {
  iet::Protocol p{4, {5, 4}, Permutation::parse("3142"), 0.5, 10};
  CHECK_NOTHROW(p.validate());
  p.diffusivity = 0.6;
  CHECK_THROWS_AS(p.validate(), iet::StabilityError);
  p.diffusivity = 0.0;
  p.t_max = -1;
  CHECK_THROWS_AS(p.validate(), iet::InputError);
  p.t_max = 1;
  p.permutation = Permutation::parse("321");
  CHECK_THROWS_AS(p.validate(), iet::InputError);
}

}
