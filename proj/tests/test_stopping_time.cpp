#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "iet/errors.hpp"
#include "iet/stopping_time.hpp"

namespace {

// Smooth decreasing l_m(T) = 1 / (1 + T) on T = 0..t_max.
std::vector<double> hyperbolic(std::int64_t t_max) {
  std::vector<double> out;
  for (std::int64_t t = 0; t <= t_max; ++t) out.push_back(1.0 / (1.0 + static_cast<double>(t)));
  return out;
}

}  // namespace

TEST_SUITE("stopping-time") {

TEST_CASE("Batchelor length") {
  CHECK(iet::batchelor_length(0.0, 2000) == 0.0);
  CHECK(iet::batchelor_length(0.5, 2000) == doctest::Approx(0.03512).epsilon(1e-4));
  CHECK_THROWS_AS(iet::batchelor_length(-0.1, 2000), iet::InputError);
  CHECK_THROWS_AS(iet::batchelor_length(0.1, 0.0), iet::InputError);
}

TEST_CASE("no cutting gives the closed form") {
  const std::int64_t t_max = 1000;
  const std::vector<double> cuts(t_max + 1, 0.0);
  for (double pe : {1.0, 2.0, 4.0}) {
    const auto sol = iet::solve_stopping_time(cuts, pe, t_max);
    REQUIRE(sol.found);
    const double t_hat = 2.0 * pe / (std::numbers::pi * std::numbers::pi);
    CHECK(sol.iteration == static_cast<std::int64_t>(std::ceil(t_hat * t_max)));
    CHECK(sol.normalized_time == doctest::Approx(t_hat).epsilon(2e-3));
  }
  CHECK_FALSE(iet::solve_stopping_time(cuts, 5.0, t_max).found);
}

TEST_CASE("infinite Peclet never stops") {
  const auto sol = iet::solve_stopping_time_lengths(hyperbolic(100), INFINITY, 100);
  CHECK_FALSE(sol.found);
}

TEST_CASE("first crossing") {
  const std::int64_t t_max = 500;
  const auto lm = hyperbolic(t_max);
  for (double pe : {100.0, 2000.0, 8000.0, 32000.0}) {
    const auto sol = iet::solve_stopping_time_lengths(lm, pe, t_max);
    REQUIRE(sol.found);
    const auto t = sol.iteration;
    CHECK(iet::batchelor_length(static_cast<double>(t) / t_max, pe) >= lm[t]);
    CHECK(iet::batchelor_length(static_cast<double>(t - 1) / t_max, pe) < lm[t - 1]);
    CHECK(sol.interpolated_iteration > static_cast<double>(t - 1));
    CHECK(sol.interpolated_iteration <= static_cast<double>(t));
    CHECK(sol.normalized_time == static_cast<double>(t) / t_max);
  }
}

TEST_CASE("monotone in Peclet number") {
  const std::int64_t t_max = 500;
  const auto lm = hyperbolic(t_max);
  std::int64_t prev = 0;
  for (double pe = 100.0; pe <= 50000.0; pe *= 1.3) {
    const auto sol = iet::solve_stopping_time_lengths(lm, pe, t_max);
    REQUIRE(sol.found);
    CHECK(sol.iteration >= prev);
    prev = sol.iteration;
  }
}

TEST_CASE("reciprocal form") {
  std::vector<double> cuts;
  for (int t = 0; t <= 200; ++t) cuts.push_back(t);
  const auto a = iet::solve_stopping_time(cuts, 3000, 200);
  const auto b = iet::solve_stopping_time_lengths(hyperbolic(200), 3000, 200);
  CHECK(a.iteration == b.iteration);
  CHECK(a.interpolated_iteration == b.interpolated_iteration);
}

TEST_CASE("argument checks") {
  CHECK_THROWS_AS(iet::solve_stopping_time_lengths(hyperbolic(10), 100, 20), iet::InputError);
  CHECK_THROWS_AS(iet::solve_stopping_time_lengths(hyperbolic(10), 0.0, 10), iet::InputError);
  CHECK_THROWS_AS(iet::solve_stopping_time_lengths(hyperbolic(10), 100, 0), iet::InputError);
  CHECK_THROWS_AS(iet::solve_stopping_time(std::vector<double>{0, -1, 2}, 100, 2), iet::InputError);
}

}
