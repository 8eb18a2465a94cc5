#include <cmath>
#include <vector>

#include "doctest.h"
#include "iet/errors.hpp"
#include "iet/stretched_fit.hpp"

namespace {

// Composite Simpson quadrature of Gamma(x) = int 2 u^(2x-1) exp(-u^2) du on [0, 12];
// the substitution t = u^2 keeps the integrand smooth for x >= 1.
double gamma_quadrature(double x) {
  const int n = 200000;
  const double b = 12.0;
  const double h = b / n;
  auto f = [&](double u) { return 2.0 * std::pow(u, 2 * x - 1) * std::exp(-u * u); };
  double s = f(0.0) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(i * h);
  return s * h / 3.0;
}

struct Samples {
  std::vector<double> t, v;
};

Samples synthetic(double m, double tau, double alpha, int count, double t_end) {
  Samples s;
  for (int i = 0; i < count; ++i) {
    const double t = t_end * i / (count - 1);
    s.t.push_back(t);
    s.v.push_back(m * std::exp(-std::pow(t / tau, alpha)));
  }
  return s;
}

}  // namespace

TEST_SUITE("stretched-fit") {

TEST_CASE("model values") {
  CHECK(iet::stretched_exponential(0.0, 0.5, 10.0, 0.8) == 0.5);
  CHECK(iet::stretched_exponential(10.0, 0.5, 10.0, 0.8) == doctest::Approx(0.5 / std::exp(1.0)));
  CHECK(iet::stretched_exponential(20.0, 1.0, 10.0, 1.0) == doctest::Approx(std::exp(-2.0)));
}

TEST_CASE("recovers its own generator") {
  const auto s = synthetic(0.5, 40.0, 0.8, 401, 400.0);
  const auto fit = iet::fit_stretched_exponential(s.t, s.v, 0.5);
  CHECK(fit.converged);
  CHECK(fit.tau == doctest::Approx(40.0).epsilon(1e-6));
  CHECK(fit.alpha == doctest::Approx(0.8).epsilon(1e-6));
  CHECK(fit.sse <= fit.initial_sse);
}

TEST_CASE("recovery across the parameter range") {
  for (double tau : {5.0, 20.0, 68.17, 150.0, 500.0}) {
    for (double alpha : {0.4, 0.6, 0.7866, 1.0, 1.2}) {
      CAPTURE(tau);
      CAPTURE(alpha);
      const auto s = synthetic(0.365, tau, alpha, 1001, 8.0 * tau);
      const auto fit = iet::fit_stretched_exponential(s.t, s.v, 0.365);
      CHECK(fit.tau == doctest::Approx(tau).epsilon(1e-6));
      CHECK(fit.alpha == doctest::Approx(alpha).epsilon(1e-6));
      CHECK(fit.sse <= fit.initial_sse);
    }
  }
}

TEST_CASE("fit errors") {
  const std::vector<double> t{0, 1, 2, 3, 4, 5};
  CHECK_THROWS_AS(iet::fit_stretched_exponential(t, std::vector<double>(6, 0.3), 0.3), iet::FitError);
  CHECK_THROWS_AS(iet::fit_stretched_exponential(std::vector<double>{0, 1, 2},
                                                 std::vector<double>{1, 0.5, 0.2}, 1.0),
                  iet::FitError);
  CHECK_THROWS_AS(iet::fit_stretched_exponential(t, std::vector<double>{1, .5, .3, .2, .1, -1}, 1.0),
                  iet::FitError);
  CHECK_THROWS_AS(iet::fit_stretched_exponential(t, std::vector<double>{1, .5, .3, .2, .1, NAN}, 1.0),
                  iet::FitError);
  CHECK_THROWS_AS(iet::fit_stretched_exponential(t, std::vector<double>{1, .5, .3, .2, .1, .05}, 0.0),
                  iet::FitError);
  CHECK_THROWS_AS(iet::fit_stretched_exponential(t, std::vector<double>(5, 1.0), 1.0), iet::FitError);
}

TEST_CASE("iteration cap reports non-convergence") {
  const auto s = synthetic(1.0, 30.0, 0.7, 200, 300.0);
  iet::FitOptions opts;
  opts.max_iterations = 1;
  const auto fit = iet::fit_stretched_exponential(s.t, s.v, 1.0, opts);
  CHECK_FALSE(fit.converged);
  CHECK(fit.sse <= fit.initial_sse);
}

TEST_CASE("alpha stays in range") {
  std::vector<double> t, v;
  for (int i = 0; i < 50; ++i) {
    t.push_back(i);
    v.push_back(i < 25 ? 1.0 : 0.0);  // a step, steeper than any admissible alpha
  }
  const auto fit = iet::fit_stretched_exponential(t, v, 1.0);
  CHECK(fit.alpha > iet::kMinAlpha);
  CHECK(fit.alpha <= iet::kMaxAlpha);
}

TEST_CASE("gamma function") {
  CHECK(iet::gamma_function(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(iet::gamma_function(2.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(iet::gamma_function(0.5) == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-14));
  CHECK(iet::gamma_function(5.0) == doctest::Approx(24.0).epsilon(1e-14));
  CHECK_THROWS_AS(iet::gamma_function(0.0), std::domain_error);
  CHECK_THROWS_AS(iet::gamma_function(-1.5), std::domain_error);
}

TEST_CASE("gamma matches quadrature") {
  for (double x : {1.0, 1.5, 2.2713, 2.2626, 3.7}) {
    CHECK(iet::gamma_function(x) == doctest::Approx(gamma_quadrature(x)).epsilon(1e-9));
  }
  CHECK(iet::gamma_function(2.2713) == doctest::Approx(1.1485).epsilon(2e-3));
}

TEST_CASE("gamma recurrence") {
  for (double x = 0.5; x <= 5.0; x += 0.0625) {
    CHECK(iet::gamma_function(x + 1) == doctest::Approx(x * iet::gamma_function(x)).epsilon(1e-10));
  }
}

TEST_CASE("e-folding time") {
  CHECK(iet::efolding_time(68.17, 0.7866) == doctest::Approx(78.3).epsilon(2e-3));
  CHECK(iet::efolding_time(68.17, 0.7866) == doctest::Approx(68.17 * gamma_quadrature(1 + 1 / 0.7866)).epsilon(1e-9));
  CHECK(iet::efolding_time(0.8706, 0.7920) == doctest::Approx(0.996).epsilon(3e-3));
  CHECK(iet::efolding_time(12.5, 1.0) == 12.5);
  for (double alpha : {0.5, 0.8, 1.3}) {
    double prev = 0.0;
    for (double tau : {1.0, 2.0, 10.0, 100.0}) {
      const double tp = iet::efolding_time(tau, alpha);
      CHECK(tp > prev);
      prev = tp;
    }
  }
  iet::FitResult fit;
  fit.tau = 10.0;
  fit.alpha = 1.0;
  CHECK(iet::efolding_time(fit) == 10.0);
}

}
