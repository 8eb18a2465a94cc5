#include "iet/stretched_fit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "iet/errors.hpp"

namespace iet {

namespace {

constexpr double kAlphaFloor = kMinAlpha * (1.0 + 1e-9);

struct Params {
  double log_tau;
  double alpha;
};

double sum_squares(std::span<const double> t, std::span<const double> v, double m, Params p) {
  const double tau = std::exp(p.log_tau);
  double sse = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double r = v[i] - stretched_exponential(t[i], m, tau, p.alpha);
    sse += r * r;
  }
  return sse;
}

double initial_tau(std::span<const double> t, std::span<const double> v, double m) {
  const double target = m / std::exp(1.0);
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (v[i] <= target && v[i - 1] > target) {
      const double frac = (v[i - 1] - target) / (v[i - 1] - v[i]);
      return t[i - 1] + frac * (t[i] - t[i - 1]);
    }
  }
  return t.back() > 0.0 ? t.back() : 1.0;
}

}  // namespace

double stretched_exponential(double t, double m, double tau, double alpha) {
  if (t <= 0.0) return m;
  return m * std::exp(-std::pow(t / tau, alpha));
}

FitResult fit_stretched_exponential(std::span<const double> times, std::span<const double> values,
                                    double m, const FitOptions& options) {
  if (times.size() != values.size()) throw FitError("times and values differ in length");
  if (times.size() < 5) throw FitError("need at least 5 samples to fit");
  if (!(m > 0.0)) throw FitError("initial value m must be positive");
  for (double v : values) {
    if (!std::isfinite(v) || v < 0.0) throw FitError("values must be finite and non-negative");
  }
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (*hi - *lo <= 1e-14 * std::max(1.0, std::abs(m))) throw FitError("no decay to fit");

  Params p{std::log(initial_tau(times, values, m)), 1.0};
  double sse = sum_squares(times, values, m, p);

  FitResult result;
  result.m = m;
  result.initial_sse = sse;

  double lambda = 1e-3;
  const std::size_t n = times.size();
  int iter = 0;
  bool converged = false;
  for (; iter < options.max_iterations && !converged; ++iter) {
    // Normal equations for the model derivatives.
    const double tau = std::exp(p.log_tau);
    double a00 = 0.0, a01 = 0.0, a11 = 0.0, g0 = 0.0, g1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double t = times[i];
      if (t <= 0.0) continue;  // model pinned to m, zero derivatives
      const double ratio = t / tau;
      const double s = std::pow(ratio, p.alpha);
      const double f = m * std::exp(-s);
      const double d_logtau = f * s * p.alpha;
      const double d_alpha = -f * s * std::log(ratio);
      const double r = values[i] - f;
      a00 += d_logtau * d_logtau;
      a01 += d_logtau * d_alpha;
      a11 += d_alpha * d_alpha;
      g0 += d_logtau * r;
      g1 += d_alpha * r;
    }

    bool accepted = false;
    while (!accepted) {
      const double b00 = a00 * (1.0 + lambda);
      const double b11 = a11 * (1.0 + lambda);
      const double det = b00 * b11 - a01 * a01;
      if (!(det > 0.0) || !std::isfinite(det)) {
        lambda *= 10.0;
      } else {
        const double step0 = (b11 * g0 - a01 * g1) / det;
        const double step1 = (b00 * g1 - a01 * g0) / det;
        Params trial{p.log_tau + step0, std::clamp(p.alpha + step1, kAlphaFloor, kMaxAlpha)};
        const double trial_sse = sum_squares(times, values, m, trial);
        if (std::isfinite(trial_sse) && trial_sse < sse) {
          const double change = sse - trial_sse;
          p = trial;
          sse = trial_sse;
          lambda = std::max(lambda / 10.0, 1e-15);
          accepted = true;
          if (change <= options.relative_tolerance * sse) converged = true;
        } else {
          lambda *= 10.0;
        }
      }
      if (lambda > 1e20) {
        // no descent direction left at working precision
        converged = true;
        break;
      }
    }
  }

  result.tau = std::exp(p.log_tau);
  result.alpha = p.alpha;
  result.sse = sse;
  result.iterations = iter;
  result.converged = converged;
  return result;
}

double gamma_function(double x) {
  if (!(x > 0.0)) throw std::domain_error("gamma_function needs x > 0, got " + std::to_string(x));
  return std::tgamma(x);
}

double efolding_time(double tau, double alpha) {
  if (!(tau > 0.0) || !(alpha > 0.0)) throw InputError("efolding_time needs tau, alpha > 0");
  return tau * gamma_function(1.0 + 1.0 / alpha);
}

double efolding_time(const FitResult& fit) { return efolding_time(fit.tau, fit.alpha); }

}  // namespace iet
