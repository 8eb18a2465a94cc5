#pragma once

#include <span>

namespace iet {

/// Parameters of value(T) ~= m * exp(-(T / tau)^alpha), with m held fixed.
struct FitResult {
  double m = 0.0;
  double tau = 0.0;
  double alpha = 1.0;
  double sse = 0.0;          ///< residual sum of squares at (tau, alpha)
  double initial_sse = 0.0;  ///< residual sum of squares at the starting point
  int iterations = 0;
  bool converged = false;
};

struct FitOptions {
  int max_iterations = 500;
  double relative_tolerance = 1e-12;  ///< on the SSE change of an accepted step
};

inline constexpr double kMinAlpha = 0.1;
inline constexpr double kMaxAlpha = 2.0;

double stretched_exponential(double t, double m, double tau, double alpha);

/// Least-squares fit of (tau, alpha) in linear space.
///
/// Starts from tau0 = first time the series crosses m/e (linear interpolation,
/// or the last sample time if it never does) and alpha0 = 1, then runs
/// Levenberg-Marquardt on (log tau, alpha) with alpha kept in (0.1, 2].
/// Throws FitError for fewer than five samples or a series with no decay;
/// a run that hits max_iterations returns converged = false with the best
/// parameters seen.
FitResult fit_stretched_exponential(std::span<const double> times, std::span<const double> values,
                                    double m, const FitOptions& options = {});

/// Gamma function for x > 0; throws std::domain_error otherwise.
double gamma_function(double x);

/// e-folding time tau * Gamma(1 + 1/alpha) of a stretched exponential.
double efolding_time(double tau, double alpha);
double efolding_time(const FitResult& fit);

}  // namespace iet
