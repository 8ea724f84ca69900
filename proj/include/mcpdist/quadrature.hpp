#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>

namespace mcpdist {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
  std::size_t intervals = 0;
};

struct QuadratureOptions {
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  /// Subdivision budget; exhausting it raises QuadratureError.
  std::size_t max_intervals = 10000;
};

/// Raised when the subdivision budget runs out or the integrand returns a
/// non-finite value. Carries the best estimate reached so far.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, QuadratureResult best)
      : std::runtime_error(what), best_(best) {}
  const QuadratureResult& best() const { return best_; }

 private:
  QuadratureResult best_;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive 21-point Gauss-Kronrod integration of f over [a, b].
///
/// The panel with the largest |K21 - G10| difference is bisected until the
/// summed estimate is at most max(abs_tol, rel_tol * |value|). Deterministic
/// for fixed inputs.
QuadratureResult integrate_adaptive(const Integrand& f, double a, double b,
                                    double rel_tol = 1e-8, double abs_tol = 1e-12,
                                    std::size_t max_intervals = 10000);

/// Same, starting from the panels delimited by `breakpoints` (ascending,
/// first and last are the integration limits). Callers put derivative kinks
/// here so every initial panel is smooth.
QuadratureResult integrate_adaptive(const Integrand& f,
                                    std::span<const double> breakpoints,
                                    const QuadratureOptions& options = {});

}  // namespace mcpdist
