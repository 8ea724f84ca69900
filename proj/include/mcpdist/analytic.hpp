#pragma once

// Contact-distance and nearest-neighbour-distance CDFs of the planar Matérn
// cluster process.
//
//   1 - F_C(r) = exp(-2 pi lambda_p  ∫_0^{r + r_d} (1 - exp(-m_bar L(r, x))) x dx)
//   1 - F_N(r) = (1 - F_C(r)) ∫_0^{r_d} exp(-m_bar L(r, x0)) 2 x0 / r_d^2 dx0
//
// with L = lens_mass(). The outer contact integral stops at x = r + r_d
// because L vanishes beyond it, and every integral is split at the kinks
// x = |r - r_d| and x = r_d.

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mcpdist/params.hpp"
#include "mcpdist/quadrature.hpp"

namespace mcpdist {

struct AnalyticOptions {
  /// Relative tolerance of every outer integral; CDF values then carry about
  /// this much absolute error.
  double rel_tol = 1e-8;
  std::size_t max_intervals = 10000;
};

/// Quadrature failure while evaluating a CDF at a given radius.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double radius, QuadratureResult partial)
      : std::runtime_error(what), radius_(radius), partial_(partial) {}
  double radius() const { return radius_; }
  const QuadratureResult& partial() const { return partial_; }

 private:
  double radius_;
  QuadratureResult partial_;
};

/// Distance from a typical point to its own cluster centre, x0 in [0, r_d],
/// with density 2 x0 / r_d^2.
class PalmGeometry {
 public:
  PalmGeometry(double x0, double r_d);
  double x0() const { return x0_; }
  double r_d() const { return r_d_; }
  double density() const;

 private:
  double x0_;
  double r_d_;
};

/// Exponent integral ∫ (1 - exp(-m_bar L(r, x))) x dx over x in [0, r + r_d].
QuadratureResult contact_exponent_integral(const MCPParams& params, double r,
                                           const AnalyticOptions& options = {});

/// P(no process point in b(o, r)) for an origin independent of the process.
double contact_survival(const MCPParams& params, double r,
                        const AnalyticOptions& options = {});
/// Contact-distance CDF (empty space function).
double contact_cdf(const MCPParams& params, double r,
                   const AnalyticOptions& options = {});

/// Probability that no other point of the typical point's own cluster lies
/// within r: ∫_0^{r_d} exp(-m_bar mu(x0, r)) f_X0(x0) dx0.
double palm_own_cluster_void(const MCPParams& params, double r,
                             const AnalyticOptions& options = {});

double nn_survival(const MCPParams& params, double r,
                   const AnalyticOptions& options = {});
/// Nearest-neighbour-distance CDF under the reduced Palm distribution.
double nn_cdf(const MCPParams& params, double r,
              const AnalyticOptions& options = {});

/// Contact CDF of a homogeneous Poisson process: 1 - exp(-density pi r^2).
double ppp_contact_cdf(double density, double r);

/// Size-biased law of the typical point's own cluster size:
/// P(ell) = (ell / m_bar) Poisson(ell; m_bar), zero for ell = 0.
double cluster_size_pmf(double m_bar, long long ell);

enum class Distribution { contact, nearest_neighbor, ppp_baseline };

std::string_view to_string(Distribution d);
Distribution parse_distribution(std::string_view name);

struct CdfCurve {
  std::vector<double> grid;
  MCPParams params;
  std::vector<Distribution> labels;
  /// values[i] is the series for labels[i], one entry per grid radius.
  std::vector<std::vector<double>> values;

  bool has(Distribution d) const;
  const std::vector<double>& series(Distribution d) const;
};

/// Evaluate the requested distributions on a strictly ascending, non-negative
/// grid. Grid points may be evaluated on `workers` threads; the result does
/// not depend on the worker count. Errors name the offending radius.
CdfCurve cdf_curve(const MCPParams& params, std::span<const double> grid,
                   std::span<const Distribution> which,
                   const AnalyticOptions& options = {}, std::size_t workers = 1);

/// n >= 2 radii from r_min to r_max, linear or logarithmic (log needs r_min > 0).
std::vector<double> radial_grid(double r_min, double r_max, std::size_t n,
                                bool log_spaced = false);

}  // namespace mcpdist
