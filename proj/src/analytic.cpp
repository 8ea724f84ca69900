#include "mcpdist/analytic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "mcpdist/kernels.hpp"
#include "parallel.hpp"

namespace mcpdist {

namespace {

using std::numbers::pi;

void require_radius(double r) {
  if (!(std::isfinite(r) && r >= 0.0)) {
    throw std::invalid_argument("radius must be finite and >= 0");
  }
}

// Sorted unique breakpoints in [lo, hi], always containing both ends.
std::vector<double> breakpoints(double lo, double hi,
                                std::initializer_list<double> inner) {
  std::vector<double> pts{lo, hi};
  for (double p : inner) {
    if (p > lo && p < hi) pts.push_back(p);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

QuadratureResult integrate_or_throw(const Integrand& f,
                                    std::span<const double> pts,
                                    const QuadratureOptions& q, double r,
                                    const char* what) {
  try {
    return integrate_adaptive(f, pts, q);
  } catch (const QuadratureError& e) {
    std::ostringstream msg;
    msg << what << " did not converge at r = " << r << ": " << e.what();
    throw NumericalError(msg.str(), r, e.best());
  }
}

}  // namespace

PalmGeometry::PalmGeometry(double x0, double r_d) : x0_(x0), r_d_(r_d) {
  if (!(r_d > 0.0 && x0 >= 0.0 && x0 <= r_d)) {
    throw std::invalid_argument("PalmGeometry: requires 0 <= x0 <= r_d");
  }
}

double PalmGeometry::density() const { return 2.0 * x0_ / (r_d_ * r_d_); }

QuadratureResult contact_exponent_integral(const MCPParams& params, double r,
                                           const AnalyticOptions& options) {
  require_radius(r);
  if (r == 0.0) return {};
  const double r_d = params.r_d();
  const double m_bar = params.m_bar();
  const Integrand f = [&](double x) {
    return -std::expm1(-m_bar * lens_mass(r, x, r_d)) * x;
  };
  // [0, r_d] holds clusters covering the origin, [r_d, r + r_d] the rest.
  const auto pts = breakpoints(0.0, r + r_d, {r_d, std::abs(r - r_d)});
  const double scale = 0.5 * (r + r_d) * (r + r_d);
  const QuadratureOptions q{options.rel_tol,
                            std::numeric_limits<double>::epsilon() * 1e-2 * scale,
                            options.max_intervals};
  return integrate_or_throw(f, pts, q, r, "contact CDF integral");
}

double contact_survival(const MCPParams& params, double r,
                        const AnalyticOptions& options) {
  const double integral = contact_exponent_integral(params, r, options).value;
  return std::exp(-2.0 * pi * params.lambda_p() * integral);
}

double contact_cdf(const MCPParams& params, double r,
                   const AnalyticOptions& options) {
  const double integral = contact_exponent_integral(params, r, options).value;
  return std::clamp(-std::expm1(-2.0 * pi * params.lambda_p() * integral), 0.0, 1.0);
}

double palm_own_cluster_void(const MCPParams& params, double r,
                             const AnalyticOptions& options) {
  require_radius(r);
  if (r == 0.0) return 1.0;
  const double r_d = params.r_d();
  const double m_bar = params.m_bar();
  if (r >= 2.0 * r_d) return std::exp(-m_bar);  // mu == 1 for every x0 <= r_d
  const Integrand f = [&](double x0) {
    return std::exp(-m_bar * mu(x0, r, r_d)) * 2.0 * x0 / (r_d * r_d);
  };
  const auto pts = breakpoints(0.0, r_d, {std::abs(r_d - r)});
  const QuadratureOptions q{options.rel_tol, std::numeric_limits<double>::min(),
                            options.max_intervals};
  return std::clamp(integrate_or_throw(f, pts, q, r, "palm integral").value, 0.0, 1.0);
}

double nn_survival(const MCPParams& params, double r,
                   const AnalyticOptions& options) {
  return contact_survival(params, r, options) *
         palm_own_cluster_void(params, r, options);
}

double nn_cdf(const MCPParams& params, double r, const AnalyticOptions& options) {
  return std::clamp(1.0 - nn_survival(params, r, options), 0.0, 1.0);
}

double ppp_contact_cdf(double density, double r) {
  if (!(std::isfinite(density) && density > 0.0)) {
    throw std::invalid_argument("ppp_contact_cdf: density must be > 0");
  }
  require_radius(r);
  return -std::expm1(-density * pi * r * r);
}

double cluster_size_pmf(double m_bar, long long ell) {
  if (!(std::isfinite(m_bar) && m_bar > 0.0)) {
    throw std::invalid_argument("cluster_size_pmf: m_bar must be > 0");
  }
  if (ell < 0) throw std::invalid_argument("cluster_size_pmf: ell must be >= 0");
  if (ell == 0) return 0.0;
  // (ell / m) m^ell e^-m / ell! = m^(ell-1) e^-m / (ell-1)!
  const double l = static_cast<double>(ell);
  return std::exp((l - 1.0) * std::log(m_bar) - m_bar - std::lgamma(l));
}

std::string_view to_string(Distribution d) {
  switch (d) {
    case Distribution::contact:
      return "contact";
    case Distribution::nearest_neighbor:
      return "nearest_neighbor";
    case Distribution::ppp_baseline:
      return "ppp";
  }
  return "unknown";
}

Distribution parse_distribution(std::string_view name) {
  if (name == "contact") return Distribution::contact;
  if (name == "nearest_neighbor" || name == "nn") return Distribution::nearest_neighbor;
  if (name == "ppp" || name == "ppp_baseline") return Distribution::ppp_baseline;
  throw std::invalid_argument("unknown distribution: " + std::string(name));
}

bool CdfCurve::has(Distribution d) const {
  return std::find(labels.begin(), labels.end(), d) != labels.end();
}

const std::vector<double>& CdfCurve::series(Distribution d) const {
  const auto it = std::find(labels.begin(), labels.end(), d);
  if (it == labels.end()) {
    throw std::out_of_range("CdfCurve has no series " + std::string(to_string(d)));
  }
  return values[static_cast<std::size_t>(it - labels.begin())];
}

CdfCurve cdf_curve(const MCPParams& params, std::span<const double> grid,
                   std::span<const Distribution> which,
                   const AnalyticOptions& options, std::size_t workers) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(std::isfinite(grid[i]) && grid[i] >= 0.0)) {
      throw std::invalid_argument("cdf_curve: grid radii must be finite and >= 0");
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw std::invalid_argument("cdf_curve: grid must be strictly ascending");
    }
  }
  CdfCurve curve{std::vector<double>(grid.begin(), grid.end()), params, {}, {}};
  for (Distribution d : which) {
    if (!curve.has(d)) curve.labels.push_back(d);
  }
  curve.values.assign(curve.labels.size(), std::vector<double>(grid.size(), 0.0));

  const bool want_contact = curve.has(Distribution::contact);
  const bool want_nn = curve.has(Distribution::nearest_neighbor);
  const bool want_ppp = curve.has(Distribution::ppp_baseline);
  auto slot = [&](Distribution d) -> std::vector<double>& {
    return curve.values[static_cast<std::size_t>(
        std::find(curve.labels.begin(), curve.labels.end(), d) - curve.labels.begin())];
  };
  std::vector<double>* contact = want_contact ? &slot(Distribution::contact) : nullptr;
  std::vector<double>* nn = want_nn ? &slot(Distribution::nearest_neighbor) : nullptr;
  std::vector<double>* ppp = want_ppp ? &slot(Distribution::ppp_baseline) : nullptr;

  detail::parallel_for(grid.size(), workers, [&](std::size_t i) {
    const double r = grid[i];
    try {
      if (want_contact || want_nn) {
        // One contact integral serves both series.
        const double exponent =
            -2.0 * pi * params.lambda_p() *
            contact_exponent_integral(params, r, options).value;
        if (contact) (*contact)[i] = std::clamp(-std::expm1(exponent), 0.0, 1.0);
        if (nn) {
          const double s = std::exp(exponent) * palm_own_cluster_void(params, r, options);
          (*nn)[i] = std::clamp(1.0 - s, 0.0, 1.0);
        }
      }
      if (ppp) (*ppp)[i] = ppp_contact_cdf(params.intensity(), r);
    } catch (const NumericalError&) {
      throw;
    } catch (const std::exception& e) {
      std::ostringstream msg;
      msg << "cdf_curve: failed at r = " << r << ": " << e.what();
      throw NumericalError(msg.str(), r, {});
    }
  });
  return curve;
}

std::vector<double> radial_grid(double r_min, double r_max, std::size_t n,
                                bool log_spaced) {
  if (n < 2) throw std::invalid_argument("radial_grid: need at least 2 points");
  if (!(std::isfinite(r_min) && std::isfinite(r_max) && r_min >= 0.0 && r_max > r_min)) {
    throw std::invalid_argument("radial_grid: requires 0 <= r_min < r_max");
  }
  if (log_spaced && r_min <= 0.0) {
    throw std::invalid_argument("radial_grid: log spacing needs r_min > 0");
  }
  std::vector<double> grid(n);
  const double steps = static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / steps;
    grid[i] = log_spaced ? r_min * std::pow(r_max / r_min, t)
                         : r_min + (r_max - r_min) * t;
  }
  grid.front() = r_min;
  grid.back() = r_max;
  return grid;
}

}  // namespace mcpdist
