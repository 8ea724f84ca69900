#include "mcpdist/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace mcpdist {

namespace {

using std::numbers::pi;

// Support checks tolerate roundoff of a few ulps relative to the geometry.
double slack(double r_d, double x) { return 1e-12 * std::max(r_d, x); }

void require(bool ok, const char* what) {
  if (!ok) throw KernelDomainError(what);
}

void require_radius(double r_d) {
  if (!(std::isfinite(r_d) && r_d > 0.0)) {
    throw std::invalid_argument("r_d must be finite and > 0");
  }
}

double clamp_unit(double v) { return std::clamp(v, -1.0, 1.0); }

double lens_density(double z, double x, double r_d) {
  if (z <= 0.0) return 0.0;
  const double c = clamp_unit((z * z + x * x - r_d * r_d) / (2.0 * z * x));
  return 2.0 * z / (pi * r_d * r_d) * std::acos(c);
}

}  // namespace

RadialPair::RadialPair(double z_, double x_) : z(z_), x(x_) {
  if (!(std::isfinite(z) && std::isfinite(x) && z >= 0.0 && x >= 0.0)) {
    throw std::invalid_argument("RadialPair: z and x must be finite and >= 0");
  }
}

double chi1(double z, double x, double r_d) {
  require_radius(r_d);
  const double eps = slack(r_d, x);
  require(x >= 0.0 && x < r_d, "chi1: requires 0 <= x < r_d");
  require(z >= 0.0 && z <= r_d - x + eps, "chi1: requires 0 <= z <= r_d - x");
  return 2.0 * z / (r_d * r_d);
}

double chi2(double z, double x, double r_d) {
  require_radius(r_d);
  if (x == 0.0) {
    throw KernelDomainError(
        "chi2: x = 0 collapses the annular support; use chi1");
  }
  const double eps = slack(r_d, x);
  require(x > 0.0 && x < r_d, "chi2: requires 0 < x < r_d");
  require(z > 0.0 && z >= r_d - x - eps && z <= r_d + x + eps,
          "chi2: requires r_d - x <= z <= r_d + x");
  return lens_density(z, x, r_d);
}

double chi3(double z, double x, double r_d) {
  require_radius(r_d);
  const double eps = slack(r_d, x);
  require(x > r_d, "chi3: requires x > r_d");
  require(z >= x - r_d - eps && z <= x + r_d + eps,
          "chi3: requires x - r_d <= z <= x + r_d");
  return lens_density(z, x, r_d);
}

double offspring_distance_pdf(double z, double x, double r_d) {
  require_radius(r_d);
  if (z < 0.0 || z > x + r_d) return 0.0;
  if (x < r_d) {
    if (z <= r_d - x) return 2.0 * z / (r_d * r_d);
    return lens_density(z, x, r_d);
  }
  if (z < x - r_d) return 0.0;
  return lens_density(z, x, r_d);
}

double lens_mass(double r, double x, double r_d) {
  require_radius(r_d);
  if (!(std::isfinite(r) && std::isfinite(x) && r >= 0.0 && x >= 0.0)) {
    throw std::invalid_argument("lens_mass: r and x must be finite and >= 0");
  }
  if (r == 0.0 || r + r_d <= x) return 0.0;  // disjoint disks
  if (r >= x + r_d) return 1.0;               // cluster inside query ball
  if (x + r <= r_d) return (r * r) / (r_d * r_d);  // query ball inside cluster

  // Proper lens: x > 0 and |r - r_d| < x < r + r_d.
  const double a1 = std::acos(clamp_unit((x * x + r * r - r_d * r_d) / (2.0 * x * r)));
  const double a2 = std::acos(clamp_unit((x * x + r_d * r_d - r * r) / (2.0 * x * r_d)));
  const double k = (-x + r + r_d) * (x + r - r_d) * (x - r + r_d) * (x + r + r_d);
  const double area = r * r * a1 + r_d * r_d * a2 - 0.5 * std::sqrt(std::max(k, 0.0));
  return std::clamp(area / (pi * r_d * r_d), 0.0, 1.0);
}

double mu(double x0, double r, double r_d) {
  require_radius(r_d);
  if (!(x0 >= 0.0 && x0 <= r_d)) {
    throw KernelDomainError("mu: own-cluster centre must satisfy 0 <= x0 <= r_d");
  }
  return lens_mass(r, x0, r_d);
}

}  // namespace mcpdist
