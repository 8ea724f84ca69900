#pragma once

// Test-only oracles. These integrate the radial densities numerically with
// Boost's tanh-sinh rule and never call lens_mass or the library quadrature.

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/tanh_sinh.hpp>

namespace mcpdist::oracle {

inline double chi_disk(double z, double r_d) { return 2.0 * z / (r_d * r_d); }

inline double chi_lens(double z, double x, double r_d) {
  const double c = std::clamp((z * z + x * x - r_d * r_d) / (2.0 * z * x), -1.0, 1.0);
  return 2.0 * z / (std::numbers::pi * r_d * r_d) * std::acos(c);
}

// One rule per nesting level; the rule grows its tables lazily.
inline boost::math::quadrature::tanh_sinh<double> rules[4];
inline int depth = 0;

template <typename F>
double integrate(F f, double a, double b, double tol = 1e-14) {
  if (!(b > a)) return 0.0;
  struct Guard {
    Guard() { ++depth; }
    ~Guard() { --depth; }
  } guard;
  return rules[depth - 1].integrate(f, a, b, tol);
}

/// ∫ over [0, r] of the offspring distance density for a cluster at
/// distance x, summed branch by branch as min(·,·) limits dictate.
inline double ball_mass(double r, double x, double r_d) {
  if (x < r_d) {
    const double a = std::min(r, r_d - x);
    const double b = std::min(r, r_d + x);
    double m = integrate([&](double z) { return chi_disk(z, r_d); }, 0.0, a);
    if (x > 0.0) m += integrate([&](double z) { return chi_lens(z, x, r_d); }, a, b);
    return m;
  }
  const double a = std::min(r, x - r_d);
  const double b = std::min(r, x + r_d);
  return integrate([&](double z) { return chi_lens(z, x, r_d); }, a, b);
}

/// Own-cluster void factor ∫ exp(-m mu(x0, r)) 2 x0 / r_d^2 dx0 with mu from
/// ball_mass.
inline double palm_factor(double m_bar, double r_d, double r) {
  auto f = [&](double x0) {
    return std::exp(-m_bar * ball_mass(r, x0, r_d)) * 2.0 * x0 / (r_d * r_d);
  };
  const double k = std::abs(r_d - r);
  if (k > 0.0 && k < r_d) return integrate(f, 0.0, k, 1e-12) + integrate(f, k, r_d, 1e-12);
  return integrate(f, 0.0, r_d, 1e-12);
}

/// Contact survival exp(-2 pi lambda ∫ (1 - exp(-m mass)) x dx).
inline double contact_survival(double lambda_p, double m_bar, double r_d, double r) {
  auto f = [&](double x) { return -std::expm1(-m_bar * ball_mass(r, x, r_d)) * x; };
  double pts[4] = {0.0, std::abs(r - r_d), r_d, r + r_d};
  std::sort(pts, pts + 4);
  double sum = 0.0;
  for (int i = 0; i < 3; ++i) sum += integrate(f, pts[i], pts[i + 1], 1e-12);
  return std::exp(-2.0 * std::numbers::pi * lambda_p * sum);
}

}  // namespace mcpdist::oracle
