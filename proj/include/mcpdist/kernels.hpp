#pragma once

// Radial offspring densities and ball masses for a uniform-disk cluster.
//
// For a cluster centred at distance x from the origin, an offspring point
// lies at distance z from the origin with density
//
//   chi1(z, x) = 2 z / r_d^2                                 0 <= z <= r_d - x  (x < r_d)
//   chi2(z, x) = 2 z / (pi r_d^2) * acos((z^2+x^2-r_d^2)/(2 z x))
//                                                 r_d - x <= z <= r_d + x      (x < r_d)
//   chi3(z, x) = same expression as chi2         x - r_d <= z <= x + r_d      (x > r_d)
//
// lens_mass() integrates these in closed form: it is the area of
// b(o, r) ∩ b(x, r_d) divided by pi r_d^2.

#include <stdexcept>

namespace mcpdist {

/// Distances (z, x) from the origin to an offspring point and to its
/// cluster centre.
struct RadialPair {
  double z;
  double x;

  RadialPair(double z_, double x_);
};

/// Raised by the kernels when an argument falls outside the branch's support.
class KernelDomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Density of z on the inner disk b(o, r_d - x), cluster covering the origin.
double chi1(double z, double x, double r_d);
/// Density of z on the annular part [r_d - x, r_d + x], cluster covering the
/// origin. x == 0 is rejected: the whole cluster is then covered by chi1.
double chi2(double z, double x, double r_d);
/// Density of z for a cluster not covering the origin (x > r_d).
double chi3(double z, double x, double r_d);

inline double chi1(RadialPair p, double r_d) { return chi1(p.z, p.x, r_d); }
inline double chi2(RadialPair p, double r_d) { return chi2(p.z, p.x, r_d); }
inline double chi3(RadialPair p, double r_d) { return chi3(p.z, p.x, r_d); }

/// Conditional radial density of one offspring point, dispatching on branch.
/// Zero outside the support [|x - r_d|, x + r_d] (or [0, r_d - x] ∪ ... ).
double offspring_distance_pdf(double z, double x, double r_d);

/// Probability that one offspring of a cluster centred at distance x falls
/// inside b(o, r). Always in [0, 1].
double lens_mass(double r, double x, double r_d);

/// Own-cluster mass for a typical point whose cluster centre is at distance
/// x0 <= r_d. Same value as lens_mass(r, x0, r_d).
double mu(double x0, double r, double r_d);

}  // namespace mcpdist
