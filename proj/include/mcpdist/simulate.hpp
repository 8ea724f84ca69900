#pragma once

// Monte Carlo oracle for the distance distributions.
//
// Each realization i of a run draws from RandomStream(seed, purpose, i), so a
// run is a pure function of (params, config) whatever the worker count.
// Distances beyond the censoring radius r_max are recorded only as censored.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "mcpdist/params.hpp"
#include "mcpdist/rng.hpp"

namespace mcpdist {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline double norm(Point p) { return std::hypot(p.x, p.y); }
inline double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// One realization restricted to the generation disk: parent i owns
/// clusters[i]. Parents lie within window_radius + r_d of the origin, which
/// makes the process exact inside b(o, window_radius).
struct PointSet {
  std::vector<Point> parents;
  std::vector<std::vector<Point>> clusters;
  double window_radius = 0.0;
  double r_d = 0.0;

  std::size_t point_count() const;
};

/// Raised when a realization would exceed the configured point budget.
class SamplerResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SimulationConfig {
  std::size_t n_samples = 10000;
  /// Censoring radius.
  double r_max = 1.0;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  /// Cap on the expected number of points per realization.
  double max_expected_points = 1e8;
  /// Reference region radius for the window nearest-neighbour sampler;
  /// 0 selects max(2 r_max, 10 r_d).
  double reference_radius = 0.0;

  void validate() const;
};

/// Sorted distance samples with right-censoring at r_max.
struct EmpiricalCdf {
  std::vector<double> sorted_samples;
  std::size_t n_total = 0;
  std::size_t n_censored = 0;
  double r_max = 0.0;

  /// Fraction of all realizations (censored ones included) with distance <= r.
  double operator()(double r) const;
  double censored_fraction() const;
};

/// Builds an EmpiricalCdf; entries above r_max (including +inf) are censored.
EmpiricalCdf make_empirical_cdf(std::vector<double> distances, double r_max);

/// (#samples <= r) / n_total. Throws std::domain_error for r > r_max.
double empirical_cdf_eval(const EmpiricalCdf& ecdf, double r);

/// Uniform point on the disk of given radius (radius sqrt(U), angle 2 pi V).
Point uniform_in_disk(RandomStream& rng, double radius);

/// Draws one realization whose statistics inside b(o, window_radius) are
/// free of edge effects.
PointSet sample_mcp(const MCPParams& params, double window_radius, RandomStream& rng,
                    double max_expected_points = 1e8);

/// Distance from `from` to the closest point of the set, skipping the point
/// at (skip_cluster, skip_member) when given. +inf when nothing lies within r_max.
double nearest_distance(const PointSet& set, Point from, double r_max,
                        std::ptrdiff_t skip_cluster = -1,
                        std::ptrdiff_t skip_member = -1);

/// Contact distance from the origin, one independent realization per sample.
EmpiricalCdf sample_contact_distance(const MCPParams& params,
                                     const SimulationConfig& config);

struct PalmOptions {
  /// When false, only the typical point's own cluster is simulated, which
  /// isolates the own-cluster void factor.
  bool include_background = true;
};

struct PalmRun {
  EmpiricalCdf distances;
  /// Size of the typical point's own cluster (itself included), per sample.
  std::vector<std::uint32_t> own_cluster_sizes;
};

/// Nearest-neighbour distance via the Palm decomposition: the origin is a
/// process point whose cluster centre sits at distance x0 ~ 2 x0 / r_d^2; the
/// rest of its cluster is Poisson(m_bar) uniform points, and the remainder of
/// the process is an independent realization.
PalmRun sample_nn_distance_palm_detailed(const MCPParams& params,
                                         const SimulationConfig& config,
                                         const PalmOptions& options = {});
EmpiricalCdf sample_nn_distance_palm(const MCPParams& params,
                                     const SimulationConfig& config);

struct WindowRun {
  EmpiricalCdf distances;
  /// Size of the cluster the chosen reference point belongs to, per sample.
  std::vector<std::uint32_t> chosen_cluster_sizes;
  std::size_t attempts = 0;
  std::size_t empty_redraws = 0;
  /// Realizations whose reference-region count exceeded the weighting cap
  /// (accepted unweighted).
  std::size_t cap_exceeded = 0;
  std::vector<std::string> warnings;
};

/// Nearest-neighbour distance from a process point chosen uniformly inside
/// the reference disk of a generated realization. Each realization is kept
/// with probability N / N_cap (N = points in the reference disk), which turns
/// "uniform point of a uniform realization" into the Palm law.
WindowRun sample_nn_distance_window_detailed(const MCPParams& params,
                                             const SimulationConfig& config);
EmpiricalCdf sample_nn_distance_window(const MCPParams& params,
                                       const SimulationConfig& config);

/// One distance per line, "inf" for censored entries.
void write_samples(std::ostream& out, const EmpiricalCdf& ecdf);

}  // namespace mcpdist
