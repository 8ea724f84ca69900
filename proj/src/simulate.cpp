#include "mcpdist/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "parallel.hpp"

namespace mcpdist {

namespace {

using std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Stream purposes keep the samplers' random numbers disjoint.
enum StreamPurpose : std::uint64_t {
  kContactStream = 1,
  kPalmStream = 2,
  kWindowStream = 3,
};

// Attempts per window realization before giving up.
constexpr std::size_t kMaxWindowAttempts = 100000;

void check_budget(const MCPParams& params, double window_radius, double cap) {
  const double reach = window_radius + params.r_d();
  const double expected = params.intensity() * pi * reach * reach;
  if (expected > cap) {
    std::ostringstream msg;
    msg << "expected " << expected << " points per realization exceeds the cap of "
        << cap;
    throw SamplerResourceError(msg.str());
  }
}

}  // namespace

std::size_t PointSet::point_count() const {
  std::size_t n = 0;
  for (const auto& c : clusters) n += c.size();
  return n;
}

void SimulationConfig::validate() const {
  if (n_samples < 1) throw std::invalid_argument("SimulationConfig: n_samples must be >= 1");
  if (!(std::isfinite(r_max) && r_max > 0.0)) {
    throw std::invalid_argument("SimulationConfig: r_max must be finite and > 0");
  }
  if (workers < 1) throw std::invalid_argument("SimulationConfig: workers must be >= 1");
  if (!(max_expected_points > 0.0)) {
    throw std::invalid_argument("SimulationConfig: max_expected_points must be > 0");
  }
  if (!(std::isfinite(reference_radius) && reference_radius >= 0.0)) {
    throw std::invalid_argument("SimulationConfig: reference_radius must be >= 0");
  }
}

double EmpiricalCdf::operator()(double r) const { return empirical_cdf_eval(*this, r); }

double EmpiricalCdf::censored_fraction() const {
  return n_total == 0 ? 0.0 : static_cast<double>(n_censored) / static_cast<double>(n_total);
}

EmpiricalCdf make_empirical_cdf(std::vector<double> distances, double r_max) {
  EmpiricalCdf ecdf;
  ecdf.r_max = r_max;
  ecdf.n_total = distances.size();
  auto censored = std::partition(distances.begin(), distances.end(),
                                 [&](double d) { return d <= r_max; });
  ecdf.n_censored = static_cast<std::size_t>(distances.end() - censored);
  distances.erase(censored, distances.end());
  std::sort(distances.begin(), distances.end());
  ecdf.sorted_samples = std::move(distances);
  return ecdf;
}

double empirical_cdf_eval(const EmpiricalCdf& ecdf, double r) {
  if (r > ecdf.r_max) {
    throw std::domain_error("empirical_cdf_eval: r lies in the censored region");
  }
  if (ecdf.n_total == 0 || r < 0.0) return 0.0;
  const auto hi = std::upper_bound(ecdf.sorted_samples.begin(), ecdf.sorted_samples.end(), r);
  return static_cast<double>(hi - ecdf.sorted_samples.begin()) /
         static_cast<double>(ecdf.n_total);
}

Point uniform_in_disk(RandomStream& rng, double radius) {
  const double rho = radius * std::sqrt(rng.uniform());
  const double theta = 2.0 * pi * rng.uniform();
  return {rho * std::cos(theta), rho * std::sin(theta)};
}

PointSet sample_mcp(const MCPParams& params, double window_radius, RandomStream& rng,
                    double max_expected_points) {
  if (!(std::isfinite(window_radius) && window_radius > 0.0)) {
    throw std::invalid_argument("sample_mcp: window_radius must be > 0");
  }
  check_budget(params, window_radius, max_expected_points);

  PointSet set;
  set.window_radius = window_radius;
  set.r_d = params.r_d();
  const double reach = window_radius + params.r_d();
  const auto n_parents = sample_poisson(rng, params.lambda_p() * pi * reach * reach);
  set.parents.reserve(n_parents);
  set.clusters.reserve(n_parents);
  for (std::uint64_t i = 0; i < n_parents; ++i) {
    const Point parent = uniform_in_disk(rng, reach);
    const auto n_children = sample_poisson(rng, params.m_bar());
    std::vector<Point> cluster;
    cluster.reserve(n_children);
    for (std::uint64_t j = 0; j < n_children; ++j) {
      const Point s = uniform_in_disk(rng, params.r_d());
      cluster.push_back({parent.x + s.x, parent.y + s.y});
    }
    set.parents.push_back(parent);
    set.clusters.push_back(std::move(cluster));
  }
  return set;
}

double nearest_distance(const PointSet& set, Point from, double r_max,
                        std::ptrdiff_t skip_cluster, std::ptrdiff_t skip_member) {
  double best = kInf;
  for (std::size_t c = 0; c < set.clusters.size(); ++c) {
    // A cluster lies within r_d of its parent; skip hopeless ones.
    if (distance(set.parents[c], from) - set.r_d > std::min(best, r_max)) continue;
    const auto& cluster = set.clusters[c];
    for (std::size_t m = 0; m < cluster.size(); ++m) {
      if (static_cast<std::ptrdiff_t>(c) == skip_cluster &&
          static_cast<std::ptrdiff_t>(m) == skip_member) {
        continue;
      }
      best = std::min(best, distance(cluster[m], from));
    }
  }
  return best <= r_max ? best : kInf;
}

EmpiricalCdf sample_contact_distance(const MCPParams& params,
                                     const SimulationConfig& config) {
  config.validate();
  check_budget(params, config.r_max, config.max_expected_points);
  std::vector<double> d(config.n_samples);
  detail::parallel_for(config.n_samples, config.workers, [&](std::size_t i) {
    RandomStream rng(config.seed, kContactStream, i);
    const PointSet set = sample_mcp(params, config.r_max, rng, config.max_expected_points);
    d[i] = nearest_distance(set, {0.0, 0.0}, config.r_max);
  });
  return make_empirical_cdf(std::move(d), config.r_max);
}

PalmRun sample_nn_distance_palm_detailed(const MCPParams& params,
                                         const SimulationConfig& config,
                                         const PalmOptions& options) {
  config.validate();
  check_budget(params, config.r_max, config.max_expected_points);
  std::vector<double> d(config.n_samples);
  std::vector<std::uint32_t> sizes(config.n_samples);
  detail::parallel_for(config.n_samples, config.workers, [&](std::size_t i) {
    RandomStream rng(config.seed, kPalmStream, i);
    const double r_d = params.r_d();
    // Own cluster centre relative to the typical point at the origin.
    const Point centre = uniform_in_disk(rng, r_d);
    const auto others = sample_poisson(rng, params.m_bar());
    double best = kInf;
    for (std::uint64_t j = 0; j < others; ++j) {
      const Point s = uniform_in_disk(rng, r_d);
      best = std::min(best, norm({centre.x + s.x, centre.y + s.y}));
    }
    if (options.include_background) {
      const PointSet set = sample_mcp(params, config.r_max, rng, config.max_expected_points);
      best = std::min(best, nearest_distance(set, {0.0, 0.0}, config.r_max));
    }
    d[i] = best <= config.r_max ? best : kInf;
    sizes[i] = static_cast<std::uint32_t>(others + 1);
  });
  return {make_empirical_cdf(std::move(d), config.r_max), std::move(sizes)};
}

EmpiricalCdf sample_nn_distance_palm(const MCPParams& params,
                                     const SimulationConfig& config) {
  return sample_nn_distance_palm_detailed(params, config).distances;
}

WindowRun sample_nn_distance_window_detailed(const MCPParams& params,
                                             const SimulationConfig& config) {
  config.validate();
  const double reference = config.reference_radius > 0.0
                               ? config.reference_radius
                               : std::max(2.0 * config.r_max, 10.0 * params.r_d());
  const double window = reference + config.r_max;
  check_budget(params, window, config.max_expected_points);

  // Acceptance cap: mean + 6 sd of the reference-disk count, using the bound
  // Var N <= lambda_p m (|B| + m |B ⊕ r_d|).
  const double area = pi * reference * reference;
  const double dilated = pi * (reference + params.r_d()) * (reference + params.r_d());
  const double mean = params.intensity() * area;
  const double var = params.intensity() * (area + params.m_bar() * dilated);
  const double cap = std::max(1.0, mean + 6.0 * std::sqrt(var));

  struct Outcome {
    double distance;
    std::uint32_t cluster_size;
    std::size_t attempts;
    std::size_t empty;
    bool over_cap;
  };
  std::vector<Outcome> out(config.n_samples);

  detail::parallel_for(config.n_samples, config.workers, [&](std::size_t i) {
    RandomStream rng(config.seed, kWindowStream, i);
    Outcome o{kInf, 0, 0, 0, false};
    std::vector<std::pair<std::size_t, std::size_t>> inside;
    for (;;) {
      if (++o.attempts > kMaxWindowAttempts) {
        throw SamplerResourceError(
            "sample_nn_distance_window: no realization accepted after " +
            std::to_string(kMaxWindowAttempts) + " attempts");
      }
      const PointSet set = sample_mcp(params, window, rng, config.max_expected_points);
      inside.clear();
      for (std::size_t c = 0; c < set.clusters.size(); ++c) {
        for (std::size_t m = 0; m < set.clusters[c].size(); ++m) {
          if (norm(set.clusters[c][m]) <= reference) inside.emplace_back(c, m);
        }
      }
      const auto n = static_cast<double>(inside.size());
      if (inside.empty()) {
        ++o.empty;
        continue;
      }
      if (n > cap) {
        o.over_cap = true;
      } else if (rng.uniform() * cap >= n) {
        continue;
      }
      const auto pick = std::min(inside.size() - 1,
                                 static_cast<std::size_t>(rng.uniform() * n));
      const auto [c, m] = inside[pick];
      o.distance = nearest_distance(set, set.clusters[c][m], config.r_max,
                                    static_cast<std::ptrdiff_t>(c),
                                    static_cast<std::ptrdiff_t>(m));
      o.cluster_size = static_cast<std::uint32_t>(set.clusters[c].size());
      break;
    }
    out[i] = o;
  });

  WindowRun run;
  std::vector<double> d;
  d.reserve(out.size());
  run.chosen_cluster_sizes.reserve(out.size());
  for (const Outcome& o : out) {
    d.push_back(o.distance);
    run.chosen_cluster_sizes.push_back(o.cluster_size);
    run.attempts += o.attempts;
    run.empty_redraws += o.empty;
    run.cap_exceeded += o.over_cap ? 1 : 0;
  }
  run.distances = make_empirical_cdf(std::move(d), config.r_max);
  if (2 * run.empty_redraws > run.attempts) {
    std::ostringstream msg;
    msg << "window sampler: " << run.empty_redraws << " of " << run.attempts
        << " realizations had an empty reference disk; consider a larger reference radius";
    run.warnings.push_back(msg.str());
  }
  if (run.cap_exceeded > 0) {
    std::ostringstream msg;
    msg << "window sampler: " << run.cap_exceeded
        << " realizations exceeded the count cap and were accepted unweighted";
    run.warnings.push_back(msg.str());
  }
  return run;
}

EmpiricalCdf sample_nn_distance_window(const MCPParams& params,
                                       const SimulationConfig& config) {
  return sample_nn_distance_window_detailed(params, config).distances;
}

void write_samples(std::ostream& out, const EmpiricalCdf& ecdf) {
  char buf[32];
  for (double s : ecdf.sorted_samples) {
    std::snprintf(buf, sizeof buf, "%.17g\n", s);
    out << buf;
  }
  for (std::size_t i = 0; i < ecdf.n_censored; ++i) out << "inf\n";
}

}  // namespace mcpdist
