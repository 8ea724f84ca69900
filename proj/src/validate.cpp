#include "mcpdist/validate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/special_functions/gamma.hpp>
#include "json.hpp"

namespace mcpdist {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> default_grid(const MCPParams& params) {
  return radial_grid(0.0, 4.0 * params.r_d(), 200);
}

void require_ascending(std::span<const double> grid, const char* who) {
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw std::invalid_argument(std::string(who) + ": grid must be strictly ascending");
    }
  }
}

}  // namespace

std::string tool_version() {
#ifdef MCPDIST_VERSION
  return MCPDIST_VERSION;
#else
  return "unknown";
#endif
}

double ks_statistic(const EmpiricalCdf& ecdf, const RadialCdf& analytic_f) {
  if (ecdf.n_total == 0) return 0.0;
  const double n = static_cast<double>(ecdf.n_total);
  double sup = 0.0;
  const auto& s = ecdf.sorted_samples;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double f = analytic_f(s[i]);
    const double before = static_cast<double>(i) / n;
    const double after = static_cast<double>(i + 1) / n;
    sup = std::max({sup, std::abs(f - before), std::abs(after - f)});
  }
  const double at_censor = static_cast<double>(s.size()) / n;
  sup = std::max(sup, std::abs(analytic_f(ecdf.r_max) - at_censor));
  return sup;
}

double ks_two_sample_statistic(const EmpiricalCdf& a, const EmpiricalCdf& b) {
  if (a.n_total == 0 || b.n_total == 0) {
    throw std::invalid_argument("ks_two_sample_statistic: empty sample");
  }
  const double na = static_cast<double>(a.n_total);
  const double nb = static_cast<double>(b.n_total);
  const auto& sa = a.sorted_samples;
  const auto& sb = b.sorted_samples;
  std::size_t i = 0;
  std::size_t j = 0;
  double sup = 0.0;
  while (i < sa.size() || j < sb.size()) {
    const double x = (j >= sb.size() || (i < sa.size() && sa[i] <= sb[j])) ? sa[i] : sb[j];
    while (i < sa.size() && sa[i] <= x) ++i;
    while (j < sb.size() && sb[j] <= x) ++j;
    sup = std::max(sup, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return sup;
}

double kolmogorov_pvalue(double d, double n_effective) {
  if (!(n_effective > 0.0)) throw std::invalid_argument("kolmogorov_pvalue: n must be > 0");
  const double sn = std::sqrt(n_effective);
  const double lambda = (sn + 0.12 + 0.11 / sn) * d;
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += sign * term;
    if (term < 1e-16) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

double ks_critical_value(double n_effective, double alpha) {
  if (!(n_effective > 0.0 && alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("ks_critical_value: requires n > 0, 0 < alpha < 1");
  }
  return std::sqrt(-0.5 * std::log(alpha / 2.0)) / std::sqrt(n_effective);
}

ChiSquareResult chi_square_gof(std::span<const std::uint32_t> observations,
                               const std::function<double(long long)>& pmf,
                               long long first, double min_expected) {
  if (observations.empty()) throw std::invalid_argument("chi_square_gof: no observations");
  const double n = static_cast<double>(observations.size());
  std::map<long long, double> counts;
  for (auto v : observations) counts[static_cast<long long>(v)] += 1.0;
  if (counts.begin()->first < first) {
    throw std::invalid_argument("chi_square_gof: observation below the support");
  }

  // Pool categories left to right; once the remaining tail expects fewer
  // than min_expected counts it joins the bin being filled.
  struct Bin {
    double observed = 0.0;
    double expected = 0.0;
  };
  std::vector<Bin> bins;
  Bin current;
  double cumulative = 0.0;
  for (long long k = first;; ++k) {
    const double p = pmf(k);
    cumulative += p;
    current.expected += n * p;
    if (auto it = counts.find(k); it != counts.end()) current.observed += it->second;
    const double tail = n * std::max(0.0, 1.0 - cumulative);
    if (tail < min_expected) {
      current.expected += tail;
      for (auto it = counts.upper_bound(k); it != counts.end(); ++it) {
        current.observed += it->second;
      }
      if (current.expected < min_expected && !bins.empty()) {
        bins.back().observed += current.observed;
        bins.back().expected += current.expected;
      } else {
        bins.push_back(current);
      }
      break;
    }
    if (current.expected >= min_expected) {
      bins.push_back(current);
      current = {};
    }
  }

  ChiSquareResult result;
  result.bins = bins.size();
  for (const Bin& b : bins) {
    if (b.expected > 0.0) {
      result.statistic += (b.observed - b.expected) * (b.observed - b.expected) / b.expected;
    }
  }
  result.dof = bins.size() > 1 ? bins.size() - 1 : 0;
  result.p_value = result.dof == 0
                       ? 1.0
                       : boost::math::gamma_q(0.5 * static_cast<double>(result.dof),
                                              0.5 * result.statistic);
  return result;
}

DominanceReport check_dominance(const MCPParams& params, std::span<const double> grid,
                                double tol, const AnalyticOptions& options,
                                const BaselineCdf& baseline) {
  require_ascending(grid, "check_dominance");
  const Distribution which[] = {Distribution::contact, Distribution::nearest_neighbor};
  const CdfCurve curve = cdf_curve(params, grid, which, options);
  const auto& contact = curve.series(Distribution::contact);
  const auto& nn = curve.series(Distribution::nearest_neighbor);

  DominanceReport rep;
  rep.tol = tol;
  rep.points = grid.size();
  rep.first_nn_violation_r = kNaN;
  rep.first_ppp_violation_r = kNaN;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = grid[i];
    const double nn_gap = contact[i] - nn[i];
    const double ppp_gap = contact[i] - baseline(params.intensity(), r);
    if (i == 0 || nn_gap > rep.worst_nn_gap) {
      rep.worst_nn_gap = nn_gap;
      rep.worst_nn_r = r;
    }
    if (i == 0 || ppp_gap > rep.worst_ppp_gap) {
      rep.worst_ppp_gap = ppp_gap;
      rep.worst_ppp_r = r;
    }
    if (nn_gap > tol && rep.nn_violations++ == 0) rep.first_nn_violation_r = r;
    if (ppp_gap > tol && rep.ppp_violations++ == 0) rep.first_ppp_violation_r = r;
  }
  return rep;
}

ConvergenceReport check_ppp_convergence(double lambda_p, double m_bar,
                                        std::span<const double> r_d_list,
                                        std::span<const double> grid, double threshold,
                                        const AnalyticOptions& options) {
  require_ascending(r_d_list, "check_ppp_convergence (r_d list)");
  require_ascending(grid, "check_ppp_convergence");
  ConvergenceReport rep;
  rep.threshold = threshold;
  const Distribution which[] = {Distribution::contact, Distribution::nearest_neighbor,
                                Distribution::ppp_baseline};
  for (double r_d : r_d_list) {
    const CdfCurve curve = cdf_curve(MCPParams(lambda_p, m_bar, r_d), grid, which, options);
    const auto& c = curve.series(Distribution::contact);
    const auto& nn = curve.series(Distribution::nearest_neighbor);
    const auto& ppp = curve.series(Distribution::ppp_baseline);
    ConvergenceEntry e{r_d, 0.0, 0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (const double g = std::abs(c[i] - ppp[i]); g > e.contact_gap) {
        e.contact_gap = g;
        e.contact_gap_r = grid[i];
      }
      if (const double g = std::abs(nn[i] - ppp[i]); g > e.nn_gap) {
        e.nn_gap = g;
        e.nn_gap_r = grid[i];
      }
    }
    rep.entries.push_back(e);
  }
  for (std::size_t i = 1; i < rep.entries.size(); ++i) {
    if (!(rep.entries[i].contact_gap < rep.entries[i - 1].contact_gap)) {
      rep.contact_decreasing = false;
    }
    if (rep.entries[i].nn_gap > rep.entries[i - 1].nn_gap) rep.nn_monotone = false;
  }
  if (!rep.entries.empty()) {
    rep.final_below_threshold = rep.entries.back().contact_gap <= threshold;
    if (!rep.nn_monotone) {
      rep.warnings.push_back(
          "nearest-neighbour gap to the PPP CDF is not monotone in r_d");
    }
    if (rep.entries.size() > 1 &&
        rep.entries.back().nn_gap >= rep.entries.front().nn_gap) {
      rep.warnings.push_back(
          "nearest-neighbour gap to the PPP CDF did not shrink over the r_d range");
    }
  }
  return rep;
}

OrderingReport check_figure2_ordering(double lambda_p, double m_bar, double r_d_small,
                                      double r_d_large, std::span<const double> grid,
                                      double tol, const AnalyticOptions& options) {
  if (r_d_small > r_d_large) {
    throw std::invalid_argument("check_figure2_ordering: requires r_d_small <= r_d_large");
  }
  require_ascending(grid, "check_figure2_ordering");
  const Distribution which[] = {Distribution::contact, Distribution::nearest_neighbor};
  const CdfCurve small = cdf_curve(MCPParams(lambda_p, m_bar, r_d_small), grid, which, options);
  const CdfCurve large = cdf_curve(MCPParams(lambda_p, m_bar, r_d_large), grid, which, options);
  const auto& cs = small.series(Distribution::contact);
  const auto& cl = large.series(Distribution::contact);
  const auto& ns = small.series(Distribution::nearest_neighbor);
  const auto& nl = large.series(Distribution::nearest_neighbor);

  OrderingReport rep;
  rep.r_d_small = r_d_small;
  rep.r_d_large = r_d_large;
  rep.tol = tol;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    // Contact CDF grows with r_d; nearest-neighbour CDF shrinks.
    const double contact_gap = cs[i] - cl[i];
    const double nn_gap = nl[i] - ns[i];
    if (i == 0 || contact_gap > rep.worst_contact_gap) {
      rep.worst_contact_gap = contact_gap;
      rep.worst_contact_r = grid[i];
    }
    if (i == 0 || nn_gap > rep.worst_nn_gap) {
      rep.worst_nn_gap = nn_gap;
      rep.worst_nn_r = grid[i];
    }
    if (contact_gap > tol) ++rep.contact_violations;
    if (nn_gap > tol) ++rep.nn_violations;
  }
  return rep;
}

bool ValidationReport::pass() const { return failures().empty(); }

std::vector<std::string> ValidationReport::failures() const {
  std::vector<std::string> f;
  if (!ks_contact.pass) f.emplace_back("ks_contact");
  if (!ks_nn.pass) f.emplace_back("ks_nn");
  if (!nn_samplers.pass) f.emplace_back("nn_samplers");
  if (dominance.nn_violations > 0) f.emplace_back("dominance_nn");
  if (dominance.ppp_violations > 0) f.emplace_back("dominance_ppp");
  if (!convergence.contact_decreasing) f.emplace_back("convergence_monotone");
  if (!convergence.final_below_threshold) f.emplace_back("convergence_threshold");
  if (!ordering.pass()) f.emplace_back("ordering");
  return f;
}

ValidationReport run_validation(const ValidationSettings& settings) {
  ValidationReport rep;
  rep.settings = settings;
  if (rep.settings.grid.empty()) rep.settings.grid = default_grid(settings.params);
  const auto& s = rep.settings;
  const auto& params = s.params;
  require_ascending(s.grid, "run_validation");
  s.simulation.validate();

  const EmpiricalCdf contact = sample_contact_distance(params, s.simulation);
  rep.ks_contact.n = contact.n_total;
  rep.ks_contact.threshold = s.ks_threshold;
  rep.ks_contact.statistic = ks_statistic(
      contact, [&](double r) { return contact_cdf(params, r, s.analytic); });
  rep.ks_contact.pass = rep.ks_contact.statistic <= s.ks_threshold;

  const EmpiricalCdf palm = sample_nn_distance_palm(params, s.simulation);
  rep.ks_nn.n = palm.n_total;
  rep.ks_nn.threshold = s.ks_threshold;
  rep.ks_nn.statistic =
      ks_statistic(palm, [&](double r) { return nn_cdf(params, r, s.analytic); });
  rep.ks_nn.pass = rep.ks_nn.statistic <= s.ks_threshold;

  const WindowRun window = sample_nn_distance_window_detailed(params, s.simulation);
  rep.warnings.insert(rep.warnings.end(), window.warnings.begin(), window.warnings.end());
  rep.nn_samplers.alpha = s.two_sample_alpha;
  rep.nn_samplers.n_a = palm.n_total;
  rep.nn_samplers.n_b = window.distances.n_total;
  rep.nn_samplers.statistic = ks_two_sample_statistic(palm, window.distances);
  const double na = static_cast<double>(palm.n_total);
  const double nb = static_cast<double>(window.distances.n_total);
  rep.nn_samplers.p_value = kolmogorov_pvalue(rep.nn_samplers.statistic, na * nb / (na + nb));
  rep.nn_samplers.pass = rep.nn_samplers.p_value >= s.two_sample_alpha;

  rep.dominance = check_dominance(params, s.grid, s.dominance_tol, s.analytic, s.baseline);

  rep.convergence = check_ppp_convergence(params.lambda_p(), params.m_bar(), s.r_d_list,
                                          s.grid, s.gap_threshold, s.analytic);
  rep.warnings.insert(rep.warnings.end(), rep.convergence.warnings.begin(),
                      rep.convergence.warnings.end());

  if (s.r_d_list.size() >= 2) {
    rep.ordering = check_figure2_ordering(params.lambda_p(), params.m_bar(), s.r_d_list[0],
                                          s.r_d_list[1], s.grid, s.dominance_tol, s.analytic);
  } else {
    rep.ordering = check_figure2_ordering(params.lambda_p(), params.m_bar(), params.r_d(),
                                          params.r_d(), s.grid, s.dominance_tol, s.analytic);
    rep.warnings.emplace_back("ordering check needs two r_d values; compared r_d with itself");
  }
  return rep;
}

namespace {

nlohmann::json finite_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

}  // namespace

std::string to_json(const ValidationReport& report, int indent) {
  using nlohmann::json;
  const auto& s = report.settings;
  json j;
  j["tool"] = {{"name", "mcpdist"}, {"version", tool_version()}};
  j["pass"] = report.pass();
  j["failures"] = report.failures();
  j["params"] = {{"lambda_p", s.params.lambda_p()},
                 {"m_bar", s.params.m_bar()},
                 {"r_d", s.params.r_d()}};
  j["simulation"] = {{"seed", s.simulation.seed},
                     {"n_samples", s.simulation.n_samples},
                     {"r_max", s.simulation.r_max},
                     {"reference_radius", s.simulation.reference_radius}};
  j["grid"] = {{"r_min", s.grid.empty() ? 0.0 : s.grid.front()},
               {"r_max", s.grid.empty() ? 0.0 : s.grid.back()},
               {"points", s.grid.size()}};
  j["thresholds"] = {{"ks", s.ks_threshold},
                     {"two_sample_alpha", s.two_sample_alpha},
                     {"dominance_tol", s.dominance_tol},
                     {"gap", s.gap_threshold},
                     {"quadrature_rel_tol", s.analytic.rel_tol}};
  auto ks = [](const KsCheck& k) {
    return json{{"statistic", k.statistic}, {"threshold", k.threshold}, {"n", k.n},
                {"pass", k.pass}};
  };
  j["ks_contact"] = ks(report.ks_contact);
  j["ks_nn"] = ks(report.ks_nn);
  const auto& t = report.nn_samplers;
  j["nn_samplers"] = {{"statistic", t.statistic}, {"p_value", t.p_value}, {"alpha", t.alpha},
                      {"n_palm", t.n_a},         {"n_window", t.n_b},    {"pass", t.pass}};
  const auto& d = report.dominance;
  j["dominance"] = {{"points", d.points},
                    {"tol", d.tol},
                    {"nn_violations", d.nn_violations},
                    {"ppp_violations", d.ppp_violations},
                    {"worst_nn_gap", d.worst_nn_gap},
                    {"worst_nn_r", d.worst_nn_r},
                    {"worst_ppp_gap", d.worst_ppp_gap},
                    {"worst_ppp_r", d.worst_ppp_r},
                    {"first_nn_violation_r", finite_or_null(d.first_nn_violation_r)},
                    {"first_ppp_violation_r", finite_or_null(d.first_ppp_violation_r)},
                    {"pass", d.pass()}};
  json gaps = json::array();
  for (const auto& e : report.convergence.entries) {
    gaps.push_back({{"r_d", e.r_d},
                    {"contact_gap", e.contact_gap},
                    {"contact_gap_r", e.contact_gap_r},
                    {"nn_gap", e.nn_gap},
                    {"nn_gap_r", e.nn_gap_r}});
  }
  const auto& c = report.convergence;
  j["convergence"] = {{"gaps", gaps},
                      {"threshold", c.threshold},
                      {"contact_decreasing", c.contact_decreasing},
                      {"final_below_threshold", c.final_below_threshold},
                      {"nn_monotone", c.nn_monotone},
                      {"pass", c.pass()}};
  const auto& o = report.ordering;
  j["ordering"] = {{"r_d_small", o.r_d_small},
                   {"r_d_large", o.r_d_large},
                   {"tol", o.tol},
                   {"contact_violations", o.contact_violations},
                   {"nn_violations", o.nn_violations},
                   {"worst_contact_gap", o.worst_contact_gap},
                   {"worst_contact_r", o.worst_contact_r},
                   {"worst_nn_gap", o.worst_nn_gap},
                   {"worst_nn_r", o.worst_nn_r},
                   {"pass", o.pass()}};
  j["warnings"] = report.warnings;
  return j.dump(indent);
}

}  // namespace mcpdist
