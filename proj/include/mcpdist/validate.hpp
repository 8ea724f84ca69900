#pragma once

// Machine-checkable versions of the distributional claims: KS agreement
// with simulation, stochastic dominance, the PPP limit in r_d, and the
// ordering of the CDFs in r_d.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "mcpdist/analytic.hpp"
#include "mcpdist/params.hpp"
#include "mcpdist/simulate.hpp"

namespace mcpdist {

std::string tool_version();

using RadialCdf = std::function<double(double)>;

/// sup_r |F_emp(r) - F(r)| over [0, r_max], evaluated just before and just
/// after every sample and at the censoring radius.
double ks_statistic(const EmpiricalCdf& ecdf, const RadialCdf& analytic_f);

/// sup_r |F_a(r) - F_b(r)| for two samples censored at the same r_max.
double ks_two_sample_statistic(const EmpiricalCdf& a, const EmpiricalCdf& b);

/// Asymptotic Kolmogorov tail probability P(D > d) for effective sample size
/// n, with Stephens' small-sample correction.
double kolmogorov_pvalue(double d, double n_effective);

/// c(alpha) / sqrt(n) with c(alpha) = sqrt(-ln(alpha / 2) / 2).
double ks_critical_value(double n_effective, double alpha);

struct ChiSquareResult {
  double statistic = 0.0;
  std::size_t dof = 0;
  double p_value = 1.0;
  std::size_t bins = 0;
};

/// Pearson goodness of fit of integer observations against pmf(k) for
/// k >= first. Adjacent categories are pooled until each bin expects at least
/// `min_expected` counts; the last bin takes the whole upper tail.
ChiSquareResult chi_square_gof(std::span<const std::uint32_t> observations,
                               const std::function<double(long long)>& pmf,
                               long long first, double min_expected = 5.0);

struct KsCheck {
  double statistic = 0.0;
  double threshold = 0.0;
  std::size_t n = 0;
  bool pass = false;
};

struct TwoSampleCheck {
  double statistic = 0.0;
  double p_value = 1.0;
  double alpha = 0.05;
  std::size_t n_a = 0;
  std::size_t n_b = 0;
  bool pass = false;
};

struct DominanceReport {
  double tol = 1e-9;
  std::size_t points = 0;
  std::size_t nn_violations = 0;
  std::size_t ppp_violations = 0;
  /// Largest contact - nn and contact - ppp values, with their radii.
  double worst_nn_gap = -1.0;
  double worst_nn_r = 0.0;
  double worst_ppp_gap = -1.0;
  double worst_ppp_r = 0.0;
  /// First violating radius of each kind, NaN when none.
  double first_nn_violation_r = 0.0;
  double first_ppp_violation_r = 0.0;
  bool pass() const { return nn_violations == 0 && ppp_violations == 0; }
};

/// Baseline CDF as a function of (density, r); swapped out only in tests.
using BaselineCdf = std::function<double(double, double)>;

DominanceReport check_dominance(const MCPParams& params, std::span<const double> grid,
                                double tol = 1e-9, const AnalyticOptions& options = {},
                                const BaselineCdf& baseline = ppp_contact_cdf);

struct ConvergenceEntry {
  double r_d = 0.0;
  double contact_gap = 0.0;
  double contact_gap_r = 0.0;
  double nn_gap = 0.0;
  double nn_gap_r = 0.0;
};

struct ConvergenceReport {
  std::vector<ConvergenceEntry> entries;
  double threshold = 0.0;
  bool contact_decreasing = true;
  bool final_below_threshold = true;
  /// Soft: a non-monotone nearest-neighbour gap sequence only warns.
  bool nn_monotone = true;
  std::vector<std::string> warnings;
  bool pass() const { return contact_decreasing && final_below_threshold; }
};

/// Sup-norm distance of the contact and nearest-neighbour CDFs to the PPP CDF
/// of density m_bar lambda_p for each r_d. The contact gaps must strictly
/// decrease (a single entry passes trivially) and the last must be at most
/// `threshold`.
ConvergenceReport check_ppp_convergence(double lambda_p, double m_bar,
                                        std::span<const double> r_d_list,
                                        std::span<const double> grid, double threshold,
                                        const AnalyticOptions& options = {});

struct OrderingReport {
  double r_d_small = 0.0;
  double r_d_large = 0.0;
  double tol = 1e-9;
  std::size_t contact_violations = 0;
  std::size_t nn_violations = 0;
  double worst_contact_gap = -1.0;
  double worst_contact_r = 0.0;
  double worst_nn_gap = -1.0;
  double worst_nn_r = 0.0;
  bool pass() const { return contact_violations == 0 && nn_violations == 0; }
};

/// Larger r_d must give a pointwise larger contact CDF and a pointwise
/// smaller nearest-neighbour CDF.
OrderingReport check_figure2_ordering(double lambda_p, double m_bar, double r_d_small,
                                      double r_d_large, std::span<const double> grid,
                                      double tol = 1e-9,
                                      const AnalyticOptions& options = {});

struct ValidationSettings {
  MCPParams params{20e-6, 30.0, 40.0};
  /// Radii for the PPP-limit study; the first two also drive the ordering check.
  std::vector<double> r_d_list{20.0, 80.0, 320.0};
  std::vector<double> grid;
  SimulationConfig simulation;
  double ks_threshold = 0.02;
  double two_sample_alpha = 0.05;
  double dominance_tol = 1e-9;
  double gap_threshold = 0.0;
  AnalyticOptions analytic;
  BaselineCdf baseline = ppp_contact_cdf;
};

struct ValidationReport {
  ValidationSettings settings;
  KsCheck ks_contact;
  KsCheck ks_nn;
  TwoSampleCheck nn_samplers;
  DominanceReport dominance;
  ConvergenceReport convergence;
  OrderingReport ordering;
  std::vector<std::string> warnings;

  bool pass() const;
  /// Names of the failed checks.
  std::vector<std::string> failures() const;
};

ValidationReport run_validation(const ValidationSettings& settings);

/// Self-describing JSON document (see docs/report-schema.md).
std::string to_json(const ValidationReport& report, int indent = 2);

}  // namespace mcpdist
