#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "json.hpp"
#include "mcpdist/validate.hpp"

namespace mcpdist {
namespace {

const MCPParams kDefault{20e-6, 30.0, 40.0};

TEST(KsStatistic, HandEvaluatedPointMass) {
  const EmpiricalCdf e = make_empirical_cdf(std::vector<double>(10, 0.5), 1.0);
  EXPECT_DOUBLE_EQ(ks_statistic(e, [](double r) { return r; }), 0.5);
}

TEST(KsStatistic, CensoringBoundaryCounts) {
  // Two of four samples censored at 1; F(1) = 1 leaves a 0.5 gap at r_max.
  const EmpiricalCdf e = make_empirical_cdf({0.25, 0.5, 2.0, 3.0}, 1.0);
  EXPECT_DOUBLE_EQ(ks_statistic(e, [](double r) { return std::min(r, 1.0); }), 0.5);
}

TEST(KsStatistic, ExactSamplesStayUnderCriticalValue) {
  RandomStream rng(77, 0, 0);
  std::vector<double> s(10000);
  for (auto& v : s) v = std::sqrt(rng.uniform());  // F(r) = r^2 on [0, 1]
  const EmpiricalCdf e = make_empirical_cdf(s, 1.0);
  EXPECT_LE(ks_statistic(e, [](double r) { return r * r; }), 1.36 / std::sqrt(10000.0));
}

TEST(KsStatistic, DetectsMismatchedClusterRadius) {
  SimulationConfig c;
  c.n_samples = 4000;
  c.r_max = 160.0;
  c.seed = 3;
  const EmpiricalCdf e = sample_contact_distance(kDefault, c);
  const MCPParams wrong = kDefault.with_r_d(80.0);
  EXPECT_GT(ks_statistic(e, [&](double r) { return contact_cdf(wrong, r); }), 0.1);
  EXPECT_LT(ks_statistic(e, [&](double r) { return contact_cdf(kDefault, r); }), 0.03);
}

TEST(TwoSample, HandEvaluated) {
  const EmpiricalCdf a = make_empirical_cdf({1.0, 2.0, 3.0, 4.0}, 10.0);
  const EmpiricalCdf b = make_empirical_cdf({3.5, 4.5}, 10.0);
  EXPECT_DOUBLE_EQ(ks_two_sample_statistic(a, b), 0.75);
  EXPECT_DOUBLE_EQ(ks_two_sample_statistic(a, a), 0.0);
  const EmpiricalCdf censored = make_empirical_cdf({1.0, INFINITY}, 10.0);
  EXPECT_DOUBLE_EQ(ks_two_sample_statistic(censored, b), 0.5);
}

TEST(Kolmogorov, CriticalValuesAndTail) {
  EXPECT_NEAR(ks_critical_value(1.0, 0.05), 1.3581, 1e-4);
  EXPECT_NEAR(ks_critical_value(1.0, 0.01), 1.6276, 1e-4);
  // Large-n limit: P(sqrt(n) D > 1.3581) = 0.05.
  EXPECT_NEAR(kolmogorov_pvalue(1.3581 / std::sqrt(1e8), 1e8), 0.05, 1e-3);
  EXPECT_EQ(kolmogorov_pvalue(0.0, 100.0), 1.0);
  EXPECT_LT(kolmogorov_pvalue(0.5, 100.0), 1e-15);
}

TEST(ChiSquare, ExactCountsGiveZeroStatistic) {
  // 0 x2, 1 x4, 2 x4 against pmf (0.2, 0.4, 0.4).
  const std::vector<std::uint32_t> obs{0, 0, 1, 1, 1, 1, 2, 2, 2, 2};
  const auto pmf = [](long long k) { return k == 0 ? 0.2 : (k <= 2 ? 0.4 : 0.0); };
  const auto res = chi_square_gof(obs, pmf, 0, 1.0);
  EXPECT_NEAR(res.statistic, 0.0, 1e-12);
  EXPECT_EQ(res.bins, 3u);
  EXPECT_EQ(res.dof, 2u);
  EXPECT_NEAR(res.p_value, 1.0, 1e-12);
}

TEST(ChiSquare, RejectsBadSample) {
  std::vector<std::uint32_t> obs(1000, 1);
  const auto res = chi_square_gof(obs, [](long long l) { return cluster_size_pmf(4.0, l); }, 1);
  EXPECT_LT(res.p_value, 1e-10);
  EXPECT_THROW(chi_square_gof(std::vector<std::uint32_t>{0}, [](long long) { return 1.0; }, 1),
               std::invalid_argument);
}

TEST(Dominance, DefaultParametersHaveNoViolations) {
  const auto grid = radial_grid(0.0, 160.0, 200);
  const DominanceReport rep = check_dominance(kDefault, grid);
  EXPECT_TRUE(rep.pass());
  EXPECT_EQ(rep.points, 200u);
  EXPECT_LE(rep.worst_nn_gap, 0.0);
  EXPECT_LE(rep.worst_ppp_gap, 1e-9);
  EXPECT_TRUE(std::isnan(rep.first_nn_violation_r));
}

TEST(Dominance, OriginIsEquality) {
  const std::array<double, 1> grid{0.0};
  const DominanceReport rep = check_dominance(kDefault, grid);
  EXPECT_TRUE(rep.pass());
  EXPECT_EQ(rep.worst_nn_gap, 0.0);
  EXPECT_EQ(rep.worst_ppp_gap, 0.0);
}

TEST(Dominance, SignFlippedBaselineIsCaught) {
  const auto grid = radial_grid(0.0, 160.0, 50);
  const auto flipped = [](double density, double r) {
    return -std::expm1(density * std::numbers::pi * r * r);
  };
  const DominanceReport rep = check_dominance(kDefault, grid, 1e-9, {}, flipped);
  EXPECT_FALSE(rep.pass());
  EXPECT_EQ(rep.ppp_violations, 49u);
  EXPECT_DOUBLE_EQ(rep.first_ppp_violation_r, grid[1]);
}

TEST(Convergence, GapsShrinkTowardsPpp) {
  const auto grid = radial_grid(0.0, 160.0, 200);
  const std::array<double, 3> radii{20.0, 80.0, 320.0};
  const ConvergenceReport rep = check_ppp_convergence(20e-6, 30.0, radii, grid, 0.05);
  ASSERT_EQ(rep.entries.size(), 3u);
  EXPECT_TRUE(rep.contact_decreasing);
  EXPECT_TRUE(rep.final_below_threshold);
  EXPECT_TRUE(rep.pass());
  EXPECT_GT(rep.entries[0].contact_gap, rep.entries[1].contact_gap);
  EXPECT_GT(rep.entries[1].contact_gap, rep.entries[2].contact_gap);
  EXPECT_LT(rep.entries[2].nn_gap, rep.entries[0].nn_gap);
}

TEST(Convergence, SingleRadiusIsTriviallyMonotone) {
  const auto grid = radial_grid(0.0, 160.0, 20);
  const std::array<double, 1> radii{40.0};
  const ConvergenceReport rep = check_ppp_convergence(20e-6, 30.0, radii, grid, 1.0);
  EXPECT_TRUE(rep.pass());
  const ConvergenceReport strict = check_ppp_convergence(20e-6, 30.0, radii, grid, 1e-3);
  EXPECT_FALSE(strict.final_below_threshold);
}

TEST(Ordering, DefaultRadii) {
  const auto grid = radial_grid(0.0, 160.0, 200);
  const OrderingReport rep = check_figure2_ordering(20e-6, 30.0, 20.0, 80.0, grid);
  EXPECT_TRUE(rep.pass());
  EXPECT_LT(rep.worst_contact_gap, 0.0 + 1e-9);
  const OrderingReport same = check_figure2_ordering(20e-6, 30.0, 40.0, 40.0, grid);
  EXPECT_TRUE(same.pass());
  EXPECT_EQ(same.worst_contact_gap, 0.0);
  EXPECT_EQ(same.worst_nn_gap, 0.0);
  EXPECT_THROW(check_figure2_ordering(20e-6, 30.0, 80.0, 20.0, grid), std::invalid_argument);
}

TEST(Ordering, RandomizedDenseClusters) {
  // m_bar >= 25 keeps the large-r reversal (below) under the tolerance.
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto grid = radial_grid(0.0, 320.0, 200);
  for (int i = 0; i < 50; ++i) {
    const double lambda_p = std::pow(10.0, -6.0 + 2.0 * u(gen));
    const double m_bar = 25.0 + 75.0 * u(gen);
    const OrderingReport rep = check_figure2_ordering(lambda_p, m_bar, 20.0, 80.0, grid);
    EXPECT_TRUE(rep.pass()) << "lambda_p=" << lambda_p << " m_bar=" << m_bar
                            << " worst nn gap " << rep.worst_nn_gap << " at " << rep.worst_nn_r;
  }
}

TEST(Ordering, SparseClustersReverseNearestNeighbourTail) {
  // Beyond 2 r_d both NN survivals are S_C e^{-m}, so NN follows the contact
  // ordering there. Visible once e^{-m} outweighs the tolerance.
  const auto grid = radial_grid(0.0, 320.0, 200);
  const OrderingReport rep = check_figure2_ordering(20e-6, 2.0, 20.0, 80.0, grid);
  EXPECT_EQ(rep.contact_violations, 0u);
  EXPECT_GT(rep.nn_violations, 0u);
  EXPECT_GT(rep.worst_nn_r, 80.0);
  EXPECT_GT(rep.worst_nn_gap, 1e-3);
}

TEST(RunValidation, SmallRunProducesSelfDescribingReport) {
  ValidationSettings s;
  s.simulation.n_samples = 3000;
  s.simulation.r_max = 160.0;
  s.simulation.seed = 12;
  s.ks_threshold = 0.04;
  s.gap_threshold = 0.05;
  s.grid = radial_grid(0.0, 160.0, 100);
  const ValidationReport rep = run_validation(s);
  EXPECT_TRUE(rep.pass()) << to_json(rep);
  const auto j = nlohmann::json::parse(to_json(rep));
  EXPECT_EQ(j["params"]["m_bar"], 30.0);
  EXPECT_EQ(j["simulation"]["seed"], 12);
  EXPECT_EQ(j["thresholds"]["ks"], 0.04);
  EXPECT_EQ(j["convergence"]["gaps"].size(), 3u);
  EXPECT_EQ(j["tool"]["version"], tool_version());
  EXPECT_TRUE(j["pass"].get<bool>());
}

}  // namespace
}  // namespace mcpdist
