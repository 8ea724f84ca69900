#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <random>

#include "mcpdist/analytic.hpp"
#include "oracle.hpp"

namespace mcpdist {
namespace {

const MCPParams kDefault{20e-6, 30.0, 40.0};

TEST(ContactCdf, ZeroAtOrigin) {
  EXPECT_EQ(contact_cdf(kDefault, 0.0), 0.0);
  EXPECT_EQ(nn_cdf(kDefault, 0.0), 0.0);
  EXPECT_EQ(contact_cdf(MCPParams(1.0, 0.01, 1e-3), 0.0), 0.0);
}

struct Frozen {
  double r_d, r, contact, nn;
};

// tests/oracles/cdf_values.py: nested mpmath quadrature of the radial
// densities, no closed-form lens areas.
constexpr std::array<Frozen, 5> kFrozen{{
    {40.0, 10.0, 0.0917064478743908, 0.821221331302338},
    {40.0, 30.0, 0.221325768344618, 0.99991015360703},
    {40.0, 60.0, 0.424658901364576, 0.999999999987357},
    {20.0, 25.0, 0.104089600170968, 0.999999996028391},
    {80.0, 50.0, 0.568589551775312, 0.999574442637206},
}};

TEST(ContactCdf, MatchesNestedQuadratureOracle) {
  for (const auto& f : kFrozen) {
    const MCPParams p = kDefault.with_r_d(f.r_d);
    EXPECT_NEAR(contact_cdf(p, f.r), f.contact, 2e-9) << "r_d=" << f.r_d << " r=" << f.r;
    EXPECT_NEAR(nn_cdf(p, f.r), f.nn, 2e-9) << "r_d=" << f.r_d << " r=" << f.r;
    const AnalyticOptions tight{1e-12, 10000};
    EXPECT_NEAR(contact_cdf(p, f.r, tight), f.contact, 1e-11);
    EXPECT_NEAR(nn_cdf(p, f.r, tight), f.nn, 1e-11);
  }
}

TEST(ContactCdf, ApproachesOneMonotonically) {
  double prev = 0.0;
  for (double r : {40.0, 100.0, 200.0, 400.0, 800.0, 1600.0}) {
    const double v = contact_cdf(kDefault, r);
    if (prev < 1.0) EXPECT_GT(v, prev);  // saturates to exactly 1 in double
    prev = v;
  }
  EXPECT_GT(prev, 1.0 - 1e-12);
  EXPECT_LE(prev, 1.0);
}

TEST(ContactCdf, HugeExponentsSaturateCleanly) {
  const MCPParams dense(10.0, 1e4, 1.0);
  const double v = contact_cdf(dense, 5.0);
  EXPECT_EQ(v, 1.0);
  EXPECT_EQ(contact_survival(dense, 5.0), 0.0);
  EXPECT_EQ(nn_cdf(dense, 5.0), 1.0);
}

TEST(NnCdf, CollapsesBeyondTwiceTheClusterRadius) {
  const MCPParams p(20e-6, 2.0, 40.0);
  for (double r : {80.0, 100.0, 150.0}) {
    const double expected = 1.0 - (1.0 - contact_cdf(p, r)) * std::exp(-2.0);
    EXPECT_NEAR(nn_cdf(p, r), expected, 1e-12);
    EXPECT_NEAR(nn_survival(p, r) / contact_survival(p, r), std::exp(-2.0), 1e-12);
  }
}

TEST(NnCdf, PalmFactorizationMatchesIndependentFactors) {
  const MCPParams p(50e-6, 5.0, 30.0);
  for (double r : {5.0, 20.0, 30.0, 45.0}) {
    const double oracle_survival =
        oracle::contact_survival(p.lambda_p(), p.m_bar(), p.r_d(), r) *
        oracle::palm_factor(p.m_bar(), p.r_d(), r);
    EXPECT_NEAR(nn_survival(p, r), oracle_survival, 1e-8) << "r=" << r;
    EXPECT_NEAR(palm_own_cluster_void(p, r), oracle::palm_factor(p.m_bar(), p.r_d(), r), 1e-9);
  }
}

TEST(PppContactCdf, Values) {
  EXPECT_NEAR(ppp_contact_cdf(1.0 / std::numbers::pi, 1.0), 1.0 - std::exp(-1.0), 1e-15);
  EXPECT_EQ(ppp_contact_cdf(3.0, 0.0), 0.0);
  // 1 - exp(-30 * 20e-6 * pi * 625), 20 digits from mpmath.
  EXPECT_NEAR(ppp_contact_cdf(30.0 * 20e-6, 25.0), 0.69213602867150100249, 1e-14);
  EXPECT_THROW(ppp_contact_cdf(0.0, 1.0), std::invalid_argument);
}

TEST(ClusterSizePmf, SizeBiasedPoisson) {
  EXPECT_EQ(cluster_size_pmf(2.0, 0), 0.0);
  EXPECT_NEAR(cluster_size_pmf(2.0, 1), 0.13533528323661269189, 1e-16);
  for (double m : {0.3, 2.0, 30.0, 250.0}) {
    double total = 0.0, mean = 0.0;
    for (long long l = 0; l < 2000; ++l) {
      const double p = cluster_size_pmf(m, l);
      total += p;
      mean += static_cast<double>(l) * p;
    }
    EXPECT_NEAR(total, 1.0, 1e-12) << "m=" << m;
    EXPECT_NEAR(mean, m + 1.0, 1e-9 * (m + 1.0)) << "m=" << m;
  }
  EXPECT_THROW(cluster_size_pmf(0.0, 1), std::invalid_argument);
  EXPECT_THROW(cluster_size_pmf(1.0, -1), std::invalid_argument);
}

TEST(CdfCurve, SingleZeroRadius) {
  const std::array<double, 1> grid{0.0};
  const std::array<Distribution, 1> which{Distribution::contact};
  const CdfCurve c = cdf_curve(kDefault, grid, which);
  ASSERT_EQ(c.series(Distribution::contact).size(), 1u);
  EXPECT_EQ(c.series(Distribution::contact)[0], 0.0);
  EXPECT_FALSE(c.has(Distribution::nearest_neighbor));
  EXPECT_THROW(c.series(Distribution::nearest_neighbor), std::out_of_range);
}

TEST(CdfCurve, RejectsNonAscendingGrid) {
  const std::array<double, 2> grid{5.0, 5.0};
  const std::array<Distribution, 1> which{Distribution::contact};
  EXPECT_THROW(cdf_curve(kDefault, grid, which), std::invalid_argument);
  const std::array<double, 2> negative{-1.0, 5.0};
  EXPECT_THROW(cdf_curve(kDefault, negative, which), std::invalid_argument);
}

TEST(CdfCurve, ParallelMatchesSequentialBitForBit) {
  const auto grid = radial_grid(0.0, 160.0, 57);
  const std::array<Distribution, 3> which{Distribution::ppp_baseline, Distribution::contact,
                                          Distribution::nearest_neighbor};
  const CdfCurve seq = cdf_curve(kDefault, grid, which, {}, 1);
  const CdfCurve par = cdf_curve(kDefault, grid, which, {}, 8);
  EXPECT_EQ(seq.values, par.values);
  EXPECT_EQ(seq.labels[0], Distribution::ppp_baseline);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_EQ(seq.series(Distribution::contact)[i], contact_cdf(kDefault, grid[i]));
    EXPECT_EQ(seq.series(Distribution::nearest_neighbor)[i], nn_cdf(kDefault, grid[i]));
  }
}

TEST(CdfCurve, QuadratureFailureNamesRadius) {
  const auto grid = radial_grid(0.0, 100.0, 5);
  const std::array<Distribution, 1> which{Distribution::contact};
  try {
    cdf_curve(kDefault, grid, which, {1e-15, 1});
    FAIL() << "expected NumericalError";
  } catch (const NumericalError& e) {
    EXPECT_EQ(e.radius(), 25.0);
    EXPECT_NE(std::string(e.what()).find("r = 25"), std::string::npos);
  }
}

TEST(AnalyticProperties, MonotoneBoundedAndDominated) {
  std::mt19937_64 gen(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const MCPParams p(std::pow(10.0, -6.0 + 3.0 * u(gen)), std::pow(10.0, -1.0 + 2.5 * u(gen)),
                      std::pow(10.0, 0.5 + 2.0 * u(gen)));
    std::vector<double> grid(60);
    for (auto& r : grid) r = 5.0 * p.r_d() * u(gen);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    const std::array<Distribution, 3> which{Distribution::contact, Distribution::nearest_neighbor,
                                            Distribution::ppp_baseline};
    const CdfCurve c = cdf_curve(p, grid, which);
    const auto& ct = c.series(Distribution::contact);
    const auto& nn = c.series(Distribution::nearest_neighbor);
    const auto& pp = c.series(Distribution::ppp_baseline);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      EXPECT_GE(ct[i], 0.0);
      EXPECT_LE(nn[i], 1.0);
      EXPECT_GE(nn[i], ct[i] - 1e-9);
      EXPECT_GE(pp[i], ct[i] - 1e-9);
      if (i > 0) {
        EXPECT_GE(ct[i], ct[i - 1] - 1e-12);
        EXPECT_GE(nn[i], nn[i - 1] - 1e-12);
      }
    }
  }
}

TEST(AnalyticProperties, ScaleCovariance) {
  for (double c : {0.01, 0.5, 7.0, 300.0}) {
    const MCPParams scaled(kDefault.lambda_p() / (c * c), kDefault.m_bar(), c * kDefault.r_d());
    for (double r : {5.0, 30.0, 70.0, 120.0}) {
      EXPECT_NEAR(contact_cdf(scaled, c * r), contact_cdf(kDefault, r), 1e-9);
      EXPECT_NEAR(nn_cdf(scaled, c * r), nn_cdf(kDefault, r), 1e-9);
    }
  }
}

TEST(PalmGeometry, DensityAndDomain) {
  EXPECT_DOUBLE_EQ(PalmGeometry(0.5, 1.0).density(), 1.0);
  EXPECT_THROW(PalmGeometry(1.5, 1.0), std::invalid_argument);
}

TEST(RadialGrid, LinearAndLog) {
  const auto lin = radial_grid(0.0, 10.0, 11);
  EXPECT_EQ(lin.front(), 0.0);
  EXPECT_EQ(lin.back(), 10.0);
  EXPECT_DOUBLE_EQ(lin[3], 3.0);
  const auto lg = radial_grid(1.0, 100.0, 3, true);
  EXPECT_NEAR(lg[1], 10.0, 1e-12);
  EXPECT_THROW(radial_grid(0.0, 10.0, 1), std::invalid_argument);
  EXPECT_THROW(radial_grid(0.0, 10.0, 5, true), std::invalid_argument);
}

TEST(Distribution, NamesRoundTrip) {
  for (auto d : {Distribution::contact, Distribution::nearest_neighbor,
                 Distribution::ppp_baseline}) {
    EXPECT_EQ(parse_distribution(to_string(d)), d);
  }
  EXPECT_THROW(parse_distribution("bogus"), std::invalid_argument);
}

TEST(MCPParamsTest, RejectsNonPositive) {
  EXPECT_THROW(MCPParams(0.0, 1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(MCPParams(1.0, -1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(MCPParams(1.0, 1.0, NAN), std::invalid_argument);
  EXPECT_DOUBLE_EQ(MCPParams(2.0, 3.0, 1.0).intensity(), 6.0);
}

}  // namespace
}  // namespace mcpdist
