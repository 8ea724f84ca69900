#include "mcpdist/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

namespace mcpdist {

namespace {

// QUADPACK qk21 nodes and weights. Odd-indexed abscissae (1, 3, ...) are the
// 10-point Gauss nodes.
constexpr std::array<double, 11> kNodes = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
constexpr std::array<double, 11> kKronrodWeights = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kGaussWeights = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
  double a;
  double b;
  double value;
  double error;
};

struct ByError {
  bool operator()(const Panel& l, const Panel& r) const {
    if (l.error != r.error) return l.error < r.error;
    return l.a > r.a;
  }
};

double checked(const Integrand& f, double x) {
  const double v = f(x);
  if (!std::isfinite(v)) {
    throw QuadratureError("integrand returned a non-finite value at x = " +
                              std::to_string(x),
                          {});
  }
  return v;
}

Panel rule21(const Integrand& f, double a, double b) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = checked(f, centre);
  double kronrod = kKronrodWeights[10] * fc;
  double gauss = 0.0;
  for (std::size_t j = 0; j < 10; ++j) {
    const double dx = half * kNodes[j];
    const double sum = checked(f, centre - dx) + checked(f, centre + dx);
    kronrod += kKronrodWeights[j] * sum;
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * sum;
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace

QuadratureResult integrate_adaptive(const Integrand& f, double a, double b,
                                    double rel_tol, double abs_tol,
                                    std::size_t max_intervals) {
  const std::array<double, 2> limits{a, b};
  return integrate_adaptive(f, limits, {rel_tol, abs_tol, max_intervals});
}

QuadratureResult integrate_adaptive(const Integrand& f,
                                    std::span<const double> breakpoints,
                                    const QuadratureOptions& options) {
  if (breakpoints.size() < 2) {
    throw std::invalid_argument("integrate_adaptive: need at least two limits");
  }
  if (!(options.rel_tol > 0.0 && options.abs_tol > 0.0)) {
    throw std::invalid_argument("integrate_adaptive: tolerances must be > 0");
  }
  for (std::size_t i = 0; i < breakpoints.size(); ++i) {
    if (!std::isfinite(breakpoints[i]) ||
        (i > 0 && breakpoints[i] < breakpoints[i - 1])) {
      throw std::invalid_argument(
          "integrate_adaptive: limits must be finite and ascending");
    }
  }

  std::priority_queue<Panel, std::vector<Panel>, ByError> panels;
  QuadratureResult result;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (breakpoints[i + 1] == breakpoints[i]) continue;
    Panel p = rule21(f, breakpoints[i], breakpoints[i + 1]);
    result.evaluations += 21;
    result.value += p.value;
    result.error_estimate += p.error;
    panels.push(p);
  }
  if (panels.empty()) return result;

  const std::size_t budget = std::max(options.max_intervals, panels.size());
  auto converged = [&] {
    return result.error_estimate <=
           std::max(options.abs_tol, options.rel_tol * std::abs(result.value));
  };

  while (!converged()) {
    if (panels.size() >= budget) {
      result.intervals = panels.size();
      throw QuadratureError("integrate_adaptive: subdivision budget of " +
                                std::to_string(budget) + " intervals exhausted",
                            result);
    }
    const Panel worst = panels.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // Panel cannot be split further in double precision; accept it.
      break;
    }
    panels.pop();
    const Panel left = rule21(f, worst.a, mid);
    const Panel right = rule21(f, mid, worst.b);
    result.evaluations += 42;
    result.value += left.value + right.value - worst.value;
    result.error_estimate += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
  }

  // Re-sum from the panels so incremental updates leave no drift.
  result.value = 0.0;
  result.error_estimate = 0.0;
  result.intervals = panels.size();
  std::vector<Panel> all;
  all.reserve(panels.size());
  while (!panels.empty()) {
    all.push_back(panels.top());
    panels.pop();
  }
  std::sort(all.begin(), all.end(),
            [](const Panel& l, const Panel& r) { return l.a < r.a; });
  for (const Panel& p : all) {
    result.value += p.value;
    result.error_estimate += p.error;
  }
  return result;
}

}  // namespace mcpdist
