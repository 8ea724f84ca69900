#include "mcpdist/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "mcpdist/analytic.hpp"
#include "mcpdist/validate.hpp"

namespace mcpdist::cli {

namespace {

// Final-gap threshold of the PPP-limit check at the default parameters:
// the gap at r_d = 320 plus margin.
constexpr double kDefaultGapThreshold = 0.05;

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

template <typename Writer>
void emit(const std::string& path, std::ostream& fallback, Writer&& write) {
  if (path.empty() || path == "-") {
    write(fallback);
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw UsageError("cannot open output file " + path);
  write(static_cast<std::ostream&>(file));
  if (!file) throw std::runtime_error("failed writing " + path);
}

AnalyticOptions analytic_options(const RunConfig& c) {
  if (!(c.tol > 0.0 && c.tol < 1.0)) throw UsageError("--tol must be in (0, 1)");
  return {c.tol, 10000};
}

double max_r_d(const RunConfig& c) {
  if (c.r_d.empty()) throw UsageError("at least one --r-d is required");
  return *std::max_element(c.r_d.begin(), c.r_d.end());
}

MCPParams primary_params(const RunConfig& c) {
  if (c.r_d.empty()) throw UsageError("at least one --r-d is required");
  return {c.lambda_p, c.m_bar, c.r_d.front()};
}

void write_row(std::ostream& os, std::initializer_list<double> values) {
  bool first = true;
  for (double v : values) {
    if (!first) os << ',';
    os << format_number(v);
    first = false;
  }
  os << '\n';
}

nlohmann::json params_json(double lambda_p, double m_bar, double r_d) {
  return {{"lambda_p", lambda_p}, {"m_bar", m_bar}, {"r_d", r_d}};
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::vector<double> make_grid(const RunConfig& c) {
  const double r_max = c.grid.r_max > 0.0 ? c.grid.r_max : 4.0 * max_r_d(c);
  if (c.grid.points < 2) throw UsageError("--points must be at least 2");
  try {
    return radial_grid(c.grid.r_min, r_max, c.grid.points, c.grid.log_spaced);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

int run_cdf(const RunConfig& c, std::ostream& out, std::ostream&) {
  const MCPParams params = primary_params(c);
  const auto grid = make_grid(c);
  const Distribution which[] = {Distribution::contact, Distribution::nearest_neighbor,
                                Distribution::ppp_baseline};
  const CdfCurve curve =
      cdf_curve(params, grid, which, analytic_options(c), c.simulation.workers);
  const auto& contact = curve.series(Distribution::contact);
  const auto& nn = curve.series(Distribution::nearest_neighbor);
  const auto& ppp = curve.series(Distribution::ppp_baseline);

  emit(c.out, out, [&](std::ostream& os) {
    if (c.format == OutputFormat::csv) {
      os << "r,contact,nearest_neighbor,ppp\n";
      for (std::size_t i = 0; i < grid.size(); ++i) {
        write_row(os, {grid[i], contact[i], nn[i], ppp[i]});
      }
      return;
    }
    nlohmann::json j;
    j["params"] = params_json(params.lambda_p(), params.m_bar(), params.r_d());
    j["quadrature_rel_tol"] = c.tol;
    j["r"] = grid;
    j["contact"] = contact;
    j["nearest_neighbor"] = nn;
    j["ppp"] = ppp;
    os << j.dump(2) << '\n';
  });
  return kOk;
}

int run_simulate(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const MCPParams params = primary_params(c);
  const auto grid = make_grid(c);
  SimulationConfig sim = c.simulation;
  sim.r_max = grid.back();

  const EmpiricalCdf contact = sample_contact_distance(params, sim);
  const EmpiricalCdf nn = sample_nn_distance_palm(params, sim);

  for (const auto* e : {&contact, &nn}) {
    if (e->censored_fraction() > 0.5) {
      err << "warning: " << format_number(100.0 * e->censored_fraction())
          << "% of " << (e == &contact ? "contact" : "nearest-neighbour")
          << " samples are censored at r_max = " << format_number(sim.r_max) << '\n';
    }
  }

  nlohmann::json meta;
  meta["tool"] = {{"name", "mcpdist"}, {"version", tool_version()}};
  meta["params"] = params_json(params.lambda_p(), params.m_bar(), params.r_d());
  meta["seed"] = sim.seed;
  meta["n_samples"] = sim.n_samples;
  meta["r_max"] = sim.r_max;
  meta["contact_censored"] = contact.n_censored;
  meta["nn_censored"] = nn.n_censored;
  meta["contact_censored_fraction"] = contact.censored_fraction();
  meta["nn_censored_fraction"] = nn.censored_fraction();
  meta["nn_sampler"] = "palm";

  emit(c.out, out, [&](std::ostream& os) {
    if (c.format == OutputFormat::csv) {
      os << "r,emp_contact,emp_nn\n";
      for (double r : grid) write_row(os, {r, contact(r), nn(r)});
      return;
    }
    nlohmann::json j;
    j["metadata"] = meta;
    std::vector<double> ec, en;
    for (double r : grid) {
      ec.push_back(contact(r));
      en.push_back(nn(r));
    }
    j["r"] = grid;
    j["emp_contact"] = ec;
    j["emp_nn"] = en;
    os << j.dump(2) << '\n';
  });

  if (c.format == OutputFormat::csv) {
    if (c.out.empty() || c.out == "-") {
      err << meta.dump() << '\n';
    } else {
      emit(c.out + ".meta.json", out,
           [&](std::ostream& os) { os << meta.dump(2) << '\n'; });
    }
  }
  if (!c.dump_samples.empty()) {
    emit(c.dump_samples + ".contact.txt", out,
         [&](std::ostream& os) { write_samples(os, contact); });
    emit(c.dump_samples + ".nn.txt", out, [&](std::ostream& os) { write_samples(os, nn); });
  }
  return kOk;
}

int run_validate(const RunConfig& c, std::ostream& out, std::ostream& err) {
  ValidationSettings s;
  s.params = primary_params(c);
  if (c.r_d.size() >= 2) {
    s.r_d_list = c.r_d;
    std::sort(s.r_d_list.begin(), s.r_d_list.end());
    s.r_d_list.erase(std::unique(s.r_d_list.begin(), s.r_d_list.end()), s.r_d_list.end());
  } else {
    const double r_d = s.params.r_d();
    s.r_d_list = {0.5 * r_d, 2.0 * r_d, 8.0 * r_d};
  }
  s.grid = make_grid(c);
  s.simulation = c.simulation;
  s.simulation.r_max = s.grid.back();
  s.ks_threshold = c.ks_threshold;
  s.gap_threshold = c.gap_threshold > 0.0 ? c.gap_threshold : kDefaultGapThreshold;
  s.analytic = analytic_options(c);
  if (c.mutate_ppp_sign) {
    s.baseline = [](double density, double r) {
      return -std::expm1(density * 3.14159265358979323846 * r * r);
    };
  }

  const ValidationReport report = run_validation(s);
  emit(c.out, out, [&](std::ostream& os) { os << to_json(report) << '\n'; });
  for (const auto& w : report.warnings) err << "warning: " << w << '\n';
  if (report.pass()) return kOk;
  for (const auto& f : report.failures()) {
    err << "FAILED: " << f;
    if (f == "dominance_ppp") {
      err << " (first violation at r = "
          << format_number(report.dominance.first_ppp_violation_r) << ")";
    } else if (f == "dominance_nn") {
      err << " (first violation at r = "
          << format_number(report.dominance.first_nn_violation_r) << ")";
    }
    err << '\n';
  }
  return kValidationFailed;
}

int run_sweep(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (c.r_d.empty()) throw UsageError("at least one --r-d is required");
  std::vector<double> radii = c.r_d;
  std::sort(radii.begin(), radii.end());
  const auto last = std::unique(radii.begin(), radii.end());
  if (last != radii.end()) {
    err << "warning: duplicate --r-d values removed\n";
    radii.erase(last, radii.end());
  }
  const auto grid = make_grid(c);
  const auto options = analytic_options(c);
  const Distribution which[] = {Distribution::contact, Distribution::nearest_neighbor,
                                Distribution::ppp_baseline};
  std::vector<CdfCurve> curves;
  for (double r_d : radii) {
    curves.push_back(cdf_curve(MCPParams(c.lambda_p, c.m_bar, r_d), grid, which, options,
                               c.simulation.workers));
  }

  emit(c.out, out, [&](std::ostream& os) {
    if (c.format == OutputFormat::csv) {
      os << "r_d,r,contact,nearest_neighbor,ppp\n";
      for (const auto& curve : curves) {
        const auto& ct = curve.series(Distribution::contact);
        const auto& nn = curve.series(Distribution::nearest_neighbor);
        const auto& pp = curve.series(Distribution::ppp_baseline);
        for (std::size_t i = 0; i < grid.size(); ++i) {
          write_row(os, {curve.params.r_d(), grid[i], ct[i], nn[i], pp[i]});
        }
      }
      return;
    }
    nlohmann::json j;
    j["lambda_p"] = c.lambda_p;
    j["m_bar"] = c.m_bar;
    j["r"] = grid;
    j["curves"] = nlohmann::json::array();
    for (const auto& curve : curves) {
      j["curves"].push_back({{"r_d", curve.params.r_d()},
                             {"contact", curve.series(Distribution::contact)},
                             {"nearest_neighbor", curve.series(Distribution::nearest_neighbor)},
                             {"ppp", curve.series(Distribution::ppp_baseline)}});
    }
    os << j.dump(2) << '\n';
  });
  return kOk;
}

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    c.simulation.validate();
    switch (c.subcommand) {
      case Subcommand::cdf:
        return run_cdf(c, out, err);
      case Subcommand::simulate:
        return run_simulate(c, out, err);
      case Subcommand::validate:
        return run_validate(c, out, err);
      case Subcommand::sweep:
        return run_sweep(c, out, err);
    }
    return kUsage;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << '\n';
    return kNumerical;
  } catch (const QuadratureError& e) {
    err << "error: " << e.what() << '\n';
    return kNumerical;
  } catch (const SamplerResourceError& e) {
    err << "error: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumerical;
  }
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Contact and nearest-neighbour distance distributions of the Matern "
               "cluster process.\nAll lengths share one unit (meters by convention). "
               "The PPP baseline is 1 - exp(-m_bar lambda_p pi r^2)."};
  app.name("mcpdist");
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", tool_version());

  RunConfig c;
  std::string format = "csv";
  bool have_r_d = false;
  std::vector<double> r_d;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--lambda-p", c.lambda_p, "Parent density (per unit area)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--m-bar", c.m_bar, "Mean offspring per cluster")
        ->check(CLI::PositiveNumber);
    sub->add_option("--r-d", r_d, "Cluster radius (repeatable)")
        ->check(CLI::PositiveNumber)
        ->each([&](const std::string&) { have_r_d = true; });
    sub->add_option("--r-min", c.grid.r_min, "Smallest grid radius")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--r-max", c.grid.r_max,
                    "Largest grid radius and censoring radius (default 4 r_d)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--points", c.grid.points, "Number of grid points (>= 2)");
    sub->add_flag("--log-grid", c.grid.log_spaced, "Logarithmic grid spacing");
    sub->add_option("--samples", c.simulation.n_samples, "Monte Carlo realizations");
    sub->add_option("--seed", c.simulation.seed, "Random seed");
    sub->add_option("--workers", c.simulation.workers, "Worker threads")
        ->check(CLI::PositiveNumber);
    sub->add_option("--reference-radius", c.simulation.reference_radius,
                    "Reference disk radius of the window nearest-neighbour sampler")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--max-points", c.simulation.max_expected_points,
                    "Cap on expected points per realization")
        ->check(CLI::PositiveNumber);
    sub->add_option("--out", c.out, "Output path (default: standard output)");
    sub->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--tol", c.tol,
                    "Relative quadrature tolerance; CDF values carry about this much "
                    "absolute error");
    sub->add_flag("-v,--verbose", c.verbosity, "Verbosity");
  };

  struct Entry {
    Subcommand kind;
    CLI::App* app;
  };
  std::vector<Entry> subs{
      {Subcommand::cdf, app.add_subcommand("cdf", "Analytic CDF curves")},
      {Subcommand::simulate, app.add_subcommand("simulate", "Monte Carlo empirical CDFs")},
      {Subcommand::validate, app.add_subcommand("validate", "Run every validation check")},
      {Subcommand::sweep, app.add_subcommand("sweep", "Analytic curves for several r_d")},
  };
  for (auto& s : subs) add_common(s.app);
  CLI::App* validate = subs[2].app;
  validate->add_option("--ks-threshold", c.ks_threshold, "KS pass threshold")
      ->check(CLI::PositiveNumber);
  validate->add_option("--gap-threshold", c.gap_threshold,
                       "Largest allowed sup-norm gap to the PPP CDF at the largest r_d")
      ->check(CLI::PositiveNumber);
  validate->add_flag("--mutate-ppp-sign", c.mutate_ppp_sign)->group("");
  subs[1].app->add_option("--dump-samples", c.dump_samples,
                          "Write raw samples to PREFIX.contact.txt and PREFIX.nn.txt");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << tool_version() << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n' << app.help();
    return kUsage;
  }

  for (const auto& s : subs) {
    if (s.app->parsed()) c.subcommand = s.kind;
  }
  if (have_r_d) c.r_d = r_d;
  c.format = format == "json" ? OutputFormat::json : OutputFormat::csv;
  const int code = run(c, out, err);
  if (code == kUsage) err << app.help();
  return code;
}

}  // namespace mcpdist::cli
