// momcert: command-line front end for moment-functional analysis.
//
// Subcommands: gen | check | growth | box | mass | finite | recover | report.
// Moment files are JSON; "-" (the default input) reads standard input.

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "momcert/errors.hpp"
#include "momcert/growth.hpp"
#include "momcert/io.hpp"
#include "momcert/linalg.hpp"
#include "momcert/moments.hpp"
#include "momcert/oracle.hpp"
#include "momcert/sampling.hpp"
#include "momcert/support.hpp"

namespace mc = momcert;
using mc::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitChecksFailed = 1;
constexpr int kExitValidation = 2;
constexpr int kExitRefusal = 3;
constexpr int kExitBudget = 4;

int exit_code_for(mc::ErrorKind kind) {
  switch (kind) {
    case mc::ErrorKind::GrowthDiverging:
    case mc::ErrorKind::RankUnstable:
    case mc::ErrorKind::IllConditioned:
    case mc::ErrorKind::NegativePower:
      return kExitRefusal;
    case mc::ErrorKind::BudgetExceeded:
      return kExitBudget;
    default:
      return kExitValidation;
  }
}

struct Options {
  std::string input = "-";
  std::string output;
  std::string format = "json";
  std::uint64_t seed = 0;

  // gen
  std::string atoms;
  std::string family;
  unsigned terms = 20;
  unsigned degree = 0;

  // analysis
  std::string poly = "X1";
  double slack = 0.05;
  std::string alpha;
  unsigned d = 2;
  unsigned budget = 16;
  std::string epsilon = "1";
  std::string candidates;
  std::string method = "prony";
  unsigned resolution = 41;
  double floor = 0.1;
  double threshold = 0.0;
  unsigned samples = 100;
  mc::GrowthThresholds growth;
};

mc::MomentSequence read_moments(const std::string& path) {
  json j;
  try {
    if (path == "-") {
      j = json::parse(std::cin);
    } else {
      std::ifstream in(path);
      if (!in) throw mc::Error(mc::ErrorKind::Validation, "cannot open '" + path + "'");
      j = json::parse(in);
    }
  } catch (const json::exception& e) {
    throw mc::Error(mc::ErrorKind::Validation, std::string("malformed JSON: ") + e.what());
  }
  return mc::moments_from_json(j);
}

// Output is written once, at the end; files go through a temporary and a
// rename.
void emit(const Options& opt, const std::string& text) {
  if (opt.output.empty() || opt.output == "-") {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  const std::string tmp = opt.output + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw mc::Error(mc::ErrorKind::Validation, "cannot write '" + opt.output + "'");
    out << text;
    if (!text.empty() && text.back() != '\n') out << '\n';
  }
  std::filesystem::rename(tmp, opt.output);
}

std::string dump(const json& j) { return j.dump(2); }

std::vector<mc::Point> parse_candidates(const std::string& text) {
  std::vector<mc::Point> out;
  std::size_t pos = 0;
  while ((pos = text.find('(', pos)) != std::string::npos) {
    const auto close = text.find(')', pos);
    if (close == std::string::npos) {
      throw mc::Error(mc::ErrorKind::Validation, "unbalanced parenthesis in candidates");
    }
    out.push_back(mc::parse_point(std::string_view(text).substr(pos + 1, close - pos - 1)));
    pos = close + 1;
  }
  if (out.empty() && !text.empty()) out.push_back(mc::parse_point(text));
  return out;
}

mc::MassOptions mass_options(const Options& opt) {
  mc::MassOptions m;
  m.epsilon = mc::parse_rational(opt.epsilon);
  m.budget = opt.budget;
  m.seed = opt.seed;
  m.slack = opt.slack;
  m.candidates = parse_candidates(opt.candidates);
  return m;
}

int cmd_gen(const Options& opt) {
  if (opt.atoms.empty() == opt.family.empty()) {
    throw mc::Error(mc::ErrorKind::Validation, "gen needs exactly one of --atoms or --family");
  }
  const mc::MomentSequence L =
      opt.atoms.empty()
          ? mc::from_closed_form(mc::parse_family(opt.family, opt.terms), opt.degree)
          : mc::from_atomic(mc::parse_atoms(opt.atoms), opt.degree);
  emit(opt, dump(mc::to_json(L)));
  return kExitOk;
}

json check_battery(const mc::MomentSequence& L, const Options& opt, bool& all_pass) {
  const std::size_t m = L.num_vars();
  std::mt19937_64 rng(opt.seed);
  json out = json::object();
  all_pass = true;
  auto record = [&](const std::string& name, bool pass, json detail) {
    detail["pass"] = pass;
    out[name] = std::move(detail);
    all_pass = all_pass && pass;
  };

  // Positivity: moment matrices at every level that fits.
  {
    json levels = json::array();
    bool pass = true;
    for (unsigned t = 0; 2 * t <= L.max_degree(); ++t) {
      if (mc::monomials_up_to(m, t).size() > 130) break;
      const auto r = mc::psd_check(mc::moment_matrix(L, t));
      json entry = mc::to_json(r);
      entry["t"] = t;
      levels.push_back(entry);
      pass = pass && r.verdict == mc::PsdVerdict::PSD;
    }
    json detail{{"check", "positivity"}, {"levels", levels}};
    if (!pass) detail["violation"] = "positivity violation: a moment matrix is not PSD";
    record("positivity", pass, detail);
  }

  const unsigned low = std::max(1u, std::min(3u, L.max_degree() / 4));
  auto guarded = [&](const std::string& name, auto&& body) {
    try {
      body();
    } catch (const mc::Error& e) {
      if (e.kind() != mc::ErrorKind::NegativePower) throw;
      record(name, false, {{"check", name}, {"violation", std::string("positivity violation: ") + e.what()}});
    }
  };

  guarded("cbs", [&] {
    bool pass = true;
    unsigned tried = 0;
    if (L.max_degree() >= 2) {
      const unsigned deg = std::max(1u, std::min(low, L.max_degree() / 2));
      for (unsigned k = 0; k < opt.samples; ++k) {
        const auto a = mc::random_polynomial(m, deg, rng);
        const auto b = mc::random_polynomial(m, deg, rng);
        pass = pass && mc::cbs_check(L, a, b);
        ++tried;
      }
    }
    record("cbs", pass, {{"check", "cauchy-schwarz"}, {"pairs", tried}});
  });

  guarded("monotonicity", [&] {
    bool pass = true;
    for (std::size_t i = 0; i < m && L.max_degree() >= 2; ++i) {
      pass = pass && mc::roots_monotone(L, mc::Polynomial::variable(m, i));
    }
    record("monotonicity", pass, {{"check", "root-sequence-monotone"}});
  });

  guarded("kernel", [&] {
    bool pass = true;
    unsigned tried = 0;
    for (std::size_t i = 0; i < m && L.max_degree() >= 2; ++i) {
      const auto x = mc::Polynomial::variable(m, i);
      const unsigned depth = mc::ladder_depth(L, x);
      if (depth >= 1) {
        pass = pass && mc::kernel_check(L, x, depth);
        ++tried;
      }
    }
    record("kernel", pass, {{"check", "kernel-ladder"}, {"polys", tried}});
  });

  guarded("seminorm", [&] {
    if (L.max_degree() < 4) {
      record("seminorm", true, {{"check", "seminorm-ladder"}, {"skipped", "needs max_degree >= 4"}});
      return;
    }
    std::vector<mc::SeminormSample> samples;
    for (unsigned k = 0; k < 10; ++k) {
      auto a = mc::random_polynomial(m, 1, rng);
      auto b = mc::random_polynomial(m, 1, rng);
      samples.push_back({a, b, mc::Rational(static_cast<long>(rng() % 7) - 3, 2)});
    }
    for (auto& s : samples) s.lambda.canonicalize();
    const auto report = mc::seminorm_props(L, 1, samples);
    record("seminorm", report.all_pass(), mc::to_json(report));
  });

  // Growth verdicts are informational.
  json growth = json::array();
  for (std::size_t i = 0; i < m && L.max_degree() >= 2; ++i) {
    try {
      const auto g = mc::growth_profile(L, mc::Polynomial::variable(m, i), opt.growth);
      growth.push_back({{"poly", mc::to_text(g.poly)},
                        {"verdict", mc::to_string(g.verdict)},
                        {"p_L_estimate", g.p_L_estimate}});
    } catch (const mc::Error& e) {
      growth.push_back({{"poly", "X" + std::to_string(i + 1)}, {"error", e.what()}});
    }
  }
  out["growth_summary"] = growth;
  return out;
}

int cmd_check(const Options& opt) {
  const auto L = read_moments(opt.input);
  bool pass = false;
  json report = check_battery(L, opt, pass);
  report["pass"] = pass;
  emit(opt, dump(report));
  return pass ? kExitOk : kExitChecksFailed;
}

int cmd_growth(const Options& opt) {
  const auto L = read_moments(opt.input);
  const auto a = mc::parse_polynomial(opt.poly, L.num_vars());
  const auto profile = mc::growth_profile(L, a, opt.growth);
  if (opt.format == "csv") {
    std::vector<std::pair<unsigned, double>> ladder;
    for (const auto& e : profile.ladder) ladder.emplace_back(e.index, e.value);
    std::string text = "# ladder p_d\n" + mc::to_csv(ladder) + "# roots r_n\n" + mc::to_csv(profile.roots);
    emit(opt, text);
  } else {
    json j = mc::to_json(profile);
    const double carleman = mc::carleman_partial(L, a);
    j["carleman_partial"] = std::isfinite(carleman) ? json(carleman) : json("inf");
    emit(opt, dump(j));
  }
  return kExitOk;
}

int cmd_box(const Options& opt) {
  const auto L = read_moments(opt.input);
  emit(opt, dump(mc::to_json(mc::support_box(L, opt.slack, opt.growth))));
  return kExitOk;
}

int cmd_mass(const Options& opt) {
  const auto L = read_moments(opt.input);
  if (opt.alpha.empty()) throw mc::Error(mc::ErrorKind::Validation, "mass needs --alpha");
  const auto est = mc::atom_mass(L, mc::parse_point(opt.alpha), opt.d, mass_options(opt));
  if (opt.format == "csv") {
    emit(opt, mc::to_csv(est.upper_bounds, "n,bound"));
  } else {
    emit(opt, dump(mc::to_json(est)));
  }
  return kExitOk;
}

std::vector<mc::Polynomial> feasible_tests(const mc::MomentSequence& L, unsigned d) {
  std::vector<mc::Polynomial> out;
  for (auto& p : mc::default_tests(L.num_vars())) {
    if ((1UL << d) * p.degree() <= L.max_degree()) out.push_back(std::move(p));
  }
  return out;
}

int cmd_finite(const Options& opt) {
  const auto L = read_moments(opt.input);
  const auto report = mc::finite_support_check(L, opt.d, feasible_tests(L, opt.d),
                                               parse_candidates(opt.candidates), mass_options(opt));
  emit(opt, dump(mc::to_json(report)));
  return kExitOk;
}

int cmd_recover(const Options& opt) {
  const auto L = read_moments(opt.input);
  mc::RecoveryResult result;
  if (opt.method == "prony") {
    result = mc::prony_recover(L);
  } else if (opt.method == "grid") {
    const auto box = mc::support_box(L, opt.slack, opt.growth);
    result = mc::grid_scan(L, box, opt.resolution, opt.d, opt.floor, mass_options(opt));
  } else {
    throw mc::Error(mc::ErrorKind::Validation, "unknown method '" + opt.method + "'");
  }
  emit(opt, dump(mc::to_json(result)));
  return kExitOk;
}

template <typename F>
json attempt(F&& f) {
  try {
    return f();
  } catch (const mc::Error& e) {
    return {{"error", mc::to_string(e.kind())}, {"message", e.what()}};
  }
}

int cmd_report(const Options& opt) {
  const auto L = read_moments(opt.input);
  const std::size_t m = L.num_vars();
  json report;
  report["input"] = {{"num_vars", m},
                     {"max_degree", L.max_degree()},
                     {"provenance", L.provenance().label()}};
  report["positivity_scope"] = "truncated: PSD up to the truncation degree is necessary, not sufficient";
  bool pass = false;
  report["checks"] = attempt([&] { return check_battery(L, opt, pass); });
  json growth = json::array();
  for (std::size_t i = 0; i < m; ++i) {
    growth.push_back(attempt(
        [&] { return mc::to_json(mc::growth_profile(L, mc::Polynomial::variable(m, i), opt.growth)); }));
  }
  report["growth"] = growth;
  report["box"] = attempt([&] { return mc::to_json(mc::support_box(L, opt.slack, opt.growth)); });
  report["ql_certificates"] = attempt([&] {
    json certs = json::array();
    const unsigned t = (L.max_degree() - 1) / 2 > 4 ? 4 : (L.max_degree() - 1) / 2;
    for (std::size_t i = 0; i < m; ++i) {
      certs.push_back(mc::to_json(
          mc::ql_certificates(L, mc::Polynomial::variable(m, i), t, opt.slack, opt.growth)));
    }
    return certs;
  });
  if (m == 1) {
    report["recovery"] = attempt([&] { return mc::to_json(mc::prony_recover(L)); });
    report["finite"] = attempt([&] {
      std::vector<mc::Point> candidates;
      try {
        for (const auto& a : mc::prony_recover(L).atoms) {
          candidates.push_back({mc::dyadic(a.point[0], 40)});
        }
      } catch (const mc::Error&) {
      }
      return mc::to_json(mc::finite_support_check(L, opt.d, feasible_tests(L, opt.d), candidates,
                                                  mass_options(opt)));
    });
  } else {
    report["finite"] = attempt([&] {
      return mc::to_json(mc::finite_support_check(L, opt.d, feasible_tests(L, opt.d), {},
                                                  mass_options(opt)));
    });
  }
  emit(opt, dump(report));
  return kExitOk;
}

void add_input(CLI::App* cmd, Options& opt) {
  cmd->add_option("input", opt.input, "moment file (JSON), '-' for stdin");
  cmd->add_option("-o,--output", opt.output, "output file (default stdout)");
}

void add_growth_flags(CLI::App* cmd, Options& opt) {
  cmd->add_option("--bounded-increment", opt.growth.bounded_increment, "relative ladder increment below which the ladder counts as settled");
  cmd->add_option("--contraction", opt.growth.contraction, "required shrink factor of successive log-increments");
  cmd->add_option("--divergence-slope", opt.growth.divergence_slope, "log-log slope of r_n that counts as diverging");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Analysis of truncated moment functionals: growth, support, atoms"};
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;
  app.add_option("--seed", opt.seed, "seed for every random draw")->capture_default_str();

  auto* gen = app.add_subcommand("gen", "write a moment file from atoms or a closed-form family");
  gen->add_option("--atoms", opt.atoms, "atoms as \"(x:w),(x:w)\" or \"(x,y:w),...\"");
  gen->add_option("--family", opt.family, "uniform01 | gaussian | diracN");
  gen->add_option("--terms", opt.terms, "number of atoms for the dirac family");
  gen->add_option("--degree", opt.degree, "truncation degree D")->required();
  gen->add_option("-o,--output", opt.output, "output file (default stdout)");

  auto* check = app.add_subcommand("check", "positivity, CBS, monotonicity, kernel and seminorm batteries");
  add_input(check, opt);
  check->add_option("--samples", opt.samples, "random CBS pairs")->capture_default_str();
  add_growth_flags(check, opt);

  auto* growth = app.add_subcommand("growth", "seminorm ladder and growth verdict for a polynomial");
  add_input(growth, opt);
  growth->add_option("--poly", opt.poly, "polynomial, e.g. \"X1^2 - 1/2\"")->capture_default_str();
  growth->add_option("--format", opt.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  add_growth_flags(growth, opt);

  auto* box = app.add_subcommand("box", "generator box of the support");
  add_input(box, opt);
  box->add_option("--slack", opt.slack, "additive widening")->capture_default_str();
  add_growth_flags(box, opt);

  auto* mass = app.add_subcommand("mass", "upper bounds on the mass of a singleton");
  add_input(mass, opt);
  mass->add_option("--alpha", opt.alpha, "candidate point, comma separated")->required();
  mass->add_option("--d", opt.d, "ladder level")->capture_default_str();
  mass->add_option("--budget", opt.budget, "largest bump index")->capture_default_str();
  mass->add_option("--epsilon", opt.epsilon, "bump sharpness in (0, 1]")->capture_default_str();
  mass->add_option("--candidates", opt.candidates, "other candidate atoms \"(x,y),(x,y)\"");
  mass->add_option("--slack", opt.slack, "box slack for the outside-box tag")->capture_default_str();
  mass->add_option("--format", opt.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));

  auto* finite = app.add_subcommand("finite", "finite-support criterion with rank flatness");
  add_input(finite, opt);
  finite->add_option("--d", opt.d, "ladder level")->capture_default_str();
  finite->add_option("--candidates", opt.candidates, "bump candidates \"(x),(x)\"");
  finite->add_option("--budget", opt.budget, "largest bump index")->capture_default_str();

  auto* recover = app.add_subcommand("recover", "independent atom recovery");
  add_input(recover, opt);
  recover->add_option("--method", opt.method, "prony | grid")->check(CLI::IsMember({"prony", "grid"}));
  recover->add_option("--resolution", opt.resolution, "grid nodes per axis")->capture_default_str();
  recover->add_option("--floor", opt.floor, "mass floor for grid clusters")->capture_default_str();
  recover->add_option("--d", opt.d, "ladder level")->capture_default_str();
  recover->add_option("--slack", opt.slack, "box slack")->capture_default_str();
  add_growth_flags(recover, opt);

  auto* report = app.add_subcommand("report", "consolidated JSON report with defaults");
  add_input(report, opt);
  add_growth_flags(report, opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*gen) return cmd_gen(opt);
    if (*check) return cmd_check(opt);
    if (*growth) return cmd_growth(opt);
    if (*box) return cmd_box(opt);
    if (*mass) return cmd_mass(opt);
    if (*finite) return cmd_finite(opt);
    if (*recover) return cmd_recover(opt);
    if (*report) return cmd_report(opt);
  } catch (const mc::Error& e) {
    std::cerr << "momcert: " << mc::to_string(e.kind()) << ": " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "momcert: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitValidation;
}
