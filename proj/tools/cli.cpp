#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "betalab/errors.hpp"
#include "betalab/geometry.hpp"
#include "betalab/surfaces.hpp"
#include "betalab/symbol.hpp"
#include "betalab/variation.hpp"

namespace betalab::cli {

using json = nlohmann::ordered_json;

namespace {

const std::vector<std::string> kSubcommands{"solve", "sweep", "verify", "variation", "symbol"};

void validate(const RunConfig& cfg) {
  auto finite = [](double v) { return std::isfinite(v); };
  auto check_beta = [](double b) {
    if (!(b >= 0.0) || !std::isfinite(b)) throw UsageError("beta must be finite and >= 0");
  };
  check_beta(cfg.beta);
  for (double b : cfg.betas) check_beta(b);
  for (std::size_t k = 1; k < cfg.betas.size(); ++k)
    if (!(cfg.betas[k] > cfg.betas[k - 1])) throw UsageError("--betas must be strictly increasing");
  if (!finite(cfg.c1) || !finite(cfg.c2)) throw UsageError("c1, c2 must be finite");
  if (!(cfg.eps > 0.0) || !finite(cfg.eps)) throw UsageError("--eps must be positive");
  if (!(cfg.r_max > cfg.eps) || !finite(cfg.r_max)) throw UsageError("--r-max must exceed --eps");
  if (cfg.samples && *cfg.samples < (cfg.subcommand == "symbol" ? 1 : 9))
    throw UsageError("--samples too small");
  if (!finite(cfg.f0) || !finite(cfg.g0)) throw UsageError("f0, g0 must be finite");
  if (cfg.fields < 1) throw UsageError("--fields must be >= 1");
}

std::vector<double> betas_or(const RunConfig& cfg, std::vector<double> fallback) {
  return cfg.betas.empty() ? fallback : cfg.betas;
}

RotationalProfile profile_for(const RunConfig& cfg, double beta) {
  RotationalProfile p = solve_profile(beta, cfg.c1, cfg.c2, cfg.eps, cfg.r_max, cfg.grid_nodes(),
                                      cfg.f0, cfg.g0, cfg.tol);
  if (cfg.perturb_fp)
    for (double& v : p.fp) v *= 1.01;
  return p;
}

// Opens --output or falls back to `out`.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw UsageError("cannot open output file " + path);
      os_ = file_.get();
    }
  }
  std::ostream& operator*() { return *os_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_;
};

std::ofstream open_file(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open output file " + path);
  return f;
}

std::string beta_tag(double b) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", b);
  return buf;
}

json check(const std::string& name, double value, double tolerance, bool passed,
           const char* relation = "<=") {
  json j;
  j["name"] = name;
  j["value"] = value;
  j["relation"] = relation;
  j["tolerance"] = tolerance;
  j["passed"] = passed;
  return j;
}

bool all_passed(const json& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const json& c) { return c["passed"].get<bool>(); });
}

json config_json(const RunConfig& cfg, const std::vector<double>& betas) {
  json c;
  c["betas"] = betas;
  c["c1"] = cfg.c1;
  c["c2"] = cfg.c2;
  c["eps"] = cfg.eps;
  c["r_max"] = cfg.r_max;
  c["samples"] = cfg.grid_nodes();
  c["f0"] = cfg.f0;
  c["g0"] = cfg.g0;
  c["seed"] = cfg.seed;
  c["perturb_fp"] = cfg.perturb_fp;
  return c;
}

json invariants_json(const RotationalProfile& p, const Tolerances& tol) {
  const ProfileInvariants inv = p.invariants(tol);
  json checks = json::array();
  checks.push_back(check("first_integral", inv.max_first_integral_rel, tol.first_integral_rel,
                         inv.max_first_integral_rel <= tol.first_integral_rel));
  checks.push_back(check("slope_proportionality", inv.max_proportionality, 1e-12,
                         inv.max_proportionality <= 1e-12));
  checks.push_back(check("cos_alpha_consistency", inv.max_cos_error, 1e-12,
                         inv.max_cos_error <= 1e-12 && inv.cos_in_range));
  return checks;
}

// max |P| over interior nodes at three angles.
double el_closure(const RotationalProfile& p, const Tolerances& tol) {
  const Immersion imm = profile_immersion(p, tol);
  double worst = 0.0;
  for (double theta : {0.3, 2.0, 4.5})
    for (std::size_t i = 1; i + 1 < p.size(); ++i)
      worst = std::max(worst, el_residual(imm, Vec2(p.r[i], theta), tol).operator_form.norm());
  return worst;
}

// Closed-form families: beta = 1 (logarithm) and beta = 0 (catenoid).
std::optional<json> closed_form(const RotationalProfile& p, const Tolerances& tol) {
  const double C = std::hypot(p.c1, p.c2);
  double err = 0.0;
  double limit;
  std::string name;
  if (p.beta == 1.0) {
    name = "closed_form_log";
    limit = tol.closed_form_log;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double L = std::log(p.r[i] / p.eps);
      err = std::max({err, std::abs(p.f[i] - (p.f0 + p.c1 * L)), std::abs(p.g[i] - (p.g0 + p.c2 * L))});
    }
  } else if (p.beta == 0.0 && C > 0.0) {
    name = "closed_form_catenoid";
    limit = tol.closed_form_catenoid;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double L = std::acosh(p.r[i] / C) - std::acosh(p.eps / C);
      err = std::max({err, std::abs(p.f[i] - (p.f0 + p.c1 * L)), std::abs(p.g[i] - (p.g0 + p.c2 * L))});
    }
  } else {
    return std::nullopt;
  }
  return check(name, err, limit, err <= limit);
}

json probes_json(const std::vector<AsymptoticProbe>& probes) {
  json a = json::array();
  for (const auto& pr : probes) {
    json j;
    j["r"] = pr.r;
    j["fp"] = pr.fp;
    j["truncation"] = pr.truncation;
    j["remainder"] = pr.remainder;
    j["rel_error"] = pr.rel_error;
    a.push_back(j);
  }
  return a;
}

Immersion scaled_slope_immersion(const RotationalProfile& p, double factor, const Tolerances& tol) {
  const double beta = p.beta, c1 = p.c1, c2 = p.c2, C = std::hypot(c1, c2);
  auto shared = std::make_shared<const RotationalProfile>(p);
  auto component = [shared, beta, c1, c2, C, factor, tol](bool first) -> RadialFunction {
    return [=](double r) {
      const Slope sl = solve_slope(r, beta, c1, c2, tol);
      const double drho = C > 0.0 ? slope_derivative(r, beta, sl.rho) / C : 0.0;
      const auto& rs = shared->r;
      const auto& us = first ? shared->f : shared->g;
      const auto it = std::clamp<std::ptrdiff_t>(std::upper_bound(rs.begin(), rs.end(), r) - rs.begin(), 1,
                                                 static_cast<std::ptrdiff_t>(rs.size()) - 1);
      const auto k = static_cast<std::size_t>(it);
      const double t = (r - rs[k - 1]) / (rs[k] - rs[k - 1]);
      const double u = us[k - 1] + t * (us[k] - us[k - 1]);
      return std::array<double, 3>{factor * u, factor * (first ? sl.fp : sl.gp),
                                   factor * (first ? c1 : c2) * drho};
    };
  };
  Domain d{p.r.front(), p.r.back(), 0.0, 2.0 * std::numbers::pi, true};
  return rotational_surface(component(true), component(false), d, beta);
}

}  // namespace

std::optional<RunConfig> parse_args(const std::vector<std::string>& args, std::ostream& out) {
  RunConfig cfg;
  CLI::App app{"Rotational beta-symplectic critical surfaces: solve, sweep, verify, variation, symbol"};
  app.name("beta_lab");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.set_config("--config", "", "key=value file; command-line flags take precedence");
  app.add_option("subcommand", cfg.subcommand, "solve | sweep | verify | variation | symbol")
      ->required()
      ->check(CLI::IsMember(kSubcommands));
  app.add_option("--beta", cfg.beta, "beta (default 2)");
  app.add_option("--betas", cfg.betas, "comma-separated increasing beta list")->delimiter(',');
  app.add_option("--c1", cfg.c1, "first integral c1");
  app.add_option("--c2", cfg.c2, "first integral c2");
  app.add_option("--eps", cfg.eps, "inner radius");
  app.add_option("--r-max", cfg.r_max, "outer radius");
  app.add_option("--samples", cfg.samples,
                 "grid nodes (default 4097); G samples per point for `symbol` (default 100)");
  app.add_option("--f0", cfg.f0, "f(eps)");
  app.add_option("--g0", cfg.g0, "g(eps)");
  app.add_option("-o,--output", cfg.output, "output path (sweep: file stem)");
  app.add_option("--format", cfg.format, "csv | svg | json")->check(CLI::IsMember({"csv", "svg", "json"}));
  app.add_option("--seed", cfg.seed, "random seed")->envname("BETA_LAB_SEED");
  std::vector<std::string> tol_overrides;
  app.add_option("--tol", tol_overrides, "tolerance override name=value (repeatable)");
  app.add_flag("--perturb-fp", cfg.perturb_fp, "negative control: scale f' by 1.01");
  app.add_option("--fields", cfg.fields, "number of random fields for `variation`");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }
  for (const std::string& kv : tol_overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw UsageError("--tol expects name=value, got " + kv);
    double v;
    try {
      std::size_t used = 0;
      v = std::stod(kv.substr(eq + 1), &used);
      if (used != kv.size() - eq - 1) throw std::invalid_argument(kv);
    } catch (const std::exception&) {
      throw UsageError("bad tolerance value in " + kv);
    }
    if (!cfg.tol.set(kv.substr(0, eq), v)) throw UsageError("unknown tolerance " + kv.substr(0, eq));
  }
  validate(cfg);
  return cfg;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    const auto cfg = parse_args(args, out);
    if (!cfg) return kPass;
    if (cfg->subcommand == "solve") return cmd_solve(*cfg, out);
    if (cfg->subcommand == "sweep") return cmd_sweep(*cfg, out);
    if (cfg->subcommand == "verify") return cmd_verify(*cfg, out);
    if (cfg->subcommand == "variation") return cmd_variation(*cfg, out);
    return cmd_symbol(*cfg, out);
  } catch (const UsageError& e) {
    err << "UsageError: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << e.name() << ": " << e.what() << '\n';
    return kNumerical;
  }
}

// --- solve ------------------------------------------------------------------

int cmd_solve(const RunConfig& cfg, std::ostream& out) {
  const RotationalProfile p = profile_for(cfg, cfg.beta);
  Sink sink(cfg.output, out);
  if (cfg.format == "csv") {
    write_profile_csv(*sink, p);
  } else if (cfg.format == "svg") {
    write_svg(*sink, {Curve{"\xCE\xB2 = " + beta_tag(p.beta), p.r, p.f}}, cfg.r_max / cfg.eps > 100.0,
              "Rotational profile f(r)");
  } else {
    json j;
    j["command"] = "solve";
    j["config"] = config_json(cfg, {cfg.beta});
    j["checks"] = invariants_json(p, cfg.tol);
    j["passed"] = all_passed(j["checks"]);
    j["r"] = p.r;
    j["fp"] = p.fp;
    j["gp"] = p.gp;
    j["f"] = p.f;
    j["g"] = p.g;
    j["cos_alpha"] = p.cos_alpha;
    *sink << j.dump(2) << '\n';
  }
  return p.invariants(cfg.tol).passed ? kPass : kCheckFailed;
}

// --- sweep ------------------------------------------------------------------

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  const std::vector<double> betas = betas_or(cfg, {0.5, 1.0, 2.0, 5.0});
  SweepResult sweep = beta_sweep(betas, cfg.c1, cfg.c2, cfg.eps, cfg.r_max, cfg.grid_nodes(), cfg.f0,
                                 cfg.g0, cfg.tol);
  if (cfg.perturb_fp)
    for (auto& p : sweep.profiles)
      for (double& v : p.fp) v *= 1.01;
  const std::string stem = cfg.output.empty() ? "sweep" : cfg.output;

  json report;
  report["command"] = "sweep";
  report["config"] = config_json(cfg, betas);
  json files = json::array();
  json profiles = json::array();
  std::vector<Curve> curves;
  bool ok = true;
  for (const auto& p : sweep.profiles) {
    const std::string path = stem + "-beta-" + beta_tag(p.beta) + ".csv";
    auto f = open_file(path);
    write_profile_csv(f, p);
    files.push_back(path);
    json entry;
    entry["beta"] = p.beta;
    entry["checks"] = invariants_json(p, cfg.tol);
    ok = ok && all_passed(entry["checks"]);
    profiles.push_back(entry);
    curves.push_back(Curve{"\xCE\xB2 = " + beta_tag(p.beta), p.r, p.f});
  }

  // Catenoid reference (the beta -> 0 limit), drawn where it exists: r > C.
  const double C = std::hypot(cfg.c1, cfg.c2);
  if (betas.front() < 0.5 && C > 0.0) {
    RotationalProfile cat;
    cat.beta = 0.0;
    cat.c1 = cfg.c1;
    cat.c2 = cfg.c2;
    const auto& grid = sweep.profiles.front().r;
    double r_start = -1.0;
    for (double r : grid) {
      if (!(r > C * (1.0 + 1e-9))) continue;
      if (r_start < 0.0) r_start = r;
      const double L = std::acosh(r / C) - std::acosh(r_start / C);
      const double s = std::sqrt((r - C) * (r + C));
      cat.r.push_back(r);
      cat.fp.push_back(cfg.c1 / s);
      cat.gp.push_back(cfg.c2 / s);
      cat.f.push_back(cfg.f0 + cfg.c1 * L);
      cat.g.push_back(cfg.g0 + cfg.c2 * L);
      cat.cos_alpha.push_back(s / r);
    }
    if (!cat.r.empty()) {
      cat.eps = cat.r.front();
      cat.f0 = cfg.f0;
      cat.g0 = cfg.g0;
      const std::string path = stem + "-catenoid.csv";
      auto f = open_file(path);
      write_profile_csv(f, cat);
      files.push_back(path);
      curves.push_back(Curve{"catenoid", cat.r, cat.f, true});
      report["catenoid_reference"] = {{"neck_radius", C}, {"anchor_r", cat.eps}};
    }
  }
  {
    const std::string path = stem + ".svg";
    auto f = open_file(path);
    write_svg(f, curves, cfg.r_max / cfg.eps > 100.0, "Comparison of profiles across \xCE\xB2");
    files.push_back(path);
  }
  report["profiles"] = profiles;
  report["continuity"] = sweep.continuity;
  report["max_continuity"] = sweep.max_continuity;
  report["passed"] = ok;
  report["files"] = files;
  const std::string path = stem + ".json";
  auto f = open_file(path);
  f << report.dump(2) << '\n';
  out << report.dump(2) << '\n';
  return ok ? kPass : kCheckFailed;
}

// --- verify -----------------------------------------------------------------

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  const std::vector<double> betas = betas_or(cfg, {cfg.beta});
  const Tolerances& tol = cfg.tol;
  json report;
  report["command"] = "verify";
  report["config"] = config_json(cfg, betas);
  bool ok = true;
  json profiles = json::array();
  for (double beta : betas) {
    const RotationalProfile p = profile_for(cfg, beta);
    json entry;
    entry["beta"] = beta;
    json checks = invariants_json(p, tol);
    json skipped = json::array();

    const double P = el_closure(p, tol);
    checks.push_back(check("el_closure", P, tol.el_closure, P < tol.el_closure, "<"));

    if (auto cf = closed_form(p, tol)) checks.push_back(*cf);

    if (p.c1 == 1.0 && p.c2 == 1.0) {
      const AsymptoticReport a = verify_asymptotics(p, false, tol);
      if (a.far_applicable) {
        json c = check("far_asymptotics", std::abs(a.far.back().remainder), a.far_threshold, a.far_passed, "<");
        c["probes"] = probes_json(a.far);
        c["profile_consistency"] = a.profile_far_consistency;
        checks.push_back(c);
      } else {
        skipped.push_back("far_asymptotics (needs r_max >= 1e3)");
      }
      if (a.near_applicable) {
        json c = check("near_asymptotics", a.near.front().rel_error, a.near_threshold, a.near_passed, "<");
        c["probes"] = probes_json(a.near);
        c["near_coefficient"] = a.near_coefficient;
        c["fitted_near_coefficient"] = a.fitted_near_coefficient;
        checks.push_back(c);
      } else {
        skipped.push_back("near_asymptotics (needs eps <= 1e-3 and beta > 0)");
      }
    } else {
      skipped.push_back("asymptotics (normalized for c1 = c2 = 1)");
    }

    const double lo = std::max(cfg.eps, 1.0), hi = std::min(cfg.r_max, 10.0);
    if (hi > lo) {
      const RotationalProfile q =
          solve_profile(beta, cfg.c1, cfg.c2, lo, hi, cfg.grid_nodes(), cfg.f0, cfg.g0, tol);
      const PdeReport pde = angle_pde_check(q, tol);
      json c = check("pde_cos_identity", pde.base.cos_identity, pde.threshold,
                     pde.base.cos_identity < pde.threshold, "<");
      c["interval"] = {lo, hi};
      checks.push_back(c);
      checks.push_back(check("pde_inv_cos_identity", pde.base.inv_cos_identity, pde.threshold,
                             pde.base.inv_cos_identity < pde.threshold, "<"));
      checks.push_back(check("pde_cos_order", pde.cos_ratio, pde.ratio_threshold,
                             pde.cos_ratio >= pde.ratio_threshold, ">="));
      checks.push_back(check("pde_inv_cos_order", pde.inv_cos_ratio, pde.ratio_threshold,
                             pde.inv_cos_ratio >= pde.ratio_threshold, ">="));
    } else {
      skipped.push_back("pde_identities (needs overlap with [1, 10])");
    }
    entry["checks"] = checks;
    entry["skipped"] = skipped;
    entry["passed"] = all_passed(checks);
    ok = ok && entry["passed"].get<bool>();
    profiles.push_back(entry);
  }
  report["profiles"] = profiles;

  {
    const LimitBoundsReport lb =
        limit_bounds_check({0.001, 0.01, 0.1, 10.0, 100.0}, 2.0, 5.0, 0.5, 50.0, cfg.grid_nodes(), 1.0, false, tol);
    json j;
    j["interval"] = {lb.a, lb.b};
    j["r0"] = lb.r0;
    json upper = json::array();
    for (const auto& u : lb.upper)
      upper.push_back({{"beta", u.beta}, {"max_ratio", u.max_ratio}, {"worst_r", u.worst_r}, {"passed", u.passed}});
    json cat = json::array();
    for (const auto& c : lb.catenoid)
      cat.push_back({{"beta", c.beta}, {"sup_distance", c.sup_distance}, {"max_fp2", c.max_fp2},
                     {"fp_at_r0", c.fp_at_r0}});
    j["upper"] = upper;
    j["catenoid"] = cat;
    double max_ratio = 0.0, max_fp2 = 0.0;
    for (const auto& u : lb.upper) max_ratio = std::max(max_ratio, u.max_ratio);
    for (const auto& c : lb.catenoid) max_fp2 = std::max(max_fp2, c.max_fp2);
    json checks = json::array();
    checks.push_back(check("large_beta_bound", max_ratio, 1.0, lb.upper_passed));
    checks.push_back(check("catenoid_slope_bound", max_fp2, lb.fp2_bound, lb.fp2_bounded));
    json d = check("catenoid_distance_decreasing", lb.catenoid.empty() ? 0.0 : lb.catenoid.back().sup_distance,
                   0.0, lb.distance_decreasing, "decreasing");
    checks.push_back(d);
    checks.push_back(check("divergence_at_r0", lb.catenoid.empty() ? 0.0 : lb.catenoid.back().fp_at_r0, 0.0,
                           lb.divergence_increasing, "increasing"));
    j["checks"] = checks;
    j["passed"] = lb.passed();
    ok = ok && lb.passed();
    report["limit_bounds"] = j;
  }
  report["tolerances"] = tol.entries();
  report["passed"] = ok;
  Sink sink(cfg.output, out);
  *sink << report.dump(2) << '\n';
  return ok ? kPass : kCheckFailed;
}

// --- variation --------------------------------------------------------------

int cmd_variation(const RunConfig& cfg, std::ostream& out) {
  const Tolerances& tol = cfg.tol;
  const RotationalProfile p =
      solve_profile(cfg.beta, cfg.c1, cfg.c2, cfg.eps, cfg.r_max, cfg.grid_nodes(), cfg.f0, cfg.g0, tol);
  const Immersion imm = cfg.perturb_fp ? scaled_slope_immersion(p, 1.01, tol) : profile_immersion(p, tol);

  // Supports are drawn (log-uniformly) in a central window of the profile.
  double lo = std::max(cfg.eps, 0.25), hi = std::min(cfg.r_max, 4.0);
  if (!(hi > 1.5 * lo)) {
    lo = cfg.eps;
    hi = cfg.r_max;
  }
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const QuadratureSpec quad;

  json fields = json::array();
  bool ok = true;
  for (int k = 0; k < cfg.fields; ++k) {
    const double span = std::log(hi / lo);
    const double a = lo * std::exp(span * (0.05 + 0.45 * uni(rng)));
    const double b = a * std::exp(std::log(hi / a) * (0.3 + 0.65 * uni(rng)));
    const Domain support{a, b, 0.0, 2.0 * std::numbers::pi, true};
    const std::uint64_t field_seed = rng();
    const VariationField X = random_normal_field(imm, support, field_seed);
    const VariationReport rep = variation_report(imm, X, quad, 1e-4, 1e-3, tol);

    json entry;
    entry["field"] = k;
    entry["support"] = {a, b};
    entry["L"] = rep.L_value;
    entry["dL_formula"] = rep.dL_formula;
    entry["dL_prestokes"] = rep.dL_prestokes;
    entry["dL_fd"] = rep.dL_fd;
    entry["field_norm"] = rep.field_norm;
    entry["criticality_residual"] = rep.criticality;
    json checks = json::array();
    const double route_tol = std::max(tol.first_variation_abs, tol.first_variation_rel * std::abs(rep.dL_fd));
    const double route_err = std::max(rep.first_formula_vs_prestokes(), rep.first_formula_vs_fd());
    checks.push_back(check("first_variation_three_routes", route_err, route_tol, route_err <= route_tol));
    const double crit_tol = tol.first_variation_abs * rep.field_norm;
    checks.push_back(check("first_variation_vanishes", std::abs(rep.dL_fd), crit_tol,
                           std::abs(rep.dL_fd) <= crit_tol));
    entry["d2L_fd"] = rep.d2L_fd;
    if (rep.d2L_formula) {
      entry["d2L_formula"] = *rep.d2L_formula;
      entry["d2L_rotated"] = *rep.d2L_rotated;
      entry["d2L_pair"] = *rep.d2L_pair;
      checks.push_back(check("second_variation_vs_fd", *rep.second_formula_vs_fd(), tol.second_variation_rel,
                             *rep.second_formula_vs_fd() <= tol.second_variation_rel));
      checks.push_back(check("pair_identity", *rep.pair_vs_sum(), tol.pair_rel, *rep.pair_vs_sum() <= tol.pair_rel));
    } else {
      entry["second_variation"] = "formula routes gated: criticality residual above gate";
    }
    if (k < 3) {
      VariationProblem P(imm, support, quad, tol);
      const auto sx = P.sample(X);
      const auto sy = P.sample(random_normal_field(imm, support, field_seed ^ 0x5bd1e995ULL));
      const double bxy = P.bilinear_form(sx, sy), byx = P.bilinear_form(sy, sx);
      checks.push_back(check("bilinear_symmetry", std::abs(bxy - byx), tol.bilinear_symmetry,
                             std::abs(bxy - byx) <= tol.bilinear_symmetry));
    }
    entry["checks"] = checks;
    entry["passed"] = all_passed(checks);
    ok = ok && entry["passed"].get<bool>();
    fields.push_back(entry);
  }
  const QuadratureConvergence qc = quadrature_convergence(
      imm.with_domain(Domain{lo, hi, 0.0, 2.0 * std::numbers::pi, true}), QuadratureSpec{33, 16}, tol);

  json report;
  report["command"] = "variation";
  report["config"] = config_json(cfg, {cfg.beta});
  report["surface"] = cfg.perturb_fp ? "profile with f' scaled by 1.01 (not critical)" : "solved profile";
  report["fields"] = fields;
  json q = check("quadrature_order", qc.ratio, 4.0, qc.ratio >= 4.0, ">=");
  q["values"] = qc.values;
  report["quadrature_convergence"] = q;
  ok = ok && q["passed"].get<bool>();
  report["tolerances"] = tol.entries();
  report["passed"] = ok;
  Sink sink(cfg.output, out);
  *sink << report.dump(2) << '\n';
  return ok ? kPass : kCheckFailed;
}

// --- symbol -----------------------------------------------------------------

int cmd_symbol(const RunConfig& cfg, std::ostream& out) {
  const Tolerances& tol = cfg.tol;
  const double beta = cfg.beta;
  // --samples counts G directions here; the profile keeps the default grid.
  const RotationalProfile p =
      solve_profile(beta, cfg.c1, cfg.c2, cfg.eps, cfg.r_max, 4097, cfg.f0, cfg.g0, tol);
  const Immersion imm = profile_immersion(p, tol);
  const int samples = cfg.samples.value_or(100);
  constexpr int kPoints = 8;
  const bool log_r = cfg.r_max / cfg.eps > 100.0;

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  json points = json::array();
  double max_fact = 0.0, min_det = std::numeric_limits<double>::infinity(), max_quad = 0.0, max_tangent = 0.0;
  double min_det_nondeg = std::numeric_limits<double>::infinity();
  for (int k = 0; k < kPoints; ++k) {
    const double t = (k + 0.5) / kPoints;
    const double r = log_r ? cfg.eps * std::pow(cfg.r_max / cfg.eps, t) : cfg.eps + t * (cfg.r_max - cfg.eps);
    const Vec2 x(r, 0.7 * k);
    const SurfaceGeometry geo = evaluate_geometry(imm, x, {}, tol);
    const EllipticityReport e = ellipticity_check(geo, beta, samples, cfg.seed + static_cast<std::uint64_t>(k), tol);
    max_fact = std::max(max_fact, e.max_factorization_error);
    min_det = std::min(min_det, e.min_det);
    min_det_nondeg = std::min(min_det_nondeg, e.min_det_nondegenerate);

    for (int s = 0; s < samples; ++s) {
      Vec4 G;
      for (int a = 0; a < 4; ++a) G[a] = normal(rng);
      G.normalize();
      const Vec2 xi(normal(rng), normal(rng));
      const SymbolData d = symbol_matrix(geo, beta, G);
      const double q = symbol_quadratic(geo, beta, G, xi);
      const double via_O = xi.dot(d.O * xi);
      max_quad = std::max(max_quad, std::abs(q - via_O) / std::max(1.0, std::abs(q)));
      const Vec4 T = (normal(rng) * geo.u1 + normal(rng) * geo.u2).normalized();
      max_tangent = std::max(max_tangent, std::abs(symbol_matrix(geo, beta, T).det_direct));
    }
    json pt;
    pt["r"] = r;
    pt["theta"] = x.y();
    pt["cos_alpha"] = geo.cos_alpha;
    pt["min_det"] = e.min_det;
    pt["min_det_nondegenerate"] = std::isfinite(e.min_det_nondegenerate) ? json(e.min_det_nondegenerate) : json(nullptr);
    pt["degenerate_samples"] = e.degenerate_samples;
    pt["max_factorization_error"] = e.max_factorization_error;
    pt["passed"] = e.passed;
    points.push_back(pt);
  }
  json checks = json::array();
  checks.push_back(check("det_factorization", max_fact, tol.symbol_rel, max_fact <= tol.symbol_rel));
  checks.push_back(check("det_nonnegative", min_det, tol.det_floor, min_det >= tol.det_floor, ">="));
  checks.push_back(check("det_positive_off_degenerate", min_det_nondeg, 0.0, min_det_nondeg > 0.0, ">"));
  checks.push_back(check("quadratic_form_consistency", max_quad, tol.symbol_rel, max_quad <= tol.symbol_rel));
  checks.push_back(check("tangent_degeneracy", max_tangent, 1e-12, max_tangent < 1e-12, "<"));

  json report;
  report["command"] = "symbol";
  report["config"] = config_json(cfg, {beta});
  report["samples_per_point"] = samples;
  report["points"] = points;
  report["checks"] = checks;
  report["tolerances"] = tol.entries();
  report["passed"] = all_passed(checks);
  Sink sink(cfg.output, out);
  *sink << report.dump(2) << '\n';
  return report["passed"].get<bool>() ? kPass : kCheckFailed;
}

}  // namespace betalab::cli
