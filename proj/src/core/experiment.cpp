#include "experiment.hpp"

#include "capacity.hpp"
#include "errors.hpp"
#include "harnack.hpp"
#include "montecarlo.hpp"
#include "report.hpp"
#include "sampling.hpp"

#include <boost/math/distributions/beta.hpp>

#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

namespace hl {

Json number(double x) {
  if (std::isnan(x))
    return "nan";
  if (std::isinf(x))
    return x > 0 ? "inf" : "-inf";
  return x;
}

Json point_json(const Point &p) {
  Json a = Json::array();
  for (double v : p.coords())
    a.push_back(number(v));
  return a;
}

namespace {

std::string fmt(double x) {
  std::ostringstream s;
  s << std::setprecision(17) << x;
  return s.str();
}

Json model_json(const ExperimentConfig &c, const ProcessModel &m) {
  Json j;
  j["kind"] = c.model.kind;
  j["d"] = c.model.dim;
  if (c.model.kind == "stable")
    j["alpha"] = c.model.alpha;
  if (c.model.kind == "tabulated")
    j["scale_file"] = c.model.scale_file;
  j["name"] = m.name();
  return j;
}

Json scale_json(const GreenScale &g) {
  return Json{{"label", g.label}, {"c", number(g.c)},          {"cD", number(g.cD)},
              {"alpha0", number(g.alpha0)}, {"eta0", number(g.eta0)}, {"R0", number(g.R0)}};
}

Json estimate_json(const EstimateWithError &e) {
  return Json{{"mean", number(e.mean)}, {"stderr", number(e.std_error)}, {"n", e.n}, {"seed", e.seed}};
}

WosConfig wos_config(const ExperimentConfig &c) {
  WosConfig w;
  w.max_steps = c.mc.max_steps;
  w.boundary_shrink = c.mc.boundary_shrink;
  w.seed = c.mc.seed;
  w.threads = c.mc.threads;
  return w;
}

RunResult check_scale(const ExperimentConfig &c) {
  const ProcessModel model = c.make_model();
  const GreenScale &g = model.scale();
  const std::vector<double> grid = c.scale.grid_lo > 0.0
                                       ? log_grid(c.scale.grid_lo, c.scale.grid_hi, c.scale.grid_n)
                                       : default_grid(g);
  const ValidationReport rep = verify_scale(g, grid);
  RunResult out;
  out.pass = rep.valid();
  Json counts;
  for (ScaleInvariant inv : {ScaleInvariant::Decreasing, ScaleInvariant::Doubling,
                             ScaleInvariant::Decay, ScaleInvariant::SingularAtZero})
    counts[to_string(inv)] = rep.count(inv);
  Json first = Json::array();
  std::ostringstream csv;
  csv << "invariant,radius,lhs,rhs\n";
  for (const ScaleViolation &v : rep.violations) {
    if (first.size() < 10)
      first.push_back({{"invariant", to_string(v.invariant)},
                       {"radius", number(v.radius)},
                       {"lhs", number(v.lhs)},
                       {"rhs", number(v.rhs)}});
    csv << to_string(v.invariant) << ',' << fmt(v.radius) << ',' << fmt(v.lhs) << ','
        << fmt(v.rhs) << '\n';
  }
  out.json = {{"subcommand", "check-scale"},
              {"model", model_json(c, model)},
              {"scale", scale_json(g)},
              {"grid_size", rep.grid_size},
              {"grid", {{"lo", number(grid.front())}, {"hi", number(grid.back())}}},
              {"measured_doubling", number(measured_doubling_constant(g, grid))},
              {"violation_counts", counts},
              {"violations", first},
              {"pass", out.pass}};
  out.csv = csv.str();
  return out;
}

RunResult capacity(const ExperimentConfig &c) {
  const ProcessModel model = c.make_model();
  const GreenScale &g = model.scale();
  const Ball ball(c.origin(), c.capacity.radius);
  const CapacityResult res = ball_capacity(model, ball, c.capacity.n_points);
  double c0 = 0.0;
  if (c.constants.c0) {
    c0 = *c.constants.c0;
  } else {
    c0 = c0_from_CG(model, compute_CG(g, model.dim(), default_grid(g)));
  }
  const CapacityBounds b = capacity_bounds(g, c.capacity.radius, c0);
  const double slack = std::isnan(res.slack) ? 0.0 : res.slack;
  RunResult out;
  out.pass = res.capacity >= b.lower && res.capacity <= b.upper * (1.0 + slack);
  out.json = {{"subcommand", "capacity"},
              {"model", model_json(c, model)},
              {"radius", number(c.capacity.radius)},
              {"capacity", number(res.capacity)},
              {"n_points", res.n_points},
              {"duality_gap", number(res.duality_gap)},
              {"constraint_residual", number(res.constraint_residual)},
              {"method", res.method},
              {"iterations", res.iterations},
              {"coarse_capacity", number(res.coarse_capacity)},
              {"slack", number(res.slack)},
              {"c0", number(c0)},
              {"bounds", {{"lower", number(b.lower)}, {"upper", number(b.upper)}}},
              {"pass", out.pass}};
  std::ostringstream csv;
  csv << "index";
  for (int k = 0; k < model.dim(); ++k)
    csv << ",x" << k;
  csv << ",weight\n";
  for (std::size_t i = 0; i < res.measure.points.size(); ++i) {
    csv << i;
    for (double v : res.measure.points[i].coords())
      csv << ',' << fmt(v);
    csv << ',' << fmt(res.measure.weights[i]) << '\n';
  }
  out.csv = csv.str();
  return out;
}

std::string constants_csv(const HarnackConstants &k) {
  std::ostringstream csv;
  csv << "name,value\n";
  csv << "eta," << fmt(k.eta) << "\nalpha," << fmt(k.alpha) << "\nbeta," << fmt(k.beta)
      << "\ngamma," << fmt(k.gamma) << "\nkappa," << fmt(k.kappa) << "\nj0," << k.j0
      << "\nm0," << k.m0 << "\nm1," << k.m1 << "\nK," << fmt(k.K) << '\n';
  return csv.str();
}

RunResult constants(const ExperimentConfig &c) {
  const ProcessModel model = c.make_model();
  const ResolvedConstants rc = resolve_constants(c, model);
  const HarnackConstants &k = rc.constants;
  const SumCheck sum = check_sum_rj(model.scale(), k, c.geometry.R);
  RunResult out;
  out.pass = sum.pass;
  out.json = {{"subcommand", "constants"},
              {"model", model_json(c, model)},
              {"constants", constants_json(k)},
              {"c0_measured", rc.c0_measured},
              {"cJ_measured", rc.cJ_measured},
              {"C_G", number(rc.C_G)},
              {"sum_rj",
               {{"R", number(c.geometry.R)},
                {"j_max", sum.j_max},
                {"sum", number(sum.sum)},
                {"tail", number(sum.tail)},
                {"bound", number(sum.bound)},
                {"ratio", number((sum.sum + sum.tail) / sum.bound)},
                {"envelope_violations", sum.envelope_violations},
                {"pass", sum.pass}}},
              {"pass", out.pass}};
  out.csv = constants_csv(k);
  return out;
}

double brownian_concentric(int d, double a, double b, double r) {
  const double p = 2.0 - d;
  return (std::pow(r, p) - std::pow(b, p)) / (std::pow(a, p) - std::pow(b, p));
}

RunResult simulate_hit(const ExperimentConfig &c) {
  const ProcessModel model = c.make_model();
  const Ball target(c.origin(), c.simulate.target_radius);
  const Ball domain(c.origin(), c.simulate.domain_radius);
  const Point x = c.start();
  if (target.contains(x) || !domain.contains(x))
    throw ConfigError(c.source + ": simulate.start must lie between the target and the domain boundary");
  const Ball targets[] = {target};
  const HittingEstimate h = hitting_probability(model, targets, domain, x, c.mc.n, wos_config(c));
  RunResult out;
  out.pass = !h.censoring_warning;
  out.json = {{"subcommand", "simulate-hit"},
              {"model", model_json(c, model)},
              {"target_radius", number(target.radius)},
              {"domain_radius", number(domain.radius)},
              {"start", point_json(x)},
              {"estimate", estimate_json(h.estimate)},
              {"censored", h.censored},
              {"censored_fraction", number(h.censored_fraction)},
              {"censoring_warning", h.censoring_warning},
              {"mean_steps", number(h.mean_steps)}};
  if (model.kind() == ProcessKind::Brownian) {
    const double exact = brownian_concentric(model.dim(), target.radius, domain.radius,
                                             distance(x, target.center));
    const double z = (h.estimate.mean - exact) / h.estimate.std_error;
    out.pass = out.pass && std::abs(z) <= 3.0;
    out.json["exact"] = number(exact);
    out.json["z"] = number(z);
  }
  out.json["pass"] = out.pass;
  return out;
}

RunResult simulate_exit(const ExperimentConfig &c) {
  const ProcessModel model = c.make_model();
  const Ball ball(c.origin(), c.geometry.R);
  const std::vector<Point> z = sample_exits(model, ball, ball.center, c.mc.n, c.mc.seed, c.mc.threads);
  // Fraction of exits landing within 2R; exact: P[U > 1/4] for the stable
  // law (radius R / sqrt(U)), 1 for Brownian motion.
  std::vector<double> inside(z.size());
  for (std::size_t i = 0; i < z.size(); ++i)
    inside[i] = distance(z[i], ball.center) < 2.0 * ball.radius ? 1.0 : 0.0;
  const EstimateWithError e = summarize(inside, c.mc.seed);
  double exact = 1.0;
  if (model.kind() == ProcessKind::Stable) {
    const double a = 0.5 * model.alpha();
    exact = boost::math::cdf(boost::math::complement(boost::math::beta_distribution<double>(a, 1.0 - a), 0.25));
  }
  double zscore = 0.0;
  if (e.std_error > 0.0)
    zscore = (e.mean - exact) / e.std_error;
  else if (std::abs(e.mean - exact) > 1e-12)
    zscore = kInfinity;
  RunResult out;
  out.pass = std::abs(zscore) <= 4.0;
  out.json = {{"subcommand", "simulate-exit"},
              {"model", model_json(c, model)},
              {"center", point_json(ball.center)},
              {"radius", number(ball.radius)},
              {"within_2R", estimate_json(e)},
              {"exact", number(exact)},
              {"z", number(zscore)},
              {"pass", out.pass}};
  std::ostringstream csv;
  csv << "index";
  for (int k = 0; k < model.dim(); ++k)
    csv << ",z" << k;
  csv << '\n';
  for (std::size_t i = 0; i < z.size(); ++i) {
    csv << i;
    for (double v : z[i].coords())
      csv << ',' << fmt(v);
    csv << '\n';
  }
  out.csv = csv.str();
  return out;
}

RunResult simulate_itbal(const ExperimentConfig &c) {
  const ProcessModel model = c.make_model();
  const auto &s = c.simulate;
  const IteratedBalayageReport rep = iterated_balayage_check(
      model, c.origin(), s.r_small, s.r_large, c.mc.n, c.mc.seed, s.bins, c.mc.threads);
  RunResult out;
  out.pass = rep.pass;
  Json cells = Json::array();
  std::ostringstream csv;
  csv << "cell,expected,direct,two_stage,z\n";
  for (const CellComparison &cell : rep.cells) {
    cells.push_back({{"label", cell.label},
                     {"expected", number(cell.expected)},
                     {"direct", cell.direct},
                     {"two_stage", cell.two_stage},
                     {"z", number(cell.z)}});
    csv << cell.label << ',' << fmt(cell.expected) << ',' << cell.direct << ','
        << cell.two_stage << ',' << fmt(cell.z) << '\n';
  }
  out.json = {{"subcommand", "simulate-itbal"},
              {"model", model_json(c, model)},
              {"r_small", number(s.r_small)},
              {"r_large", number(s.r_large)},
              {"n", c.mc.n},
              {"seed", c.mc.seed},
              {"chi_square", number(rep.chi_square)},
              {"dof", rep.dof},
              {"critical", number(rep.critical)},
              {"max_abs_z", number(rep.max_abs_z)},
              {"mean_stages", number(rep.mean_stages)},
              {"cells", cells},
              {"pass", out.pass}};
  out.csv = csv.str();
  return out;
}

Json jump_json(const JumpComparison &j) {
  Json out = {{"diffusion_trivial", j.diffusion_trivial},
              {"c_J", number(j.c_J)},
              {"raw", number(j.raw)},
              {"grid_value", number(j.grid_value)},
              {"y", point_json(j.y)},
              {"z", point_json(j.z)},
              {"at_infinity", j.at_infinity},
              {"refinement_warning", j.refinement_warning},
              {"alpha_ratio", number(j.alpha_ratio)},
              {"radius", number(j.radius)},
              {"n_y", j.n_y},
              {"n_z", j.n_z}};
  return out;
}

RunResult simulate_cj(const ExperimentConfig &c) {
  const ProcessModel model = c.make_model();
  const auto &s = c.simulate;
  const JumpComparison j = jump_comparison_constant(model, s.alpha_ratio, s.n_y, s.n_z, c.geometry.R);
  RunResult out;
  out.pass = std::isfinite(j.c_J) && j.c_J >= 1.0;
  out.json = {{"subcommand", "simulate-cj"}, {"model", model_json(c, model)}, {"jump", jump_json(j)}};
  if (!j.diffusion_trivial && model.dim() <= 3) {
    const JumpMonteCarlo mc = jump_comparison_mc(model, s.alpha_ratio, j.y * (1.0 / c.geometry.R),
                                                 c.mc.n, c.mc.seed, c.mc.threads);
    Json cells = Json::array();
    std::ostringstream csv;
    csv << "rho_lo,rho_hi,side,p_inner_exact,p_inner_mc,se_inner,p_outer_exact,p_outer_mc,se_outer,agree\n";
    for (const JumpCell &cell : mc.cells) {
      cells.push_back({{"rho_lo", number(cell.rho_lo)},
                       {"rho_hi", number(cell.rho_hi)},
                       {"side", cell.side},
                       {"p_inner_exact", number(cell.p_inner_exact)},
                       {"p_inner_mc", number(cell.p_inner_mc)},
                       {"se_inner", number(cell.se_inner)},
                       {"p_outer_exact", number(cell.p_outer_exact)},
                       {"p_outer_mc", number(cell.p_outer_mc)},
                       {"se_outer", number(cell.se_outer)},
                       {"agree", cell.agree}});
      csv << fmt(cell.rho_lo) << ',' << fmt(cell.rho_hi) << ',' << cell.side << ','
          << fmt(cell.p_inner_exact) << ',' << fmt(cell.p_inner_mc) << ',' << fmt(cell.se_inner)
          << ',' << fmt(cell.p_outer_exact) << ',' << fmt(cell.p_outer_mc) << ','
          << fmt(cell.se_outer) << ',' << (cell.agree ? 1 : 0) << '\n';
    }
    out.pass = out.pass && mc.pass;
    out.json["mc"] = {{"n", c.mc.n},
                      {"seed", c.mc.seed},
                      {"max_empirical_ratio", number(mc.max_empirical_ratio)},
                      {"pass", mc.pass},
                      {"cells", cells}};
    out.csv = csv.str();
  }
  out.json["pass"] = out.pass;
  return out;
}

std::vector<HarmonicFunction> cell_family(const ProcessModel &model, const Ball &ball, int count) {
  const int d = model.dim();
  if (d > 3)
    throw ConfigError("the cells family supports d <= 3");
  const bool brownian = model.kind() == ProcessKind::Brownian;
  const int n_dirs = d == 1 ? 2 : std::max(1, static_cast<int>(std::lround(std::sqrt(count / 2.0))));
  const int n_shells = brownian ? 1 : std::max(1, (count + n_dirs - 1) / n_dirs);
  const std::vector<double> edges = log_grid(1e-3, 1e2, n_shells + 1);
  std::vector<HarmonicFunction> family;
  for (int k = 0; k < n_dirs && static_cast<int>(family.size()) < count; ++k) {
    const Point axis = d == 1 ? Point{k == 0 ? 1.0 : -1.0}
                              : halton_direction(d, static_cast<std::uint64_t>(k));
    for (int j = 0; j < n_shells && static_cast<int>(family.size()) < count; ++j) {
      BoundaryCell cell;
      cell.axis = axis;
      cell.half_angle = d == 1 ? 0.5 * std::numbers::pi : 0.25 * std::numbers::pi;
      if (brownian) {
        cell.rho_lo = 0.5 * ball.radius;
        cell.rho_hi = 2.0 * ball.radius;
      } else {
        cell.rho_lo = ball.radius * (1.0 + edges[static_cast<std::size_t>(j)]);
        cell.rho_hi = ball.radius * (1.0 + edges[static_cast<std::size_t>(j) + 1]);
      }
      family.push_back(HarmonicFunction::cells(model, ball, {cell},
                                               "cell" + std::to_string(family.size())));
    }
  }
  return family;
}

RunResult harnack(const ExperimentConfig &c) {
  const ProcessModel model = c.make_model();
  const ResolvedConstants rc = resolve_constants(c, model);
  const Ball ball(c.origin(), kNeighbourhoodMargin * c.geometry.R);
  const std::vector<HarmonicFunction> family =
      c.harnack.family == "cells" ? cell_family(model, ball, c.harnack.count)
                                  : pole_family(model, ball, c.harnack.count);
  const HarnackRatioResult res =
      harnack_ratio(c.origin(), c.geometry.R, rc.constants, family, c.harnack.grid_n, c.mc.threads);
  RunResult out;
  out.pass = res.pass;
  std::ostringstream csv;
  csv << "function,sup,inf,ratio,vanishing\n";
  for (const RatioRow &row : res.rows)
    csv << '"' << row.label << "\"," << fmt(row.sup) << ',' << fmt(row.inf) << ','
        << fmt(row.ratio) << ',' << (row.vanishing ? 1 : 0) << '\n';
  out.csv = csv.str();
  out.json = {{"subcommand", "harnack"},
              {"model", model_json(c, model)},
              {"x0", point_json(c.origin())},
              {"R", number(c.geometry.R)},
              {"family", c.harnack.family},
              {"count", family.size()},
              {"grid_n", c.harnack.grid_n},
              {"inner_radius", number(res.inner_radius)},
              {"K", number(res.K)},
              {"max_ratio", number(res.max_ratio)},
              {"argmax", res.argmax >= 0 ? Json(res.rows[static_cast<std::size_t>(res.argmax)].label)
                                         : Json(nullptr)},
              {"excluded", res.excluded},
              {"constants", constants_json(rc.constants)},
              {"pass", out.pass}};
  return out;
}

} // namespace

Json constants_json(const HarnackConstants &k) {
  const ConstantInputs &in = k.inputs;
  return Json{{"eta", number(k.eta)},
              {"alpha", number(k.alpha)},
              {"alpha_exponent", k.alpha_exponent},
              {"beta", number(k.beta)},
              {"gamma", number(k.gamma)},
              {"kappa", number(k.kappa)},
              {"j0", k.j0},
              {"m0", k.m0},
              {"m1", k.m1},
              {"K", number(k.K)},
              {"inputs",
               {{"c", number(in.c)},
                {"cD", number(in.cD)},
                {"c0", number(in.c0)},
                {"cJ", number(in.cJ)},
                {"alpha0", number(in.alpha0)},
                {"eta0", number(in.eta0)},
                {"R0", number(in.R0)},
                {"R1", number(in.R1)}}}};
}

ResolvedConstants resolve_constants(const ExperimentConfig &config, const ProcessModel &model) {
  const GreenScale &g = model.scale();
  ResolvedConstants out;
  out.C_G = compute_CG(g, model.dim(), default_grid(g));
  double c0 = 0.0;
  if (config.constants.c0) {
    c0 = *config.constants.c0;
  } else {
    c0 = std::max(1.0, c0_from_CG(model, out.C_G));
    out.c0_measured = true;
  }
  double cJ = 1.0;
  if (config.constants.cJ) {
    cJ = *config.constants.cJ;
  } else if (model.has_jumps()) {
    const HarnackConstants first = build_constants(g, c0, 1.0, config.constants.R1);
    cJ = jump_comparison_constant(model, first.alpha, config.simulate.n_y, config.simulate.n_z).c_J;
    out.cJ_measured = true;
  }
  out.constants = build_constants(g, c0, cJ, config.constants.R1);
  return out;
}

std::vector<std::string> subcommands() {
  return {"check-scale",   "capacity",       "constants",   "simulate-hit", "simulate-exit",
          "simulate-itbal", "simulate-cj",   "harnack",     "report"};
}

RunResult run_experiment(const std::string &subcommand, const ExperimentConfig &config) {
  std::string cmd = subcommand;
  if (cmd.rfind("simulate ", 0) == 0)
    cmd = "simulate-" + cmd.substr(9);
  if (cmd == "check-scale")
    return check_scale(config);
  if (cmd == "capacity")
    return capacity(config);
  if (cmd == "constants")
    return constants(config);
  if (cmd == "simulate-hit")
    return simulate_hit(config);
  if (cmd == "simulate-exit")
    return simulate_exit(config);
  if (cmd == "simulate-itbal")
    return simulate_itbal(config);
  if (cmd == "simulate-cj")
    return simulate_cj(config);
  if (cmd == "harnack")
    return harnack(config);
  if (cmd == "report") {
    const ReportSummary rep = run_report(config.mc.threads);
    return {report_json(rep), report_csv(rep), rep.pass};
  }
  throw ConfigError("unknown subcommand '" + subcommand + "'");
}

} // namespace hl
