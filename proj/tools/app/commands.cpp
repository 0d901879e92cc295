#include "commands.hpp"

#include <cmath>
#include <functional>
#include <iostream>
#include <sstream>

#include "acceptance.hpp"
#include "config.hpp"
#include "coulomb/density.hpp"
#include "coulomb/limits.hpp"

namespace coulomb::app {

namespace {

constexpr int kOk = 0, kBadConfig = 1, kNumerical = 2, kChecksFailed = 3;

Json cplx(Complex z) { return Json::array({z.real(), z.imag()}); }

Json points_json(const Configuration& c) {
  Json a = Json::array();
  for (Complex z : c.points) a.push_back(cplx(z));
  return a;
}

std::string points_csv(const std::string& cmd, const Json& cfg, const Configuration& c) {
  std::ostringstream os;
  os.precision(17);
  os << csv_preamble(cmd, cfg) << "index,x,y\n";
  for (std::size_t j = 0; j < c.n(); ++j) os << j << ',' << c.points[j].real() << ',' << c.points[j].imag() << '\n';
  return os.str();
}

std::size_t as_size(const Json& cfg, const char* key) { return cfg.at(key).get<std::size_t>(); }

std::size_t require_n(const Json& cfg) {
  const auto n = as_size(cfg, "n");
  if (n < 1) throw ConfigurationError("--n must be at least 1");
  return n;
}

Json shape_json(const Droplet& d) {
  return std::visit(
      [](const auto& s) -> Json {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, DiskShape>)
          return {{"center", cplx(s.center)}, {"radius", s.radius}};
        else if constexpr (std::is_same_v<S, AnnulusShape>)
          return {{"inner", s.inner}, {"outer", s.outer}};
        else
          return {{"a", s.a}, {"b", s.b}};
      },
      d.shape());
}

// ------------------------------------------------------------ droplet

int droplet_cmd(const Json& cfg) {
  const Potential pot = parse_potential(cfg.at("potential"));
  const Droplet d = droplet_for(pot);
  const EquilibriumMeasure mu(pot, d);
  const RobinResult rob = robin_constant(pot, mu);
  Json res = {{"potential", pot.name()},
              {"kind", d.kind_name()},
              {"shape", shape_json(d)},
              {"area", d.area()},
              {"outer_radius", d.outer_radius()},
              {"raw_mass", mu.raw_mass()},
              {"robin_constant", rob.gamma},
              {"robin_covers_droplet", rob.covers_droplet},
              {"equilibrium_energy", equilibrium_energy(pot, mu)},
              {"equilibrium_residual", equilibrium_residual(pot, mu)}};
  emit(cfg.at("out"), dump(envelope("droplet", cfg, "ok", res)), std::cout);
  return kOk;
}

// ------------------------------------------------------------ fekete solve

int fekete_cmd(const Json& cfg) {
  const Potential pot = parse_potential(cfg.at("potential"));
  SolverConfig sc;
  sc.restarts = as_size(cfg, "restarts");
  sc.max_iterations = as_size(cfg, "max-iterations");
  sc.tolerance = cfg.at("tolerance");
  sc.seed = cfg.at("seed");
  if (sc.restarts < 1) throw ConfigurationError("--restarts must be at least 1");
  const auto fr = solve_fekete(pot, require_n(cfg), sc, droplet_for(pot));
  const Separation sep = separation(pot, fr.config);
  Json res = {{"energy", fr.report.energy},
              {"iterations", fr.report.iterations},
              {"max_gradient", fr.report.max_gradient},
              {"converged", fr.report.converged},
              {"best_restart", fr.report.best_restart},
              {"restart_energies", fr.report.restart_energies},
              {"separation", sep.delta},
              {"points", points_json(fr.config)}};
  const std::string status = fr.report.converged ? "ok" : "not_converged";
  emit(cfg.at("out"), dump(envelope("fekete solve", cfg, status, res)), std::cout);
  const std::string csv = cfg.at("csv");
  if (!csv.empty()) emit(csv, points_csv("fekete solve", cfg, fr.config), std::cout);
  if (!fr.report.converged) {
    std::cerr << "fekete solve: not converged (max gradient " << fr.report.max_gradient << ")\n";
    return kNumerical;
  }
  return kOk;
}

// ------------------------------------------------------------ gas sample

int gas_cmd(const Json& cfg) {
  const Potential pot = parse_potential(cfg.at("potential"));
  MetropolisConfig mc;
  mc.beta = cfg.at("beta");
  mc.burn_in_sweeps = as_size(cfg, "burn-in");
  mc.sweeps = as_size(cfg, "sweeps");
  mc.step = cfg.at("step");
  mc.seed = cfg.at("seed");
  if (!(mc.beta > 0.0) || !(mc.step > 0.0)) throw ConfigurationError("--beta and --step must be positive");
  const std::size_t thin = as_size(cfg, "thin");
  const auto s = metropolis_sample(pot, require_n(cfg), mc, thin);
  Json res = {{"acceptance_rate", s.acceptance_rate},
              {"step", s.step},
              {"snapshots", s.snapshots.size()},
              {"energy", energy(pot, s.config).value},
              {"points", points_json(s.config)}};
  emit(cfg.at("out"), dump(envelope("gas sample", cfg, "ok", res)), std::cout);
  const std::string csv = cfg.at("csv");
  if (!csv.empty()) {
    std::ostringstream os;
    os.precision(17);
    os << csv_preamble("gas sample", cfg) << "snapshot,index,x,y\n";
    for (std::size_t k = 0; k < s.snapshots.size(); ++k)
      for (std::size_t j = 0; j < s.snapshots[k].n(); ++j)
        os << k << ',' << j << ',' << s.snapshots[k].points[j].real() << ',' << s.snapshots[k].points[j].imag()
           << '\n';
    emit(csv, os.str(), std::cout);
  }
  return kOk;
}

// ------------------------------------------------------------ kernel profile

int kernel_cmd(const Json& cfg) {
  const Potential pot = parse_potential(cfg.at("potential"));
  const std::size_t n = require_n(cfg);
  const Complex center = parse_complex(cfg.at("center"));
  const std::string axis = cfg.at("axis");
  if (axis != "x" && axis != "y") throw ConfigurationError("--axis must be x or y");
  const auto xs = parse_range(cfg.at("range"));
  const KernelModel km(pot, n);
  const RescaleFrame f = rescale_frame(pot, droplet_for(pot), center, n);
  std::ostringstream os;
  os.precision(17);
  os << csv_preamble("kernel profile", cfg);
  os << "# x along the rescaled " << (axis == "x" ? "outer normal" : "tangent") << " axis at p; R_n = K_n / (n Laplacian Q(p))\n";
  os << "x,R_n\n";
  for (double x : xs) {
    const Complex z = axis == "x" ? Complex(x, 0.0) : Complex(0.0, x);
    os << x << ',' << rescaled_one_point(km, f, z) << '\n';
  }
  emit(cfg.at("out"), os.str(), std::cout);
  return kOk;
}

// ------------------------------------------------------------ ward check

int ward_cmd(const Json& cfg) {
  const PlasmaParams pp{parse_real(cfg.at("m"))};
  WardGrid g;
  g.radius = cfg.at("grid-radius");
  g.panels = as_size(cfg, "panels");
  g.order = as_size(cfg, "order");
  g.ntheta = as_size(cfg, "ntheta");
  g.fd_step = cfg.at("fd-step");
  const double radius = cfg.at("radius"), spacing = cfg.at("spacing");
  if (!(spacing > 0.0) || !(radius >= 0.0)) throw ConfigurationError("--spacing must be positive");
  const auto zs = disk_lattice(radius, spacing);
  const WardReport rep = ward_residual(pp, zs, g, cfg.at("doubling"));
  std::ostringstream os;
  os.precision(17);
  os << csv_preamble("ward check", cfg) << "x,y,dbar_C_re,dbar_C_im,rhs,residual\n";
  for (const auto& p : rep.points)
    os << p.z.real() << ',' << p.z.imag() << ',' << p.dbar_C.real() << ',' << p.dbar_C.imag() << ',' << p.rhs << ','
       << p.residual << '\n';
  emit(cfg.at("out"), os.str(), std::cout);
  Json res = {{"max_residual", rep.max_residual},
              {"doubled_max_residual", rep.doubled_max_residual},
              {"converged", rep.converged},
              {"points", rep.points.size()}};
  const std::string report = cfg.at("report");
  if (!report.empty()) emit(report, dump(envelope("ward check", cfg, "ok", res)), std::cout);
  std::cerr << "ward check: max residual " << rep.max_residual;
  if (cfg.at("doubling").get<bool>()) std::cerr << ", doubled " << rep.doubled_max_residual;
  std::cerr << "\n";
  return kOk;
}

// ------------------------------------------------------------ density scan

int density_cmd(const Json& cfg) {
  const Potential pot = parse_potential(cfg.at("potential"));
  const Droplet d = droplet_for(pot);
  const auto ns = cfg.at("n").get<std::vector<std::size_t>>();
  const auto lambdas = cfg.at("lambda").get<std::vector<double>>();
  if (ns.empty() || lambdas.empty()) throw ConfigurationError("--n and --lambda need at least one value");
  const std::string plan_name = cfg.at("plan");
  MovingPointPlan plan;
  if (plan_name == "bulk") {
    plan = MovingPointPlan::fixed(parse_complex(cfg.at("point")), ns);
  } else if (plan_name == "boundary") {
    const std::string a = cfg.at("anchor");
    const Complex anchor = a.empty() ? d.boundary_point(0.0) : parse_complex(a);
    plan = MovingPointPlan::anchored(anchor, cfg.at("tau"), ns);
  } else {
    throw ConfigurationError("--plan must be bulk or boundary");
  }
  SolverConfig sc;
  sc.restarts = as_size(cfg, "restarts");
  sc.seed = cfg.at("seed");
  std::vector<Configuration> fam;
  bool converged = true;
  for (std::size_t n : ns) {
    const auto fr = solve_fekete(pot, n, sc, d);
    converged = converged && fr.report.converged;
    fam.push_back(fr.config);
  }
  const auto e = bl_density(fam, plan, pot, d, lambdas);
  Json table = Json::array();
  for (const auto& c : e.table) table.push_back({{"n", c.n}, {"lambda", c.lambda}, {"count", c.count}, {"ratio", c.ratio}});
  Json res = {{"plan", e.plan},
              {"table", table},
              {"d_plus", e.d_plus},
              {"d_minus", e.d_minus},
              {"regime", to_string(classify_regime(plan, d, pot))}};
  emit(cfg.at("out"), dump(envelope("density scan", cfg, converged ? "ok" : "not_converged", res)), std::cout);
  return converged ? kOk : kNumerical;
}

// ------------------------------------------------------------ traces

int traces_cmd(const Json& cfg) {
  const Potential pot = parse_potential(cfg.at("potential"));
  const std::size_t n = require_n(cfg);
  const double rho = cfg.at("rho");
  const auto m = static_cast<std::size_t>(std::llround(double(n) * rho));
  if (m < 1) throw ConfigurationError("n rho must round to at least 1");
  const Complex p = parse_complex(cfg.at("center"));
  const auto basis = WeightedBasis::build(pot, m);
  Json cells = Json::array();
  bool ok = true;
  for (double L : cfg.at("lambda").get<std::vector<double>>()) {
    const auto s = concentration_spectrum(basis, pot, p, n, rho, L);
    Json checks = Json::array();
    for (const auto& c : counting_inequalities(s)) {
      ok = ok && c.holds;
      checks.push_back({{"gamma", c.gamma}, {"above", c.above}, {"lower", c.lower}, {"at_least", c.at_least},
                        {"upper", c.upper}, {"holds", c.holds}});
    }
    ok = ok && spectrum_in_unit_interval(s);
    cells.push_back({{"lambda", L},
                     {"trace", s.trace},
                     {"trace_sq", s.trace_sq},
                     {"trace_direct", s.trace_direct},
                     {"trace_over_lambda2", s.trace / (L * L)},
                     {"defect", trace_defect(s)},
                     {"counting", checks},
                     {"eigenvalues", s.eigenvalues}});
  }
  Json res = {{"n", n}, {"rho", rho}, {"dimension", m}, {"p", cplx(p)}, {"cells", cells}};
  emit(cfg.at("out"), dump(envelope("traces", cfg, ok ? "ok" : "check_failed", res)), std::cout);
  return ok ? kOk : kNumerical;
}

// ------------------------------------------------------------ paper-check

int paper_check_cmd(const Json& cfg) {
  AcceptanceOptions opt;
  opt.quick = cfg.at("quick");
  for (const auto& v : cfg.at("only")) opt.only.push_back(v.get<int>());
  opt.progress = &std::cout;
  const auto rs = run_acceptance(opt);
  const bool ok = all_passed(rs);
  std::size_t failed = 0;
  for (const auto& r : rs) failed += (r.pass || r.diagnostic) ? 0 : 1;
  std::cout << (ok ? "all checks passed" : std::to_string(failed) + " check(s) failed") << std::endl;
  const std::string out = cfg.at("out");
  if (!out.empty()) emit(out, dump(envelope("paper-check", cfg, ok ? "ok" : "failed", to_json(rs))), std::cout);
  return ok ? kOk : kChecksFailed;
}

struct Command {
  CLI::App* app;
  std::unique_ptr<CommandOptions> opts;
  std::function<int(const Json&)> run;
};

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Coulomb gas, Fekete points and weighted polynomial kernels"};
  app.require_subcommand(1);
  std::vector<Command> cmds;
  auto add = [&](CLI::App* sub, Json defaults, std::map<std::string, std::string> help, auto fn) {
    cmds.push_back({sub, std::make_unique<CommandOptions>(sub, std::move(defaults), help), fn});
  };
  const std::string pot_help = "ginibre | mittag-leffler:<p> | ellipse:<t>";

  add(app.add_subcommand("droplet", "droplet geometry and equilibrium constants"),
      {{"potential", "ginibre"}, {"seed", 0}, {"out", ""}}, {{"potential", pot_help}, {"out", "JSON report"}},
      droplet_cmd);

  auto* fek = app.add_subcommand("fekete", "Fekete configurations");
  fek->require_subcommand(1);
  add(fek->add_subcommand("solve", "minimize H_n"),
      {{"potential", "ginibre"}, {"n", 100}, {"seed", 1}, {"restarts", 4}, {"tolerance", 1e-7},
       {"max-iterations", 5000}, {"out", ""}, {"csv", ""}},
      {{"potential", pot_help}, {"out", "JSON report"}, {"csv", "points as CSV"}}, fekete_cmd);

  auto* gas = app.add_subcommand("gas", "Coulomb gas sampling");
  gas->require_subcommand(1);
  add(gas->add_subcommand("sample", "Metropolis sampling of exp(-beta H_n)"),
      {{"potential", "ginibre"}, {"n", 64}, {"beta", 1.0}, {"burn-in", 200}, {"sweeps", 1000}, {"step", 0.5},
       {"thin", 0}, {"seed", 1}, {"out", ""}, {"csv", ""}},
      {{"potential", pot_help}, {"thin", "store a snapshot every k sweeps (0: none)"}, {"csv", "snapshots as CSV"}},
      gas_cmd);

  auto* ker = app.add_subcommand("kernel", "correlation kernels");
  ker->require_subcommand(1);
  add(ker->add_subcommand("profile", "rescaled one-point function along a line through p"),
      {{"potential", "ginibre"}, {"n", 400}, {"center", "1"}, {"axis", "x"}, {"range", "-3:3:0.05"}, {"seed", 0},
       {"out", ""}},
      {{"potential", pot_help}, {"center", "p as x or x,y"}, {"axis", "x (normal) or y (tangent)"},
       {"range", "a:b:h"}, {"out", "CSV"}},
      kernel_cmd);

  auto* ward = app.add_subcommand("ward", "Ward equation for limiting kernels");
  ward->require_subcommand(1);
  add(ward->add_subcommand("check", "residual of the Ward equation on a lattice"),
      {{"m", "0"}, {"grid-radius", 8.0}, {"panels", 16}, {"order", 8}, {"ntheta", 128}, {"fd-step", 1e-3},
       {"radius", 2.0}, {"spacing", 0.5}, {"doubling", false}, {"seed", 0}, {"out", ""}, {"report", ""}},
      {{"m", "half-plane offset or inf"}, {"grid-radius", "w-plane truncation radius"},
       {"radius", "lattice disk radius"}, {"doubling", "also rerun with doubled grids"}, {"out", "CSV"},
       {"report", "JSON summary"}},
      ward_cmd);

  auto* den = app.add_subcommand("density", "Beurling-Landau densities of Fekete families");
  den->require_subcommand(1);
  add(den->add_subcommand("scan", "count table over n and Lambda"),
      {{"potential", "ginibre"}, {"plan", "bulk"}, {"n", {100, 200, 400}}, {"lambda", {4.0, 6.0, 8.0}},
       {"point", "0"}, {"anchor", ""}, {"tau", 0.0}, {"restarts", 4}, {"seed", 1}, {"out", ""}},
      {{"potential", pot_help}, {"plan", "bulk | boundary"}, {"point", "fixed point (bulk)"},
       {"anchor", "point whose nearest boundary point anchors the plan (default: rightmost)"},
       {"tau", "inward offset in local units"}, {"out", "JSON"}},
      density_cmd);

  add(app.add_subcommand("traces", "concentration operator spectra"),
      {{"potential", "ginibre"}, {"n", 200}, {"rho", 1.0}, {"center", "0"}, {"lambda", {4.0, 6.0, 8.0}}, {"seed", 0},
       {"out", ""}},
      {{"potential", pot_help}, {"center", "disk center p"}, {"out", "JSON"}}, traces_cmd);

  add(app.add_subcommand("paper-check", "run the acceptance checks"),
      {{"quick", false}, {"only", Json::array()}, {"seed", 0}, {"out", ""}},
      {{"quick", "cap n at 100 and shorten chains"}, {"only", "comma list of check ids"}, {"out", "JSON matrix"}},
      paper_check_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kBadConfig;
  }

  for (auto& c : cmds) {
    if (!c.app->parsed()) continue;
    try {
      return c.run(c.opts->resolve());
    } catch (const ConfigurationError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kBadConfig;
    } catch (const std::invalid_argument& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kBadConfig;
    } catch (const DomainError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kBadConfig;
    } catch (const nlohmann::json::exception& e) {
      std::cerr << "error: bad config value: " << e.what() << "\n";
      return kBadConfig;
    } catch (const std::exception& e) {
      std::cerr << "numerical failure: " << e.what() << "\n";
      return kNumerical;
    }
  }
  return kBadConfig;
}

}  // namespace coulomb::app
