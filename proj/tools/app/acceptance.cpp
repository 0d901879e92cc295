#include "acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>

#include "coulomb/density.hpp"
#include "coulomb/limits.hpp"
#include "coulomb/special.hpp"

namespace coulomb::app {

namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Json cplx(Complex z) { return Json::array({z.real(), z.imag()}); }

// solves and bases shared between checks
class Cache {
 public:
  const FeketeResult& fekete(const Potential& pot, std::size_t n, std::size_t restarts = 4) {
    const auto key = std::make_tuple(pot.name(), n, restarts);
    auto it = solves_.find(key);
    if (it == solves_.end()) {
      SolverConfig sc;
      sc.restarts = restarts;
      it = solves_.emplace(key, solve_fekete(pot, n, sc, droplet_for(pot))).first;
    }
    return it->second;
  }

  const WeightedBasis& basis(const Potential& pot, std::size_t n) {
    const auto key = std::make_pair(pot.name(), n);
    auto it = bases_.find(key);
    if (it == bases_.end()) it = bases_.emplace(key, WeightedBasis::build(pot, n)).first;
    return it->second;
  }

 private:
  std::map<std::tuple<std::string, std::size_t, std::size_t>, FeketeResult> solves_;
  std::map<std::pair<std::string, std::size_t>, WeightedBasis> bases_;
};

struct Suite {
  bool quick = false;
  Cache cache;
  Potential gin = Potential::ginibre();
  Potential ell = Potential::ellipse(0.5);
  Droplet gin_drop = droplet_for(Potential::ginibre());
  Droplet ell_drop = droplet_for(Potential::ellipse(0.5));

  std::size_t cap(std::size_t n) const { return quick ? std::min<std::size_t>(n, 100) : n; }
  std::vector<std::size_t> caps(std::vector<std::size_t> ns) const {
    for (auto& n : ns) n = cap(n);
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
    return ns;
  }

  Json table_json(const DensityEstimate& e) {
    Json t = Json::array();
    for (const auto& c : e.table) t.push_back({{"n", c.n}, {"lambda", c.lambda}, {"count", c.count}, {"ratio", c.ratio}});
    return {{"plan", e.plan}, {"table", t}, {"d_plus", e.d_plus}, {"d_minus", e.d_minus}};
  }

  // ---------------------------------------------------------------- 1
  CriterionResult separation_check() {
    CriterionResult r{1, "separation"};
    const double bound = 0.606 - 0.01;
    const auto t0 = std::chrono::steady_clock::now();
    double worst = kInf;
    bool ok = true;
    Json cells = Json::array();
    for (const Potential* pot : {&gin, &ell})
      for (std::size_t n : caps({50, 100, 200})) {
        const auto& fr = cache.fekete(*pot, n);
        const double d = separation(*pot, fr.config).delta;
        worst = std::min(worst, d);
        ok = ok && fr.report.converged && d >= bound;
        cells.push_back({{"potential", pot->name()}, {"n", n}, {"delta", d}, {"converged", fr.report.converged}});
      }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.pass = ok && secs < 600.0;
    r.details = {{"cells", cells}, {"bound", bound}, {"min_delta", worst}};
    r.summary = "min Delta_n = " + fmt("%.4f", worst) + " (>= 0.596)" + (secs < 600.0 ? "" : ", over 10 min");
    return r;
  }

  // ---------------------------------------------------------------- 2
  CriterionResult bulk_density() {
    CriterionResult r{2, "bulk density"};
    const auto ns = caps({100, 200, 400});
    std::vector<Configuration> fam;
    for (std::size_t n : ns) fam.push_back(cache.fekete(gin, n).config);
    const auto e = bl_density(fam, MovingPointPlan::fixed(0.0, ns), gin, gin_drop, {4, 6, 8});
    double lo = kInf, hi = 0.0, corner = 0.0;
    for (const auto& c : e.table) {
      lo = std::min(lo, c.ratio);
      hi = std::max(hi, c.ratio);
      if (c.n == ns.back() && c.lambda == 8.0) corner = c.ratio;
    }
    r.pass = lo >= 0.85 && hi <= 1.15 && corner >= 0.9 && corner <= 1.1;
    r.details = table_json(e);
    r.summary = "N/L^2 in [" + fmt("%.3f", lo) + ", " + fmt("%.3f", hi) + "] (need [0.85, 1.15]); L=8, n=" +
                std::to_string(ns.back()) + ": " + fmt("%.3f", corner);
    return r;
  }

  // ---------------------------------------------------------------- 3
  CriterionResult boundary_density() {
    CriterionResult r{3, "boundary density"};
    const auto ns = caps({100, 200, 400});
    std::vector<Configuration> fam;
    for (std::size_t n : ns) fam.push_back(cache.fekete(gin, n).config);
    const auto e = bl_density(fam, MovingPointPlan::anchored(1.0, 0.0, ns), gin, gin_drop, {4, 6, 8});
    double lo = kInf, hi = 0.0, corner = 0.0;
    for (const auto& c : e.table) {
      lo = std::min(lo, c.ratio);
      hi = std::max(hi, c.ratio);
      if (c.n == ns.back() && c.lambda == 8.0) corner = c.ratio;
    }
    const bool gin_ok = lo >= 0.35 && hi <= 0.65 && corner >= 0.4 && corner <= 0.6;

    const std::vector<std::size_t> ens{32, 48, 64};
    std::vector<Configuration> efam;
    for (std::size_t n : ens) efam.push_back(cache.fekete(ell, n).config);
    const Complex tip = ell_drop.boundary_point(0.0);
    const auto ee = bl_density(efam, MovingPointPlan::anchored(tip, 0.0, ens), ell, ell_drop, {2, 3, 4});
    double elo = kInf, ehi = 0.0;
    for (const auto& c : ee.table) {
      elo = std::min(elo, c.ratio);
      ehi = std::max(ehi, c.ratio);
    }
    const bool ell_ok = elo >= 0.3 && ehi <= 0.7;
    r.pass = gin_ok && ell_ok;
    r.details = {{"ginibre", table_json(e)}, {"ellipse", table_json(ee)}};
    r.summary = "ginibre [" + fmt("%.3f", lo) + ", " + fmt("%.3f", hi) + "] corner " + fmt("%.3f", corner) +
                (gin_ok ? " ok" : " out") + "; ellipse tip [" + fmt("%.3f", elo) + ", " + fmt("%.3f", ehi) +
                "] (need [0.3, 0.7])";
    return r;
  }

  // ---------------------------------------------------------------- 4
  CriterionResult strip() {
    CriterionResult r{4, "strip surrogate"};
    const std::size_t n = cap(400);
    const double T = 1.0;
    double cmax = 0.0;
    bool ok = true;
    Json cells = Json::array();
    for (double L : {4.0, 10.0, 30.0, 60.0, 100.0}) {
      const auto line = line_configuration(gin, 0.0, n, L);
      const auto s = strip_count_bound(line, gin, 0.0, n, L, T);
      cmax = std::max(cmax, s.constant);
      ok = ok && s.constant <= 3.0 && s.ratio <= s.constant * T / L + 1e-12;
      cells.push_back({{"lambda", L}, {"count", s.count}, {"ratio", s.ratio}, {"constant", s.constant}});
    }
    r.pass = ok;
    r.details = {{"cells", cells}, {"T", T}, {"n", n}};
    r.summary = "max C = " + fmt("%.3f", cmax) + " (<= 3) for Lambda up to 100";
    return r;
  }

  // ---------------------------------------------------------------- 5
  CriterionResult kernel_exactness() {
    CriterionResult r{5, "kernel exactness"};
    const std::size_t n = 50;
    const auto& b = cache.basis(gin, n);
    double hk = 0.0;
    for (std::size_t k = 0; k <= 20; ++k) {
      const double exact = std::lgamma(double(k) + 1.0) - double(k + 1) * std::log(double(n));
      hk = std::max(hk, std::abs(std::expm1(b.log_norms()[k] - exact)));
    }
    const KernelModel km(std::make_shared<const WeightedBasis>(b));
    const double r0 = std::abs(one_point(km, 0.0) / double(n) - 1.0);
    double rep = 0.0;
    for (Complex z : {Complex(0, 0), Complex(0.3, -0.2), Complex(-0.6, 0.5), Complex(0.95, 0), Complex(1.2, 0.3)}) {
      const double rz = one_point(km, z);
      rep = std::max(rep, std::abs(reproducing_integral(km, z) - rz) / rz);
    }
    r.pass = hk <= 1e-10 && r0 <= 1e-8 && rep <= 1e-6;
    r.details = {{"h_k_rel_error", hk}, {"one_point_rel_error", r0}, {"reproducing_rel_error", rep}};
    r.summary = "h_k " + fmt("%.1e", hk) + ", R_n(0) " + fmt("%.1e", r0) + ", reproducing " + fmt("%.1e", rep);
    return r;
  }

  // ---------------------------------------------------------------- 6
  CriterionResult boundary_profile() {
    CriterionResult r{6, "boundary profile"};
    const std::size_t n = cap(400);
    const KernelModel km(std::make_shared<const WeightedBasis>(cache.basis(gin, n)));
    const auto f = rescale_frame(gin, gin_drop, 1.0, n);
    double sup = 0.0, at = 0.0;
    for (int i = -60; i <= 60; ++i) {
      const double x = 0.05 * i;
      const double d = std::abs(rescaled_one_point(km, f, x) - plasma_F(2.0 * x).real());
      if (d > sup) {
        sup = d;
        at = x;
      }
    }
    r.pass = sup <= 0.05;
    r.details = {{"n", n}, {"sup", sup}, {"argmax", at}};
    r.summary = "n=" + std::to_string(n) + " sup |R_n - F(2x)| = " + fmt("%.4f", sup) + " (<= 0.05)";
    return r;
  }

  // ---------------------------------------------------------------- 7
  CriterionResult mass_one() {
    CriterionResult r{7, "mass-one"};
    const std::vector<Complex> zs{{0, 0}, {-1, 0.5}, {0.5, -1}, {1, 1}, {-3, 0}};
    double g = 0.0, b0 = 0.0, fin = 0.0;
    for (Complex z : zs) g = std::max(g, std::abs(ginibre_mass(z) - 1.0));
    for (Complex z : zs) b0 = std::max(b0, std::abs(berezin_mass(PlasmaParams{0.0}, z) - 1.0));
    const std::size_t n = 100;
    const KernelModel km(std::make_shared<const WeightedBasis>(cache.basis(gin, n)));
    const auto f = rescale_frame(gin, gin_drop, 1.0, n);
    for (Complex z : zs) fin = std::max(fin, std::abs(berezin_mass(km, f, z) - 1.0));
    r.pass = g <= 1e-8 && b0 <= 1e-4 && fin <= 1e-4;
    r.details = {{"ginibre_G", g}, {"plasma_B0", b0}, {"finite_n", fin}, {"points", zs.size()}};
    r.summary = "G " + fmt("%.1e", g) + ", B^0 " + fmt("%.1e", b0) + ", finite n " + fmt("%.1e", fin);
    return r;
  }

  // ---------------------------------------------------------------- 8
  CriterionResult ward() {
    CriterionResult r{8, "ward residual"};
    const auto zs = disk_lattice(2.0, 1.0);
    const auto inf = ward_residual(PlasmaParams::ginibre(), zs, {}, false);
    const auto zero = ward_residual(PlasmaParams{0.0}, zs, {}, true);
    const double ratio = zero.doubled_max_residual / zero.max_residual;
    const bool halves = ratio >= 0.5 * 0.7 && ratio <= 0.5 * 1.3;
    r.pass = inf.max_residual <= 1e-6 && zero.max_residual <= 5e-2 && halves;
    r.details = {{"m_inf", inf.max_residual},
                 {"m_zero", zero.max_residual},
                 {"m_zero_doubled", zero.doubled_max_residual},
                 {"doubling_ratio", ratio},
                 {"points", zs.size()}};
    r.summary = "m=inf " + fmt("%.1e", inf.max_residual) + ", m=0 " + fmt("%.2e", zero.max_residual) +
                ", doubled/default " + fmt("%.3f", ratio) + " (need 0.35..0.65)";
    return r;
  }

  // ---------------------------------------------------------------- 9
  CriterionResult traces() {
    CriterionResult r{9, "traces"};
    const std::size_t n = cap(200);
    const auto& b = cache.basis(gin, n);
    std::map<double, double> defect;
    bool counting = true;
    double bulk6 = 0.0;
    Json cells = Json::array();
    auto record = [&](const ConcentrationSpectrum& s) {
      bool holds = spectrum_in_unit_interval(s);
      for (const auto& c : counting_inequalities(s)) holds = holds && c.holds;
      counting = counting && holds;
      cells.push_back({{"p", cplx(s.p)},
                       {"lambda", s.lambda},
                       {"trace_over_lambda2", s.trace / (s.lambda * s.lambda)},
                       {"defect", trace_defect(s)},
                       {"counting_holds", holds}});
    };
    for (double L : {4.0, 6.0, 8.0}) {
      const auto s = concentration_spectrum(b, gin, 0.0, n, 1.0, L);
      record(s);
      defect[L] = trace_defect(s);
      if (L == 6.0) bulk6 = s.trace / 36.0;
    }
    const auto e = concentration_spectrum(b, gin, 1.0, n, 1.0, 6.0);
    record(e);
    const double edge6 = e.trace / 36.0;
    const bool decreasing = defect[4.0] > defect[6.0] && defect[6.0] > defect[8.0];
    r.pass = std::abs(bulk6 - 1.0) <= 0.1 && std::abs(edge6 - 0.5) <= 0.1 && decreasing && defect[8.0] <= 0.15 &&
             counting;
    r.details = {{"n", n}, {"cells", cells}};
    r.summary = "TrT/L^2 bulk " + fmt("%.3f", bulk6) + ", edge " + fmt("%.3f", edge6) + "; defect " +
                fmt("%.3f", defect[4.0]) + " > " + fmt("%.3f", defect[6.0]) + " > " + fmt("%.3f", defect[8.0]) +
                (counting ? "; counting ok" : "; counting FAILED");
    return r;
  }

  // ---------------------------------------------------------------- 10
  CriterionResult bernstein() {
    CriterionResult r{10, "bernstein"};
    const auto& b = cache.basis(gin, 100);
    const auto a = bernstein_check(gin, b, gin_drop, 20, 1);
    const auto m = bernstein_check(gin, b, gin_drop, 10, 2);
    r.pass = a.max_ratio <= 1.1 && m.max_principle_ratio <= 1.0 + 1e-6;
    r.details = {{"max_ratio", a.max_ratio}, {"fd_agreement", a.fd_agreement}, {"max_principle_ratio", m.max_principle_ratio}};
    r.summary = "max ratio " + fmt("%.4f", a.max_ratio) + " (<= 1.1), outside/inside sup " +
                fmt("%.4f", m.max_principle_ratio);
    return r;
  }

  // ---------------------------------------------------------------- 11
  CriterionResult lagrange() {
    CriterionResult r{11, "lagrange bound"};
    r.diagnostic = true;
    Json tries = Json::array();
    double sup = kInf;
    for (std::size_t restarts : {4, 8, 16}) {
      const auto& fr = cache.fekete(gin, 50, restarts);
      const auto rep = lagrange_report(gin, gin_drop, fr.config);
      sup = rep.max_sup;
      tries.push_back({{"restarts", restarts}, {"max_sup", rep.max_sup}, {"energy", fr.report.energy}});
      if (sup <= 1.05) break;
    }
    r.pass = sup <= 1.05;
    r.details = {{"attempts", tries}};
    r.summary = "max sup |l_j| = " + fmt("%.4f", sup) + " (<= 1.05) after " + std::to_string(tries.size()) +
                " attempt(s)";
    return r;
  }

  // ---------------------------------------------------------------- 12
  CriterionResult equilibrium() {
    CriterionResult r{12, "equilibrium"};
    const EquilibriumMeasure mu(gin, gin_drop);
    const double gamma = robin_constant(gin, mu).gamma;
    const double iq = equilibrium_energy(gin, mu);
    std::vector<Complex> samples;
    for (double rad : {0.0, 0.25, 0.5, 0.75, 0.95})
      for (int k = 0; k < 8; ++k) samples.push_back(std::polar(rad, 2.0 * kPi * k / 8 + 0.1));
    const double obs = obstacle_report(gin, mu, gamma, samples).max_deviation_on_droplet;
    const double res = equilibrium_residual(ell, EquilibriumMeasure(ell, ell_drop));
    r.pass = std::abs(gamma - 1.0) <= 1e-3 && std::abs(iq - 0.75) <= 1e-3 && obs <= 1e-3 && res <= 1e-3;
    r.details = {{"gamma", gamma}, {"energy", iq}, {"obstacle_deviation", obs}, {"ellipse_residual", res}};
    r.summary = "gamma " + fmt("%.6f", gamma) + ", I_Q " + fmt("%.6f", iq) + ", obstacle " + fmt("%.1e", obs) +
                ", ellipse residual " + fmt("%.1e", res);
    return r;
  }

  // ---------------------------------------------------------------- 13
  CriterionResult sampler() {
    CriterionResult r{13, "sampler histogram"};
    MetropolisConfig mc;
    mc.burn_in_sweeps = 500;
    mc.sweeps = quick ? 5000 : 20000;
    mc.seed = 11;
    const auto h = sampler_histogram(gin, 64, mc, 10, 1.2);
    Json bins = Json::array();
    for (const auto& b : h.bins)
      bins.push_back({{"r0", b.r0}, {"r1", b.r1}, {"observed", b.observed}, {"expected", b.expected}, {"z", b.z_score}});
    r.pass = h.max_z <= 3.0;
    r.details = {{"bins", bins}, {"sweeps", mc.sweeps}, {"acceptance", h.acceptance_rate}};
    r.summary = "max |z| = " + fmt("%.2f", h.max_z) + " over " + std::to_string(h.bins.size()) + " bins (<= 3)";
    return r;
  }
};

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt) {
  Suite s;
  s.quick = opt.quick;
  const std::vector<std::function<CriterionResult()>> checks{
      [&] { return s.separation_check(); }, [&] { return s.bulk_density(); }, [&] { return s.boundary_density(); },
      [&] { return s.strip(); },           [&] { return s.kernel_exactness(); }, [&] { return s.boundary_profile(); },
      [&] { return s.mass_one(); },        [&] { return s.ward(); },             [&] { return s.traces(); },
      [&] { return s.bernstein(); },       [&] { return s.lagrange(); },         [&] { return s.equilibrium(); },
      [&] { return s.sampler(); }};
  std::vector<CriterionResult> out;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const int id = int(i) + 1;
    if (!opt.only.empty() && std::find(opt.only.begin(), opt.only.end(), id) == opt.only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
      r = checks[i]();
    } catch (const std::exception& e) {
      r.id = id;
      r.pass = false;
      r.summary = std::string("error: ") + e.what();
      r.details = {{"error", e.what()}};
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (opt.progress) *opt.progress << format_line(r) << std::endl;
    out.push_back(std::move(r));
  }
  return out;
}

std::string format_line(const CriterionResult& r) {
  char head[96];
  const char* tag = r.pass ? "PASS" : (r.diagnostic ? "WARN" : "FAIL");
  std::snprintf(head, sizeof head, "[%s] %2d %-20s", tag, r.id, r.name.c_str());
  return std::string(head) + " " + r.summary + fmt("  (%.1f s)", r.seconds);
}

bool all_passed(const std::vector<CriterionResult>& rs) {
  return std::all_of(rs.begin(), rs.end(), [](const auto& r) { return r.pass || r.diagnostic; });
}

Json to_json(const std::vector<CriterionResult>& rs) {
  Json arr = Json::array();
  for (const auto& r : rs)
    arr.push_back({{"id", r.id},
                   {"name", r.name},
                   {"pass", r.pass},
                   {"diagnostic", r.diagnostic},
                   {"summary", r.summary},
                   {"details", r.details}});
  return arr;
}

}  // namespace coulomb::app
