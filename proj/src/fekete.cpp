#include "coulomb/fekete.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <random>

#include "coulomb/quadrature.hpp"
#include "detail/rng.hpp"

namespace coulomb {

namespace {

double dot(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  std::vector<double> t(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) t[i] = (std::conj(a[i]) * b[i]).real();
  return pairwise_sum(t);
}

bool has_collision(const std::vector<Complex>& pts) {
  const std::size_t n = pts.size();
  int hit = 0;
#pragma omp parallel for schedule(static) reduction(| : hit)
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = j + 1; k < n; ++k) {
      if (std::abs(pts[j] - pts[k]) < kCollisionDistance) hit |= 1;
    }
  }
  return hit != 0;
}

// Q(w) - Q(z) without cancellation for the built-ins.
double q_delta(const Potential& pot, Complex z, Complex w) {
  switch (pot.kind()) {
    case PotentialKind::Ginibre:
      return ((w - z) * std::conj(w + z)).real();
    case PotentialKind::Ellipse: {
      const double t = pot.ellipse_t();
      const Complex d = w - z;
      const Complex s = w + z;
      return (1.0 - t) * d.real() * s.real() + (1.0 + t) * d.imag() * s.imag();
    }
    case PotentialKind::MittagLeffler: {
      const double r2 = std::norm(z);
      const double diff = ((w - z) * std::conj(w + z)).real();
      if (r2 == 0.0) return pot(w);
      return std::pow(r2, pot.exponent()) * std::expm1(pot.exponent() * std::log1p(diff / r2));
    }
    default:
      return pot(w) - pot(z);
  }
}

// log(|a| / |b|) accurate when a and b are close.
double log_ratio(Complex a, Complex b) {
  const double nb = std::norm(b);
  return 0.5 * std::log1p(((a - b) * std::conj(a + b)).real() / nb);
}

// H(y) - H(x), summed without forming either energy.
EnergyValue energy_change(const Potential& pot, const std::vector<Complex>& x, const std::vector<Complex>& y) {
  if (has_collision(y)) return {kInf, true};
  const std::size_t n = x.size();
  const double nn = static_cast<double>(n);
  std::vector<double> rows(n);
#pragma omp parallel for schedule(static)
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> terms;
    terms.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
      if (k == j) continue;
      // log 1/|y_j - y_k| - log 1/|x_j - x_k|
      terms.push_back(log_ratio(x[j] - x[k], y[j] - y[k]));
    }
    terms.push_back(nn * q_delta(pot, x[j], y[j]));
    rows[j] = pairwise_sum(terms);
  }
  return {pairwise_sum(rows), false};
}

}  // namespace

EnergyValue energy(const Potential& pot, const Configuration& cfg) {
  const auto& pts = cfg.points;
  if (has_collision(pts)) return {kInf, true};
  const std::size_t n = pts.size();
  const double nn = static_cast<double>(n);
  std::vector<double> rows(n);
#pragma omp parallel for schedule(static)
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> terms;
    terms.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
      if (k != j) terms.push_back(-std::log(std::abs(pts[j] - pts[k])));
    }
    terms.push_back(nn * pot(pts[j]));
    rows[j] = pairwise_sum(terms);
  }
  return {pairwise_sum(rows), false};
}

std::vector<Complex> energy_gradient(const Potential& pot, const Configuration& cfg) {
  const auto& pts = cfg.points;
  const std::size_t n = pts.size();
  if (has_collision(pts)) throw CollisionError("energy_gradient: coincident points");
  const double nn = static_cast<double>(n);
  std::vector<Complex> g(n);
#pragma omp parallel for schedule(static)
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<Complex> terms;
    terms.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
      if (k == j) continue;
      const Complex d = pts[j] - pts[k];
      terms.push_back(-2.0 * d / std::norm(d));
    }
    terms.push_back(nn * pot.grad(pts[j]));
    g[j] = pairwise_sum(terms);
  }
  return g;
}

double max_gradient_norm(const std::vector<Complex>& g) {
  double m = 0.0;
  for (const Complex& v : g) m = std::max(m, std::abs(v));
  return m;
}

Configuration sample_equilibrium(const EquilibriumMeasure& mu, std::size_t n, std::uint64_t seed) {
  const Droplet& S = mu.droplet();
  double dmax = 0.0;
  for (const Complex& z : S.interior_grid(24, 48).nodes) dmax = std::max(dmax, mu.density_on_support(z));
  for (int j = 0; j < 64; ++j) {
    dmax = std::max(dmax, mu.density_on_support(S.point_at_level(1.0, 2.0 * kPi * j / 64.0)));
  }
  dmax *= 1.05;
  const auto [hx, hy] = S.half_extent();
  const Complex c = S.center();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(-hx, hx);
  std::uniform_real_distribution<double> uy(-hy, hy);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  Configuration cfg;
  cfg.points.reserve(n);
  while (cfg.points.size() < n) {
    const Complex z = c + Complex(ux(rng), uy(rng));
    if (!S.contains(z)) continue;
    if (u01(rng) * dmax <= mu.density_on_support(z)) cfg.points.push_back(z);
  }
  return cfg;
}

FeketeResult descend(const Potential& pot, Configuration start, const SolverConfig& sc) {
  if (!(sc.tolerance > 0.0)) throw std::invalid_argument("solver tolerance must be > 0");
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t n = start.n();
  if (n == 0) throw std::invalid_argument("descend: empty configuration");
  const double nn = static_cast<double>(n);
  // a single step moves no point further than this
  const double cap = 0.25 / std::sqrt(nn);

  std::vector<Complex> x = std::move(start.points);
  EnergyValue f = energy(pot, Configuration{x});
  if (f.collision) throw CollisionError("descend: starting configuration has coincident points");
  std::vector<Complex> g = energy_gradient(pot, Configuration{x});

  std::deque<std::pair<std::vector<Complex>, std::vector<Complex>>> hist;
  SolverReport rep;
  rep.energy_trace.push_back(f.value);
  std::size_t it = 0;
  bool reset_once = false;
  for (; it < sc.max_iterations; ++it) {
    if (max_gradient_norm(g) <= sc.tolerance * nn) {
      rep.converged = true;
      break;
    }
    // two-loop recursion
    std::vector<Complex> d(g);
    std::vector<double> alphas(hist.size());
    for (std::size_t h = hist.size(); h-- > 0;) {
      const auto& [s, y] = hist[h];
      alphas[h] = dot(s, d) / dot(y, s);
      for (std::size_t i = 0; i < n; ++i) d[i] -= alphas[h] * y[i];
    }
    if (!hist.empty()) {
      const auto& [s, y] = hist.back();
      const double scale = dot(s, y) / dot(y, y);
      for (auto& v : d) v *= scale;
    }
    for (std::size_t h = 0; h < hist.size(); ++h) {
      const auto& [s, y] = hist[h];
      const double beta = dot(y, d) / dot(y, s);
      for (std::size_t i = 0; i < n; ++i) d[i] += (alphas[h] - beta) * s[i];
    }
    for (auto& v : d) v = -v;
    double slope = dot(g, d);
    if (!(slope < 0.0)) {
      hist.clear();
      d = g;
      for (auto& v : d) v = -v;
      slope = dot(g, d);
    }
    const double dmax = max_gradient_norm(d);
    double alpha = std::min(1.0, cap / dmax);
    if (hist.empty()) alpha = cap / dmax;

    std::vector<Complex> y(n);
    bool accepted = false;
    EnergyValue df{};
    for (std::size_t b = 0; b < sc.max_backtracks; ++b) {
      for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + alpha * d[i];
      df = energy_change(pot, x, y);
      if (!df.collision && df.value <= sc.armijo * alpha * slope) {
        accepted = true;
        break;
      }
      alpha *= sc.backtrack;
    }
    if (!accepted) {
      if (hist.empty() || reset_once) break;
      hist.clear();
      reset_once = true;
      continue;
    }
    reset_once = false;
    std::vector<Complex> gy = energy_gradient(pot, Configuration{y});
    std::vector<Complex> s(n), yy(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = y[i] - x[i];
      yy[i] = gy[i] - g[i];
    }
    if (dot(s, yy) > 1e-14 * std::sqrt(dot(s, s) * dot(yy, yy))) {
      hist.emplace_back(std::move(s), std::move(yy));
      if (hist.size() > sc.memory) hist.pop_front();
    }
    x = std::move(y);
    g = std::move(gy);
    f.value += df.value;
    rep.energy_trace.push_back(f.value);
  }
  FeketeResult out;
  out.config.points = std::move(x);
  rep.iterations = it;
  rep.energy = energy(pot, out.config).value;
  rep.max_gradient = max_gradient_norm(g);
  if (!rep.converged) rep.converged = rep.max_gradient <= sc.tolerance * nn;
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out.report = std::move(rep);
  return out;
}

FeketeResult solve_fekete(const Potential& pot, std::size_t n, const SolverConfig& sc, const Droplet& droplet) {
  if (n == 0) throw std::invalid_argument("solve_fekete: n must be >= 1");
  if (sc.restarts == 0) throw std::invalid_argument("solve_fekete: restarts must be >= 1");
  const auto t0 = std::chrono::steady_clock::now();
  const EquilibriumMeasure mu(pot, droplet);
  const std::size_t R = sc.restarts;
  std::vector<FeketeResult> runs(R);
  std::vector<std::string> errors(R);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t r = 0; r < R; ++r) {
    try {
      Configuration start = sample_equilibrium(mu, n, detail::derive_seed(sc.seed, r));
      runs[r] = descend(pot, std::move(start), sc);
    } catch (const std::exception& e) {
      errors[r] = e.what();
      runs[r].report.energy = kInf;
    }
  }
  std::size_t best = 0;
  for (std::size_t r = 1; r < R; ++r) {
    if (runs[r].report.energy < runs[best].report.energy) best = r;
  }
  if (!errors[best].empty()) throw std::runtime_error("solve_fekete: all restarts failed: " + errors[best]);
  FeketeResult out = std::move(runs[best]);
  out.report.best_restart = best;
  out.report.restart_energies.resize(R);
  for (std::size_t r = 0; r < R; ++r) {
    out.report.restart_energies[r] = (r == best) ? out.report.energy : runs[r].report.energy;
  }
  out.report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

Separation separation(const Potential& pot, const Configuration& cfg) {
  const std::size_t n = cfg.n();
  if (n < 2) throw std::invalid_argument("separation: need at least two points");
  Separation sep;
  sep.nearest.assign(n, kInf);
  const auto& p = cfg.points;
#pragma omp parallel for schedule(static)
  for (std::size_t j = 0; j < n; ++j) {
    double m = kInf;
    for (std::size_t k = 0; k < n; ++k) {
      if (k != j) m = std::min(m, std::abs(p[j] - p[k]));
    }
    sep.nearest[j] = m;
  }
  sep.delta = kInf;
  for (std::size_t j = 0; j < n; ++j) {
    const double v = std::sqrt(static_cast<double>(n) * pot.laplacian(p[j])) * sep.nearest[j];
    if (v < sep.delta) {
      sep.delta = v;
      sep.argmin = j;
    }
  }
  return sep;
}

double level_band_mass(const EquilibriumMeasure& mu, double l0, double l1) {
  l0 = std::max(l0, 0.0);
  l1 = std::min(l1, 1.0);
  if (!(l1 > l0)) return 0.0;
  const Droplet& S = mu.droplet();
  const Quadrature1D q = gauss_legendre(32, l0, l1);
  constexpr std::size_t kAngles = 256;
  std::vector<double> terms;
  terms.reserve(q.size() * kAngles);
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double l = q.nodes[i];
    double jac = 0.0;
    if (const auto* d = std::get_if<DiskShape>(&S.shape())) {
      jac = d->radius * d->radius * l;
    } else if (const auto* a = std::get_if<AnnulusShape>(&S.shape())) {
      jac = (a->inner + l * (a->outer - a->inner)) * (a->outer - a->inner);
    } else {
      const auto& e = std::get<EllipseShape>(S.shape());
      jac = e.a * e.b * l;
    }
    for (std::size_t j = 0; j < kAngles; ++j) {
      const double phi = 2.0 * kPi * static_cast<double>(j) / kAngles;
      const Complex z = S.point_at_level(l, phi);
      // dA = jac dl dphi / pi
      terms.push_back(mu.density_on_support(z) * jac * q.weights[i] * 2.0 / kAngles);
    }
  }
  return pairwise_sum(terms);
}

BinDiscrepancy counting_vs_sigma(const Configuration& cfg, const EquilibriumMeasure& mu, std::size_t bins) {
  if (bins == 0) throw std::invalid_argument("counting_vs_sigma: bins must be >= 1");
  BinDiscrepancy rep;
  rep.edges.resize(bins + 1);
  for (std::size_t b = 0; b <= bins; ++b) rep.edges[b] = static_cast<double>(b) / static_cast<double>(bins);
  rep.empirical.assign(bins, 0.0);
  rep.expected.resize(bins);
  const double inv = cfg.n() ? 1.0 / static_cast<double>(cfg.n()) : 0.0;
  for (const Complex& z : cfg.points) {
    const double l = mu.droplet().level(z);
    auto b = static_cast<std::size_t>(std::max(0.0, l) * static_cast<double>(bins));
    rep.empirical[std::min(b, bins - 1)] += inv;
  }
  for (std::size_t b = 0; b < bins; ++b) {
    rep.expected[b] = level_band_mass(mu, rep.edges[b], rep.edges[b + 1]);
    rep.max_discrepancy = std::max(rep.max_discrepancy, std::abs(rep.empirical[b] - rep.expected[b]));
  }
  return rep;
}

// ---------------------------------------------------------------- sampler

bool metropolis_accept(double beta_delta_h, double u) {
  if (beta_delta_h <= 0.0) return true;
  return u < std::exp(-beta_delta_h);
}

double energy_delta(const Potential& pot, const Configuration& cfg, std::size_t j, Complex w) {
  const auto& p = cfg.points;
  const std::size_t n = p.size();
  std::vector<double> terms;
  terms.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (k == j) continue;
    const Complex b = w - p[k];
    if (std::abs(b) < kCollisionDistance) return kInf;
    // ordered pairs: each unordered pair appears twice
    terms.push_back(2.0 * log_ratio(p[j] - p[k], b));
  }
  terms.push_back(static_cast<double>(n) * q_delta(pot, p[j], w));
  return pairwise_sum(terms);
}

SampleResult metropolis_sample(const Potential& pot, std::size_t n, const MetropolisConfig& mc, std::size_t thin) {
  if (!(mc.beta > 0.0)) throw std::invalid_argument("metropolis_sample: beta must be > 0");
  if (n == 0) throw std::invalid_argument("metropolis_sample: n must be >= 1");
  const EquilibriumMeasure mu(pot, droplet_for(pot));
  SampleResult res;
  res.config = sample_equilibrium(mu, n, detail::derive_seed(mc.seed, 0xC0FFEE));
  std::mt19937_64 rng(detail::derive_seed(mc.seed, 1));
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  double step = mc.step / std::sqrt(static_cast<double>(n));
  std::size_t accepted = 0;
  std::size_t proposed = 0;
  const std::size_t total = mc.burn_in_sweeps + mc.sweeps;
  for (std::size_t sweep = 0; sweep < total; ++sweep) {
    const bool burn = sweep < mc.burn_in_sweeps;
    std::size_t acc_sweep = 0;
    for (std::size_t m = 0; m < n; ++m) {
      const std::size_t j = pick(rng);
      const Complex w = res.config.points[j] + step * Complex(gauss(rng), gauss(rng));
      const double dh = energy_delta(pot, res.config, j, w);
      if (std::isfinite(dh) && metropolis_accept(mc.beta * dh, u01(rng))) {
        res.config.points[j] = w;
        ++acc_sweep;
      }
    }
    if (burn) {
      const double rate = static_cast<double>(acc_sweep) / static_cast<double>(n);
      step *= std::exp(0.5 * (rate - mc.target_acceptance));
    } else {
      accepted += acc_sweep;
      proposed += n;
      if (thin > 0 && (sweep - mc.burn_in_sweeps + 1) % thin == 0) res.snapshots.push_back(res.config);
    }
  }
  res.acceptance_rate = proposed ? static_cast<double>(accepted) / static_cast<double>(proposed) : 0.0;
  res.step = step;
  return res;
}

}  // namespace coulomb
