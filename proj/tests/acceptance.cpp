// Runs the ten acceptance criteria and prints one PASS/FAIL line for each.

#include "ctoda/connection.hpp"
#include "ctoda/restriction.hpp"
#include "ctoda/todasolver.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

using namespace ctoda;

namespace {

struct Setup {
  RootSystem rs;
  ChevalleyAlgebra alg;
  PrincipalSL2 sl2;
  explicit Setup(LieType t) : rs(t), alg(rs), sl2(build_principal_sl2(alg)) {}
};

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
};

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double inf_norm(const LieElement& v) { return v.cwiseAbs().maxCoeff(); }

// Random low-mode trigonometric field, constant along nu-orbits.
HFieldGrid smooth_nu_field(const DomainGrid& g, const DiagramAutomorphism& nu, std::uint64_t seed) {
  const int l = static_cast<int>(nu.perm.size());
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<std::array<double, 6>> c(l);
  for (auto& row : c)
    for (auto& v : row) v = u(rng);
  const double kx = 2.0 * std::numbers::pi / (g.dx * g.nx), ky = 2.0 * std::numbers::pi / (g.dy * g.ny);
  HFieldGrid f(g, l);
  for (int n = 0; n < g.nodes(); ++n) {
    const double x = kx * g.x(n), y = ky * g.y(n);
    for (int i = 0; i < l; ++i) {
      const auto& a = c[std::min(i, nu.perm[i])];
      f(n, i) = 0.3 * (a[0] * std::sin(x + a[1]) + a[2] * std::cos(y + a[3]) + 0.5 * a[4] * std::sin(x + y + a[5]));
    }
  }
  return f;
}

SolverConfig config(LieType t, DomainGrid g, double q_abs) {
  SolverConfig c;
  c.type = t;
  c.grid = g;
  c.q = QDifferential::constant(q_abs);
  return c;
}

// 1
Outcome structure_suite() {
  Outcome o;
  const auto t0 = Clock::now();
  int count = 0;
  double worst_sl2 = 0.0;
  for (const auto& t : all_supported_types()) {
    const ChevalleyAlgebra alg{RootSystem(t)};
    const auto sl2 = build_principal_sl2(alg);
    const auto rep = check_structure(alg, sl2);
    ++count;
    worst_sl2 = std::max(worst_sl2, rep.sl2_defect);
    if (!rep.passed()) {
      o.pass = false;
      o.detail << " failed:" << t.name();
    }
  }
  const double secs = seconds_since(t0);
  if (secs >= 60.0) o.pass = false;
  o.detail << " types=" << count << " max_sl2_defect=" << worst_sl2 << " time=" << secs << "s";
  return o;
}

// 2
Outcome commutator_identity() {
  Outcome o;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  double worst = 0.0;
  for (LieType t : {LieType{'A', 1}, LieType{'A', 2}, LieType{'B', 2}, LieType{'G', 2}}) {
    const Setup s(t);
    for (int k = 0; k < 100; ++k) {
      std::vector<double> w(s.alg.rank());
      for (auto& v : w) v = u(rng);
      const Complex q(2.0 * u(rng), 2.0 * u(rng));
      const double d = inf_norm(commutator_explicit(s.alg, s.sl2, w, q) - commutator_closed_form(s.alg, s.sl2, w, q));
      worst = std::max(worst, d);
    }
  }
  o.pass = worst <= 1e-12;
  o.detail << " samples=400 max_abs_difference=" << worst;
  return o;
}

// 3
Outcome higgs_toda_equivalence() {
  Outcome o;
  const auto q = QDifferential::constant({0.8, 0.3});
  for (LieType t : {LieType{'A', 1}, LieType{'A', 2}, LieType{'G', 2}}) {
    const Setup s(t);
    const auto nu = diagram_automorphism(s.rs);
    std::vector<double> err_toda, err_higgs;
    for (int n : {32, 64, 128}) {
      const auto g = DomainGrid::torus(n, n, 2.0 * std::numbers::pi, 2.0 * std::numbers::pi);
      const auto om = smooth_nu_field(g, nu, 77);
      const auto r = higgs_residual(om, q, s.alg, s.sl2);
      const auto ft = curvature(s.alg, build_toda_connection(om, q, s.alg, s.sl2, Gauge::toda));
      const auto fh = curvature(s.alg, build_toda_connection(om, q, s.alg, s.sl2, Gauge::higgs));
      double et = 0.0, eh = 0.0;
      for (int m = 0; m < g.nodes(); ++m) {
        LieElement target = s.alg.zero();
        for (int i = 0; i < s.alg.rank(); ++i) target[i] = -r(m, i);
        et = std::max(et, inf_norm(ft[m] - target));
        eh = std::max(eh, inf_norm(fh[m] - ad_exp_cartan(s.alg, om.at(m), target)));
      }
      err_toda.push_back(et);
      err_higgs.push_back(eh);
    }
    o.detail << " " << t.name() << ":";
    for (const auto* e : {&err_toda, &err_higgs}) {
      const double r1 = (*e)[0] / (*e)[1], r2 = (*e)[1] / (*e)[2];
      o.detail << " [" << (*e)[1] << " @64, ratios " << r1 << "," << r2 << "]";
      for (double r : {r1, r2})
        if (r < 3.2 || r > 4.8) o.pass = false;
    }
  }
  return o;
}

// 4
Outcome constant_oracles() {
  Outcome o;
  const auto g = DomainGrid::torus(32, 32, 1.0, 1.0);
  {
    const Setup s(LieType{'A', 1});
    auto cfg = config({'A', 1}, g, 1.0);
    cfg.init = InitKind::perturbed;
    cfg.seed = 1;
    const auto sol = solve(cfg, s.alg, s.sl2);
    const double u = 0.25 * std::log(2.0);
    double err = 0.0;
    for (int n = 0; n < g.nodes(); ++n) err = std::max(err, std::abs(2.0 * sol.omega(n, 0) - u));  // Omega = u x
    o.pass = o.pass && sol.converged && err < 1e-10;
    o.detail << " A1|q|^2=1 |u-ln2/4|=" << err;
  }
  {
    const Setup s(LieType{'A', 1});
    auto cfg = config({'A', 1}, g, std::sqrt(0.5));
    cfg.init = InitKind::perturbed;
    cfg.seed = 2;
    cfg.tol = 1e-13;
    const auto sol = solve(cfg, s.alg, s.sl2);
    double m = 0.0;
    for (double v : sol.omega.values) m = std::max(m, std::abs(v));
    o.pass = o.pass && sol.converged && m < 1e-12;
    o.detail << " A1|q|^2=1/2 |Omega|=" << m;
  }
  for (LieType t : {LieType{'A', 2}, LieType{'G', 2}}) {
    const RootSystem rs(t);
    const auto cfg = config(t, g, 1.0);
    const TodaProblem p(rs, g, cfg.q);
    std::vector<double> r;
    p.residual(initial_field(cfg, rs).values, r);
    const double res = p.residual_norm(r);
    o.pass = o.pass && res < 1e-13;
    o.detail << " " << t.name() << " residual=" << res;
  }
  return o;
}

// 5
Outcome solver_convergence() {
  Outcome o;
  for (LieType t : {LieType{'A', 1}, LieType{'A', 2}}) {
    const Setup s(t);
    auto cfg = config(t, DomainGrid::torus(64, 64, 1.0, 1.0), 1.0);
    cfg.init = InitKind::perturbed;
    cfg.amplitude = 0.1;
    cfg.seed = 11;
    const auto t0 = Clock::now();
    const auto sol = solve(cfg, s.alg, s.sl2);
    const double secs = seconds_since(t0);
    const auto w0 = constant_solution(s.rs, 1.0);
    double err = 0.0;
    for (int n = 0; n < cfg.grid.nodes(); ++n)
      for (int i = 0; i < s.rs.rank(); ++i) err = std::max(err, std::abs(sol.omega(n, i) - w0[i]));
    o.pass = o.pass && sol.converged && err < 1e-8 && secs < 30.0;
    o.detail << " " << t.name() << ": it=" << sol.iterations << " err=" << err << " time=" << secs << "s";
  }
  return o;
}

// 6
Outcome uniqueness() {
  Outcome o;
  for (LieType t : {LieType{'A', 1}, LieType{'A', 2}}) {
    const Setup s(t);
    const auto cfg = config(t, DomainGrid::torus(32, 32, 1.0, 1.0), 1.0);
    const auto rep = uniqueness_probe(cfg, {101, 202, 303, 404}, s.alg, s.sl2);
    int conv = 0;
    for (bool c : rep.converged) conv += c ? 1 : 0;
    o.pass = o.pass && conv == 4 && rep.discrepancy < 1e-7;
    o.detail << " " << t.name() << ": converged=" << conv << "/4 max_pairwise=" << rep.discrepancy;
  }
  return o;
}

// 7
Outcome sigma_symmetry() {
  Outcome o;
  for (LieType t : {LieType{'A', 2}, LieType{'A', 3}}) {
    const Setup s(t);
    auto cfg = config(t, DomainGrid::torus(32, 32, 1.0, 1.0), 1.0);
    cfg.init = InitKind::perturbed;
    cfg.seed = 7;
    const auto sol = solve(cfg, s.alg, s.sl2);
    const double d = sigma_symmetry_defect(sol, s.alg, s.sl2);
    o.pass = o.pass && sol.converged && d < 1e-8;
    o.detail << " " << t.name() << ": defect=" << d;
  }
  return o;
}

// 8
Outcome restriction_table() {
  Outcome o;
  const std::vector<std::pair<const char*, const char*>> table = {{"A2", "A2(2)"}, {"A4", "A4(2)"}, {"A3", "C2(1)"},
                                                                  {"A5", "C3(1)"}, {"D5", "B4(1)"}, {"D7", "B6(1)"},
                                                                  {"E6", "F4(1)"}};
  for (auto [type, label] : table) {
    const auto got = restrict(RootSystem(LieType::parse(type))).label;
    if (got != label) {
      o.pass = false;
      o.detail << " " << type << "->" << got << "(expected " << label << ")";
    }
  }
  int trivial = 0;
  for (const auto& t : all_supported_types()) {
    const RootSystem rs(t);
    if (!diagram_automorphism(rs).is_trivial()) continue;
    ++trivial;
    const auto got = restrict(rs).label;
    if (got != t.name() + "(1)") {
      o.pass = false;
      o.detail << " " << t.name() << "->" << got;
    }
  }
  o.detail << " twisted=" << table.size() << " trivial=" << trivial;
  return o;
}

// 9
Outcome jacobian_check() {
  Outcome o;
  std::mt19937_64 rng(99);
  std::normal_distribution<double> nd(0.0, 1.0);
  for (LieType t : {LieType{'A', 1}, LieType{'A', 2}}) {
    const TodaProblem p(RootSystem(t), DomainGrid::torus(16, 16, 1.0, 1.0), QDifferential::constant({0.8, 0.6}));
    std::vector<double> w(p.unknowns()), v(p.unknowns()), jv, rp, rm;
    for (auto& x : w) x = 0.2 * nd(rng);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
      for (auto& x : v) x = nd(rng);
      const double h = 1e-6;
      std::vector<double> wp = w, wm = w;
      for (std::size_t i = 0; i < w.size(); ++i) {
        wp[i] += h * v[i];
        wm[i] -= h * v[i];
      }
      p.residual(wp, rp);
      p.residual(wm, rm);
      p.jacobian_vector_product(w, v, jv);
      double num = 0.0, den = 0.0;
      for (std::size_t i = 0; i < w.size(); ++i) {
        const double fd = (rp[i] - rm[i]) / (2 * h);
        num += (fd - jv[i]) * (fd - jv[i]);
        den += jv[i] * jv[i];
      }
      worst = std::max(worst, std::sqrt(num / den));
    }
    o.pass = o.pass && worst < 1e-6;
    o.detail << " " << t.name() << ": max_rel_error=" << worst;
  }
  return o;
}

// 10
Outcome gauge_covariance() {
  Outcome o;
  const auto q = QDifferential::constant({0.8, 0.3});
  double worst = 0.0;
  for (LieType t : {LieType{'A', 2}, LieType{'G', 2}}) {
    const Setup s(t);
    const auto g = DomainGrid::torus(32, 32, 1.0, 1.0);
    const auto conn = build_toda_connection(smooth_nu_field(g, diagram_automorphism(s.rs), 5), q, s.alg, s.sl2, Gauge::toda);
    const auto f = curvature(s.alg, conn);
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int k = 0; k < 10; ++k) {
      HFieldGrid h(g, s.alg.rank());
      for (auto& v : h.values) v = u(rng);
      const auto f2 = curvature(s.alg, gauge_transform(s.alg, conn, h));
      for (int n = 0; n < g.nodes(); ++n) worst = std::max(worst, inf_norm(f2[n] - ad_exp_cartan(s.alg, h.at(n), f[n])));
    }
  }
  o.pass = worst <= 1e-10;
  o.detail << " fields=20 max_defect=" << worst;
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"structure suite", structure_suite},
      {"commutator identity", commutator_identity},
      {"Higgs/Toda equivalence, second order", higgs_toda_equivalence},
      {"constant-solution oracles", constant_oracles},
      {"solver convergence 64x64", solver_convergence},
      {"uniqueness probe", uniqueness},
      {"sigma symmetry", sigma_symmetry},
      {"restriction table", restriction_table},
      {"Jacobian check", jacobian_check},
      {"gauge covariance", gauge_covariance}};
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " exception: " << e.what();
    }
    if (!o.pass) ++failed;
    std::printf("%s %zu %s:%s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first, o.detail.str().c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
