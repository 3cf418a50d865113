#include "ctoda/todasolver.hpp"

#include "ctoda/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace ctoda {

std::string to_string(InitKind k) {
  switch (k) {
    case InitKind::zero: return "zero";
    case InitKind::constant_oracle: return "constant-oracle";
    case InitKind::perturbed: return "perturbed";
    default: return "file";
  }
}

InitKind parse_init(std::string_view s) {
  if (s == "zero") return InitKind::zero;
  if (s == "constant-oracle") return InitKind::constant_oracle;
  if (s == "perturbed") return InitKind::perturbed;
  if (s == "file") return InitKind::file;
  throw std::invalid_argument("unknown init: " + std::string(s));
}

void SolverConfig::validate() const {
  type.validate();
  grid.validate();
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (!(damping > 0.0 && damping <= 1.0)) throw std::invalid_argument("damping must lie in (0, 1]");
  if (max_iter < 0) throw std::invalid_argument("max_iter must be non-negative");
  if (patience < 1) throw std::invalid_argument("patience must be at least 1");
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) throw std::invalid_argument("amplitude must be >= 0");
  if (!(cg_tol > 0.0) || cg_max_iter < 1) throw std::invalid_argument("invalid CG settings");
  if (init == InitKind::file) {
    if (!init_field) throw std::invalid_argument("init=file needs an initial field");
    if (!(init_field->grid == grid) || init_field->rank != type.rank)
      throw std::invalid_argument("initial field does not match the grid or rank");
  }
}

std::vector<double> constant_solution(const RootSystem& rs, double q_abs2) {
  if (!(q_abs2 > 0.0) || !std::isfinite(q_abs2))
    throw std::invalid_argument("constant_solution needs |q|^2 > 0");
  const int l = rs.rank();
  const auto r = x_coefficients(rs);
  const auto& a = rs.positive_root(rs.highest_root());
  const auto& c = rs.coroot(rs.highest_root());
  double acc = std::log(q_abs2);
  for (int i = 0; i < l; ++i) acc -= a[i] * std::log(c[i] / to_double(r[i]));
  const double log_s = acc / coxeter_number(rs);

  // alpha_i(Omega) = sum_k w_k A[k][i], so w = A^{-T} t with A^{-T} exact.
  RationalMatrix at(l, std::vector<Rational>(l));
  for (int i = 0; i < l; ++i)
    for (int k = 0; k < l; ++k) at[i][k] = rs.cartan()[k][i];
  std::vector<double> t(l);
  for (int i = 0; i < l; ++i) t[i] = 0.5 * (log_s + std::log(c[i] / to_double(r[i])));
  std::vector<double> w(l, 0.0);
  for (int j = 0; j < l; ++j) {
    std::vector<Rational> e(l, Rational(0));
    e[j] = 1;
    const auto col = solve_exact(at, e);  // column j of A^{-T}
    for (int i = 0; i < l; ++i) w[i] += to_double(col[i]) * t[j];
  }
  return w;
}

// ---------------------------------------------------------------------------

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b, std::vector<double>& scratch) {
  scratch.resize(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) scratch[k] = a[k] * b[k];
  return pairwise_sum(scratch);
}

}  // namespace

TodaProblem::TodaProblem(const RootSystem& rs, const DomainGrid& grid, const QDifferential& q)
    : tc_(TodaCoefficients::from(rs)), grid_(grid) {
  grid_.validate();
  q_abs2_.resize(grid_.nodes());
  for (int n = 0; n < grid_.nodes(); ++n) q_abs2_[n] = std::norm(q(grid_.z(n)));
  const int l = tc_.rank;
  g_.resize(static_cast<std::size_t>(l) * l);
  for (int i = 0; i < l; ++i)
    for (int j = 0; j < l; ++j) g_[i * l + j] = static_cast<double>(tc_.cartan[i][j]) / tc_.half_norms[j];
}

void TodaProblem::residual(const std::vector<double>& w, std::vector<double>& out) const {
  const int l = tc_.rank;
  out.assign(w.size(), 0.0);
  parallel_for(grid_.nodes(), [&](std::size_t b, std::size_t e) {
    std::vector<double> react(l);
    for (int n = static_cast<int>(b); n < static_cast<int>(e); ++n) {
      if (grid_.on_boundary(n)) continue;
      const std::span<const double> wn(w.data() + static_cast<std::size_t>(n) * l, l);
      toda_reaction(tc_, wn, q_abs2_[n], react);
      for (int i = 0; i < l; ++i)
        out[static_cast<std::size_t>(n) * l + i] = -0.5 * laplacian5(grid_, w.data(), l, i, n) + react[i];
    }
  });
}

void TodaProblem::jacobian_vector_product(const std::vector<double>& w, const std::vector<double>& v,
                                          std::vector<double>& out) const {
  const int l = tc_.rank;
  out.assign(w.size(), 0.0);
  parallel_for(grid_.nodes(), [&](std::size_t b, std::size_t e) {
    for (int n = static_cast<int>(b); n < static_cast<int>(e); ++n) {
      if (grid_.on_boundary(n)) continue;
      const std::span<const double> wn(w.data() + static_cast<std::size_t>(n) * l, l);
      const std::span<const double> vn(v.data() + static_cast<std::size_t>(n) * l, l);
      const double tail = 2.0 * q_abs2_[n] * std::exp(-2.0 * tc_.delta(wn)) * tc_.delta(vn);
      for (int i = 0; i < l; ++i)
        out[static_cast<std::size_t>(n) * l + i] = -0.5 * laplacian5(grid_, v.data(), l, i, n) +
                                                   2.0 * tc_.r[i] * std::exp(2.0 * tc_.alpha(i, wn)) * tc_.alpha(i, vn) +
                                                   tail * tc_.comarks[i];
    }
  });
}

double TodaProblem::residual_norm(const std::vector<double>& r) const {
  const int l = tc_.rank;
  double m = 0.0;
  for (int n = 0; n < grid_.nodes(); ++n) {
    if (grid_.on_boundary(n)) continue;
    for (int i = 0; i < l; ++i) {
      const double v = std::abs(r[static_cast<std::size_t>(n) * l + i]);
      if (std::isnan(v)) return v;
      m = std::max(m, v);
    }
  }
  return m;
}

void TodaProblem::apply_sym(const std::vector<double>& w, const std::vector<double>& v,
                            std::vector<double>& out) const {
  const int l = tc_.rank;
  std::vector<double> jv;
  jacobian_vector_product(w, v, jv);
  out.assign(v.size(), 0.0);
  for (int n = 0; n < grid_.nodes(); ++n)
    for (int i = 0; i < l; ++i) {
      double s = 0.0;
      for (int j = 0; j < l; ++j) s += g_[i * l + j] * jv[static_cast<std::size_t>(n) * l + j];
      out[static_cast<std::size_t>(n) * l + i] = s;
    }
}

int TodaProblem::newton_direction(const std::vector<double>& w, const std::vector<double>& r,
                                  std::vector<double>& p, double rel_tol, int max_iter) const {
  const int l = tc_.rank;
  const std::size_t size = w.size();
  std::vector<double> b(size, 0.0), diag(size, 1.0), scratch;
  const double lap_diag = 1.0 / (grid_.dx * grid_.dx) + 1.0 / (grid_.dy * grid_.dy);
  for (int n = 0; n < grid_.nodes(); ++n) {
    if (grid_.on_boundary(n)) continue;
    const std::span<const double> wn(w.data() + static_cast<std::size_t>(n) * l, l);
    const double tail = 2.0 * q_abs2_[n] * std::exp(-2.0 * tc_.delta(wn));
    std::vector<double> e2a(l), delta_k(l);
    for (int m = 0; m < l; ++m) e2a[m] = 2.0 * tc_.r[m] * std::exp(2.0 * tc_.alpha(m, wn));
    for (int k = 0; k < l; ++k) {
      delta_k[k] = 0.0;
      for (int j = 0; j < l; ++j) delta_k[k] += tc_.marks[j] * tc_.cartan[k][j];
    }
    for (int i = 0; i < l; ++i) {
      double gr = 0.0, hii = 0.0;
      for (int m = 0; m < l; ++m) {
        gr += g_[i * l + m] * r[static_cast<std::size_t>(n) * l + m];
        hii += g_[i * l + m] * (e2a[m] * tc_.cartan[i][m] + tail * tc_.comarks[m] * delta_k[i]);
      }
      b[static_cast<std::size_t>(n) * l + i] = -gr;
      diag[static_cast<std::size_t>(n) * l + i] = g_[i * l + i] * lap_diag + hii;
    }
  }

  p.assign(size, 0.0);
  std::vector<double> res = b, z(size), dir(size), ad;
  for (std::size_t k = 0; k < size; ++k) z[k] = res[k] / diag[k];
  dir = z;
  double rz = dot(res, z, scratch);
  const double bnorm = std::sqrt(dot(b, b, scratch));
  if (bnorm == 0.0) return 0;
  int it = 0;
  for (; it < max_iter; ++it) {
    if (std::sqrt(dot(res, res, scratch)) <= rel_tol * bnorm) break;
    apply_sym(w, dir, ad);
    const double curv = dot(dir, ad, scratch);
    if (!(curv > 0.0)) break;
    const double alpha = rz / curv;
    for (std::size_t k = 0; k < size; ++k) {
      p[k] += alpha * dir[k];
      res[k] -= alpha * ad[k];
      z[k] = res[k] / diag[k];
    }
    const double rz_new = dot(res, z, scratch);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t k = 0; k < size; ++k) dir[k] = z[k] + beta * dir[k];
  }
  return it;
}

// ---------------------------------------------------------------------------

HFieldGrid initial_field(const SolverConfig& cfg, const RootSystem& rs) {
  const int l = rs.rank();
  HFieldGrid f(cfg.grid, l);
  if (cfg.init == InitKind::file) return *cfg.init_field;
  if (cfg.init == InitKind::zero) return f;

  std::vector<double> cached;
  Complex cached_q(0.0, 0.0);
  bool have_cache = false;
  for (int n = 0; n < cfg.grid.nodes(); ++n) {
    const Complex qn = cfg.q(cfg.grid.z(n));
    if (std::norm(qn) == 0.0) continue;
    if (!have_cache || std::abs(qn) != std::abs(cached_q)) {
      cached = constant_solution(rs, std::norm(qn));
      cached_q = qn;
      have_cache = true;
    }
    for (int i = 0; i < l; ++i) f(n, i) = cached[i];
  }
  if (cfg.init == InitKind::perturbed) {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> u(-cfg.amplitude, cfg.amplitude);
    for (int n = 0; n < cfg.grid.nodes(); ++n)
      for (int i = 0; i < l; ++i) {
        const double noise = u(rng);
        if (!cfg.grid.on_boundary(n)) f(n, i) += noise;
      }
  }
  return f;
}

Solution solve(const SolverConfig& cfg, const ChevalleyAlgebra& alg, const PrincipalSL2&) {
  cfg.validate();
  if (!(cfg.type == alg.root_system().type()))
    throw std::invalid_argument("solver configuration type does not match the algebra");
  const TodaProblem problem(alg.root_system(), cfg.grid, cfg.q);

  Solution sol;
  sol.omega = initial_field(cfg, alg.root_system());
  if (!sol.omega.all_finite()) throw std::runtime_error("solve: non-finite initial field");
  std::vector<double>& w = sol.omega.values;
  std::vector<double> r, p, trial, trial_r, scratch;

  problem.residual(w, r);
  double norm = problem.residual_norm(r);
  if (std::isnan(norm)) throw std::runtime_error("solve: NaN in the initial residual");
  sol.residual_history.push_back(norm);
  double best = norm;
  int since_best = 0;
  std::ostringstream diag;

  while (true) {
    if (norm <= cfg.tol) {
      sol.converged = true;
      diag << "converged";
      break;
    }
    if (sol.iterations >= cfg.max_iter) {
      diag << "max_iter reached";
      break;
    }
    if (since_best >= cfg.patience) {
      diag << "no progress for " << cfg.patience << " iterations";
      break;
    }
    const int cg_iters = problem.newton_direction(w, r, p, cfg.cg_tol, cfg.cg_max_iter);
    const double f0 = 0.5 * dot(r, r, scratch);
    double t = cfg.damping;
    bool accepted = false;
    double f1 = f0;
    while (t >= 1e-10) {
      trial = w;
      for (std::size_t k = 0; k < w.size(); ++k) trial[k] += t * p[k];
      problem.residual(trial, trial_r);
      f1 = 0.5 * dot(trial_r, trial_r, scratch);
      if (std::isfinite(f1) && f1 <= (1.0 - 2e-4 * t) * f0) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      diag << "line search failed at iteration " << sol.iterations << " (cg " << cg_iters << ")";
      break;
    }
    w.swap(trial);
    r.swap(trial_r);
    ++sol.iterations;
    norm = problem.residual_norm(r);
    if (std::isnan(norm)) throw std::runtime_error("solve: NaN residual");
    sol.residual_history.push_back(norm);
    if (norm < best) {
      best = norm;
      since_best = 0;
    } else {
      ++since_best;
    }
  }
  sol.diagnostics = diag.str();
  return sol;
}

double sigma_symmetry_defect(const HFieldGrid& omega, const ChevalleyAlgebra& alg, const PrincipalSL2& sl2) {
  const int l = alg.rank();
  const Eigen::MatrixXd s = sigma_involution(alg, sl2).matrix().topLeftCorner(l, l);
  double defect = 0.0;
  for (int n = 0; n < omega.grid.nodes(); ++n) {
    const Eigen::Map<const Eigen::VectorXd> w(omega.at(n).data(), l);
    defect = std::max(defect, (s * w - w).cwiseAbs().maxCoeff());
  }
  return defect;
}

double sigma_symmetry_defect(const Solution& sol, const ChevalleyAlgebra& alg, const PrincipalSL2& sl2) {
  return sigma_symmetry_defect(sol.omega, alg, sl2);
}

UniquenessReport uniqueness_probe(const SolverConfig& cfg, const std::vector<std::uint64_t>& seeds,
                                  const ChevalleyAlgebra& alg, const PrincipalSL2& sl2) {
  if (seeds.size() < 2) throw std::invalid_argument("uniqueness_probe needs at least two seeds");
  UniquenessReport rep;
  std::vector<HFieldGrid> fields;
  for (auto seed : seeds) {
    SolverConfig c = cfg;
    c.init = InitKind::perturbed;
    c.seed = seed;
    const Solution s = solve(c, alg, sl2);
    rep.converged.push_back(s.converged);
    rep.residuals.push_back(s.final_residual());
    if (s.converged) fields.push_back(s.omega);
  }
  for (std::size_t a = 0; a < fields.size(); ++a)
    for (std::size_t b = a + 1; b < fields.size(); ++b)
      for (std::size_t k = 0; k < fields[a].values.size(); ++k)
        rep.discrepancy = std::max(rep.discrepancy, std::abs(fields[a].values[k] - fields[b].values[k]));
  return rep;
}

}  // namespace ctoda
