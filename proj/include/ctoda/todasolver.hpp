#pragma once

#include "ctoda/chevalley.hpp"
#include "ctoda/connection.hpp"
#include "ctoda/grid.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ctoda {

enum class InitKind { zero, constant_oracle, perturbed, file };
std::string to_string(InitKind k);
InitKind parse_init(std::string_view s);

struct SolverConfig {
  LieType type;
  DomainGrid grid;
  QDifferential q;
  double tol = 1e-10;  // on the residual infinity norm
  int max_iter = 100;
  double damping = 1.0;  // largest Newton step fraction
  InitKind init = InitKind::constant_oracle;
  std::uint64_t seed = 0;
  double amplitude = 0.1;
  std::optional<HFieldGrid> init_field;  // for InitKind::file
  int patience = 12;                     // iterations without a new best residual before giving up
  double cg_tol = 1e-12;                 // relative, on the symmetrised Newton system
  int cg_max_iter = 5000;

  /// Throws std::invalid_argument on an inconsistent configuration.
  void validate() const;
};

struct Solution {
  HFieldGrid omega;
  std::vector<double> residual_history;  // infinity norms, index 0 is the initial guess
  int iterations = 0;
  bool converged = false;
  std::string diagnostics;

  double final_residual() const { return residual_history.empty() ? 0.0 : residual_history.back(); }
};

/// Spatially constant solution of the Toda equation for |q|^2 > 0, in closed form:
/// r_i e^{2 alpha_i} = s c_i with s = |q|^2 e^{-2 delta}, so h log s = log|q|^2 - sum a_i log(c_i / r_i).
/// Throws std::invalid_argument unless |q|^2 is positive and finite.
std::vector<double> constant_solution(const RootSystem& rs, double q_abs2);

/// The discretised residual and its Jacobian on one grid, with rectangle boundary nodes pinned.
class TodaProblem {
 public:
  TodaProblem(const RootSystem& rs, const DomainGrid& grid, const QDifferential& q);

  const TodaCoefficients& coefficients() const { return tc_; }
  const DomainGrid& grid() const { return grid_; }
  int unknowns() const { return grid_.nodes() * tc_.rank; }

  /// R = -(1/2) lap5 w + sum r_i e^{2 alpha_i} h_i + |q|^2 e^{-2 delta} h_{-delta}; zero on pinned nodes.
  void residual(const std::vector<double>& w, std::vector<double>& out) const;
  /// J v for the residual above (pinned rows are zero).
  void jacobian_vector_product(const std::vector<double>& w, const std::vector<double>& v,
                               std::vector<double>& out) const;
  /// Max over the norm region of |R|.
  double residual_norm(const std::vector<double>& r) const;

  /// Solves (G J) p = -G r with G = A D^{-1} per node by preconditioned conjugate gradients.
  /// Returns the number of CG iterations.
  int newton_direction(const std::vector<double>& w, const std::vector<double>& r, std::vector<double>& p,
                       double rel_tol, int max_iter) const;

 private:
  void apply_sym(const std::vector<double>& w, const std::vector<double>& v, std::vector<double>& out) const;

  TodaCoefficients tc_;
  DomainGrid grid_;
  std::vector<double> q_abs2_;
  std::vector<double> g_;  // l x l, A D^{-1}
};

/// Damped Newton iteration with Armijo backtracking on ||R||^2. Throws std::runtime_error on NaN.
Solution solve(const SolverConfig& cfg, const ChevalleyAlgebra& alg, const PrincipalSL2& sl2);

/// Initial field for a configuration (rectangle boundary values are the pinned values).
HFieldGrid initial_field(const SolverConfig& cfg, const RootSystem& rs);

/// max over nodes of ||sigma(Omega) - Omega||_inf with sigma restricted to h.
double sigma_symmetry_defect(const HFieldGrid& omega, const ChevalleyAlgebra& alg, const PrincipalSL2& sl2);
double sigma_symmetry_defect(const Solution& sol, const ChevalleyAlgebra& alg, const PrincipalSL2& sl2);

struct UniquenessReport {
  double discrepancy = 0.0;  // max pairwise ||Omega_a - Omega_b||_inf over converged runs
  std::vector<bool> converged;
  std::vector<double> residuals;
};

/// Solves from perturbed starts, one per seed. Throws std::invalid_argument for fewer than 2 seeds.
UniquenessReport uniqueness_probe(const SolverConfig& cfg, const std::vector<std::uint64_t>& seeds,
                                  const ChevalleyAlgebra& alg, const PrincipalSL2& sl2);

}  // namespace ctoda
