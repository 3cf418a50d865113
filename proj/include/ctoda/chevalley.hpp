#pragma once

#include "ctoda/rootdata.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace ctoda {

using Complex = std::complex<double>;

/// Coefficients over the Chevalley basis of a ChevalleyAlgebra.
using LieElement = Eigen::VectorXcd;

/// Complex simple Lie algebra in a Chevalley basis.
///
/// Basis layout: h_1..h_l (indices 0..l-1), then e_alpha for the positive roots in
/// RootSystem order, then e_{-alpha} in the same order. Roots are addressed by a
/// signed root id: 0..N-1 positive, N..2N-1 their negatives.
///
/// Brackets: [h_i, e_a] = a(h_i) e_a, [e_a, e_{-a}] = h_a, [e_a, e_b] = N_{a,b} e_{a+b}
/// with N fixed by N_{g,d} = p + 1 on every extraspecial pair (g, d).
class ChevalleyAlgebra {
 public:
  struct Term {
    int index;
    std::int64_t coeff;
  };

  explicit ChevalleyAlgebra(RootSystem rs);

  const RootSystem& root_system() const { return rs_; }
  int rank() const { return rs_.rank(); }
  int dimension() const { return dim_; }
  int root_count() const { return 2 * npos_; }

  int negate_root(int root) const { return root < npos_ ? root + npos_ : root - npos_; }
  bool is_positive(int root) const { return root < npos_; }
  /// Signed root id of the given coordinates, or -1.
  int find_root(const RootCoords& c) const;
  const RootCoords& root(int root) const { return roots_[root]; }
  int root_height(int root) const;
  int simple_root(int i) const { return i; }
  int highest_root() const { return rs_.highest_root(); }
  int lowest_root() const { return negate_root(rs_.highest_root()); }

  int basis_of_root(int root) const { return rank() + root; }
  /// Signed root id of a basis index, or -1 for a Cartan element.
  int root_of_basis(int b) const { return b < rank() ? -1 : b - rank(); }
  /// Height of a basis element (0 on the Cartan).
  int basis_height(int b) const;

  /// Coroot h_a as integer coordinates over h_1..h_l.
  std::vector<int> coroot(int root) const;
  /// a(h) for h given by coordinates over h_1..h_l.
  Complex root_value(int root, std::span<const Complex> h) const;
  double root_value(int root, std::span<const double> h) const;

  /// N_{a,b}; zero when a + b is not a root.
  std::int64_t structure_constant(int a, int b) const;
  const std::vector<Term>& bracket_basis(int a, int b) const { return table_[a * dim_ + b]; }

  LieElement zero() const { return LieElement::Zero(dim_); }
  LieElement basis_vector(int b) const;
  LieElement root_vector(int root) const { return basis_vector(basis_of_root(root)); }
  LieElement cartan_element(std::span<const double> coords) const;
  LieElement cartan_element(std::span<const Complex> coords) const;

  /// Throws std::invalid_argument on dimension mismatch.
  LieElement bracket(const LieElement& x, const LieElement& y) const;
  /// ad_x as a dense matrix.
  Eigen::MatrixXcd ad(const LieElement& x) const;

  /// Killing form k(b_a, b_b) = tr(ad b_a ad b_b) on basis elements.
  std::int64_t killing(int a, int b) const { return killing_(a, b); }
  Complex killing(const LieElement& x, const LieElement& y) const;

 private:
  std::int64_t compute_n(int a, int b) const;
  std::int64_t positive_pair(int a, int b) const;

  RootSystem rs_;
  int npos_;
  int dim_;
  std::vector<RootCoords> roots_;
  std::vector<std::vector<int>> coroots_;  // per signed root
  std::vector<std::int64_t> norms_;        // (a, a) per signed root
  mutable std::vector<std::int64_t> n_cache_;
  mutable std::vector<bool> n_known_;
  std::vector<std::vector<Term>> table_;
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> killing_;
};

/// Principal three-dimensional subalgebra {x, e, e~} and the highest weight vectors e_i.
struct PrincipalSL2 {
  std::vector<Rational> r;
  std::vector<double> sqrt_r;
  LieElement x;
  LieElement e;
  LieElement etilde;
  std::vector<int> exponents;
  /// e_1 = e, ..., e_l with [e, e_i] = 0 and [x, e_i] = m_i e_i; e_l = e_delta.
  std::vector<LieElement> highest_weight;
};

PrincipalSL2 build_principal_sl2(const ChevalleyAlgebra& alg);

/// Ad_g for g = exp(2 pi i x / h): phase m (mod h) per basis element.
struct CoxeterElement {
  int h = 0;
  std::vector<int> phase;

  LieElement apply(const LieElement& x, int power = 1) const;
  int eigenspace_dimension(int m) const;
  Complex eigenvalue(int m) const;
};

CoxeterElement coxeter_element(const ChevalleyAlgebra& alg, const PrincipalSL2& sl2);

/// Real-linear involution given by a real matrix, optionally composed with complex conjugation.
class Involution {
 public:
  enum class Kind { sigma, rho_hat, lambda_hat };

  Involution(Kind kind, Eigen::MatrixXd matrix, bool antilinear)
      : kind_(kind), matrix_(std::move(matrix)), antilinear_(antilinear) {}

  Kind kind() const { return kind_; }
  bool antilinear() const { return antilinear_; }
  const Eigen::MatrixXd& matrix() const { return matrix_; }
  LieElement apply(const LieElement& x) const;

 private:
  Kind kind_;
  Eigen::MatrixXd matrix_;
  bool antilinear_;
};

/// The automorphism with sigma(e_i) = -e_i, sigma(e~) = -e~, built on the basis (ad e~)^k e_i.
Involution sigma_involution(const ChevalleyAlgebra& alg, const PrincipalSL2& sl2);
/// Compact anti-involution: h -> -h, e_a -> -e_{-a}, anti-linear.
Involution rho_hat_involution(const ChevalleyAlgebra& alg);
/// sigma composed with rho_hat (split real form).
Involution lambda_hat_involution(const ChevalleyAlgebra& alg, const PrincipalSL2& sl2);

LieElement sigma(const ChevalleyAlgebra& alg, const PrincipalSL2& sl2, const LieElement& x);
LieElement rho_hat(const ChevalleyAlgebra& alg, const LieElement& x);
/// Linear Chevalley involution: h -> -h, e_a -> -e_{-a}.
LieElement chevalley_involution(const ChevalleyAlgebra& alg, const LieElement& x);
/// H(u, v) = -k(u, rho_hat(v)).
Complex hermitian_form(const ChevalleyAlgebra& alg, const LieElement& u, const LieElement& v);

/// Basis indices of g^g_1: slot 0 is e_{-delta}, slot i is e_{alpha_i}.
std::vector<int> phase_one_slots(const ChevalleyAlgebra& alg);

/// Throws std::invalid_argument unless x lies in g^g_1 (exact zero test off the slots).
bool is_cyclic_g1(const ChevalleyAlgebra& alg, const CoxeterElement& cox, const LieElement& x);

struct KostantSectionValue {
  LieElement f;
  std::vector<Complex> p;
};

/// f = e~ + sum_i c_i e_i, with p_i(f) = c_i.
KostantSectionValue kostant_section_eval(const ChevalleyAlgebra& alg, const PrincipalSL2& sl2,
                                         std::span<const Complex> coeffs);

/// sum_i sqrt(r_i) e_{alpha_i} + e_{-delta}: the cyclic element of g^g_1 used as reference.
LieElement cyclic_reference(const ChevalleyAlgebra& alg, const PrincipalSL2& sl2);

/// Ad_{exp xi} for xi in the complexified Cartan (coordinates over h_i).
LieElement torus_action(const ChevalleyAlgebra& alg, std::span<const Complex> xi,
                        const LieElement& x);

struct CyclicNormalization {
  std::vector<Complex> xi;
  Complex lambda;
};

/// Finds xi, lambda with Ad_{exp xi} x = lambda * cyclic_reference. Throws on non-cyclic x.
CyclicNormalization normalize_cyclic(const ChevalleyAlgebra& alg, const PrincipalSL2& sl2,
                                     const CoxeterElement& cox, const LieElement& x);

/// prod_{a in Pi-bar} c_a^{mark(a)}; invariant under the torus, scales by lambda^h.
Complex cyclic_invariant(const ChevalleyAlgebra& alg, const CoxeterElement& cox,
                         const LieElement& x);

/// Residual norms of the structural identities; all zero for a correct algebra.
struct StructureReport {
  std::int64_t jacobi_defect = 0;
  std::int64_t antisymmetry_defect = 0;
  std::int64_t killing_invariance_defect = 0;
  int x_root_failures = 0;  // simple roots with alpha_i(x) != 1 (exact)
  int dim_from_exponents = 0;
  int dimension = 0;
  double sl2_defect = 0.0;         // max of ||[x,e]-e||, ||[x,e~]+e~||, ||[e,e~]-x||
  double highest_weight_defect = 0.0;
  bool ad_x_spectrum_ok = false;
  bool coxeter_ok = false;         // g^h = id, dim g_0 = l, dim g_1 = l + 1

  bool passed(double tol = 1e-12) const;
};

StructureReport check_structure(const ChevalleyAlgebra& alg, const PrincipalSL2& sl2);

}  // namespace ctoda
