#include "ctoda/chevalley.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

namespace ctoda {

namespace {

RootCoords add(const RootCoords& a, const RootCoords& b) {
  RootCoords c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
  return c;
}

RootCoords negate(const RootCoords& a) {
  RootCoords c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = -a[i];
  return c;
}

std::int64_t as_integer(const Rational& q, const char* what) {
  if (q.denominator() != 1) throw std::logic_error(std::string("non-integral ") + what);
  return q.numerator();
}

}  // namespace

ChevalleyAlgebra::ChevalleyAlgebra(RootSystem rs)
    : rs_(std::move(rs)), npos_(rs_.positive_count()), dim_(rs_.dimension()) {
  const int l = rank();
  for (int k = 0; k < npos_; ++k) roots_.push_back(rs_.positive_root(k));
  for (int k = 0; k < npos_; ++k) roots_.push_back(negate(rs_.positive_root(k)));
  for (int k = 0; k < 2 * npos_; ++k) {
    norms_.push_back(rs_.inner(roots_[k], roots_[k]));
    std::vector<int> h = rs_.coroot(k % npos_);
    if (k >= npos_)
      for (auto& v : h) v = -v;
    coroots_.push_back(std::move(h));
  }

  const int nroots = 2 * npos_;
  n_cache_.assign(static_cast<std::size_t>(nroots) * nroots, 0);
  n_known_.assign(static_cast<std::size_t>(nroots) * nroots, false);

  table_.assign(static_cast<std::size_t>(dim_) * dim_, {});
  for (int i = 0; i < l; ++i) {
    for (int a = 0; a < nroots; ++a) {
      const std::int64_t v = rs_.pairing(roots_[a], i);
      if (v == 0) continue;
      table_[i * dim_ + basis_of_root(a)].push_back({basis_of_root(a), v});
      table_[basis_of_root(a) * dim_ + i].push_back({basis_of_root(a), -v});
    }
  }
  for (int a = 0; a < nroots; ++a) {
    for (int b = 0; b < nroots; ++b) {
      auto& cell = table_[basis_of_root(a) * dim_ + basis_of_root(b)];
      if (b == negate_root(a)) {
        for (int j = 0; j < l; ++j)
          if (coroots_[a][j] != 0) cell.push_back({j, coroots_[a][j]});
        continue;
      }
      const int s = find_root(add(roots_[a], roots_[b]));
      if (s < 0) continue;
      cell.push_back({basis_of_root(s), structure_constant(a, b)});
    }
  }

  // tr(ad_a ad_b) is nonzero only when the weights of a and b cancel.
  killing_ = decltype(killing_)::Zero(dim_, dim_);
  auto trace = [&](int a, int b) {
    std::int64_t t = 0;
    for (int c = 0; c < dim_; ++c)
      for (const auto& u : bracket_basis(b, c))
        for (const auto& w : bracket_basis(a, u.index))
          if (w.index == c) t += u.coeff * w.coeff;
    return t;
  };
  for (int i = 0; i < l; ++i)
    for (int j = 0; j < l; ++j) killing_(i, j) = trace(i, j);
  for (int a = 0; a < nroots; ++a)
    killing_(basis_of_root(a), basis_of_root(negate_root(a))) =
        trace(basis_of_root(a), basis_of_root(negate_root(a)));
}

int ChevalleyAlgebra::find_root(const RootCoords& c) const {
  const int k = rs_.find_positive(c);
  if (k >= 0) return k;
  const int m = rs_.find_positive(negate(c));
  return m >= 0 ? m + npos_ : -1;
}

int ChevalleyAlgebra::root_height(int root) const {
  const int h = rs_.height(root % npos_);
  return is_positive(root) ? h : -h;
}

int ChevalleyAlgebra::basis_height(int b) const {
  return b < rank() ? 0 : root_height(root_of_basis(b));
}

std::vector<int> ChevalleyAlgebra::coroot(int root) const { return coroots_[root]; }

Complex ChevalleyAlgebra::root_value(int root, std::span<const Complex> h) const {
  Complex s = 0.0;
  for (int i = 0; i < rank(); ++i) s += h[i] * static_cast<double>(rs_.pairing(roots_[root], i));
  return s;
}

double ChevalleyAlgebra::root_value(int root, std::span<const double> h) const {
  double s = 0.0;
  for (int i = 0; i < rank(); ++i) s += h[i] * rs_.pairing(roots_[root], i);
  return s;
}

std::int64_t ChevalleyAlgebra::structure_constant(int a, int b) const {
  if (b == negate_root(a)) return 0;
  if (find_root(add(roots_[a], roots_[b])) < 0) return 0;
  const std::size_t key = static_cast<std::size_t>(a) * (2 * npos_) + b;
  if (!n_known_[key]) {
    n_cache_[key] = compute_n(a, b);
    n_known_[key] = true;
  }
  return n_cache_[key];
}

// Carter's identities: N_{a,b}/(c,c) = N_{b,c}/(a,a) = N_{c,a}/(b,b) for a+b+c = 0,
// and N_{-a,-b} = -N_{a,b}. Every mixed-sign pair reduces to a same-sign pair of lower height.
std::int64_t ChevalleyAlgebra::compute_n(int a, int b) const {
  const int s = find_root(add(roots_[a], roots_[b]));
  if (is_positive(a) && is_positive(b)) return positive_pair(a, b);
  if (!is_positive(a) && !is_positive(b))
    return -structure_constant(negate_root(a), negate_root(b));

  const int c = negate_root(s);
  const bool use_bc = is_positive(a) == is_positive(s);
  Rational v = use_bc ? Rational(norms_[c], norms_[a]) * structure_constant(b, c)
                      : Rational(norms_[c], norms_[b]) * structure_constant(c, a);
  return as_integer(v, "structure constant");
}

std::int64_t ChevalleyAlgebra::positive_pair(int a, int b) const {
  const RootCoords xi = add(roots_[a], roots_[b]);
  int g = -1, d = -1;
  for (int i = 0; i < rank(); ++i) {
    RootCoords rest = xi;
    rest[i] -= 1;
    const int k = rs_.find_positive(rest);
    if (k >= 0) {
      g = i;
      d = k;
      break;
    }
  }
  if (g < 0) throw std::logic_error("no extraspecial pair");
  int p = 0;
  for (RootCoords down = roots_[d];;) {
    down[g] -= 1;
    if (find_root(down) < 0) break;
    ++p;
  }
  if (a == g && b == d) return p + 1;
  if (a == d && b == g) return -(p + 1);

  // N_{a,b} N_{-g,-d}/(xi,xi) + N_{b,-g} N_{a,-d}/(b-g,b-g) + N_{-g,a} N_{b,-d}/(a-g,a-g) = 0
  const int mg = negate_root(g), md = negate_root(d);
  Rational rest(0);
  if (const int bg = find_root(add(roots_[b], roots_[mg])); bg >= 0)
    rest += Rational(structure_constant(b, mg) * structure_constant(a, md), norms_[bg]);
  if (const int ag = find_root(add(roots_[a], roots_[mg])); ag >= 0)
    rest += Rational(structure_constant(mg, a) * structure_constant(b, md), norms_[ag]);
  const std::int64_t n_mgmd = -(p + 1);
  const Rational v = -rest * Rational(rs_.inner(xi, xi)) / Rational(n_mgmd);
  return as_integer(v, "structure constant");
}

LieElement ChevalleyAlgebra::basis_vector(int b) const {
  LieElement v = zero();
  v[b] = 1.0;
  return v;
}

LieElement ChevalleyAlgebra::cartan_element(std::span<const double> coords) const {
  LieElement v = zero();
  for (int i = 0; i < rank(); ++i) v[i] = coords[i];
  return v;
}

LieElement ChevalleyAlgebra::cartan_element(std::span<const Complex> coords) const {
  LieElement v = zero();
  for (int i = 0; i < rank(); ++i) v[i] = coords[i];
  return v;
}

LieElement ChevalleyAlgebra::bracket(const LieElement& x, const LieElement& y) const {
  if (x.size() != dim_ || y.size() != dim_)
    throw std::invalid_argument("bracket: element dimension does not match the algebra");
  std::vector<int> nx, ny;
  for (int i = 0; i < dim_; ++i) {
    if (x[i] != 0.0) nx.push_back(i);
    if (y[i] != 0.0) ny.push_back(i);
  }
  LieElement out = zero();
  for (int a : nx)
    for (int b : ny) {
      const Complex w = x[a] * y[b];
      for (const auto& t : bracket_basis(a, b)) out[t.index] += w * static_cast<double>(t.coeff);
    }
  return out;
}

Eigen::MatrixXcd ChevalleyAlgebra::ad(const LieElement& x) const {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim_, dim_);
  for (int a = 0; a < dim_; ++a) {
    if (x[a] == 0.0) continue;
    for (int b = 0; b < dim_; ++b)
      for (const auto& t : bracket_basis(a, b)) m(t.index, b) += x[a] * static_cast<double>(t.coeff);
  }
  return m;
}

Complex ChevalleyAlgebra::killing(const LieElement& x, const LieElement& y) const {
  Complex s = 0.0;
  for (int a = 0; a < dim_; ++a) {
    if (x[a] == 0.0) continue;
    if (a < rank()) {
      for (int j = 0; j < rank(); ++j) s += x[a] * y[j] * static_cast<double>(killing_(a, j));
    } else {
      const int pb = basis_of_root(negate_root(root_of_basis(a)));
      s += x[a] * y[pb] * static_cast<double>(killing_(a, pb));
    }
  }
  return s;
}

// ---------------------------------------------------------------------------

namespace {

// Reduced row echelon form of the rows of m (numerical, partial pivoting per column).
Eigen::MatrixXd rref_rows(Eigen::MatrixXd m, double tol) {
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < m.cols() && row < m.rows(); ++col) {
    Eigen::Index best;
    const double mag = m.col(col).tail(m.rows() - row).cwiseAbs().maxCoeff(&best);
    if (mag < tol) continue;
    best += row;
    m.row(row).swap(m.row(best));
    m.row(row) /= m(row, col);
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      if (r != row) m.row(r) -= m(r, col) * m.row(row);
    ++row;
  }
  return m.topRows(row);
}

std::vector<int> basis_at_height(const ChevalleyAlgebra& alg, int m) {
  std::vector<int> out;
  for (int b = 0; b < alg.dimension(); ++b)
    if (alg.basis_height(b) == m) out.push_back(b);
  return out;
}

}  // namespace

PrincipalSL2 build_principal_sl2(const ChevalleyAlgebra& alg) {
  const auto& rs = alg.root_system();
  const int l = alg.rank();
  PrincipalSL2 s;
  s.r = x_coefficients(rs);
  s.exponents = exponents(rs);
  s.x = alg.zero();
  s.e = alg.zero();
  s.etilde = alg.zero();
  for (int i = 0; i < l; ++i) {
    const double r = to_double(s.r[i]);
    s.sqrt_r.push_back(std::sqrt(r));
    s.x[i] = r;
    s.e[alg.basis_of_root(i)] = s.sqrt_r[i];
    s.etilde[alg.basis_of_root(alg.negate_root(i))] = s.sqrt_r[i];
  }

  // Highest weight vectors: ker(ad_e) on each positive height space.
  const int top = rs.height(rs.highest_root());
  const Eigen::MatrixXcd ad_e = alg.ad(s.e);
  for (int m = 1; m <= top; ++m) {
    const auto src = basis_at_height(alg, m);
    const auto dst = basis_at_height(alg, m + 1);
    const auto expected = std::count(s.exponents.begin(), s.exponents.end(), m);
    if (m == 1) {
      s.highest_weight.push_back(s.e);
      continue;
    }
    Eigen::MatrixXd block = Eigen::MatrixXd::Zero(std::max<Eigen::Index>(1, dst.size()), src.size());
    for (std::size_t c = 0; c < src.size(); ++c)
      for (std::size_t r = 0; r < dst.size(); ++r) block(r, c) = ad_e(dst[r], src[c]).real();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(block);
    lu.setThreshold(1e-10);
    const Eigen::MatrixXd kernel = dst.empty() ? Eigen::MatrixXd::Identity(src.size(), src.size())
                                               : Eigen::MatrixXd(lu.kernel());
    const Eigen::Index kdim = (dst.empty() || lu.rank() == static_cast<Eigen::Index>(src.size()))
                                  ? (dst.empty() ? kernel.cols() : 0)
                                  : kernel.cols();
    if (kdim != expected)
      throw std::logic_error("centralizer of e has the wrong dimension at height " +
                             std::to_string(m));
    if (kdim == 0) continue;
    const Eigen::MatrixXd rows = rref_rows(kernel.transpose(), 1e-10);
    for (Eigen::Index k = 0; k < rows.rows(); ++k) {
      LieElement v = alg.zero();
      for (std::size_t c = 0; c < src.size(); ++c) v[src[c]] = rows(k, c);
      s.highest_weight.push_back(std::move(v));
    }
  }
  if (static_cast<int>(s.highest_weight.size()) != l)
    throw std::logic_error("centralizer of e is not l-dimensional");
  return s;
}

// ---------------------------------------------------------------------------

LieElement CoxeterElement::apply(const LieElement& x, int power) const {
  LieElement y = x;
  for (Eigen::Index b = 0; b < x.size(); ++b) {
    const int m = ((phase[b] * power) % h + h) % h;
    y[b] *= eigenvalue(m);
  }
  return y;
}

int CoxeterElement::eigenspace_dimension(int m) const {
  const int mm = ((m % h) + h) % h;
  return static_cast<int>(std::count(phase.begin(), phase.end(), mm));
}

Complex CoxeterElement::eigenvalue(int m) const {
  if (m % h == 0) return 1.0;
  return std::polar(1.0, 2.0 * std::numbers::pi * m / h);
}

CoxeterElement coxeter_element(const ChevalleyAlgebra& alg, const PrincipalSL2&) {
  CoxeterElement g;
  g.h = coxeter_number(alg.root_system());
  g.phase.resize(alg.dimension());
  for (int b = 0; b < alg.dimension(); ++b) g.phase[b] = ((alg.basis_height(b) % g.h) + g.h) % g.h;
  return g;
}

// ---------------------------------------------------------------------------

LieElement Involution::apply(const LieElement& x) const {
  if (x.size() != matrix_.cols()) throw std::invalid_argument("involution: dimension mismatch");
  const Eigen::MatrixXcd m = matrix_.cast<Complex>();
  if (antilinear_) return m * x.conjugate();
  return m * x;
}

Involution sigma_involution(const ChevalleyAlgebra& alg, const PrincipalSL2& sl2) {
  const int dim = alg.dimension();
  // Group the vectors (ad e~)^k e_i by height m_i - k; each group spans g_{m_i - k}.
  std::map<int, std::vector<std::pair<Eigen::VectorXd, double>>> groups;
  const Eigen::MatrixXcd ad_et = alg.ad(sl2.etilde);
  for (std::size_t i = 0; i < sl2.highest_weight.size(); ++i) {
    Eigen::VectorXcd v = sl2.highest_weight[i];
    const int m = sl2.exponents[i];
    for (int k = 0; k <= 2 * m; ++k) {
      Eigen::VectorXd rv = v.real();
      const double n = rv.norm();
      if (n == 0.0) throw std::logic_error("sigma: (ad e~)^k e_i vanished");
      groups[m - k].emplace_back(rv / n, (k % 2 == 0) ? -1.0 : 1.0);
      v = ad_et * v;
    }
  }
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(dim, dim);
  for (const auto& [height, vecs] : groups) {
    const auto idx = basis_at_height(alg, height);
    const auto n = static_cast<Eigen::Index>(idx.size());
    if (static_cast<Eigen::Index>(vecs.size()) != n)
      throw std::logic_error("sigma: (ad e~)^k e_i do not form a basis");
    Eigen::MatrixXd v(n, n);
    Eigen::VectorXd sign(n);
    for (Eigen::Index c = 0; c < n; ++c) {
      for (Eigen::Index r = 0; r < n; ++r) v(r, c) = vecs[c].first[idx[r]];
      sign[c] = vecs[c].second;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(v);
    if (!lu.isInvertible()) throw std::logic_error("sigma: (ad e~)^k e_i are not independent");
    const Eigen::MatrixXd block = v * sign.asDiagonal() * lu.inverse();
    for (Eigen::Index r = 0; r < n; ++r)
      for (Eigen::Index c = 0; c < n; ++c) s(idx[r], idx[c]) = block(r, c);
  }
  return Involution(Involution::Kind::sigma, std::move(s), false);
}

namespace {

Eigen::MatrixXd chevalley_matrix(const ChevalleyAlgebra& alg) {
  const int dim = alg.dimension();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  for (int i = 0; i < alg.rank(); ++i) m(i, i) = -1.0;
  for (int a = 0; a < alg.root_count(); ++a)
    m(alg.basis_of_root(alg.negate_root(a)), alg.basis_of_root(a)) = -1.0;
  return m;
}

}  // namespace

Involution rho_hat_involution(const ChevalleyAlgebra& alg) {
  return Involution(Involution::Kind::rho_hat, chevalley_matrix(alg), true);
}

Involution lambda_hat_involution(const ChevalleyAlgebra& alg, const PrincipalSL2& sl2) {
  const Involution s = sigma_involution(alg, sl2);
  return Involution(Involution::Kind::lambda_hat, s.matrix() * chevalley_matrix(alg), true);
}

LieElement sigma(const ChevalleyAlgebra& alg, const PrincipalSL2& sl2, const LieElement& x) {
  return sigma_involution(alg, sl2).apply(x);
}

LieElement chevalley_involution(const ChevalleyAlgebra& alg, const LieElement& x) {
  LieElement y = alg.zero();
  for (int i = 0; i < alg.rank(); ++i) y[i] = -x[i];
  for (int a = 0; a < alg.root_count(); ++a)
    y[alg.basis_of_root(alg.negate_root(a))] = -x[alg.basis_of_root(a)];
  return y;
}

LieElement rho_hat(const ChevalleyAlgebra& alg, const LieElement& x) {
  return chevalley_involution(alg, x.conjugate());
}

Complex hermitian_form(const ChevalleyAlgebra& alg, const LieElement& u, const LieElement& v) {
  return -alg.killing(u, rho_hat(alg, v));
}

// ---------------------------------------------------------------------------

std::vector<int> phase_one_slots(const ChevalleyAlgebra& alg) {
  std::vector<int> slots{alg.basis_of_root(alg.lowest_root())};
  for (int i = 0; i < alg.rank(); ++i) slots.push_back(alg.basis_of_root(alg.simple_root(i)));
  return slots;
}

bool is_cyclic_g1(const ChevalleyAlgebra& alg, const CoxeterElement& cox, const LieElement& x) {
  if (x.size() != alg.dimension()) throw std::invalid_argument("is_cyclic_g1: dimension mismatch");
  const auto slots = phase_one_slots(alg);
  for (int b = 0; b < alg.dimension(); ++b) {
    if (x[b] == 0.0) continue;
    if (cox.phase[b] != 1 || std::find(slots.begin(), slots.end(), b) == slots.end())
      throw std::invalid_argument("is_cyclic_g1: element does not lie in g^g_1");
  }
  return std::all_of(slots.begin(), slots.end(), [&](int b) { return x[b] != 0.0; });
}

KostantSectionValue kostant_section_eval(const ChevalleyAlgebra& alg, const PrincipalSL2& sl2,
                                         std::span<const Complex> coeffs) {
  if (static_cast<int>(coeffs.size()) != alg.rank())
    throw std::invalid_argument("kostant_section_eval: expected one coefficient per exponent");
  KostantSectionValue out{sl2.etilde, {coeffs.begin(), coeffs.end()}};
  for (int i = 0; i < alg.rank(); ++i) out.f += coeffs[i] * sl2.highest_weight[i];
  return out;
}

LieElement cyclic_reference(const ChevalleyAlgebra& alg, const PrincipalSL2& sl2) {
  LieElement y = sl2.e;
  y[alg.basis_of_root(alg.lowest_root())] = 1.0;
  return y;
}

LieElement torus_action(const ChevalleyAlgebra& alg, std::span<const Complex> xi,
                        const LieElement& x) {
  LieElement y = x;
  for (int a = 0; a < alg.root_count(); ++a) {
    const int b = alg.basis_of_root(a);
    if (y[b] != 0.0) y[b] *= std::exp(alg.root_value(a, xi));
  }
  return y;
}

CyclicNormalization normalize_cyclic(const ChevalleyAlgebra& alg, const PrincipalSL2& sl2,
                                     const CoxeterElement& cox, const LieElement& x) {
  if (!is_cyclic_g1(alg, cox, x))
    throw std::invalid_argument("normalize_cyclic: element is not cyclic");
  const int l = alg.rank();
  const auto slots = phase_one_slots(alg);
  const LieElement ref = cyclic_reference(alg, sl2);
  const auto& marks = alg.root_system().positive_root(alg.highest_root());

  // u_j = alpha_j(xi) = mu + b_j and -delta(xi) = mu + b_0, with delta = sum a_j alpha_j.
  std::vector<Complex> b(l + 1);
  for (int s = 0; s <= l; ++s) b[s] = std::log(ref[slots[s]] / x[slots[s]]);
  Complex weighted = b[0];
  for (int j = 0; j < l; ++j) weighted += static_cast<double>(marks[j]) * b[j + 1];
  const Complex mu = -weighted / static_cast<double>(cox.h);

  Eigen::MatrixXcd at(l, l);
  Eigen::VectorXcd u(l);
  const auto& a = alg.root_system().cartan();
  for (int j = 0; j < l; ++j) {
    u[j] = mu + b[j + 1];
    for (int i = 0; i < l; ++i) at(j, i) = static_cast<double>(a[i][j]);
  }
  const Eigen::VectorXcd xi = at.fullPivLu().solve(u);

  CyclicNormalization out{{xi.data(), xi.data() + l}, std::exp(mu)};
  const LieElement check = torus_action(alg, out.xi, x) - out.lambda * ref;
  if (check.cwiseAbs().maxCoeff() > 1e-9 * (1.0 + x.cwiseAbs().maxCoeff()))
    throw std::logic_error("normalize_cyclic: inconsistent log-coordinate system");
  return out;
}

Complex cyclic_invariant(const ChevalleyAlgebra& alg, const CoxeterElement& cox,
                         const LieElement& x) {
  is_cyclic_g1(alg, cox, x);
  const auto slots = phase_one_slots(alg);
  const auto& marks = alg.root_system().positive_root(alg.highest_root());
  Complex p = x[slots[0]];
  for (int j = 0; j < alg.rank(); ++j) p *= std::pow(x[slots[j + 1]], marks[j]);
  return p;
}

// ---------------------------------------------------------------------------

bool StructureReport::passed(double tol) const {
  return jacobi_defect == 0 && antisymmetry_defect == 0 && killing_invariance_defect == 0 &&
         x_root_failures == 0 && dim_from_exponents == dimension && sl2_defect < tol &&
         highest_weight_defect < tol && ad_x_spectrum_ok && coxeter_ok;
}

StructureReport check_structure(const ChevalleyAlgebra& alg, const PrincipalSL2& sl2) {
  StructureReport rep;
  const int dim = alg.dimension();
  const int l = alg.rank();
  rep.dimension = dim;

  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b) {
      const auto& ab = alg.bracket_basis(a, b);
      const auto& ba = alg.bracket_basis(b, a);
      std::vector<std::int64_t> acc(4, 0);
      if (ab.size() != ba.size()) {
        rep.antisymmetry_defect = std::max<std::int64_t>(rep.antisymmetry_defect, 1);
        continue;
      }
      for (std::size_t k = 0; k < ab.size(); ++k)
        if (ab[k].index != ba[k].index || ab[k].coeff != -ba[k].coeff)
          rep.antisymmetry_defect =
              std::max<std::int64_t>(rep.antisymmetry_defect, std::abs(ab[k].coeff + ba[k].coeff) + 1);
    }

  // Jacobi on a < b < c; antisymmetry covers the remaining orderings.
  std::vector<std::int64_t> acc(dim, 0);
  std::vector<int> touched;
  auto accumulate = [&](int u, int v, int w) {
    for (const auto& t : alg.bracket_basis(u, v))
      for (const auto& s : alg.bracket_basis(t.index, w)) {
        if (acc[s.index] == 0) touched.push_back(s.index);
        acc[s.index] += t.coeff * s.coeff;
      }
  };
  for (int a = 0; a < dim; ++a)
    for (int b = a + 1; b < dim; ++b)
      for (int c = b + 1; c < dim; ++c) {
        accumulate(a, b, c);
        accumulate(b, c, a);
        accumulate(c, a, b);
        for (int t : touched) {
          rep.jacobi_defect = std::max(rep.jacobi_defect, std::abs(acc[t]));
          acc[t] = 0;
        }
        touched.clear();
      }

  // k([a,b],c) = k(a,[b,c])
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b) {
      const auto& ab = alg.bracket_basis(a, b);
      for (int c = 0; c < dim; ++c) {
        std::int64_t lhs = 0, rhs = 0;
        for (const auto& t : ab) lhs += t.coeff * alg.killing(t.index, c);
        for (const auto& t : alg.bracket_basis(b, c)) rhs += t.coeff * alg.killing(a, t.index);
        rep.killing_invariance_defect = std::max(rep.killing_invariance_defect, std::abs(lhs - rhs));
      }
    }

  const auto& cm = alg.root_system().cartan();
  for (int i = 0; i < l; ++i) {
    Rational v(0);
    for (int j = 0; j < l; ++j) v += sl2.r[j] * cm[j][i];
    if (v != Rational(1)) ++rep.x_root_failures;
  }
  for (int m : sl2.exponents) rep.dim_from_exponents += 2 * m + 1;

  const auto inf = [](const LieElement& v) { return v.cwiseAbs().maxCoeff(); };
  rep.sl2_defect = std::max({inf(alg.bracket(sl2.x, sl2.e) - sl2.e),
                             inf(alg.bracket(sl2.x, sl2.etilde) + sl2.etilde),
                             inf(alg.bracket(sl2.e, sl2.etilde) - sl2.x)});
  for (int i = 0; i < l; ++i) {
    const auto& ei = sl2.highest_weight[i];
    rep.highest_weight_defect =
        std::max({rep.highest_weight_defect, inf(alg.bracket(sl2.e, ei)),
                  inf(alg.bracket(sl2.x, ei) - static_cast<double>(sl2.exponents[i]) * ei)});
  }

  const int top = alg.root_system().height(alg.highest_root());
  rep.ad_x_spectrum_ok = true;
  std::vector<int> seen(2 * top + 1, 0);
  for (int b = 0; b < dim; ++b) {
    const LieElement v = alg.basis_vector(b);
    const int m = alg.basis_height(b);
    if (inf(alg.bracket(sl2.x, v) - static_cast<double>(m) * v) > 1e-12) rep.ad_x_spectrum_ok = false;
    ++seen[m + top];
  }
  for (int c : seen)
    if (c == 0) rep.ad_x_spectrum_ok = false;

  const CoxeterElement cox = coxeter_element(alg, sl2);
  bool periodic = true;
  for (int b = 0; b < dim; ++b) {
    const LieElement v = alg.basis_vector(b);
    if (inf(cox.apply(v, cox.h) - v) > 1e-12) periodic = false;
  }
  rep.coxeter_ok =
      periodic && cox.eigenspace_dimension(0) == l && cox.eigenspace_dimension(1) == l + 1;
  return rep;
}

}  // namespace ctoda
