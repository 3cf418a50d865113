#include "ctoda/restriction.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace ctoda {

RationalRoot project(const DiagramAutomorphism& nu, const RationalRoot& a) {
  RationalRoot out(a.size(), Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    out[i] += a[i] / 2;
    out[nu.perm[i]] += a[i] / 2;
  }
  return out;
}

Rational inner(const RootSystem& rs, const RationalRoot& a, const RationalRoot& b) {
  Rational s(0);
  for (int i = 0; i < rs.rank(); ++i)
    for (int j = 0; j < rs.rank(); ++j)
      if (a[i].numerator() != 0 && b[j].numerator() != 0)
        s += a[i] * b[j] * Rational(rs.half_norm(i) * rs.cartan()[i][j]);
  return s;
}

std::vector<Rational> dual_coroot(const RootSystem& rs, const RationalRoot& b) {
  const Rational n = inner(rs, b, b);
  if (n.numerator() == 0) throw std::invalid_argument("dual_coroot of a zero vector");
  std::vector<Rational> out(rs.rank());
  for (int j = 0; j < rs.rank(); ++j) out[j] = Rational(2) * b[j] * Rational(rs.half_norm(j)) / n;
  return out;
}

namespace {

RationalRoot to_rational(const RootCoords& c) {
  return RationalRoot(c.begin(), c.end());
}

Rational pair(const RootSystem& rs, const RationalRoot& a, const std::vector<Rational>& h) {
  // a(sum_k h_k h_k) = sum_k h_k sum_j a_j A[k][j]
  Rational s(0);
  for (int k = 0; k < rs.rank(); ++k)
    for (int j = 0; j < rs.rank(); ++j)
      if (h[k].numerator() != 0 && a[j].numerator() != 0) s += h[k] * a[j] * Rational(rs.cartan()[k][j]);
  return s;
}

// Gcm of a diagram given root norms and (i, j) bonds, using (b_i, b_j) = -max(n_i, n_j) / 2.
std::vector<std::vector<int>> diagram_gcm(const std::vector<int>& norms, const std::vector<std::pair<int, int>>& bonds) {
  const int n = static_cast<int>(norms.size());
  std::vector<std::vector<int>> ip(n, std::vector<int>(n, 0));
  for (int i = 0; i < n; ++i) ip[i][i] = 2 * norms[i];
  for (auto [i, j] : bonds) ip[i][j] = ip[j][i] = -std::max(norms[i], norms[j]);
  std::vector<std::vector<int>> g(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g[i][j] = 2 * ip[i][j] / ip[i][i];
  return g;
}

std::vector<std::pair<int, int>> chain(int n) {
  std::vector<std::pair<int, int>> b;
  for (int i = 0; i + 1 < n; ++i) b.emplace_back(i, i + 1);
  return b;
}

std::vector<AffineCatalogEntry> build_catalog() {
  std::vector<AffineCatalogEntry> cat;
  // C before B so that the coincident rank-2 diagrams are named C2(1).
  for (char f : {'A', 'C', 'B', 'D', 'E', 'F', 'G'})
    for (const auto& t : all_supported_types())
      if (t.family == f) {
        const RootSystem rs(t);
        cat.push_back({t.name() + "(1)", affine_cartan(rs).gcm});
      }
  for (int l = 1; l <= 8; ++l) {
    // norms 4, 2, ..., 2, 1 along a chain of l + 1 nodes (2 and 1 alone when l = 1)
    std::vector<int> n(l + 1, 2);
    n.front() = 4;
    n.back() = 1;
    cat.push_back({"A" + std::to_string(2 * l) + "(2)", diagram_gcm(n, chain(l + 1))});
  }
  for (int l = 2; l <= 8; ++l) {
    std::vector<int> n(l + 1, 2);
    n.front() = n.back() = 1;
    cat.push_back({"D" + std::to_string(l + 1) + "(2)", diagram_gcm(n, chain(l + 1))});
  }
  for (int l = 3; l <= 8; ++l) {
    // nodes 0 and 1 both attached to 2, chain 2..l, last node long
    std::vector<int> n(l + 1, 1);
    n.back() = 2;
    std::vector<std::pair<int, int>> b{{0, 2}};
    for (int i = 1; i < l; ++i) b.emplace_back(i, i + 1);
    cat.push_back({"A" + std::to_string(2 * l - 1) + "(2)", diagram_gcm(n, b)});
  }
  cat.push_back({"E6(2)", diagram_gcm({1, 1, 1, 2, 2}, chain(5))});
  cat.push_back({"D4(3)", diagram_gcm({1, 1, 3}, chain(3))});
  return cat;
}

}  // namespace

const std::vector<AffineCatalogEntry>& affine_catalog() {
  static const std::vector<AffineCatalogEntry> cat = build_catalog();
  return cat;
}

bool gcm_equivalent(const std::vector<std::vector<int>>& a, const std::vector<std::vector<int>>& b) {
  const int n = static_cast<int>(a.size());
  if (static_cast<int>(b.size()) != n) return false;
  std::vector<int> perm(n, -1);
  std::vector<bool> used(n, false);
  std::function<bool(int)> extend = [&](int i) {
    if (i == n) return true;
    for (int c = 0; c < n; ++c) {
      if (used[c] || b[c][c] != a[i][i]) continue;
      bool ok = true;
      for (int j = 0; j < i && ok; ++j) ok = b[c][perm[j]] == a[i][j] && b[perm[j]][c] == a[j][i];
      if (!ok) continue;
      used[c] = true;
      perm[i] = c;
      if (extend(i + 1)) return true;
      used[c] = false;
    }
    return false;
  };
  return extend(0);
}

std::string classify_affine(const std::vector<std::vector<int>>& gcm) {
  for (const auto& e : affine_catalog())
    if (gcm_equivalent(gcm, e.gcm)) return e.label;
  throw std::runtime_error("generalised Cartan matrix matches no affine diagram in the catalogue");
}

std::string classify_affine(const RestrictedSystem& rest) {
  if (rest.nu.is_trivial()) {
    const auto aff = affine_cartan(rest.base);
    if (!gcm_equivalent(rest.gcm, aff.gcm))
      throw std::runtime_error("restricted gcm differs from the extended diagram for trivial nu");
    return aff.kac_label;
  }
  return classify_affine(rest.gcm);
}

RestrictedSystem restrict(const RootSystem& rs, const DiagramAutomorphism& nu) {
  const int l = rs.rank();
  if (static_cast<int>(nu.perm.size()) != l) throw std::invalid_argument("automorphism has the wrong size");
  {
    std::vector<int> sorted = nu.perm;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < l; ++i)
      if (sorted[i] != i) throw std::invalid_argument("nu is not a permutation");
    for (int i = 0; i < l; ++i)
      for (int j = 0; j < l; ++j)
        if (rs.cartan()[nu.perm[i]][nu.perm[j]] != rs.cartan()[i][j])
          throw std::invalid_argument("nu is not a Dynkin diagram symmetry");
  }

  RestrictedSystem out{rs, nu, {}, {}, {}, {}, {}, {}, {}};
  std::vector<bool> seen(l, false);
  for (int i = 0; i < l; ++i) {
    if (seen[i]) continue;
    std::vector<int> orbit;
    for (int j = i; !seen[j]; j = nu.perm[j]) {
      seen[j] = true;
      orbit.push_back(j);
    }
    std::sort(orbit.begin(), orbit.end());
    out.orbits.push_back(orbit);
    RationalRoot e(l, Rational(0));
    e[i] = 1;
    out.simple.push_back(project(nu, e));
  }
  // Orbits of order 2 only: project averages over the orbit exactly.
  for (const auto& orbit : out.orbits)
    if (orbit.size() > 2) throw std::invalid_argument("only automorphisms of order <= 2 are supported");

  for (const auto& a : rs.positive_roots()) {
    const RationalRoot p = project(nu, to_rational(a));
    if (std::find(out.restricted_roots.begin(), out.restricted_roots.end(), p) == out.restricted_roots.end())
      out.restricted_roots.push_back(p);
  }

  const RationalRoot delta = to_rational(rs.positive_root(rs.highest_root()));
  if (project(nu, delta) != delta) throw std::logic_error("projection does not fix the highest root");
  RationalRoot minus_delta = delta;
  for (auto& v : minus_delta) v = -v;

  std::vector<RationalRoot> nodes{minus_delta};
  nodes.insert(nodes.end(), out.simple.begin(), out.simple.end());
  for (const auto& b : nodes) out.coroots.push_back(dual_coroot(rs, b));

  const int m = static_cast<int>(nodes.size());
  out.gcm.assign(m, std::vector<int>(m));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const Rational v = pair(rs, nodes[j], out.coroots[i]);
      if (v.denominator() != 1) throw std::logic_error("restricted gcm entry is not an integer");
      out.gcm[i][j] = static_cast<int>(v.numerator());
    }

  // r~_beta h~_beta = sum over the orbit of r_i h_i
  const auto r = x_coefficients(rs);
  for (std::size_t k = 0; k < out.orbits.size(); ++k) {
    const auto& h = out.coroots[k + 1];
    const int i0 = out.orbits[k].front();
    const Rational rt = r[i0] / h[i0];
    for (int i : out.orbits[k])
      if (rt * h[i] != r[i]) throw std::logic_error("orbit coefficients are not proportional");
    out.r_tilde.push_back(to_double(rt));
  }
  out.label = classify_affine(out);
  return out;
}

RestrictedSystem restrict(const RootSystem& rs) { return restrict(rs, diagram_automorphism(rs)); }

double nu_defect(const HFieldGrid& omega, const DiagramAutomorphism& nu) {
  double d = 0.0;
  for (int n = 0; n < omega.grid.nodes(); ++n)
    for (int i = 0; i < omega.rank; ++i) d = std::max(d, std::abs(omega(n, i) - omega(n, nu.perm[i])));
  return d;
}

HFieldGrid restricted_toda_residual(const HFieldGrid& omega, const QDifferential& q, const RestrictedSystem& rest) {
  const RootSystem& rs = rest.base;
  const int l = rs.rank();
  if (omega.rank != l) throw std::invalid_argument("field rank does not match the root system");
  if (nu_defect(omega, rest.nu) > 1e-12) throw std::invalid_argument("field is not nu-fixed");

  std::vector<std::vector<double>> hc(rest.coroots.size(), std::vector<double>(l));
  for (std::size_t k = 0; k < rest.coroots.size(); ++k)
    for (int j = 0; j < l; ++j) hc[k][j] = to_double(rest.coroots[k][j]);
  std::vector<std::vector<double>> beta(rest.simple.size(), std::vector<double>(l));
  for (std::size_t k = 0; k < rest.simple.size(); ++k)
    for (int j = 0; j < l; ++j) beta[k][j] = to_double(rest.simple[k][j]);
  const auto& delta = rs.positive_root(rs.highest_root());

  // b(Omega) = sum_k w_k sum_j b_j A[k][j]
  auto eval = [&](const double* w, auto coeff) {
    double s = 0.0;
    for (int k = 0; k < l; ++k)
      for (int j = 0; j < l; ++j) s += w[k] * coeff(j) * rs.cartan()[k][j];
    return s;
  };

  HFieldGrid out(omega.grid, l);
  const auto& g = omega.grid;
  for (int n = 0; n < g.nodes(); ++n) {
    if (g.on_boundary(n)) continue;
    const double* w = omega.values.data() + static_cast<std::size_t>(n) * l;
    for (int i = 0; i < l; ++i) out(n, i) = -0.5 * laplacian5(g, omega.values.data(), l, i, n);
    for (std::size_t k = 0; k < rest.simple.size(); ++k) {
      const double e = rest.r_tilde[k] * std::exp(2.0 * eval(w, [&](int j) { return beta[k][j]; }));
      for (int i = 0; i < l; ++i) out(n, i) += e * hc[k + 1][i];
    }
    const double e = std::norm(q(g.z(n))) * std::exp(-2.0 * eval(w, [&](int j) { return double(delta[j]); }));
    for (int i = 0; i < l; ++i) out(n, i) += e * hc[0][i];
  }
  return out;
}

}  // namespace ctoda
