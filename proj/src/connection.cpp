#include "ctoda/connection.hpp"

#include "ctoda/parallel.hpp"

#include <cmath>
#include <stdexcept>

namespace ctoda {

TodaCoefficients TodaCoefficients::from(const RootSystem& rs) {
  TodaCoefficients tc;
  tc.rank = rs.rank();
  tc.cartan = rs.cartan();
  for (const auto& v : x_coefficients(rs)) tc.r.push_back(to_double(v));
  tc.marks = rs.positive_root(rs.highest_root());
  tc.comarks = rs.coroot(rs.highest_root());
  for (int i = 0; i < tc.rank; ++i) tc.half_norms.push_back(rs.half_norm(i));
  return tc;
}

double TodaCoefficients::alpha(int i, std::span<const double> w) const {
  double s = 0.0;
  for (int k = 0; k < rank; ++k) s += w[k] * cartan[k][i];
  return s;
}

double TodaCoefficients::delta(std::span<const double> w) const {
  double s = 0.0;
  for (int i = 0; i < rank; ++i) s += marks[i] * alpha(i, w);
  return s;
}

void toda_reaction(const TodaCoefficients& tc, std::span<const double> w, double q_abs2,
                   std::span<double> out) {
  const double tail = q_abs2 * std::exp(-2.0 * tc.delta(w));
  for (int i = 0; i < tc.rank; ++i)
    out[i] = tc.r[i] * std::exp(2.0 * tc.alpha(i, w)) - tail * tc.comarks[i];
}

std::string to_string(Gauge g) {
  switch (g) {
    case Gauge::toda: return "toda";
    case Gauge::higgs: return "higgs";
    default: return "transformed";
  }
}

// ---------------------------------------------------------------------------

namespace {

void check_field(const HFieldGrid& f, const ChevalleyAlgebra& alg, const char* what) {
  if (f.rank != alg.rank() || f.values.size() != static_cast<std::size_t>(f.grid.nodes()) * f.rank)
    throw std::invalid_argument(std::string(what) + ": field rank does not match the algebra");
  if (!f.all_finite()) throw std::invalid_argument(std::string(what) + ": non-finite values");
}

// p_z = -Omega - H, p_zbar = Omega - H, node-major.
void potentials(const ConnectionData& conn, std::vector<double>& pz, std::vector<double>& pzb) {
  pz.resize(conn.omega.values.size());
  pzb.resize(conn.omega.values.size());
  for (std::size_t k = 0; k < pz.size(); ++k) {
    pz[k] = -conn.omega.values[k] - conn.frame.values[k];
    pzb[k] = conn.omega.values[k] - conn.frame.values[k];
  }
}

void rebuild_potential_terms(ConnectionData& conn, const ChevalleyAlgebra& alg) {
  const int l = alg.rank();
  const auto& g = conn.grid;
  std::vector<double> pz, pzb;
  potentials(conn, pz, pzb);
  conn.a_z.assign(g.nodes(), alg.zero());
  conn.a_zbar.assign(g.nodes(), alg.zero());
  parallel_for(g.nodes(), [&](std::size_t b, std::size_t e) {
    for (int n = static_cast<int>(b); n < static_cast<int>(e); ++n)
      for (int i = 0; i < l; ++i) {
        const double zx = d_dx(g, pz.data(), l, i, n), zy = d_dy(g, pz.data(), l, i, n);
        const double bx = d_dx(g, pzb.data(), l, i, n), by = d_dy(g, pzb.data(), l, i, n);
        conn.a_z[n][i] = 0.5 * Complex(zx, -zy);
        conn.a_zbar[n][i] = 0.5 * Complex(bx, by);
      }
  });
}

void refresh_gauge_flag(ConnectionData& conn) {
  bool zero = true, same = true;
  for (std::size_t k = 0; k < conn.frame.values.size(); ++k) {
    zero = zero && conn.frame.values[k] == 0.0;
    same = same && conn.frame.values[k] == conn.omega.values[k];
  }
  conn.gauge = zero ? Gauge::toda : same ? Gauge::higgs : Gauge::transformed;
}

}  // namespace

LieElement ad_exp_cartan(const ChevalleyAlgebra& alg, std::span<const double> h, const LieElement& x) {
  LieElement y = x;
  for (int a = 0; a < alg.root_count(); ++a) {
    const int b = alg.basis_of_root(a);
    if (y[b] != 0.0) y[b] *= std::exp(alg.root_value(a, h));
  }
  return y;
}

ConnectionData build_toda_connection(const HFieldGrid& omega, const QDifferential& q,
                                     const ChevalleyAlgebra& alg, const PrincipalSL2& sl2,
                                     Gauge gauge) {
  check_field(omega, alg, "build_toda_connection");
  if (gauge == Gauge::transformed)
    throw std::invalid_argument("build_toda_connection: use gauge_transform for other frames");
  const int l = alg.rank();
  ConnectionData conn;
  conn.grid = omega.grid;
  conn.omega = omega;
  conn.frame = gauge == Gauge::higgs ? omega : HFieldGrid(omega.grid, l);
  conn.c.assign(1, 1.0);
  conn.c.insert(conn.c.end(), sl2.sqrt_r.begin(), sl2.sqrt_r.end());
  conn.d = conn.c;

  const auto& g = conn.grid;
  conn.q.resize(g.nodes());
  conn.phi.assign(g.nodes(), alg.zero());
  conn.psi.assign(g.nodes(), alg.zero());
  const int top = alg.highest_root(), low = alg.lowest_root();
  for (int n = 0; n < g.nodes(); ++n) {
    conn.q[n] = q(g.z(n));
    std::vector<double> minus(l), plus(l);  // H - Omega, H + Omega
    for (int i = 0; i < l; ++i) {
      minus[i] = conn.frame(n, i) - omega(n, i);
      plus[i] = conn.frame(n, i) + omega(n, i);
    }
    auto& phi = conn.phi[n];
    auto& psi = conn.psi[n];
    for (int i = 0; i < l; ++i) {
      const int neg = alg.negate_root(alg.simple_root(i));
      phi[alg.basis_of_root(neg)] = conn.c[i + 1] * std::exp(alg.root_value(neg, minus));
      psi[alg.basis_of_root(i)] = conn.d[i + 1] * std::exp(alg.root_value(i, plus));
    }
    phi[alg.basis_of_root(top)] = conn.c[0] * conn.q[n] * std::exp(alg.root_value(top, minus));
    psi[alg.basis_of_root(low)] = conn.d[0] * std::conj(conn.q[n]) * std::exp(alg.root_value(low, plus));
  }
  rebuild_potential_terms(conn, alg);
  refresh_gauge_flag(conn);
  return conn;
}

ConnectionData gauge_transform(const ChevalleyAlgebra& alg, const ConnectionData& conn,
                               const HFieldGrid& h) {
  check_field(h, alg, "gauge_transform");
  if (!(h.grid == conn.grid)) throw std::invalid_argument("gauge_transform: grid mismatch");
  ConnectionData out = conn;
  for (std::size_t k = 0; k < out.frame.values.size(); ++k) out.frame.values[k] += h.values[k];
  for (int n = 0; n < conn.grid.nodes(); ++n) {
    out.phi[n] = ad_exp_cartan(alg, h.at(n), conn.phi[n]);
    out.psi[n] = ad_exp_cartan(alg, h.at(n), conn.psi[n]);
  }
  rebuild_potential_terms(out, alg);
  refresh_gauge_flag(out);
  return out;
}

std::vector<LieElement> curvature(const ChevalleyAlgebra& alg, const ConnectionData& conn) {
  const int l = alg.rank();
  const auto& g = conn.grid;
  const int nn = g.nodes();

  std::vector<Complex> az(static_cast<std::size_t>(nn) * l), azb(az.size());
  for (int n = 0; n < nn; ++n)
    for (int i = 0; i < l; ++i) {
      az[static_cast<std::size_t>(n) * l + i] = conn.a_z[n][i];
      azb[static_cast<std::size_t>(n) * l + i] = conn.a_zbar[n][i];
    }
  std::vector<double> pz, pzb;
  potentials(conn, pz, pzb);

  // Root slots carried by Psi (paired with p_z) and Phi (paired with p_zbar).
  struct Slot {
    int basis;
    bool from_psi;
    std::vector<double> weight;  // b(p) per node
  };
  std::vector<Slot> slots;
  for (int a = 0; a < alg.root_count(); ++a) {
    const int b = alg.basis_of_root(a);
    for (bool from_psi : {true, false}) {
      const auto& src = from_psi ? conn.psi : conn.phi;
      bool used = false;
      for (int n = 0; n < nn && !used; ++n) used = src[n][b] != 0.0;
      if (!used) continue;
      Slot s{b, from_psi, std::vector<double>(nn)};
      const auto& p = from_psi ? pz : pzb;
      for (int n = 0; n < nn; ++n)
        s.weight[n] = alg.root_value(a, std::span<const double>(p.data() + static_cast<std::size_t>(n) * l, l));
      slots.push_back(std::move(s));
    }
  }

  std::vector<LieElement> f(nn, alg.zero());
  parallel_for(nn, [&](std::size_t begin, std::size_t end) {
    std::vector<StencilTerm> sx, sy;
    for (int n = static_cast<int>(begin); n < static_cast<int>(end); ++n) {
      LieElement& out = f[n];
      for (int i = 0; i < l; ++i) {
        const Complex dz_azb = 0.5 * (d_dx(g, azb.data(), l, i, n) - Complex(0, 1) * d_dy(g, azb.data(), l, i, n));
        const Complex dzb_az = 0.5 * (d_dx(g, az.data(), l, i, n) + Complex(0, 1) * d_dy(g, az.data(), l, i, n));
        out[i] = dz_azb - dzb_az;
      }
      out += alg.bracket(conn.phi[n], conn.psi[n]);

      dx_stencil(g, n, sx);
      dy_stencil(g, n, sy);
      for (const auto& s : slots) {
        const auto& src = s.from_psi ? conn.psi : conn.phi;
        // d_z = (D_x - i D_y)/2 acts on Psi, d_zbar = (D_x + i D_y)/2 on Phi.
        const Complex iy = s.from_psi ? Complex(0, -1) : Complex(0, 1);
        Complex acc = 0.0;
        for (const auto& t : sx) acc += t.weight * std::exp(s.weight[t.node] - s.weight[n]) * src[t.node][s.basis];
        for (const auto& t : sy)
          acc += iy * t.weight * std::exp(s.weight[t.node] - s.weight[n]) * src[t.node][s.basis];
        out[s.basis] += (s.from_psi ? 0.5 : -0.5) * acc;
      }
    }
  }, 1024);
  return f;
}

LieElement star(const ChevalleyAlgebra& alg, const ConnectionData& conn, int node, const LieElement& x) {
  std::vector<double> two_h(alg.rank());
  for (int i = 0; i < alg.rank(); ++i) two_h[i] = 2.0 * conn.frame(node, i);
  return -ad_exp_cartan(alg, two_h, rho_hat(alg, x));
}

double max_norm(const DomainGrid& grid, const std::vector<LieElement>& field) {
  double m = 0.0;
  for (int n = 0; n < grid.nodes(); ++n)
    if (grid.in_norm_region(n) && field[n].size() > 0) m = std::max(m, field[n].cwiseAbs().maxCoeff());
  return m;
}

double max_norm(const HFieldGrid& field) {
  double m = 0.0;
  for (int n = 0; n < field.grid.nodes(); ++n)
    if (field.grid.in_norm_region(n))
      for (int i = 0; i < field.rank; ++i) m = std::max(m, std::abs(field(n, i)));
  return m;
}

// ---------------------------------------------------------------------------

LieElement higgs_field(const ChevalleyAlgebra& alg, const PrincipalSL2& sl2, Complex q) {
  LieElement phi = sl2.etilde;
  phi[alg.basis_of_root(alg.highest_root())] = q;
  return phi;
}

LieElement commutator_explicit(const ChevalleyAlgebra& alg, const PrincipalSL2& sl2,
                               std::span<const double> w, Complex q) {
  const LieElement phi = higgs_field(alg, sl2, q);
  std::vector<double> two_w(w.begin(), w.end());
  for (auto& v : two_w) v *= 2.0;
  const LieElement phi_star = -ad_exp_cartan(alg, two_w, rho_hat(alg, phi));
  return alg.bracket(phi, phi_star);
}

LieElement commutator_closed_form(const ChevalleyAlgebra& alg, const PrincipalSL2& sl2,
                                  std::span<const double> w, Complex q) {
  const int top = alg.highest_root();
  const auto& hdelta = alg.root_system().coroot(top);
  const double tail = std::norm(q) * std::exp(-2.0 * alg.root_value(top, w));
  LieElement out = alg.zero();
  for (int i = 0; i < alg.rank(); ++i)
    out[i] = -to_double(sl2.r[i]) * std::exp(2.0 * alg.root_value(alg.simple_root(i), w)) + tail * hdelta[i];
  return out;
}

HFieldGrid higgs_residual(const HFieldGrid& omega, const QDifferential& q, const ChevalleyAlgebra& alg,
                          const PrincipalSL2& sl2) {
  check_field(omega, alg, "higgs_residual");
  const auto tc = TodaCoefficients::from(alg.root_system());
  const int l = tc.rank;
  const auto& g = omega.grid;
  HFieldGrid res(g, l);
  parallel_for(g.nodes(), [&](std::size_t b, std::size_t e) {
    std::vector<double> react(l);
    for (int n = static_cast<int>(b); n < static_cast<int>(e); ++n) {
      const Complex qn = q(g.z(n));
      const LieElement closed = commutator_closed_form(alg, sl2, omega.at(n), qn);
      const LieElement explicit_ = commutator_explicit(alg, sl2, omega.at(n), qn);
      const double scale = 1.0 + closed.cwiseAbs().maxCoeff();
      if ((closed - explicit_).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw std::logic_error("higgs_residual: [Phi, Phi*] disagrees with its closed form");
      if (g.on_boundary(n)) continue;
      toda_reaction(tc, omega.at(n), std::norm(qn), react);
      for (int i = 0; i < l; ++i)
        res(n, i) = -0.5 * laplacian5(g, omega.values.data(), l, i, n) + react[i];
    }
  });
  return res;
}

std::vector<LieElement> chart_transition(const ChevalleyAlgebra& alg, const std::vector<LieElement>& section,
                                         const std::vector<Complex>& g) {
  if (section.size() != g.size()) throw std::invalid_argument("chart_transition: size mismatch");
  std::vector<LieElement> out = section;
  for (std::size_t n = 0; n < section.size(); ++n) {
    if (g[n] == 0.0 || !std::isfinite(std::abs(g[n])))
      throw std::invalid_argument("chart_transition: transition function must be finite and non-zero");
    for (int b = alg.rank(); b < alg.dimension(); ++b)
      if (out[n][b] != 0.0) out[n][b] *= std::pow(g[n], alg.basis_height(b));
  }
  return out;
}

HFieldGrid toda_field_transition(const HFieldGrid& omega_j, const PrincipalSL2& sl2,
                                 const std::vector<Complex>& g, const DomainGrid& grid_i) {
  if (grid_i.nodes() != omega_j.grid.nodes() || g.size() != static_cast<std::size_t>(grid_i.nodes()))
    throw std::invalid_argument("toda_field_transition: size mismatch");
  HFieldGrid out(grid_i, omega_j.rank);
  for (int n = 0; n < grid_i.nodes(); ++n) {
    if (g[n] == 0.0) throw std::invalid_argument("toda_field_transition: zero transition function");
    const double f = std::log(std::abs(g[n]));
    for (int i = 0; i < omega_j.rank; ++i) out(n, i) = omega_j(n, i) + f * sl2.x[i].real();
  }
  return out;
}

}  // namespace ctoda
