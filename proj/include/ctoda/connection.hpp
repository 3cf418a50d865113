#pragma once

#include "ctoda/chevalley.hpp"
#include "ctoda/grid.hpp"

#include <string>
#include <vector>

namespace ctoda {

/// Real-form coefficients of the affine Toda equation for one root system.
///
/// With Omega = sum_k w_k h_k: alpha_i(Omega) = sum_k w_k A[k][i], delta = sum a_i alpha_i and
/// h_delta = sum c_i h_i (c = comarks without c_0).
struct TodaCoefficients {
  int rank = 0;
  std::vector<std::vector<int>> cartan;
  std::vector<double> r;     // x = sum r_i h_i
  std::vector<int> marks;    // a_1..a_l (delta in simple-root coordinates)
  std::vector<int> comarks;  // c_1..c_l (h_delta in coroot coordinates)
  std::vector<int> half_norms;

  static TodaCoefficients from(const RootSystem& rs);
  double alpha(int i, std::span<const double> w) const;
  double delta(std::span<const double> w) const;
};

/// Pointwise Toda residual R = -(1/2) lap5(w) + sum r_i e^{2 alpha_i} h_i + |q|^2 e^{-2 delta} h_{-delta},
/// given the already evaluated Laplacian. Writes l coordinates over h_1..h_l.
void toda_reaction(const TodaCoefficients& tc, std::span<const double> w, double q_abs2,
                   std::span<double> out);

enum class Gauge { toda, higgs, transformed };
std::string to_string(Gauge g);

/// Flat connection d + A_z dz + A_zbar dzbar + Phi dz + Psi dzbar on a grid.
///
/// The connection is Ad_{e^H} applied to the Toda-gauge connection of Omega, with the frame H
/// accumulated over gauge transformations (H = 0: Toda gauge, H = Omega: Higgs gauge).
/// A_z = d_z(-Omega - H), A_zbar = d_zbar(Omega - H).
struct ConnectionData {
  Gauge gauge = Gauge::toda;
  DomainGrid grid;
  std::vector<double> c;  // c_0 (delta slot), c_1..c_l
  std::vector<double> d;
  HFieldGrid omega;
  HFieldGrid frame;
  std::vector<Complex> q;  // per node
  std::vector<LieElement> a_z, a_zbar, phi, psi;
};

/// Builds the connection with c_i = d_i = sqrt(r_i), c_0 = d_0 = 1 in the Toda or Higgs gauge.
/// Throws std::invalid_argument on non-finite Omega or a `transformed` gauge request.
ConnectionData build_toda_connection(const HFieldGrid& omega, const QDifferential& q,
                                     const ChevalleyAlgebra& alg, const PrincipalSL2& sl2,
                                     Gauge gauge);

/// F = d_z(A_zbar + Psi) - d_zbar(A_z + Phi) + [A_z + Phi, A_zbar + Psi], the dz^dzbar coefficient.
///
/// Root-space terms use the covariant difference e^{-b(p(n))} D(e^{b(p)} X_b)(n) with p the gauge
/// potential of A, so F transforms exactly as Ad_{e^H} F under gauge_transform.
std::vector<LieElement> curvature(const ChevalleyAlgebra& alg, const ConnectionData& conn);

/// Applies Ad_{e^H}: root coefficients of Phi, Psi scale by e^{b(H)}, A -> A - dH.
ConnectionData gauge_transform(const ChevalleyAlgebra& alg, const ConnectionData& conn,
                               const HFieldGrid& h);

/// Ad_{e^h} X for h in the real Cartan.
LieElement ad_exp_cartan(const ChevalleyAlgebra& alg, std::span<const double> h, const LieElement& x);

/// X* = -rho(X) with rho = Ad_{e^{2H}} o rho_hat in the connection's frame at `node`.
LieElement star(const ChevalleyAlgebra& alg, const ConnectionData& conn, int node, const LieElement& x);

/// Max over the norm region of the largest coefficient modulus.
double max_norm(const DomainGrid& grid, const std::vector<LieElement>& field);
double max_norm(const HFieldGrid& field);

/// Higgs-gauge Higgs field sum_i c_i e_{-alpha_i} + q e_delta.
LieElement higgs_field(const ChevalleyAlgebra& alg, const PrincipalSL2& sl2, Complex q);
/// [Phi, Phi*] in the Higgs gauge at one point, by explicit brackets.
LieElement commutator_explicit(const ChevalleyAlgebra& alg, const PrincipalSL2& sl2,
                               std::span<const double> w, Complex q);
/// -sum r_i e^{2 alpha_i(Omega)} h_i - |q|^2 e^{-2 delta(Omega)} h_{-delta}.
LieElement commutator_closed_form(const ChevalleyAlgebra& alg, const PrincipalSL2& sl2,
                                  std::span<const double> w, Complex q);

/// Toda residual per node (zero on rectangle boundary nodes). Cross-checks the explicit
/// commutator against the closed form at every node and throws std::logic_error on mismatch.
HFieldGrid higgs_residual(const HFieldGrid& omega, const QDifferential& q, const ChevalleyAlgebra& alg,
                          const PrincipalSL2& sl2);

/// Multiplies each root-space component by g^{height}; Cartan components are unchanged.
/// Throws std::invalid_argument if some g vanishes or the sizes differ.
std::vector<LieElement> chart_transition(const ChevalleyAlgebra& alg, const std::vector<LieElement>& section,
                                         const std::vector<Complex>& g);

/// Omega_i = Omega_j + ln|g| x for the chart change with g = dz_j / dz_i, on the grid of chart i.
HFieldGrid toda_field_transition(const HFieldGrid& omega_j, const PrincipalSL2& sl2,
                                 const std::vector<Complex>& g, const DomainGrid& grid_i);

}  // namespace ctoda
