#pragma once

#include "ctoda/grid.hpp"
#include "ctoda/rootdata.hpp"

#include <string>
#include <vector>

namespace ctoda {

/// Rational vector in simple-root coordinates.
using RationalRoot = std::vector<Rational>;

/// Reduction of a root system along a diagram automorphism nu.
///
/// Nodes of the restricted diagram: index 0 is -delta, then one node per nu-orbit of simple
/// roots, ordered by the smallest simple root in the orbit.
struct RestrictedSystem {
  RootSystem base;
  DiagramAutomorphism nu;
  std::vector<std::vector<int>> orbits;
  std::vector<RationalRoot> simple;            // r(alpha_i), one per orbit
  std::vector<RationalRoot> restricted_roots;  // r(alpha) for alpha > 0, deduplicated, in root order
  /// h~_beta in coroot coordinates (length l) for each node, index 0 being h~_{-delta}.
  std::vector<std::vector<Rational>> coroots;
  std::vector<std::vector<int>> gcm;  // gcm[i][j] = beta_j(h~_{beta_i})
  std::vector<double> r_tilde;        // one per orbit
  std::string label;
};

/// r(a) = (a + nu^t a) / 2 on simple-root coordinates.
RationalRoot project(const DiagramAutomorphism& nu, const RationalRoot& a);

/// (a, b) with the normalisation of RootSystem (short simple roots of norm 2).
Rational inner(const RootSystem& rs, const RationalRoot& a, const RationalRoot& b);

/// h~_b = (2 / (b, b)) sum_j b_j d_j h_j in coroot coordinates. Throws std::invalid_argument for b = 0.
std::vector<Rational> dual_coroot(const RootSystem& rs, const RationalRoot& b);

/// Throws std::invalid_argument if nu is not a symmetry of the Dynkin diagram of rs.
RestrictedSystem restrict(const RootSystem& rs, const DiagramAutomorphism& nu);
/// Uses diagram_automorphism(rs).
RestrictedSystem restrict(const RootSystem& rs);

struct AffineCatalogEntry {
  std::string label;
  std::vector<std::vector<int>> gcm;
};

/// Affine generalised Cartan matrices (untwisted for every supported type, plus the twisted series)
/// in match priority order.
const std::vector<AffineCatalogEntry>& affine_catalog();

/// True if b is a simultaneous row/column permutation of a.
bool gcm_equivalent(const std::vector<std::vector<int>>& a, const std::vector<std::vector<int>>& b);

/// Kac label of an affine GCM. Throws std::runtime_error when nothing in the catalogue matches.
std::string classify_affine(const std::vector<std::vector<int>>& gcm);
/// Trivial nu gives the extended diagram of the base type (verified), otherwise a catalogue match.
std::string classify_affine(const RestrictedSystem& rest);

/// max over nodes of |w_i - w_{nu(i)}|.
double nu_defect(const HFieldGrid& omega, const DiagramAutomorphism& nu);

/// -(1/2) lap5 Omega + sum_beta r~_beta e^{2 beta(Omega)} h~_beta + |q|^2 e^{-2 delta(Omega)} h~_{-delta}
/// in coroot coordinates (zero on rectangle boundary nodes).
/// Throws std::invalid_argument if Omega is not nu-fixed to 1e-12.
HFieldGrid restricted_toda_residual(const HFieldGrid& omega, const QDifferential& q, const RestrictedSystem& rest);

}  // namespace ctoda
