#pragma once

#include "ctoda/rational.hpp"

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ctoda {

/// Raised for Lie types outside the supported catalogue (ranks <= 8, reduced, simple).
class UnsupportedType : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct LieType {
  char family = 'A';
  int rank = 1;

  /// Parses names like "A2", "e6", "G2". Throws UnsupportedType.
  static LieType parse(std::string_view name);
  std::string name() const;
  /// Throws UnsupportedType when family/rank is not a valid simple type with rank <= 8.
  void validate() const;

  friend bool operator==(const LieType&, const LieType&) = default;
};

/// Root coordinates in the basis of simple roots.
using RootCoords = std::vector<int>;

/// Finite root system of one simple type, realised in simple-root coordinates.
///
/// Conventions (Bourbaki node numbering, 0-based in code):
///   cartan()[i][j] = alpha_j(h_i) = 2 (alpha_i, alpha_j) / (alpha_i, alpha_i)
///   (alpha_i, alpha_j) = half_norm(i) * cartan()[i][j], with short simple roots of norm 2.
/// Positive roots are ordered by height, then by descending lexicographic coordinates,
/// so the simple roots occupy indices 0..l-1 in node order.
class RootSystem {
 public:
  explicit RootSystem(LieType type);

  const LieType& type() const { return type_; }
  int rank() const { return type_.rank; }
  const std::vector<std::vector<int>>& cartan() const { return cartan_; }
  int half_norm(int i) const { return half_norms_[i]; }

  int positive_count() const { return static_cast<int>(positive_.size()); }
  const RootCoords& positive_root(int k) const { return positive_[k]; }
  const std::vector<RootCoords>& positive_roots() const { return positive_; }
  int height(int k) const { return heights_[k]; }
  int highest_root() const { return positive_count() - 1; }
  int dimension() const { return rank() + 2 * positive_count(); }

  /// Index of a positive root with the given coordinates, or -1.
  int find_positive(const RootCoords& c) const;

  /// (a, b) for arbitrary integer combinations of simple roots.
  std::int64_t inner(const RootCoords& a, const RootCoords& b) const;
  /// a(h_i) for a in the root lattice.
  int pairing(const RootCoords& a, int i) const;
  /// Integer coefficients k_j with h_alpha = sum_j k_j h_j for positive root k.
  const std::vector<int>& coroot(int k) const { return coroots_[k]; }

 private:
  LieType type_;
  std::vector<std::vector<int>> cartan_;
  std::vector<int> half_norms_;
  std::vector<RootCoords> positive_;
  std::vector<int> heights_;
  std::vector<std::vector<int>> coroots_;
  std::map<RootCoords, int> index_;
};

/// Cartan matrix of the given type in the convention of RootSystem::cartan().
std::vector<std::vector<int>> cartan_matrix(LieType type);

RootSystem build_root_system(LieType type);

/// Exponents m_1 <= ... <= m_l, read off as column lengths of the height array.
std::vector<int> exponents(const RootSystem& rs);

/// height(highest root) + 1.
int coxeter_number(const RootSystem& rs);

/// r_i with x = (1/2) sum_{alpha > 0} h_alpha = sum_i r_i h_i.
std::vector<Rational> x_coefficients(const RootSystem& rs);

struct AffineCartanData {
  /// (l+1)x(l+1); index 0 is alpha_0 = -delta with h_0 = h_{-delta}.
  std::vector<std::vector<int>> gcm;
  std::vector<std::int64_t> marks;
  std::vector<std::int64_t> comarks;
  std::string kac_label;
};

AffineCartanData affine_cartan(const RootSystem& rs);

struct DiagramAutomorphism {
  /// perm[i] = nu(i), 0-based simple-root indices.
  std::vector<int> perm;
  int order = 1;

  bool is_trivial() const { return order == 1; }
};

/// Order-2 graph symmetry for A_n (n >= 2), D_{odd}, E_6; identity otherwise.
DiagramAutomorphism diagram_automorphism(const RootSystem& rs);

/// All permutations p of {0..l-1} with A[p(i)][p(j)] = A[i][j].
std::vector<std::vector<int>> cartan_symmetries(const std::vector<std::vector<int>>& a);

/// Every supported type, ranks 1..8, in a fixed order.
std::vector<LieType> all_supported_types();

}  // namespace ctoda
