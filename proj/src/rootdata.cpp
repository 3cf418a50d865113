#include "ctoda/rootdata.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <numeric>
#include <queue>

namespace ctoda {

LieType LieType::parse(std::string_view name) {
  if (name.size() < 2) throw UnsupportedType("unsupported Lie type: '" + std::string(name) + "'");
  LieType t;
  t.family = static_cast<char>(std::toupper(static_cast<unsigned char>(name[0])));
  int rank = 0;
  for (std::size_t i = 1; i < name.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(name[i])) || rank > 100)
      throw UnsupportedType("unsupported Lie type: '" + std::string(name) + "'");
    rank = rank * 10 + (name[i] - '0');
  }
  t.rank = rank;
  t.validate();
  return t;
}

std::string LieType::name() const { return std::string(1, family) + std::to_string(rank); }

void LieType::validate() const {
  bool ok = rank >= 1 && rank <= 8;
  switch (family) {
    case 'A': break;
    case 'B':
    case 'C': ok = ok && rank >= 2; break;
    case 'D': ok = ok && rank >= 3; break;
    case 'E': ok = ok && rank >= 6; break;
    case 'F': ok = ok && rank == 4; break;
    case 'G': ok = ok && rank == 2; break;
    default: ok = false;
  }
  if (!ok) throw UnsupportedType("unsupported Lie type: " + name());
}

std::vector<std::vector<int>> cartan_matrix(LieType type) {
  type.validate();
  const int l = type.rank;
  std::vector<std::vector<int>> a(l, std::vector<int>(l, 0));
  for (int i = 0; i < l; ++i) a[i][i] = 2;
  auto bond = [&](int i, int j) {  // 1-based simple bond
    a[i - 1][j - 1] = -1;
    a[j - 1][i - 1] = -1;
  };
  // Row of the shorter root carries the larger entry.
  auto short_long = [&](int s, int lng, int mult) {
    a[s - 1][lng - 1] = -mult;
    a[lng - 1][s - 1] = -1;
  };
  switch (type.family) {
    case 'A':
      for (int i = 1; i < l; ++i) bond(i, i + 1);
      break;
    case 'B':
      for (int i = 1; i < l - 1; ++i) bond(i, i + 1);
      short_long(l, l - 1, 2);
      break;
    case 'C':
      for (int i = 1; i < l - 1; ++i) bond(i, i + 1);
      short_long(l - 1, l, 2);
      break;
    case 'D':
      for (int i = 1; i < l - 1; ++i) bond(i, i + 1);
      bond(l - 2, l);
      break;
    case 'E':
      bond(1, 3);
      bond(2, 4);
      for (int i = 3; i < l; ++i) bond(i, i + 1);
      break;
    case 'F':
      bond(1, 2);
      short_long(3, 2, 2);
      bond(3, 4);
      break;
    case 'G':
      short_long(1, 2, 3);
      break;
  }
  return a;
}

RootSystem::RootSystem(LieType type) : type_(type), cartan_(cartan_matrix(type)) {
  const int l = type_.rank;

  // Symmetrising factors: d_i a_ij = d_j a_ji.
  std::vector<Rational> d(l, Rational(0));
  d[0] = 1;
  std::queue<int> pending;
  pending.push(0);
  while (!pending.empty()) {
    const int i = pending.front();
    pending.pop();
    for (int j = 0; j < l; ++j) {
      if (j == i || cartan_[i][j] == 0 || d[j].numerator() != 0) continue;
      d[j] = d[i] * Rational(cartan_[i][j], cartan_[j][i]);
      pending.push(j);
    }
  }
  const Rational dmin = *std::min_element(d.begin(), d.end());
  half_norms_.resize(l);
  for (int i = 0; i < l; ++i) {
    const Rational s = d[i] / dmin;
    if (s.denominator() != 1) throw std::logic_error("non-integral root length ratio");
    half_norms_[i] = static_cast<int>(s.numerator());
  }

  // Close the simple roots under root strings, height by height.
  std::vector<std::vector<RootCoords>> by_height(1);
  std::map<RootCoords, int> seen;
  for (int i = 0; i < l; ++i) {
    RootCoords c(l, 0);
    c[i] = 1;
    by_height[0].push_back(c);
    seen[c] = 1;
  }
  for (std::size_t h = 0; !by_height[h].empty(); ++h) {
    by_height.emplace_back();
    for (const auto& beta : by_height[h]) {
      for (int i = 0; i < l; ++i) {
        int p = 0;
        RootCoords down = beta;
        while (true) {
          down[i] -= 1;
          if (!seen.count(down)) break;
          ++p;
        }
        const int q = p - pairing(beta, i);
        if (q <= 0) continue;
        RootCoords up = beta;
        up[i] += 1;
        if (seen.emplace(up, 1).second) by_height[h + 1].push_back(up);
      }
    }
  }
  for (std::size_t h = 0; h < by_height.size(); ++h) {
    auto level = by_height[h];
    std::sort(level.begin(), level.end(), std::greater<>());
    for (auto& c : level) {
      index_[c] = static_cast<int>(positive_.size());
      positive_.push_back(c);
      heights_.push_back(static_cast<int>(h) + 1);
    }
  }

  // h_alpha = sum_j c_j (d_j / d_alpha) h_j
  for (const auto& c : positive_) {
    const std::int64_t norm = inner(c, c);
    std::vector<int> k(l);
    for (int j = 0; j < l; ++j) {
      const std::int64_t num = 2 * static_cast<std::int64_t>(c[j]) * half_norms_[j];
      if (num % norm != 0) throw std::logic_error("non-integral coroot coefficient");
      k[j] = static_cast<int>(num / norm);
    }
    coroots_.push_back(std::move(k));
  }
}

int RootSystem::find_positive(const RootCoords& c) const {
  auto it = index_.find(c);
  return it == index_.end() ? -1 : it->second;
}

std::int64_t RootSystem::inner(const RootCoords& a, const RootCoords& b) const {
  std::int64_t s = 0;
  for (int i = 0; i < rank(); ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; j < rank(); ++j)
      s += static_cast<std::int64_t>(a[i]) * b[j] * half_norms_[i] * cartan_[i][j];
  }
  return s;
}

int RootSystem::pairing(const RootCoords& a, int i) const {
  int s = 0;
  for (int j = 0; j < rank(); ++j) s += a[j] * cartan_[i][j];
  return s;
}

RootSystem build_root_system(LieType type) { return RootSystem(type); }

std::vector<int> exponents(const RootSystem& rs) {
  const int l = rs.rank();
  std::vector<int> row_len;
  for (int k = 0; k < rs.positive_count(); ++k) {
    const auto h = static_cast<std::size_t>(rs.height(k));
    if (row_len.size() < h) row_len.resize(h, 0);
    ++row_len[h - 1];
  }
  // Rows are right-aligned, so column c (1-based from the left) collects
  // every row with at least l - c + 1 entries.
  std::vector<int> m(l, 0);
  for (int c = 1; c <= l; ++c)
    for (int len : row_len)
      if (len >= l - c + 1) ++m[c - 1];
  return m;
}

int coxeter_number(const RootSystem& rs) { return rs.height(rs.highest_root()) + 1; }

std::vector<Rational> x_coefficients(const RootSystem& rs) {
  std::vector<Rational> r(rs.rank(), Rational(0));
  for (int k = 0; k < rs.positive_count(); ++k)
    for (int j = 0; j < rs.rank(); ++j) r[j] += rs.coroot(k)[j];
  for (auto& v : r) v /= 2;
  return r;
}

AffineCartanData affine_cartan(const RootSystem& rs) {
  const int l = rs.rank();
  const auto& a = rs.cartan();
  const auto& delta = rs.positive_root(rs.highest_root());
  const auto& hdelta = rs.coroot(rs.highest_root());

  AffineCartanData out;
  out.gcm.assign(l + 1, std::vector<int>(l + 1, 0));
  out.gcm[0][0] = 2;
  for (int i = 0; i < l; ++i)
    for (int j = 0; j < l; ++j) out.gcm[i + 1][j + 1] = a[i][j];
  for (int j = 0; j < l; ++j) {
    int s = 0;
    for (int k = 0; k < l; ++k) s += hdelta[k] * a[k][j];
    out.gcm[0][j + 1] = -s;  // alpha_j(h_{-delta})
  }
  for (int i = 0; i < l; ++i) out.gcm[i + 1][0] = -rs.pairing(delta, i);  // (-delta)(h_i)

  RationalMatrix m(l + 1, std::vector<Rational>(l + 1));
  RationalMatrix mt(l + 1, std::vector<Rational>(l + 1));
  for (int i = 0; i <= l; ++i)
    for (int j = 0; j <= l; ++j) {
      m[i][j] = out.gcm[i][j];
      mt[j][i] = out.gcm[i][j];
    }
  auto right = integer_null_space(m);
  auto left = integer_null_space(mt);
  if (right.size() != 1 || left.size() != 1)
    throw std::logic_error("affine gcm does not have a one-dimensional null space");
  out.marks = right.front();
  out.comarks = left.front();
  out.kac_label = rs.type().name() + "(1)";
  return out;
}

std::vector<std::vector<int>> cartan_symmetries(const std::vector<std::vector<int>>& a) {
  const int n = static_cast<int>(a.size());
  std::vector<std::vector<int>> found;
  std::vector<int> perm(n, -1);
  std::vector<bool> used(n, false);
  std::function<void(int)> extend = [&](int i) {
    if (i == n) {
      found.push_back(perm);
      return;
    }
    for (int c = 0; c < n; ++c) {
      if (used[c]) continue;
      bool ok = true;
      for (int j = 0; j < i && ok; ++j)
        ok = a[c][perm[j]] == a[i][j] && a[perm[j]][c] == a[j][i];
      ok = ok && a[c][c] == a[i][i];
      if (!ok) continue;
      used[c] = true;
      perm[i] = c;
      extend(i + 1);
      used[c] = false;
    }
  };
  extend(0);
  return found;
}

DiagramAutomorphism diagram_automorphism(const RootSystem& rs) {
  const int l = rs.rank();
  DiagramAutomorphism nu;
  nu.perm.resize(l);
  std::iota(nu.perm.begin(), nu.perm.end(), 0);

  const auto& t = rs.type();
  const bool twisted = (t.family == 'A' && l >= 2) || (t.family == 'D' && l % 2 == 1) ||
                       (t.family == 'E' && l == 6);
  if (!twisted) return nu;

  for (auto& p : cartan_symmetries(rs.cartan())) {
    if (p == nu.perm) continue;
    nu.perm = p;
    nu.order = 2;
    return nu;
  }
  throw std::logic_error("expected a non-trivial Dynkin diagram symmetry for " + t.name());
}

std::vector<LieType> all_supported_types() {
  std::vector<LieType> out;
  for (int n = 1; n <= 8; ++n) out.push_back({'A', n});
  for (int n = 2; n <= 8; ++n) out.push_back({'B', n});
  for (int n = 2; n <= 8; ++n) out.push_back({'C', n});
  for (int n = 3; n <= 8; ++n) out.push_back({'D', n});
  for (int n = 6; n <= 8; ++n) out.push_back({'E', n});
  out.push_back({'F', 4});
  out.push_back({'G', 2});
  return out;
}

}  // namespace ctoda
