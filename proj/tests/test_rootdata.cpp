#include "doctest.h"

#include "ctoda/rootdata.hpp"

#include <algorithm>
#include <numeric>
#include <set>

using namespace ctoda;

namespace {

// Independent positive-root oracle: reflect the simple roots under the Weyl group
// generated by s_i(b) = b - b(h_i) alpha_i until the orbit closes.
std::set<RootCoords> weyl_orbit_roots(const std::vector<std::vector<int>>& a) {
  const int l = static_cast<int>(a.size());
  std::set<RootCoords> all;
  std::vector<RootCoords> frontier;
  for (int i = 0; i < l; ++i) {
    RootCoords c(l, 0);
    c[i] = 1;
    all.insert(c);
    frontier.push_back(c);
  }
  while (!frontier.empty()) {
    std::vector<RootCoords> next;
    for (const auto& b : frontier)
      for (int i = 0; i < l; ++i) {
        int pairing = 0;
        for (int j = 0; j < l; ++j) pairing += b[j] * a[i][j];
        RootCoords r = b;
        r[i] -= pairing;
        if (all.insert(r).second) next.push_back(r);
      }
    frontier = std::move(next);
  }
  std::set<RootCoords> pos;
  for (const auto& r : all)
    if (std::all_of(r.begin(), r.end(), [](int v) { return v >= 0; })) pos.insert(r);
  return pos;
}

int brute_dimension(LieType t) {
  const int l = t.rank;
  switch (t.family) {
    case 'A': return l * (l + 2);
    case 'B':
    case 'C': return l * (2 * l + 1);
    case 'D': return l * (2 * l - 1);
    case 'E': return l == 6 ? 78 : l == 7 ? 133 : 248;
    case 'F': return 52;
    default: return 14;
  }
}

}  // namespace

TEST_CASE("type parsing and validation") {
  CHECK(LieType::parse("a2") == LieType{'A', 2});
  CHECK(LieType::parse("E8").name() == "E8");
  CHECK_THROWS_AS(LieType::parse("B1"), UnsupportedType);
  CHECK_THROWS_AS(LieType::parse("D2"), UnsupportedType);
  CHECK_THROWS_AS(LieType::parse("E5"), UnsupportedType);
  CHECK_THROWS_AS(LieType::parse("F3"), UnsupportedType);
  CHECK_THROWS_AS(LieType::parse("A9"), UnsupportedType);
  CHECK_THROWS_AS(LieType::parse("X3"), UnsupportedType);
  CHECK_THROWS_AS(LieType::parse("A"), UnsupportedType);
}

TEST_CASE("small root systems") {
  const RootSystem a1(LieType{'A', 1});
  CHECK(a1.positive_count() == 1);
  CHECK(a1.positive_root(a1.highest_root()) == RootCoords{1});

  const RootSystem a2(LieType{'A', 2});
  REQUIRE(a2.positive_count() == 3);
  CHECK(a2.positive_root(0) == RootCoords{1, 0});
  CHECK(a2.positive_root(1) == RootCoords{0, 1});
  CHECK(a2.positive_root(2) == RootCoords{1, 1});

  const RootSystem g2(LieType{'G', 2});
  CHECK(g2.positive_count() == 6);
  CHECK(g2.positive_root(g2.highest_root()) == RootCoords{3, 2});
  CHECK(g2.half_norm(0) == 1);
  CHECK(g2.half_norm(1) == 3);
}

TEST_CASE("exponents and coxeter numbers") {
  CHECK(exponents(RootSystem({'A', 1})) == std::vector<int>{1});
  CHECK(exponents(RootSystem({'A', 2})) == std::vector<int>{1, 2});
  CHECK(exponents(RootSystem({'D', 4})) == std::vector<int>{1, 3, 3, 5});
  CHECK(exponents(RootSystem({'E', 8})) == std::vector<int>{1, 7, 11, 13, 17, 19, 23, 29});
  CHECK(exponents(RootSystem({'G', 2})) == std::vector<int>{1, 5});
  CHECK(coxeter_number(RootSystem({'A', 1})) == 2);
  CHECK(coxeter_number(RootSystem({'A', 2})) == 3);
  CHECK(coxeter_number(RootSystem({'G', 2})) == 6);
  CHECK(coxeter_number(RootSystem({'E', 8})) == 30);
}

TEST_CASE("x coefficients") {
  CHECK(x_coefficients(RootSystem({'A', 1})) == std::vector<Rational>{Rational(1, 2)});
  CHECK(x_coefficients(RootSystem({'A', 2})) == std::vector<Rational>{1, 1});
  // B2: x = 2 h_1 + 3/2 h_2 with alpha_2 short.
  CHECK(x_coefficients(RootSystem({'B', 2})) == std::vector<Rational>{2, Rational(3, 2)});
}

TEST_CASE("affine cartan data") {
  const auto a1 = affine_cartan(RootSystem({'A', 1}));
  CHECK(a1.gcm == std::vector<std::vector<int>>{{2, -2}, {-2, 2}});
  CHECK(a1.marks == std::vector<std::int64_t>{1, 1});

  const auto a2 = affine_cartan(RootSystem({'A', 2}));
  CHECK(a2.marks == std::vector<std::int64_t>{1, 1, 1});
  CHECK(a2.comarks == std::vector<std::int64_t>{1, 1, 1});

  // delta = 3 alpha_1 + 2 alpha_2 with alpha_1 short gives marks (1, 3, 2) in this labeling.
  const auto g2 = affine_cartan(RootSystem({'G', 2}));
  CHECK(g2.marks == std::vector<std::int64_t>{1, 3, 2});
  auto sorted = g2.marks;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == std::vector<std::int64_t>{1, 2, 3});
  CHECK(g2.kac_label == "G2(1)");
}

TEST_CASE("diagram automorphisms") {
  const auto a3 = diagram_automorphism(RootSystem({'A', 3}));
  CHECK(a3.order == 2);
  CHECK(a3.perm == std::vector<int>{2, 1, 0});
  CHECK(diagram_automorphism(RootSystem({'B', 3})).is_trivial());
  CHECK(diagram_automorphism(RootSystem({'D', 4})).is_trivial());

  const auto e6 = diagram_automorphism(RootSystem({'E', 6}));
  CHECK(e6.order == 2);
  CHECK(e6.perm[1] == 1);
  CHECK(e6.perm[3] == 3);
  CHECK(e6.perm[0] == 5);
  CHECK(e6.perm[2] == 4);
}

TEST_CASE("properties over every supported type") {
  for (const auto& t : all_supported_types()) {
    CAPTURE(t.name());
    const RootSystem rs(t);
    const int l = rs.rank();
    const auto m = exponents(rs);
    const auto& a = rs.cartan();

    const auto oracle = weyl_orbit_roots(a);
    CHECK(static_cast<int>(oracle.size()) == rs.positive_count());
    for (const auto& r : rs.positive_roots()) CHECK(oracle.count(r) == 1);

    CHECK(rs.dimension() == brute_dimension(t));
    int sum = 0, dim = 0;
    for (int v : m) {
      sum += v;
      dim += 2 * v + 1;
    }
    CHECK(dim == rs.dimension());
    CHECK(sum == rs.positive_count());
    CHECK(m.back() == rs.height(rs.highest_root()));
    CHECK(std::is_sorted(m.begin(), m.end()));

    const auto r = x_coefficients(rs);
    for (int i = 0; i < l; ++i) {
      Rational v(0);
      for (int j = 0; j < l; ++j) v += r[j] * a[j][i];
      CHECK(v == Rational(1));
      CHECK(r[i] > Rational(0));
    }

    for (int k = 1; k < rs.positive_count(); ++k) CHECK(rs.height(k - 1) <= rs.height(k));
    for (int k = 0; k < rs.positive_count(); ++k) CHECK(rs.height(k) <= rs.height(rs.highest_root()));

    const auto aff = affine_cartan(rs);
    for (int i = 0; i <= l; ++i) {
      std::int64_t s = 0, c = 0;
      for (int j = 0; j <= l; ++j) {
        s += aff.gcm[i][j] * aff.marks[j];
        c += aff.comarks[j] * aff.gcm[j][i];
      }
      CHECK(s == 0);
      CHECK(c == 0);
    }
    for (int i = 0; i < l; ++i)
      for (int j = 0; j < l; ++j) CHECK(aff.gcm[i + 1][j + 1] == a[i][j]);
    std::int64_t gm = 0, gc = 0;
    for (int i = 0; i <= l; ++i) {
      CHECK(aff.marks[i] > 0);
      CHECK(aff.comarks[i] > 0);
      gm = std::gcd(gm, aff.marks[i]);
      gc = std::gcd(gc, aff.comarks[i]);
    }
    CHECK(gm == 1);
    CHECK(gc == 1);

    const auto nu = diagram_automorphism(rs);
    for (int i = 0; i < l; ++i)
      for (int j = 0; j < l; ++j) CHECK(a[nu.perm[i]][nu.perm[j]] == a[i][j]);
    const auto& delta = rs.positive_root(rs.highest_root());
    for (int i = 0; i < l; ++i) CHECK(delta[nu.perm[i]] == delta[i]);
  }
}
