#include "ctoda/rational.hpp"

#include <numeric>
#include <stdexcept>

namespace ctoda {

namespace {

// Reduced row echelon form in place; returns pivot column per row.
std::vector<std::size_t> rref(RationalMatrix& m, std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < m.size(); ++col) {
    std::size_t sel = row;
    while (sel < m.size() && m[sel][col].numerator() == 0) ++sel;
    if (sel == m.size()) continue;
    std::swap(m[sel], m[row]);
    const Rational inv = Rational(1) / m[row][col];
    for (auto& v : m[row]) v *= inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || m[r][col].numerator() == 0) continue;
      const Rational f = m[r][col];
      for (std::size_t c = 0; c < m[r].size(); ++c) m[r][c] -= f * m[row][c];
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace

std::vector<std::vector<std::int64_t>> integer_null_space(const RationalMatrix& m) {
  if (m.empty()) return {};
  const std::size_t cols = m.front().size();
  RationalMatrix work = m;
  const auto pivots = rref(work, cols);
  std::vector<bool> is_pivot(cols, false);
  for (auto p : pivots) is_pivot[p] = true;

  std::vector<std::vector<std::int64_t>> basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rational> v(cols, Rational(0));
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -work[r][free];

    std::int64_t lcm = 1;
    for (const auto& q : v) lcm = std::lcm(lcm, q.denominator());
    std::vector<std::int64_t> iv(cols);
    std::int64_t g = 0;
    for (std::size_t i = 0; i < cols; ++i) {
      iv[i] = v[i].numerator() * (lcm / v[i].denominator());
      g = std::gcd(g, iv[i]);
    }
    std::int64_t sign = 1;
    for (auto x : iv) {
      if (x != 0) {
        sign = x < 0 ? -1 : 1;
        break;
      }
    }
    for (auto& x : iv) x = sign * x / g;
    basis.push_back(std::move(iv));
  }
  return basis;
}

std::vector<Rational> solve_exact(RationalMatrix m, std::vector<Rational> b) {
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i) m[i].push_back(b[i]);
  const auto pivots = rref(m, n);
  if (pivots.size() != n) throw std::domain_error("solve_exact: singular matrix");
  std::vector<Rational> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = m[i][n];
  return x;
}

}  // namespace ctoda
