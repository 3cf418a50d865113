#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace ctoda {

using Rational = boost::rational<std::int64_t>;
using RationalMatrix = std::vector<std::vector<Rational>>;

inline std::string to_string(const Rational& q) {
  if (q.denominator() == 1) return std::to_string(q.numerator());
  return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

inline double to_double(const Rational& q) {
  return boost::rational_cast<double>(q);
}

/// Basis of the right null space of `m` (rows x cols), via exact row reduction.
/// Each basis vector is scaled to coprime integers with a positive leading entry.
std::vector<std::vector<std::int64_t>> integer_null_space(const RationalMatrix& m);

/// Solves m * x = b exactly for square nonsingular m. Throws std::domain_error if singular.
std::vector<Rational> solve_exact(RationalMatrix m, std::vector<Rational> b);

}  // namespace ctoda
