#pragma once

// Exact rational elimination, used to cross-check small F_p computations
// against characteristic zero.

#include <boost/multiprecision/cpp_int.hpp>
#include <cstddef>
#include <optional>
#include <vector>

#include "jacring/linalg.hpp"

namespace jacring::linalg::rational {

using Rational = boost::multiprecision::cpp_rational;
using RationalMatrix = std::vector<std::vector<Rational>>;

inline constexpr std::size_t kMaxDim = 200;

struct RationalRref {
  std::size_t rank = 0;
  RationalMatrix reduced;
  std::vector<std::size_t> pivots;
};

// Throws DimensionMismatch when either side exceeds kMaxDim or rows are ragged.
RationalRref rref_rank(RationalMatrix m);
std::size_t rank(const RationalMatrix& m);

// Lift residues to integers in [0, p).
RationalMatrix lift(const Matrix& m);
// Image mod p; nullopt when a denominator vanishes mod p.
std::optional<Matrix> reduce_mod(const RationalMatrix& m, const PrimeField& f);

}  // namespace jacring::linalg::rational
