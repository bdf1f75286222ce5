#include "jacring/rational.hpp"

#include <utility>

#include "jacring/error.hpp"

namespace jacring::linalg::rational {

namespace {

void check_shape(const RationalMatrix& m) {
  if (m.size() > kMaxDim) fail(ErrorCode::DimensionMismatch, "rational mode is limited to 200 rows");
  const std::size_t cols = m.empty() ? 0 : m.front().size();
  if (cols > kMaxDim) fail(ErrorCode::DimensionMismatch, "rational mode is limited to 200 columns");
  for (const auto& row : m)
    if (row.size() != cols) fail(ErrorCode::DimensionMismatch, "ragged rational matrix");
}

}  // namespace

RationalRref rref_rank(RationalMatrix m) {
  check_shape(m);
  RationalRref out;
  const std::size_t rows = m.size();
  const std::size_t cols = rows ? m.front().size() : 0;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && m[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(m[r], m[piv]);
    const Rational inv = 1 / m[r][c];
    for (std::size_t j = c; j < cols; ++j) m[r][j] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      const Rational fac = m[i][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= fac * m[r][j];
    }
    out.pivots.push_back(c);
    ++r;
  }
  out.rank = r;
  out.reduced = std::move(m);
  return out;
}

std::size_t rank(const RationalMatrix& m) { return rref_rank(m).rank; }

RationalMatrix lift(const Matrix& m) {
  RationalMatrix out(m.rows(), std::vector<Rational>(m.cols()));
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out[r][c] = Rational(m(r, c));
  return out;
}

std::optional<Matrix> reduce_mod(const RationalMatrix& m, const PrimeField& f) {
  using boost::multiprecision::cpp_int;
  const std::size_t rows = m.size();
  const std::size_t cols = rows ? m.front().size() : 0;
  Matrix out(rows, cols);
  const cpp_int p = f.modulus();
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      cpp_int num = boost::multiprecision::numerator(m[r][c]) % p;
      cpp_int den = boost::multiprecision::denominator(m[r][c]) % p;
      if (num < 0) num += p;
      if (den < 0) den += p;
      if (den == 0) return std::nullopt;
      out(r, c) = f.mul(static_cast<Elem>(num), f.inv(static_cast<Elem>(den)));
    }
  return out;
}

}  // namespace jacring::linalg::rational
