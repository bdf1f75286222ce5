#include "jacring/linalg.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "jacring/error.hpp"

namespace jacring::linalg {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t q = 3; q * q <= n; q += 2)
    if (n % q == 0) return false;
  return true;
}

PrimeField::PrimeField(std::uint32_t p) : p_(p) {
  if (p >= (1u << 31) || !is_prime(p))
    fail(ErrorCode::InvalidArgument, "modulus " + std::to_string(p) + " is not a prime below 2^31");
  const std::uint64_t sq = static_cast<std::uint64_t>(p - 1) * (p - 1);
  lazy_ = sq == 0 ? std::numeric_limits<std::uint64_t>::max()
                  : (std::numeric_limits<std::uint64_t>::max() - (p - 1)) / sq;
}

Elem PrimeField::from_int(std::int64_t v) const noexcept {
  std::int64_t r = v % static_cast<std::int64_t>(p_);
  if (r < 0) r += p_;
  return static_cast<Elem>(r);
}

Elem PrimeField::inv(Elem a) const {
  if (a % p_ == 0) fail(ErrorCode::InvalidArgument, "inverse of zero");
  std::int64_t t = 0, new_t = 1, r = p_, new_r = a % p_;
  while (new_r != 0) {
    std::int64_t q = r / new_r;
    t -= q * new_t;
    std::swap(t, new_t);
    r -= q * new_r;
    std::swap(r, new_r);
  }
  return from_int(t);
}

Elem PrimeField::pow(Elem a, std::uint64_t e) const noexcept {
  std::uint64_t base = a % p_, acc = 1 % p_;
  while (e) {
    if (e & 1) acc = acc * base % p_;
    base = base * base % p_;
    e >>= 1;
  }
  return static_cast<Elem>(acc);
}

Elem PrimeField::random(std::mt19937_64& rng) const {
  return std::uniform_int_distribution<Elem>(0, p_ - 1)(rng);
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<Elem> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) fail(ErrorCode::DimensionMismatch, "matrix data size");
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

void Matrix::append_row(std::span<const Elem> values) {
  if (values.size() != cols_) fail(ErrorCode::DimensionMismatch, "append_row width");
  data_.insert(data_.end(), values.begin(), values.end());
  ++rows_;
}

bool Matrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](Elem e) { return e == 0; });
}

Matrix transpose(const Matrix& m) {
  Matrix t(m.cols(), m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) t(c, r) = m(r, c);
  return t;
}

Matrix multiply(const PrimeField& f, const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) fail(ErrorCode::DimensionMismatch, "multiply: inner dimensions");
  const std::uint64_t p = f.modulus();
  const std::uint64_t budget = f.lazy_budget();
  Matrix out(a.rows(), b.cols());
  std::vector<std::uint64_t> acc(b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    std::fill(acc.begin(), acc.end(), 0);
    std::uint64_t pending = 0;
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const std::uint64_t x = a(i, k);
      if (x == 0) continue;
      if (pending == budget) {
        for (auto& v : acc) v %= p;
        pending = 0;
      }
      const Elem* brow = b.row(k).data();
      for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += x * brow[j];
      ++pending;
    }
    for (std::size_t j = 0; j < acc.size(); ++j) out(i, j) = static_cast<Elem>(acc[j] % p);
  }
  return out;
}

std::vector<Elem> apply(const PrimeField& f, const Matrix& m, std::span<const Elem> v) {
  if (m.cols() != v.size()) fail(ErrorCode::DimensionMismatch, "apply: vector length");
  const std::uint64_t p = f.modulus();
  std::vector<Elem> out(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    std::uint64_t acc = 0;
    const Elem* row = m.row(r).data();
    for (std::size_t c = 0; c < v.size(); ++c) {
      acc += static_cast<std::uint64_t>(row[c]) * v[c];
      if ((c & 7) == 7) acc %= p;
    }
    out[r] = static_cast<Elem>(acc % p);
  }
  return out;
}

Matrix vstack(const Matrix& top, const Matrix& bottom) {
  if (top.rows() == 0) return bottom;
  if (bottom.rows() == 0) return top;
  if (top.cols() != bottom.cols()) fail(ErrorCode::DimensionMismatch, "vstack widths");
  std::vector<Elem> data = top.data();
  data.insert(data.end(), bottom.data().begin(), bottom.data().end());
  return Matrix(top.rows() + bottom.rows(), top.cols(), std::move(data));
}

Matrix random_matrix(const PrimeField& f, std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  Matrix m(rows, cols);
  for (auto& e : m.data()) e = f.random(rng);
  return m;
}

Matrix random_invertible(const PrimeField& f, std::size_t n, std::mt19937_64& rng) {
  for (;;) {
    Matrix m = random_matrix(f, n, n, rng);
    if (is_invertible(f, m)) return m;
  }
}

namespace {

// Gauss-Jordan elimination on 64-bit accumulators. Rows other than the pivot
// row are only reduced mod p when the lazy budget runs out or a pivot is read.
void eliminate(const PrimeField& f, std::vector<std::uint64_t>& w, std::size_t rows, std::size_t cols,
               std::vector<std::size_t>& pivots) {
  const std::uint64_t p = f.modulus();
  const std::uint64_t budget = f.lazy_budget();
  std::uint64_t pending = 0;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t piv = rows;
    for (std::size_t r = rank; r < rows; ++r) {
      std::uint64_t& x = w[r * cols + c];
      x %= p;
      if (x != 0) {
        piv = r;
        break;
      }
    }
    if (piv == rows) continue;
    if (piv != rank)
      std::swap_ranges(w.begin() + piv * cols, w.begin() + (piv + 1) * cols, w.begin() + rank * cols);
    if (pending == budget) {
      for (auto& v : w) v %= p;
      pending = 0;
    }
    std::uint64_t* prow = w.data() + rank * cols;
    const std::uint64_t inv = f.inv(static_cast<Elem>(prow[c] % p));
    for (std::size_t j = c; j < cols; ++j) prow[j] = (prow[j] % p) * inv % p;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank) continue;
      std::uint64_t* row = w.data() + r * cols;
      const std::uint64_t x = row[c] % p;
      row[c] = 0;
      if (x == 0) continue;
      const std::uint64_t fac = p - x;
      for (std::size_t j = c + 1; j < cols; ++j) row[j] += fac * prow[j];
    }
    ++pending;
    pivots.push_back(c);
    ++rank;
  }
  for (auto& v : w) v %= p;
}

}  // namespace

RrefResult rref_rank(const PrimeField& f, Matrix m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  std::vector<std::uint64_t> w(m.data().begin(), m.data().end());
  RrefResult out;
  eliminate(f, w, rows, cols, out.pivots);
  out.rank = out.pivots.size();
  for (std::size_t i = 0; i < w.size(); ++i) m.data()[i] = static_cast<Elem>(w[i]);
  out.reduced = std::move(m);
  return out;
}

std::size_t rank(const PrimeField& f, const Matrix& m) { return rref_rank(f, m).rank; }

bool is_invertible(const PrimeField& f, const Matrix& m) {
  return m.rows() == m.cols() && rank(f, m) == m.rows();
}

Matrix inverse(const PrimeField& f, const Matrix& m) {
  if (m.rows() != m.cols()) fail(ErrorCode::DimensionMismatch, "inverse of a non-square matrix");
  const std::size_t n = m.rows();
  Matrix aug(n, 2 * n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) aug(r, c) = m(r, c);
    aug(r, n + r) = 1;
  }
  RrefResult rr = rref_rank(f, std::move(aug));
  if (rr.rank < n || rr.pivots[n - 1] != n - 1) fail(ErrorCode::InvalidArgument, "matrix is singular");
  Matrix inv(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) inv(r, c) = rr.reduced(r, n + c);
  return inv;
}

Subspace::Subspace(const PrimeField& field, std::size_t ambient_dim) : field_(field), basis_(0, ambient_dim) {}

Subspace Subspace::span(const PrimeField& field, const Matrix& rows) {
  RrefResult rr = rref_rank(field, rows);
  Matrix basis(rr.rank, rows.cols());
  std::copy_n(rr.reduced.data().begin(), rr.rank * rows.cols(), basis.data().begin());
  return from_rref(field, std::move(basis), std::move(rr.pivots));
}

Subspace Subspace::full(const PrimeField& field, std::size_t ambient_dim) {
  std::vector<std::size_t> piv(ambient_dim);
  for (std::size_t i = 0; i < ambient_dim; ++i) piv[i] = i;
  return from_rref(field, Matrix::identity(ambient_dim), std::move(piv));
}

Subspace Subspace::from_rref(const PrimeField& field, Matrix basis, std::vector<std::size_t> pivots) {
  if (pivots.size() != basis.rows()) fail(ErrorCode::DimensionMismatch, "pivot count");
  Subspace s(field, basis.cols());
  s.basis_ = std::move(basis);
  s.pivots_ = std::move(pivots);
  return s;
}

std::vector<Elem> Subspace::residual(std::span<const Elem> v) const {
  if (v.size() != ambient_dim()) fail(ErrorCode::AmbientMismatch, "residual: vector length");
  const std::uint64_t p = field_.modulus();
  std::vector<std::uint64_t> acc(v.begin(), v.end());
  std::uint64_t pending = 0;
  const std::size_t n = ambient_dim();
  for (std::size_t r = 0; r < dim(); ++r) {
    const std::uint64_t x = v[pivots_[r]];
    if (x == 0) continue;
    if (pending == field_.lazy_budget()) {
      for (auto& a : acc) a %= p;
      pending = 0;
    }
    const std::uint64_t fac = p - x;
    const Elem* row = basis_.row(r).data();
    for (std::size_t j = pivots_[r]; j < n; ++j) acc[j] += fac * row[j];
    ++pending;
  }
  std::vector<Elem> out(n);
  for (std::size_t j = 0; j < n; ++j) out[j] = static_cast<Elem>(acc[j] % p);
  return out;
}

bool Subspace::contains(std::span<const Elem> v) const {
  auto res = residual(v);
  return std::all_of(res.begin(), res.end(), [](Elem e) { return e == 0; });
}

bool Subspace::contains(const Subspace& other) const {
  if (other.ambient_dim() != ambient_dim()) fail(ErrorCode::AmbientMismatch, "contains: ambient dims");
  if (other.dim() > dim()) return false;
  for (std::size_t r = 0; r < other.dim(); ++r)
    if (!contains(other.basis().row(r))) return false;
  return true;
}

std::vector<Elem> Subspace::coordinates(std::span<const Elem> v) const {
  std::vector<Elem> c(dim());
  for (std::size_t r = 0; r < dim(); ++r) c[r] = v[pivots_[r]];
  return c;
}

std::vector<std::size_t> Subspace::complement_columns() const {
  std::vector<std::size_t> out;
  out.reserve(ambient_dim() - dim());
  std::size_t k = 0;
  for (std::size_t c = 0; c < ambient_dim(); ++c) {
    if (k < pivots_.size() && pivots_[k] == c) {
      ++k;
      continue;
    }
    out.push_back(c);
  }
  return out;
}

Matrix Subspace::quotient_map() const {
  const auto comp = complement_columns();
  Matrix q(comp.size(), ambient_dim());
  for (std::size_t i = 0; i < comp.size(); ++i) {
    const std::size_t c = comp[i];
    q(i, c) = 1;
    for (std::size_t r = 0; r < dim(); ++r) q(i, pivots_[r]) = field_.neg(basis_(r, c));
  }
  return q;
}

bool Subspace::operator==(const Subspace& o) const {
  return field_ == o.field_ && basis_ == o.basis_ && pivots_ == o.pivots_;
}

Subspace kernel(const PrimeField& f, const Matrix& m) {
  const std::size_t cols = m.cols();
  RrefResult rr = rref_rank(f, m);
  std::vector<bool> is_pivot(cols, false);
  for (auto c : rr.pivots) is_pivot[c] = true;
  Matrix vecs(0, cols);
  std::vector<Elem> v(cols);
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    std::fill(v.begin(), v.end(), 0);
    v[free] = 1;
    for (std::size_t r = 0; r < rr.rank; ++r) v[rr.pivots[r]] = f.neg(rr.reduced(r, free));
    vecs.append_row(v);
  }
  return Subspace::span(f, vecs);
}

Subspace image(const PrimeField& f, const Matrix& m) { return Subspace::span(f, transpose(m)); }

Subspace image(const Matrix& m, const Subspace& s) {
  if (m.cols() != s.ambient_dim()) fail(ErrorCode::DimensionMismatch, "image: map domain");
  return Subspace::span(s.field(), multiply(s.field(), s.basis(), transpose(m)));
}

Subspace sum(const Subspace& u, const Subspace& v) {
  if (u.ambient_dim() != v.ambient_dim()) fail(ErrorCode::AmbientMismatch, "sum: ambient dims");
  return Subspace::span(u.field(), vstack(u.basis(), v.basis()));
}

Subspace intersect(const Subspace& u, const Subspace& v) {
  if (u.ambient_dim() != v.ambient_dim()) fail(ErrorCode::AmbientMismatch, "intersect: ambient dims");
  if (u.dim() == 0 || v.dim() == 0) return Subspace(u.field(), u.ambient_dim());
  const PrimeField& f = u.field();
  Matrix qv_u = multiply(f, v.quotient_map(), transpose(u.basis()));
  Subspace coeffs = kernel(f, qv_u);
  return Subspace::span(f, multiply(f, coeffs.basis(), u.basis()));
}

Subspace transporter(const Subspace& target, std::span<const Matrix> actions, std::size_t domain_dim) {
  const PrimeField& f = target.field();
  for (const auto& a : actions)
    if (a.rows() != target.ambient_dim() || a.cols() != domain_dim)
      fail(ErrorCode::DimensionMismatch, "transporter: action shape");
  if (actions.empty() || target.dim() == target.ambient_dim()) return Subspace::full(f, domain_dim);
  const Matrix q = target.quotient_map();
  Matrix stacked(0, domain_dim);
  for (const auto& a : actions) stacked = vstack(stacked, multiply(f, q, a));
  return kernel(f, stacked);
}

EchelonBuilder::EchelonBuilder(const PrimeField& field, std::size_t cols)
    : field_(field), cols_(cols), basis_(0, cols) {}

std::size_t EchelonBuilder::add_rows(const Matrix& rows) {
  if (rows.cols() != cols_) fail(ErrorCode::DimensionMismatch, "EchelonBuilder: row width");
  if (rows.rows() == 0) return 0;
  const std::uint64_t p = field_.modulus();
  const std::uint64_t budget = field_.lazy_budget();
  const std::size_t n = rows.rows();
  std::vector<std::uint64_t> w(rows.data().begin(), rows.data().end());
  // Basis rows vanish on each other's pivots, so every multiplier is read
  // from the untouched input entry.
  for (std::size_t r = 0; r < n; ++r) {
    std::uint64_t* row = w.data() + r * cols_;
    std::uint64_t pending = 0;
    for (std::size_t k = 0; k < basis_.rows(); ++k) {
      const std::size_t pc = pivots_[k];
      const std::uint64_t x = row[pc];
      if (x == 0) continue;
      if (pending == budget) {
        for (std::size_t j = 0; j < cols_; ++j) row[j] %= p;
        pending = 0;
      }
      const std::uint64_t fac = p - x;
      const Elem* b = basis_.row(k).data();
      for (std::size_t j = pc + 1; j < cols_; ++j) row[j] += fac * b[j];
      row[pc] = 0;
      ++pending;
    }
  }
  std::vector<std::size_t> new_piv;
  eliminate(field_, w, n, cols_, new_piv);
  if (new_piv.empty()) return 0;
  const std::size_t s = new_piv.size();
  // Clear the new pivot columns from the old basis.
  for (std::size_t k = 0; k < basis_.rows(); ++k) {
    auto brow = basis_.row(k);
    for (std::size_t t = 0; t < s; ++t) {
      const Elem x = brow[new_piv[t]];
      if (x == 0) continue;
      const std::uint64_t fac = p - x;
      const std::uint64_t* nrow = w.data() + t * cols_;
      for (std::size_t j = new_piv[t]; j < cols_; ++j)
        brow[j] = static_cast<Elem>((brow[j] + fac * nrow[j]) % p);
    }
  }
  std::vector<std::pair<std::size_t, std::size_t>> order;  // (pivot, source) source<0 old
  const std::size_t old = basis_.rows();
  for (std::size_t k = 0; k < old; ++k) order.emplace_back(pivots_[k], k);
  for (std::size_t t = 0; t < s; ++t) order.emplace_back(new_piv[t], old + t);
  std::sort(order.begin(), order.end());
  Matrix merged(old + s, cols_);
  std::vector<std::size_t> piv;
  piv.reserve(old + s);
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto [pc, src] = order[i];
    auto dst = merged.row(i);
    if (src < old) {
      auto b = basis_.row(src);
      std::copy(b.begin(), b.end(), dst.begin());
    } else {
      const std::uint64_t* nrow = w.data() + (src - old) * cols_;
      for (std::size_t j = 0; j < cols_; ++j) dst[j] = static_cast<Elem>(nrow[j]);
    }
    piv.push_back(pc);
  }
  basis_ = std::move(merged);
  pivots_ = std::move(piv);
  return s;
}

bool EchelonBuilder::in_span(std::span<const Elem> v) const {
  return Subspace::from_rref(field_, basis_, pivots_).contains(v);
}

Subspace EchelonBuilder::row_space() const { return Subspace::from_rref(field_, basis_, pivots_); }

Subspace EchelonBuilder::null_space() const {
  std::vector<bool> is_pivot(cols_, false);
  for (auto c : pivots_) is_pivot[c] = true;
  Matrix vecs(0, cols_);
  std::vector<Elem> v(cols_);
  for (std::size_t free = 0; free < cols_; ++free) {
    if (is_pivot[free]) continue;
    std::fill(v.begin(), v.end(), 0);
    v[free] = 1;
    for (std::size_t r = 0; r < pivots_.size(); ++r) v[pivots_[r]] = field_.neg(basis_(r, free));
    vecs.append_row(v);
  }
  return Subspace::span(field_, vecs);
}

std::vector<Elem> BilinearMap::apply(const PrimeField& f, std::span<const Elem> u, std::span<const Elem> v) const {
  if (u.size() != dim_a_ || v.size() != dim_b_) fail(ErrorCode::DimensionMismatch, "bilinear apply");
  const std::uint64_t p = f.modulus();
  std::vector<std::uint64_t> acc(dim_c_, 0);
  std::uint64_t pending = 0;
  for (std::size_t a = 0; a < dim_a_; ++a) {
    if (u[a] == 0) continue;
    for (std::size_t b = 0; b < dim_b_; ++b) {
      if (v[b] == 0) continue;
      if (pending == f.lazy_budget()) {
        for (auto& x : acc) x %= p;
        pending = 0;
      }
      const std::uint64_t coef = static_cast<std::uint64_t>(u[a]) * v[b] % p;
      const Elem* prod = data_.data() + (a * dim_b_ + b) * dim_c_;
      for (std::size_t c = 0; c < dim_c_; ++c) acc[c] += coef * prod[c];
      ++pending;
    }
  }
  std::vector<Elem> out(dim_c_);
  for (std::size_t c = 0; c < dim_c_; ++c) out[c] = static_cast<Elem>(acc[c] % p);
  return out;
}

Matrix BilinearMap::left_action(const PrimeField& f, std::span<const Elem> u) const {
  if (u.size() != dim_a_) fail(ErrorCode::DimensionMismatch, "left_action length");
  const std::uint64_t p = f.modulus();
  std::vector<std::uint64_t> acc(dim_b_ * dim_c_, 0);
  std::uint64_t pending = 0;
  for (std::size_t a = 0; a < dim_a_; ++a) {
    const std::uint64_t x = u[a];
    if (x == 0) continue;
    if (pending == f.lazy_budget()) {
      for (auto& v : acc) v %= p;
      pending = 0;
    }
    const Elem* slab = data_.data() + a * dim_b_ * dim_c_;
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += x * slab[i];
    ++pending;
  }
  Matrix m(dim_c_, dim_b_);
  for (std::size_t b = 0; b < dim_b_; ++b)
    for (std::size_t c = 0; c < dim_c_; ++c) m(c, b) = static_cast<Elem>(acc[b * dim_c_ + c] % p);
  return m;
}

BilinearMap BilinearMap::swapped() const {
  BilinearMap s(dim_b_, dim_a_, dim_c_);
  for (std::size_t a = 0; a < dim_a_; ++a)
    for (std::size_t b = 0; b < dim_b_; ++b) {
      auto src = product(a, b);
      auto dst = s.product(b, a);
      std::copy(src.begin(), src.end(), dst.begin());
    }
  return s;
}

}  // namespace jacring::linalg
