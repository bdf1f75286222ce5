#pragma once

// Dense exact linear algebra over a word-size prime field.

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace jacring::linalg {

using Elem = std::uint32_t;

bool is_prime(std::uint64_t n);

class PrimeField {
 public:
  // p must be prime and below 2^31.
  explicit PrimeField(std::uint32_t p = 32003);

  std::uint32_t modulus() const noexcept { return p_; }

  Elem reduce(std::uint64_t v) const noexcept { return static_cast<Elem>(v % p_); }
  Elem from_int(std::int64_t v) const noexcept;
  Elem add(Elem a, Elem b) const noexcept {
    Elem s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  Elem sub(Elem a, Elem b) const noexcept { return a >= b ? a - b : a + (p_ - b); }
  Elem neg(Elem a) const noexcept { return a == 0 ? 0 : p_ - a; }
  Elem mul(Elem a, Elem b) const noexcept {
    return static_cast<Elem>(static_cast<std::uint64_t>(a) * b % p_);
  }
  Elem inv(Elem a) const;
  Elem pow(Elem a, std::uint64_t e) const noexcept;
  Elem random(std::mt19937_64& rng) const;

  // How many products of two reduced residues can be added to a reduced
  // residue before a 64-bit accumulator may overflow.
  std::uint64_t lazy_budget() const noexcept { return lazy_; }

  bool operator==(const PrimeField& o) const noexcept { return p_ == o.p_; }

 private:
  std::uint32_t p_;
  std::uint64_t lazy_;
};

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<Elem> data);

  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Elem& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  Elem operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<Elem> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const Elem> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::vector<Elem>& data() noexcept { return data_; }
  const std::vector<Elem>& data() const noexcept { return data_; }

  void append_row(std::span<const Elem> values);
  bool is_zero() const;

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Elem> data_;
};

Matrix transpose(const Matrix& m);
Matrix multiply(const PrimeField& f, const Matrix& a, const Matrix& b);
std::vector<Elem> apply(const PrimeField& f, const Matrix& m, std::span<const Elem> v);
Matrix vstack(const Matrix& top, const Matrix& bottom);
Matrix random_matrix(const PrimeField& f, std::size_t rows, std::size_t cols, std::mt19937_64& rng);
Matrix random_invertible(const PrimeField& f, std::size_t n, std::mt19937_64& rng);

struct RrefResult {
  std::size_t rank = 0;
  Matrix reduced;  // same shape as the input, nonzero rows first
  std::vector<std::size_t> pivots;
};

RrefResult rref_rank(const PrimeField& f, Matrix m);
std::size_t rank(const PrimeField& f, const Matrix& m);
bool is_invertible(const PrimeField& f, const Matrix& m);
Matrix inverse(const PrimeField& f, const Matrix& m);

class Subspace {
 public:
  Subspace() : Subspace(PrimeField(), 0) {}
  Subspace(const PrimeField& field, std::size_t ambient_dim);

  static Subspace span(const PrimeField& field, const Matrix& rows);
  static Subspace full(const PrimeField& field, std::size_t ambient_dim);
  // Caller guarantees basis is already in reduced row-echelon form.
  static Subspace from_rref(const PrimeField& field, Matrix basis, std::vector<std::size_t> pivots);

  const PrimeField& field() const noexcept { return field_; }
  std::size_t ambient_dim() const noexcept { return basis_.cols(); }
  std::size_t dim() const noexcept { return basis_.rows(); }
  const Matrix& basis() const noexcept { return basis_; }
  const std::vector<std::size_t>& pivots() const noexcept { return pivots_; }

  // v minus its reduction against the basis; zero exactly when v lies in the span.
  std::vector<Elem> residual(std::span<const Elem> v) const;
  bool contains(std::span<const Elem> v) const;
  bool contains(const Subspace& other) const;
  // Coefficients on the basis rows; v is assumed to be a member.
  std::vector<Elem> coordinates(std::span<const Elem> v) const;
  std::vector<std::size_t> complement_columns() const;
  // (ambient - dim) x ambient, its kernel is this subspace. Rows follow the
  // complement columns in increasing order.
  Matrix quotient_map() const;

  bool operator==(const Subspace& o) const;

 private:
  PrimeField field_;
  Matrix basis_;
  std::vector<std::size_t> pivots_;
};

// Null space of m acting on column vectors.
Subspace kernel(const PrimeField& f, const Matrix& m);
// Column space of m.
Subspace image(const PrimeField& f, const Matrix& m);
Subspace image(const Matrix& m, const Subspace& s);
Subspace sum(const Subspace& u, const Subspace& v);
Subspace intersect(const Subspace& u, const Subspace& v);
// {v in F^domain_dim : A v in target for every A in actions}
Subspace transporter(const Subspace& target, std::span<const Matrix> actions, std::size_t domain_dim);

// Row space built incrementally; the stored basis is kept fully reduced.
class EchelonBuilder {
 public:
  EchelonBuilder(const PrimeField& field, std::size_t cols);

  std::size_t add_rows(const Matrix& rows);
  std::size_t rank() const noexcept { return basis_.rows(); }
  std::size_t cols() const noexcept { return cols_; }
  bool in_span(std::span<const Elem> v) const;
  Subspace row_space() const;
  Subspace null_space() const;

 private:
  PrimeField field_;
  std::size_t cols_;
  Matrix basis_;
  std::vector<std::size_t> pivots_;
};

// mu : A x B -> C stored as data[(a * dim_b + b) * dim_c + c].
class BilinearMap {
 public:
  BilinearMap() = default;
  BilinearMap(std::size_t dim_a, std::size_t dim_b, std::size_t dim_c)
      : dim_a_(dim_a), dim_b_(dim_b), dim_c_(dim_c), data_(dim_a * dim_b * dim_c, 0) {}

  std::size_t dim_a() const noexcept { return dim_a_; }
  std::size_t dim_b() const noexcept { return dim_b_; }
  std::size_t dim_c() const noexcept { return dim_c_; }

  Elem& at(std::size_t a, std::size_t b, std::size_t c) { return data_[(a * dim_b_ + b) * dim_c_ + c]; }
  Elem at(std::size_t a, std::size_t b, std::size_t c) const { return data_[(a * dim_b_ + b) * dim_c_ + c]; }
  std::span<const Elem> product(std::size_t a, std::size_t b) const {
    return {data_.data() + (a * dim_b_ + b) * dim_c_, dim_c_};
  }
  std::span<Elem> product(std::size_t a, std::size_t b) {
    return {data_.data() + (a * dim_b_ + b) * dim_c_, dim_c_};
  }

  std::vector<Elem> apply(const PrimeField& f, std::span<const Elem> u, std::span<const Elem> v) const;
  // dim_c x dim_b matrix of v -> mu(u, v).
  Matrix left_action(const PrimeField& f, std::span<const Elem> u) const;
  BilinearMap swapped() const;

  std::vector<Elem>& data() noexcept { return data_; }
  const std::vector<Elem>& data() const noexcept { return data_; }

  bool operator==(const BilinearMap&) const = default;

 private:
  std::size_t dim_a_ = 0, dim_b_ = 0, dim_c_ = 0;
  std::vector<Elem> data_;
};

}  // namespace jacring::linalg
