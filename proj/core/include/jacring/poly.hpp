#pragma once

// Homogeneous polynomials in n+1 variables over F_p, dense in the graded lex
// monomial basis (X0 > X1 > ... > Xn, so index 0 of degree k is X0^k).

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "jacring/linalg.hpp"

namespace jacring::poly {

using linalg::Elem;
using linalg::Matrix;
using linalg::PrimeField;

using Exponent = std::uint16_t;

std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

class MonomialTable {
 public:
  MonomialTable(std::size_t nvars, unsigned degree);

  unsigned degree() const noexcept { return degree_; }
  std::size_t nvars() const noexcept { return nvars_; }
  std::size_t size() const noexcept { return size_; }
  std::span<const Exponent> exponents(std::size_t idx) const { return {exps_.data() + idx * nvars_, nvars_}; }

 private:
  std::size_t nvars_;
  unsigned degree_;
  std::size_t size_;
  std::vector<Exponent> exps_;
};

class RingContext {
 public:
  static constexpr std::int32_t kNone = -1;

  // n is the projective dimension, so there are n+1 variables.
  RingContext(std::size_t n, unsigned d, std::uint32_t p = 32003, std::optional<unsigned> degree_cap = {});
  static std::shared_ptr<const RingContext> create(std::size_t n, unsigned d, std::uint32_t p = 32003,
                                                   std::optional<unsigned> degree_cap = {});

  std::size_t n() const noexcept { return nvars_ - 1; }
  std::size_t nvars() const noexcept { return nvars_; }
  unsigned degree_d() const noexcept { return d_; }
  unsigned degree_cap() const noexcept { return cap_; }
  const PrimeField& field() const noexcept { return field_; }

  std::size_t dim(unsigned k) const { return static_cast<std::size_t>(binomial(n() + k, n())); }

  const MonomialTable& monomials(unsigned k) const;
  std::size_t index_of(std::span<const Exponent> exps) const;
  // Row-major dim(a) x dim(b) table of product indices in degree a+b.
  std::span<const std::uint32_t> product_table(unsigned a, unsigned b) const;
  // dim(k) x nvars table: index of u / X_i in degree k-1, or kNone.
  std::span<const std::int32_t> divisor_table(unsigned k) const;

  bool compatible(const RingContext& o) const noexcept { return nvars_ == o.nvars_ && field_ == o.field_; }

 private:
  std::size_t nvars_;
  unsigned d_;
  PrimeField field_;
  unsigned cap_;

  mutable std::mutex mu_;
  mutable std::map<unsigned, std::unique_ptr<MonomialTable>> monomials_;
  mutable std::map<std::pair<unsigned, unsigned>, std::unique_ptr<std::vector<std::uint32_t>>> products_;
  mutable std::map<unsigned, std::unique_ptr<std::vector<std::int32_t>>> divisors_;
};

using ContextPtr = std::shared_ptr<const RingContext>;

class HomPoly {
 public:
  HomPoly(ContextPtr ctx, unsigned degree);
  HomPoly(ContextPtr ctx, unsigned degree, std::vector<Elem> coeffs);

  static HomPoly monomial(ContextPtr ctx, std::span<const Exponent> exps, Elem coeff = 1);
  static HomPoly variable(ContextPtr ctx, std::size_t i);
  static HomPoly linear_form(ContextPtr ctx, std::span<const Elem> coeffs);

  const ContextPtr& context_ptr() const noexcept { return ctx_; }
  const RingContext& context() const noexcept { return *ctx_; }
  const PrimeField& field() const noexcept { return ctx_->field(); }
  unsigned degree() const noexcept { return degree_; }
  std::span<const Elem> coeffs() const noexcept { return coeffs_; }
  std::vector<Elem>& coeffs_mut() noexcept { return coeffs_; }
  Elem coeff(std::size_t idx) const { return coeffs_[idx]; }
  bool is_zero() const;

  HomPoly operator+(const HomPoly& o) const;
  HomPoly operator-(const HomPoly& o) const;
  HomPoly scaled(Elem c) const;

  bool operator==(const HomPoly& o) const;

 private:
  ContextPtr ctx_;
  unsigned degree_;
  std::vector<Elem> coeffs_;
};

HomPoly multiply(const HomPoly& a, const HomPoly& b);
HomPoly power(const HomPoly& a, unsigned e);
HomPoly partial_derivative(const HomPoly& a, std::size_t var);
std::vector<HomPoly> gradient(const HomPoly& a);
Elem evaluate(const HomPoly& a, std::span<const Elem> point);

// Matrix of S^k -> S^{k + deg g}, v -> g v.
Matrix multiplication_matrix(const HomPoly& g, unsigned k);
// Matrix of S^k -> S^{k-1}, v -> dv/dX_var.
Matrix derivative_matrix(const RingContext& ctx, std::size_t var, unsigned k);
// Matrix of S^k -> S^k, v -> v(AX) with (AX)_i = sum_j A_ij X_j.
Matrix substitution_matrix(const RingContext& ctx, const Matrix& a, unsigned k);
HomPoly substitute(const HomPoly& p, const Matrix& a);

HomPoly fermat(ContextPtr ctx, std::optional<unsigned> degree = {});
HomPoly random_form(ContextPtr ctx, unsigned degree, std::mt19937_64& rng);

struct Fermat {};
struct RandomForm {
  std::uint64_t seed;
};
struct BilinearSum {
  std::vector<HomPoly> f;
  std::vector<HomPoly> g;
};
struct SchifferLine {
  HomPoly f;
  HomPoly x;
  Elem t;
};
using Construction = std::variant<Fermat, RandomForm, BilinearSum, SchifferLine>;

// Polynomial of degree ctx.degree_d() described by kind.
HomPoly construct(ContextPtr ctx, const Construction& kind);

// m random pairs with deg f_i = floor(d/2), deg g_i = d - deg f_i.
BilinearSum random_bilinear_parts(ContextPtr ctx, std::size_t m, std::mt19937_64& rng);

}  // namespace jacring::poly
