#pragma once

// Jacobian ideals J_f^k and the graded quotient R_f = S / J_f.
//
// Coordinates on R_f^k are the standard monomials of degree k: the non-pivot
// columns of the reduced echelon form of J_f^k with monomials in index order.

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <vector>

#include "jacring/linalg.hpp"
#include "jacring/poly.hpp"

namespace jacring::jacobian {

using linalg::Elem;
using linalg::Matrix;
using linalg::PrimeField;
using linalg::Subspace;
using poly::HomPoly;

struct RElem {
  unsigned degree = 0;
  std::vector<Elem> coords;

  bool is_zero() const;
  bool operator==(const RElem&) const = default;
};

// Coefficient of t^k in (1 + t + ... + t^{d-2})^{n+1}.
std::uint64_t generic_hilbert(std::size_t n, unsigned d, unsigned k);
// Same number via dim S^k - (n+1) dim S^{k-d+1} + C(n+1,2) dim S^{k-2d+2} - ...
std::int64_t generic_hilbert_alternating(std::size_t n, unsigned d, unsigned k);
inline unsigned socle_degree(std::size_t n, unsigned d) { return static_cast<unsigned>((n + 1) * (d - 2)); }

struct SmoothCertificate {
  bool smooth = false;
  // False when the degree cap stopped the check before N+1.
  bool complete = false;
  unsigned checked_up_to = 0;
  std::vector<std::size_t> dims;
  std::vector<std::uint64_t> generic;
};

// How each degree is eliminated. Direct reduces the generators m * df/dX_i
// of J^k; Koszul reduces the relations X_i (X_j r) - X_j (X_i r) on
// S^1 (x) R^{k-1}. Both give the same coordinates; Auto picks the cheaper.
enum class Strategy { Auto, Direct, Koszul };

class JacobianRing {
 public:
  explicit JacobianRing(HomPoly f, std::optional<unsigned> max_degree = {}, Strategy strategy = Strategy::Auto);
  ~JacobianRing();
  JacobianRing(const JacobianRing&) = delete;
  JacobianRing& operator=(const JacobianRing&) = delete;

  const HomPoly& polynomial() const noexcept { return f_; }
  const poly::RingContext& context() const noexcept { return f_.context(); }
  const poly::ContextPtr& context_ptr() const noexcept { return f_.context_ptr(); }
  const PrimeField& field() const noexcept { return f_.field(); }
  const std::vector<HomPoly>& partials() const noexcept { return partials_; }

  std::size_t n() const noexcept { return context().n(); }
  unsigned d() const noexcept { return f_.degree(); }
  unsigned socle_degree() const noexcept { return jacobian::socle_degree(n(), d()); }
  unsigned max_degree() const noexcept { return max_degree_; }

  std::size_t quotient_dim(unsigned k) const;
  // Standard monomial indices of degree k, increasing.
  std::span<const std::uint32_t> quotient_basis(unsigned k) const;
  // dim S^k x dim R^k; row u holds the coordinates of the class of monomial u.
  const Matrix& normal_forms(unsigned k) const;
  // Position of monomial u among the standard monomials, or -1.
  std::int32_t basis_position(unsigned k, std::size_t u) const;

  // RREF basis of J_f^k inside S^k; zero subspace below degree d-1.
  Subspace ideal_piece(unsigned k) const;

  RElem reduce(const HomPoly& v) const;
  RElem reduce(unsigned k, std::span<const Elem> coeffs) const;
  HomPoly lift(const RElem& e) const;
  RElem basis_element(unsigned k, std::size_t pos) const;
  RElem zero(unsigned k) const;
  RElem multiply(const RElem& a, const RElem& b) const;

  // dim R^{k + deg g} x dim R^k.
  Matrix multiplication_map(const HomPoly& g, unsigned k) const;
  Matrix multiplication_map(const RElem& a, unsigned k) const;
  // dim R^k x dim S^k.
  Matrix reduction_matrix(unsigned k) const;
  linalg::BilinearMap multiplication_tensor(unsigned a, unsigned b) const;

  const SmoothCertificate& certificate() const;
  bool smooth() const { return certificate().smooth; }

 private:
  struct Degree;
  const Degree& degree(unsigned k) const;
  void compute(unsigned k) const;
  void check_cap(unsigned k) const;

  HomPoly f_;
  std::vector<HomPoly> partials_;
  unsigned max_degree_;
  Strategy strategy_;

  mutable std::mutex mu_;
  mutable std::vector<std::unique_ptr<Degree>> degrees_;
  mutable std::atomic<unsigned> ready_{0};
  mutable std::once_flag cert_once_;
  mutable SmoothCertificate cert_;
};

SmoothCertificate smooth_check(const JacobianRing& jr);

// dim R^k x dim R^{N-k} matrix of (a, b) -> coefficient of ab in R^N.
Matrix macaulay_pairing(const JacobianRing& jr, unsigned k);

}  // namespace jacring::jacobian
