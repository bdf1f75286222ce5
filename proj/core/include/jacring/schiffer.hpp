#pragma once

// Schiffer variations f + t x^d: the ideal chains x^k R^{id-k}, constancy of
// the Jacobian ring modulo x^{d-1}, recognition of d-th powers in R^d and
// the transport of powers under coordinate changes.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "jacring/jacobian.hpp"
#include "jacring/linalg.hpp"
#include "jacring/poly.hpp"

namespace jacring::schiffer {

using jacobian::JacobianRing;
using jacobian::RElem;
using linalg::Elem;
using linalg::Matrix;
using linalg::Subspace;
using poly::HomPoly;

// I_{x,k}^{id} = x^k R^{id-k} inside R^{id}.
struct StarData {
  unsigned d = 0;
  unsigned max_multiple = 3;
  std::vector<std::vector<Subspace>> ideals;  // [i-1][k-1]

  const Subspace& ideal(unsigned i, unsigned k) const { return ideals[i - 1][k - 1]; }
};

StarData star_data(const JacobianRing& jr, const HomPoly& x, unsigned max_multiple = 3);

struct IndexedCheck {
  unsigned a = 0, b = 0;
  bool ok = false;
};

struct StarReport {
  unsigned max_multiple = 3;
  std::vector<IndexedCheck> dim_ok;     // (i, k): dim I_{x,k}^{id} = dim R^{id-k}
  std::vector<IndexedCheck> pair_ok;    // (k, -): I_k^d I_{d-k}^d in phi R^d and I_k^d I_{d-k}^{2d} in phi R^{2d}
  std::vector<IndexedCheck> absorb_ok;  // (i, k): R^d I_k^{id} in I_k^{(i+1)d}
  std::vector<IndexedCheck> add_ok;     // (k, l), k + l <= d-1: I_k^d I_l^d in I_{k+l}^{2d}

  bool dims_pass() const;
  bool pairs_pass() const;
  bool passed() const;
};

// max_multiple is the largest i used; 1 restricts every check to degrees d and 2d.
StarReport condition_star(const JacobianRing& jr, const HomPoly& x, const RElem& phi, unsigned max_multiple = 3);

struct ConstancyCheck {
  Elem t = 0;
  unsigned k = 0;
  bool equal = false;
};

struct ConstancyReport {
  std::vector<ConstancyCheck> checks;
  bool passed() const;
};

// Compares J_{f + t g}^k + x^{d-1} S^{k-d+1} with J_f^k + x^{d-1} S^{k-d+1}.
ConstancyReport family_constancy(const JacobianRing& jr, const HomPoly& g, const HomPoly& x,
                                 const std::vector<Elem>& ts, const std::vector<unsigned>& ks);
// The same with g = x^d; empty ks means {d, 2d}.
ConstancyReport quotient_constancy(const JacobianRing& jr, const HomPoly& x, const std::vector<Elem>& ts,
                                   std::vector<unsigned> ks = {});

struct EnumerationOptions {
  // Largest number of points of P^n(F_p) the search may visit.
  std::uint64_t budget = 20'000'000;
  unsigned threads = 1;
};

struct PowerRoot {
  HomPoly x;   // first nonzero coordinate is 1
  Elem lambda;  // [x^d] = lambda v
};

std::uint64_t projective_point_count(std::size_t n, std::uint32_t p);
// Searches P^n(F_p) in a fixed order and returns the first x with [x^d]
// proportional to v.
std::optional<PowerRoot> is_dth_power(const JacobianRing& jr, const RElem& v, const EnumerationOptions& opts = {});

struct Detection {
  PowerRoot root;
  StarReport report;
  ConstancyReport constancy;
};

std::optional<Detection> detect_schiffer(const JacobianRing& jr, const RElem& phi, const EnumerationOptions& opts = {},
                                         unsigned max_multiple = 3);

struct TransportReport {
  bool powers_ok = false;
  bool kernel_ok = false;
  bool passed() const { return powers_ok && kernel_ok; }
};

// jg must be the Jacobian ring of f(AX).
TransportReport veronese_transport_check(const JacobianRing& jf, const JacobianRing& jg, const Matrix& a,
                                         std::size_t samples, std::uint64_t seed);
// Whether w : R^d_f -> R^d_g sends every sampled [x^d] to a d-th power.
bool power_transport(const JacobianRing& jf, const JacobianRing& jg, const Matrix& w, std::size_t samples,
                     std::uint64_t seed, const EnumerationOptions& opts = {});

struct SquareSample {
  bool identity_ok = false;  // A^2 B^2 = (AB)^2
  std::size_t colon_dim = 0;  // [M R^{l+1} : A^2] inside R^{l+1}, M = AB
  std::size_t bs1_dim = 0;    // B S^1
  bool contains = false;
  bool equal = false;
};

std::vector<SquareSample> squares_ops(const JacobianRing& jr, unsigned l, std::size_t samples, std::uint64_t seed);

struct SpecializationDegree {
  unsigned k = 0;
  std::size_t dim = 0;
  std::uint64_t generic = 0;
  bool below_bound = false;
};

struct SpecializationReport {
  std::size_t n = 0, m = 0;
  unsigned d = 0;
  long dim_z = 0;
  // Degrees k with 2k < (n - dim Z + 1)(d - 3) are covered by the bound.
  int last_bounded = -1;
  bool smooth = false;
  std::vector<SpecializationDegree> degrees;
  bool passed() const;
};

// f = sum_{i<=m} f_i g_i with random parts; m = 0 takes a random f. Degrees
// up to last_bounded + extra are computed.
SpecializationReport singular_specialization_dims(std::size_t n, std::size_t m, unsigned d, std::uint64_t seed,
                                                  std::uint32_t p = 32003, unsigned extra = 1);

}  // namespace jacring::schiffer
