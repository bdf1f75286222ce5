#pragma once

// Partial rings: finitely many graded pieces with some multiplication maps,
// either read off a Jacobian ring or handed over as abstract data.
//
// Hom(A, B) is flattened as h[i * dim B + j] = coefficient of b_j in h(a_i).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "jacring/jacobian.hpp"
#include "jacring/linalg.hpp"

namespace jacring::ivhs {

using linalg::BilinearMap;
using linalg::Elem;
using linalg::Matrix;
using linalg::PrimeField;
using linalg::Subspace;

struct Piece {
  int degree = 0;
  std::size_t dim = 0;
  // Standard monomials behind each coordinate, when known.
  std::vector<std::uint32_t> provenance;
};

struct Multiplication {
  std::size_t left = 0, right = 0, target = 0;  // piece indices
  BilinearMap map;
};

class PartialRing {
 public:
  PartialRing(const PrimeField& field, std::size_t n, unsigned d) : field_(field), n_(n), d_(d) {}

  const PrimeField& field() const noexcept { return field_; }
  std::size_t n() const noexcept { return n_; }
  unsigned d() const noexcept { return d_; }

  std::size_t add_piece(Piece piece);
  std::size_t add_multiplication(std::size_t left, std::size_t right, std::size_t target, BilinearMap map);

  const std::vector<Piece>& pieces() const noexcept { return pieces_; }
  const std::vector<Multiplication>& multiplications() const noexcept { return mults_; }
  std::vector<Multiplication>& multiplications_mut() noexcept { return mults_; }
  std::vector<Piece>& pieces_mut() noexcept { return pieces_; }

  std::optional<std::size_t> piece_of_degree(int degree) const;
  std::vector<int> degrees() const;

  bool operator==(const PartialRing& o) const;

 private:
  PrimeField field_;
  std::size_t n_;
  unsigned d_;
  std::vector<Piece> pieces_;
  std::vector<Multiplication> mults_;
};

enum class Shape { Ivhs, DegreeTriple };

// {d} together with every i d - (n+1) in [0, N].
std::vector<int> ivhs_degrees(std::size_t n, unsigned d);
PartialRing extract_partial_ring(const jacobian::JacobianRing& jr, Shape shape);

struct ScrambleWitness {
  std::vector<Matrix> transforms;  // one invertible matrix per piece
};

ScrambleWitness identity_witness(const PartialRing& pr);
ScrambleWitness inverse(const PrimeField& f, const ScrambleWitness& w);
// mu'(x, y) = g_c mu(g_a^{-1} x, g_b^{-1} y)
PartialRing apply_scramble(const PartialRing& pr, const ScrambleWitness& w);
std::pair<PartialRing, ScrambleWitness> scramble(const PartialRing& pr, std::uint64_t seed);

// mu'(x, y) = g_c mu(p_a x, p_b y).
BilinearMap transform(const PrimeField& f, const BilinearMap& mu, const Matrix& p_a, const Matrix& p_b,
                      const Matrix& g_c);

struct SymmetrizerStats {
  std::size_t unknowns = 0;
  std::size_t total_constraints = 0;
  std::size_t constraints_used = 0;
  std::size_t batches = 0;
  bool early_exit = false;
};

// {h in Hom(A, B) : mu(b, h(a)) = mu(a, h(b))} for mu : A x B -> C.
Subspace symmetrizer(const PrimeField& f, const BilinearMap& mu, SymmetrizerStats* stats = nullptr);
bool symmetrizer_holds(const PrimeField& f, const BilinearMap& mu, std::span<const Elem> h);

// Max(k, N - k') >= d - 1 and N - k - k' > 0.
bool symmetrizer_hypotheses(std::size_t n, unsigned d, unsigned k, unsigned kprime);
// Image of R^{k'-k} in Hom(R^k, R^{k'}) by multiplication.
Subspace multiplication_embedding(const jacobian::JacobianRing& jr, unsigned k, unsigned kprime);
// g_b o h o g_a^{-1} applied to every element of a subspace of Hom(A, B).
Subspace conjugate(const PrimeField& f, const Subspace& homs, const Matrix& g_a, const Matrix& g_b);
// Hom element of a dim_b x dim_a matrix (column i = image of a_i) and back.
std::vector<Elem> flatten(const Matrix& m);
Matrix unflatten(std::span<const Elem> h, std::size_t dim_a, std::size_t dim_b);

// Morphisms h : R^{d-1} -> R^d / x R^{d-1} with sum A_i h(B_i) = 0 in
// R^{2d} / x R^{2d-1} for every relation sum A_i B_i = 0 in R^{2d-1}.
// Quotient coordinates are the complement columns of x R^{d-1}.
struct MorphismSpace {
  Subspace homs;
  std::size_t source_dim = 0;    // dim R^{d-1}
  std::size_t quotient_dim = 0;  // dim R^d / x R^{d-1}
  std::size_t target_quotient_dim = 0;  // dim R^{2d} / x R^{2d-1}
  std::size_t relations = 0;
};
MorphismSpace module_morphisms(const jacobian::JacobianRing& jr, const poly::HomPoly& x);
// The morphism b -> [y b] induced by multiplication with a linear form y.
std::vector<Elem> multiplication_morphism(const jacobian::JacobianRing& jr, const poly::HomPoly& x,
                                          const poly::HomPoly& y);

}  // namespace jacring::ivhs
