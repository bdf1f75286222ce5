#pragma once

// Reconstruction of J_f^d from partial-ring data by repeated symmetrizer
// steps, and the linear tools that turn J_f^d back into f.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "jacring/ivhs.hpp"
#include "jacring/jacobian.hpp"
#include "jacring/linalg.hpp"
#include "jacring/poly.hpp"

namespace jacring::torelli {

using linalg::BilinearMap;
using linalg::Matrix;
using linalg::Subspace;

// Pieces and products are tracked by id. The first ids are the input pieces
// in partial-ring order; derived pieces follow in the order they appear.
struct PlanPiece {
  int degree = 0;
  std::size_t dim = 0;
  bool derived = false;
  // For derived pieces: the piece lives in Hom(domain, codomain).
  std::size_t domain = 0, codomain = 0;
};

struct PlanProduct {
  std::size_t left = 0, right = 0, target = 0;
};

enum class StepKind { Symmetrize, Cohere, Chain };

struct PlanStep {
  StepKind kind = StepKind::Symmetrize;
  // Symmetrize: product used, pieces of degree k and k', the piece created.
  std::size_t product = 0;
  std::size_t low = 0, high = 0, result = 0;
  std::size_t hom_dim = 0;
  // Cohere: the two degree-1 pieces; result is the product V1 x V1 -> R^2.
  // Chain: products fired in order, ending at the degree-d input piece.
  std::vector<std::size_t> chain;

  std::string label(const std::vector<PlanPiece>& pieces) const;
};

struct DerivationPlan {
  std::size_t n = 0;
  unsigned d = 0;
  std::vector<PlanPiece> pieces;
  std::vector<PlanProduct> products;
  std::vector<PlanStep> steps;
  std::size_t v1 = 0, v1_copy = 0, top = 0;

  std::vector<std::string> labels() const;
};

// Greedy search: among admissible symmetrizer steps take the one with the
// smallest Hom space. Piece dims come from generic_hilbert.
DerivationPlan plan_derivation(std::size_t n, unsigned d, ivhs::Shape shape = ivhs::Shape::Ivhs);

struct RecoveredPiece {
  Subspace homs;  // derived pieces only; empty for inputs
};

struct RecoveredStructure {
  DerivationPlan plan;
  std::vector<RecoveredPiece> pieces;
  std::vector<BilinearMap> products;  // parallel to plan.products
  Matrix coherence;                   // V1 -> V1 copy, dim x dim
  poly::ContextPtr sym_ctx;           // monomials in the V1 basis
  // E_d: dim piece_d x dim Sym^d(V1).
  Matrix top_map;
  Subspace kernel_Jd;
  std::size_t v1_dim() const { return plan.pieces[plan.v1].dim; }
};

RecoveredStructure reconstruct_ring(const ivhs::PartialRing& pr, const DerivationPlan& plan);

// Frames send S^k onto the coordinates of a piece. For the input pieces of a
// partial ring read off jr and scrambled by w this is w_k * NF_k^T.
std::vector<Matrix> input_frames(const jacobian::JacobianRing& jr, const ivhs::PartialRing& pr,
                                 const ivhs::ScrambleWitness* w = nullptr);
// kernel_Jd written in S^d through the frame induced on V1; none when the
// derived pieces are not the images the frames predict.
std::optional<Subspace> kernel_in_frame(const poly::ContextPtr& ctx, const RecoveredStructure& rs,
                                        const std::vector<Matrix>& frames);

// Matrix of R_f^k -> R_g^k, [v] -> [v(AX)], for g = f(AX).
Matrix induced_map(const jacobian::JacobianRing& jf, const jacobian::JacobianRing& jg, const Matrix& a, unsigned k);
// Witness taking the partial ring of f to the one of f(AX).
ivhs::ScrambleWitness gl_witness(const jacobian::JacobianRing& jf, const jacobian::JacobianRing& jg,
                                 const ivhs::PartialRing& pr, const Matrix& a);

// {g in S^{d-1} : X_i g in jd for all i}
Subspace colon_down(const poly::ContextPtr& ctx, const Subspace& jd, unsigned d);
// {h in S^d : dh/dX_i in w for all i}
Subspace integrate_gradient(const poly::ContextPtr& ctx, const Subspace& w, unsigned d);
// dim of J_f^{d-1} + J_g^{d-1}.
std::size_t jacobian_closeness(const poly::HomPoly& f, const poly::HomPoly& g);
// Span of the partials of f inside S^{d-1}.
Subspace gradient_span(const poly::HomPoly& f);

}  // namespace jacring::torelli
