#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "jacring/error.hpp"
#include "jacring/torelli.hpp"
#include "oracles.hpp"

using namespace jacring;
using namespace jacring::torelli;
using jacobian::JacobianRing;
using poly::HomPoly;

namespace {

HomPoly random_f(std::size_t n, unsigned d, std::uint64_t seed) {
  auto ctx = poly::RingContext::create(n, d);
  std::mt19937_64 rng(seed);
  return poly::random_form(ctx, d, rng);
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::InvalidArgument;
}

struct Recovered {
  std::optional<Subspace> kernel;
  std::size_t dim = 0;
};

Recovered recover(const JacobianRing& jr, const ivhs::PartialRing& pr, const ivhs::ScrambleWitness* w = nullptr) {
  const auto plan = plan_derivation(jr.n(), jr.d());
  const auto rs = reconstruct_ring(pr, plan);
  return {kernel_in_frame(jr.context_ptr(), rs, input_frames(jr, pr, w)), rs.kernel_Jd.dim()};
}

}  // namespace

TEST(Plan, DeskCases) {
  EXPECT_EQ(plan_derivation(2, 5).labels(),
            (std::vector<std::string>{"sym(2,5)->3", "sym(2,3)->1", "sym(1,2)->1'", "cohere", "chain->5"}));
  EXPECT_EQ(plan_derivation(4, 4).labels(),
            (std::vector<std::string>{"sym(3,4)->1", "sym(1,3)->2", "sym(1,2)->1'", "cohere", "chain->4"}));
  const auto plan = plan_derivation(4, 4);
  EXPECT_EQ(plan.pieces[plan.v1].degree, 1);
  EXPECT_EQ(plan.pieces[plan.v1_copy].degree, 1);
  EXPECT_EQ(plan.pieces[plan.v1].dim, 5u);
  EXPECT_EQ(plan.pieces[plan.top].degree, 4);
  for (const auto& s : plan.steps)
    if (s.kind == StepKind::Symmetrize) EXPECT_EQ(plan.pieces[s.result].dim, jacobian::generic_hilbert(4, 4, plan.pieces[s.result].degree));
}

TEST(Plan, NotFound) {
  struct T {
    std::size_t n;
    unsigned d;
  };
  for (T t : {T{4, 5}, T{3, 4}, T{2, 3}, T{2, 4}, T{3, 3}})
    EXPECT_EQ(code_of([&] { plan_derivation(t.n, t.d); }), ErrorCode::PlanNotFound) << t.d << "," << t.n;
  EXPECT_EQ(code_of([] { plan_derivation(2, 5, ivhs::Shape::DegreeTriple); }), ErrorCode::PlanNotFound);
  EXPECT_EQ(code_of([] { plan_derivation(2, 2); }), ErrorCode::InvalidArgument);
}

TEST(Reconstruct, RecoversJacobianPiece) {
  struct T {
    std::size_t n;
    unsigned d;
  };
  for (T t : {T{2, 5}, T{4, 4}}) {
    JacobianRing jr(random_f(t.n, t.d, 21));
    const auto pr = ivhs::extract_partial_ring(jr, ivhs::Shape::Ivhs);
    const auto got = recover(jr, pr);
    EXPECT_EQ(got.dim, (t.n + 1) * (t.n + 1));
    ASSERT_TRUE(got.kernel.has_value());
    EXPECT_EQ(*got.kernel, jr.ideal_piece(t.d));
    EXPECT_EQ(*got.kernel, oracle::jacobian_generators(jr.polynomial(), t.d));
  }
}

TEST(Reconstruct, SeveralSeedsAndFermat) {
  for (std::uint64_t seed : {22, 23, 24}) {
    JacobianRing jr(random_f(2, 5, seed));
    const auto got = recover(jr, ivhs::extract_partial_ring(jr, ivhs::Shape::Ivhs));
    ASSERT_TRUE(got.kernel.has_value());
    EXPECT_EQ(*got.kernel, jr.ideal_piece(5));
  }
  JacobianRing fermat(poly::fermat(poly::RingContext::create(2, 5)));
  const auto got = recover(fermat, ivhs::extract_partial_ring(fermat, ivhs::Shape::Ivhs));
  ASSERT_TRUE(got.kernel.has_value());
  EXPECT_EQ(*got.kernel, fermat.ideal_piece(5));
}

TEST(Reconstruct, FullScramble) {
  JacobianRing jr(random_f(2, 5, 25));
  const auto pr = ivhs::extract_partial_ring(jr, ivhs::Shape::Ivhs);
  const auto [spr, w] = ivhs::scramble(pr, 26);
  const auto plan = plan_derivation(2, 5);
  const auto a = reconstruct_ring(pr, plan), b = reconstruct_ring(spr, plan);
  EXPECT_EQ(a.kernel_Jd.dim(), b.kernel_Jd.dim());
  const auto k = kernel_in_frame(jr.context_ptr(), b, input_frames(jr, pr, &w));
  ASSERT_TRUE(k.has_value());
  EXPECT_EQ(*k, jr.ideal_piece(5));
}

TEST(Reconstruct, CoordinateChange) {
  const auto f = random_f(2, 5, 27);
  JacobianRing jf(f);
  std::mt19937_64 rng(28);
  const auto a = linalg::random_invertible(jf.field(), 3, rng);
  const auto g = poly::substitute(f, a);
  JacobianRing jg(g);
  const auto pr = ivhs::extract_partial_ring(jf, ivhs::Shape::Ivhs);
  const auto gpr = ivhs::apply_scramble(pr, gl_witness(jf, jg, pr, a));
  EXPECT_EQ(gpr, ivhs::extract_partial_ring(jg, ivhs::Shape::Ivhs));
  const auto got = recover(jg, gpr);
  ASSERT_TRUE(got.kernel.has_value());
  EXPECT_EQ(*got.kernel, jg.ideal_piece(5));
  // J_{f(AX)}^d is J_f^d pulled back along A.
  const auto sub = poly::substitution_matrix(jf.context(), a, 5);
  EXPECT_EQ(*got.kernel, linalg::image(sub, jf.ideal_piece(5)));
}

TEST(Reconstruct, InducedMapIsRingIsomorphism) {
  const auto f = random_f(3, 4, 29);
  JacobianRing jf(f);
  std::mt19937_64 rng(30);
  const auto a = linalg::random_invertible(jf.field(), 4, rng);
  JacobianRing jg(poly::substitute(f, a));
  const auto& fld = jf.field();
  for (unsigned k : {1u, 3u}) {
    const auto m = induced_map(jf, jg, a, k), m2 = induced_map(jf, jg, a, 2), mk2 = induced_map(jf, jg, a, k + 2);
    EXPECT_TRUE(linalg::is_invertible(fld, m));
    jacobian::RElem u{k, std::vector<linalg::Elem>(jf.quotient_dim(k))}, v{2, std::vector<linalg::Elem>(jf.quotient_dim(2))};
    for (auto& c : u.coords) c = fld.random(rng);
    for (auto& c : v.coords) c = fld.random(rng);
    const auto lhs = linalg::apply(fld, mk2, jf.multiply(u, v).coords);
    const auto rhs = jg.multiply({k, linalg::apply(fld, m, u.coords)}, {2, linalg::apply(fld, m2, v.coords)});
    EXPECT_EQ(lhs, rhs.coords);
  }
}

TEST(Reconstruct, TamperedDataIsRejected) {
  JacobianRing jr(random_f(2, 5, 31));
  auto pr = ivhs::extract_partial_ring(jr, ivhs::Shape::Ivhs);
  std::mt19937_64 rng(32);
  for (auto& m : pr.multiplications_mut())
    for (auto& v : m.map.data()) v = jr.field().random(rng);
  const auto code = code_of([&] { reconstruct_ring(pr, plan_derivation(2, 5)); });
  EXPECT_TRUE(code == ErrorCode::StepHypothesisFailed || code == ErrorCode::CoherenceFailed) << to_string(code);
  EXPECT_EQ(code_of([&] { reconstruct_ring(pr, plan_derivation(4, 4)); }), ErrorCode::InvalidArgument);
}

TEST(Colon, Examples) {
  const auto f = random_f(3, 4, 33);
  JacobianRing jr(f);
  const auto& ctx = f.context_ptr();
  const auto c = colon_down(ctx, jr.ideal_piece(4), 4);
  EXPECT_EQ(c.dim(), 4u);
  EXPECT_EQ(c, gradient_span(f));

  auto c5 = poly::RingContext::create(2, 5);
  JacobianRing fermat(poly::fermat(c5));
  const auto cf = colon_down(c5, fermat.ideal_piece(5), 5);
  EXPECT_EQ(cf.dim(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    std::vector<poly::Exponent> e(3, 0);
    e[i] = 4;
    EXPECT_TRUE(cf.contains(HomPoly::monomial(c5, e).coeffs()));
  }
  EXPECT_EQ(colon_down(ctx, Subspace(jr.field(), ctx->dim(4)), 4).dim(), 0u);
  EXPECT_EQ(colon_down(ctx, Subspace::full(jr.field(), ctx->dim(4)), 4).dim(), ctx->dim(3));
  EXPECT_EQ(code_of([&] { colon_down(ctx, jr.ideal_piece(3), 4); }), ErrorCode::DimensionMismatch);
}

TEST(IntegrateGradient, Examples) {
  const auto f = random_f(2, 5, 34);
  const auto& ctx = f.context_ptr();
  const auto ig = integrate_gradient(ctx, gradient_span(f), 5);
  EXPECT_EQ(ig.dim(), 1u);
  EXPECT_TRUE(ig.contains(f.coeffs()));

  // Fermat: the partials X_i^4 integrate to every X_i^5.
  const auto fermat = poly::fermat(ctx);
  EXPECT_EQ(integrate_gradient(ctx, gradient_span(fermat), 5).dim(), 3u);

  // A generic 3-dimensional subspace of S^4 is no gradient space.
  std::mt19937_64 rng(35);
  const auto w = Subspace::span(f.field(), linalg::random_matrix(f.field(), 3, ctx->dim(4), rng));
  EXPECT_EQ(integrate_gradient(ctx, w, 5).dim(), 0u);
  EXPECT_EQ(integrate_gradient(ctx, Subspace::full(f.field(), ctx->dim(4)), 5).dim(), ctx->dim(5));
}

TEST(Closeness, Examples) {
  const auto f = random_f(2, 5, 36);
  const auto& ctx = f.context_ptr();
  EXPECT_EQ(jacobian_closeness(f, f), 3u);
  EXPECT_EQ(jacobian_closeness(f, f.scaled(7)), 3u);
  std::mt19937_64 rng(37);
  const auto x = oracle::random_linear(ctx, rng);
  EXPECT_EQ(jacobian_closeness(f, f + poly::power(x, 5).scaled(3)), 4u);
  const auto g = random_f(4, 4, 38), h = random_f(4, 4, 39);
  EXPECT_EQ(jacobian_closeness(g, h), 10u);
  EXPECT_EQ(code_of([&] { jacobian_closeness(f, poly::power(x, 4)); }), ErrorCode::DegreeMismatch);
}

TEST(Closeness, ScalarMultipleHasSameJacobianIdeal) {
  const auto f = random_f(2, 5, 40);
  JacobianRing a(f), b(f.scaled(11));
  EXPECT_EQ(a.ideal_piece(5), b.ideal_piece(5));
  EXPECT_EQ(integrate_gradient(f.context_ptr(), colon_down(f.context_ptr(), b.ideal_piece(5), 5), 5),
            Subspace::span(f.field(), linalg::Matrix(1, f.coeffs().size(), {f.coeffs().begin(), f.coeffs().end()})));
}
