#include <gtest/gtest.h>

#include <random>

#include "jacring/error.hpp"
#include "jacring/poly.hpp"
#include "jacring/poly_json.hpp"

using namespace jacring;
using namespace jacring::poly;

namespace {

HomPoly mono(const ContextPtr& ctx, std::vector<Exponent> e, Elem c = 1) { return HomPoly::monomial(ctx, e, c); }

}  // namespace

TEST(Monomials, Dimensions) {
  EXPECT_EQ(RingContext(2, 3).dim(2), 6u);
  EXPECT_EQ(RingContext(4, 3).dim(4), 70u);
  EXPECT_EQ(RingContext(0, 3).dim(5), 1u);
}

TEST(Monomials, OrderAndIndex) {
  auto ctx = RingContext::create(2, 3);
  const auto& t = ctx->monomials(2);
  ASSERT_EQ(t.size(), 6u);
  EXPECT_EQ(t.exponents(0)[0], 2);  // X0^2 first
  EXPECT_EQ(t.exponents(5)[2], 2);  // X2^2 last
  for (unsigned k = 0; k <= 6; ++k)
    for (std::size_t i = 0; i < ctx->dim(k); ++i) EXPECT_EQ(ctx->index_of(ctx->monomials(k).exponents(i)), i);
}

TEST(Monomials, ProductTableExhaustive) {
  for (std::size_t n : {1, 2, 3}) {
    auto ctx = RingContext::create(n, 3);
    for (unsigned a = 0; a <= 3; ++a)
      for (unsigned b = 0; a + b <= 6; ++b) {
        const auto table = ctx->product_table(a, b);
        for (std::size_t i = 0; i < ctx->dim(a); ++i)
          for (std::size_t j = 0; j < ctx->dim(b); ++j) {
            std::vector<Exponent> e(n + 1);
            for (std::size_t v = 0; v <= n; ++v)
              e[v] = ctx->monomials(a).exponents(i)[v] + ctx->monomials(b).exponents(j)[v];
            EXPECT_EQ(table[i * ctx->dim(b) + j], ctx->index_of(e));
          }
      }
  }
}

TEST(Multiply, Examples) {
  auto ctx = RingContext::create(2, 3);
  auto x0 = HomPoly::variable(ctx, 0), x1 = HomPoly::variable(ctx, 1);
  EXPECT_EQ(multiply(x0, x1), mono(ctx, {1, 1, 0}));
  EXPECT_EQ(power(x0 + x1, 2), mono(ctx, {2, 0, 0}) + mono(ctx, {1, 1, 0}, 2) + mono(ctx, {0, 2, 0}));
  auto other = RingContext::create(3, 3);
  EXPECT_THROW(multiply(x0, HomPoly::variable(other, 0)), Error);
}

TEST(Multiply, RingLaws) {
  auto ctx = RingContext::create(3, 4);
  std::mt19937_64 rng(1);
  for (int t = 0; t < 5; ++t) {
    auto a = random_form(ctx, 2, rng), b = random_form(ctx, 3, rng), c = random_form(ctx, 1, rng);
    EXPECT_EQ(multiply(multiply(a, b), c), multiply(a, multiply(b, c)));
    EXPECT_EQ(multiply(a, b), multiply(b, a));
    auto b2 = random_form(ctx, 3, rng);
    EXPECT_EQ(multiply(a, b + b2), multiply(a, b) + multiply(a, b2));
  }
}

TEST(Derivative, Examples) {
  auto ctx = RingContext::create(2, 3);
  EXPECT_EQ(partial_derivative(mono(ctx, {3, 0, 0}), 0), mono(ctx, {2, 0, 0}, 3));
  auto f = fermat(ctx, 5);
  for (std::size_t i = 0; i < 3; ++i) {
    std::vector<Exponent> e(3, 0);
    e[i] = 4;
    EXPECT_EQ(partial_derivative(f, i), mono(ctx, e, 5));
  }
  EXPECT_THROW(partial_derivative(HomPoly(ctx, 0, {1}), 0), Error);
}

TEST(Derivative, LeibnizAndEuler) {
  auto ctx = RingContext::create(3, 5);
  std::mt19937_64 rng(2);
  for (int t = 0; t < 5; ++t) {
    auto f = random_form(ctx, 2, rng), g = random_form(ctx, 3, rng);
    for (std::size_t i = 0; i < 4; ++i)
      EXPECT_EQ(partial_derivative(multiply(f, g), i),
                multiply(f, partial_derivative(g, i)) + multiply(g, partial_derivative(f, i)));
    auto h = random_form(ctx, 5, rng);
    HomPoly euler(ctx, 5);
    for (std::size_t i = 0; i < 4; ++i) euler = euler + multiply(HomPoly::variable(ctx, i), partial_derivative(h, i));
    EXPECT_EQ(euler, h.scaled(5));
  }
}

TEST(Substitution, ComposesAsMatrixProduct) {
  auto ctx = RingContext::create(2, 4);
  std::mt19937_64 rng(3);
  auto f = random_form(ctx, 4, rng);
  auto a = linalg::random_matrix(ctx->field(), 3, 3, rng), b = linalg::random_matrix(ctx->field(), 3, 3, rng);
  EXPECT_EQ(substitute(substitute(f, a), b), substitute(f, linalg::multiply(ctx->field(), a, b)));
  EXPECT_EQ(substitute(f, linalg::Matrix::identity(3)), f);
  auto x = HomPoly::linear_form(ctx, std::vector<Elem>{1, 2, 3});
  EXPECT_EQ(substitute(power(x, 4), a), power(substitute(x, a), 4));
}

TEST(Evaluate, MatchesHandComputation) {
  auto ctx = RingContext::create(2, 3);
  auto f = mono(ctx, {1, 1, 1}, 2) + mono(ctx, {3, 0, 0});
  EXPECT_EQ(evaluate(f, std::vector<Elem>{2, 3, 5}), 2u * 30 + 8);
}

TEST(Construct, Kinds) {
  auto ctx = RingContext::create(2, 3);
  EXPECT_EQ(construct(ctx, Fermat{}), mono(ctx, {3, 0, 0}) + mono(ctx, {0, 3, 0}) + mono(ctx, {0, 0, 3}));
  auto f = construct(ctx, RandomForm{9});
  EXPECT_EQ(f, construct(ctx, RandomForm{9}));
  EXPECT_EQ(construct(ctx, SchifferLine{f, HomPoly::variable(ctx, 0), 0}), f);
  EXPECT_EQ(construct(ctx, SchifferLine{f, HomPoly::variable(ctx, 0), 2}), f + mono(ctx, {3, 0, 0}, 2));
  EXPECT_THROW(construct(ctx, BilinearSum{{HomPoly::variable(ctx, 0)}, {HomPoly::variable(ctx, 1)}}), Error);
}

TEST(Construct, BilinearSumIsSingularOnCommonZeros) {
  auto ctx = RingContext::create(5, 7);
  const auto& fld = ctx->field();
  std::mt19937_64 rng(4);
  for (int t = 0; t < 5; ++t) {
    std::vector<Elem> pt(6);
    for (auto& v : pt) v = fld.random(rng);
    pt[0] = 1;
    auto parts = random_bilinear_parts(ctx, 1, rng);
    ASSERT_EQ(parts.f[0].degree(), 3u);
    ASSERT_EQ(parts.g[0].degree(), 4u);
    // Make both factors vanish at pt by correcting with a power of X0.
    parts.f[0] = parts.f[0] - mono(ctx, {3, 0, 0, 0, 0, 0}, evaluate(parts.f[0], pt));
    parts.g[0] = parts.g[0] - mono(ctx, {4, 0, 0, 0, 0, 0}, evaluate(parts.g[0], pt));
    auto f = construct(ctx, parts);
    EXPECT_EQ(f, multiply(parts.f[0], parts.g[0]));
    for (const auto& g : gradient(f)) EXPECT_EQ(evaluate(g, pt), 0u);
    // A generic point is not singular.
    std::vector<Elem> q(6);
    for (auto& v : q) v = fld.random(rng);
    bool some_nonzero = false;
    for (const auto& g : gradient(f)) some_nonzero |= evaluate(g, q) != 0;
    EXPECT_TRUE(some_nonzero);
  }
}

TEST(Json, RoundTrip) {
  auto ctx = RingContext::create(3, 4);
  std::mt19937_64 rng(5);
  for (int t = 0; t < 3; ++t) {
    auto f = random_form(ctx, 4, rng);
    const std::string text = dump(f);
    auto g = parse(text);
    EXPECT_EQ(g.coeffs().size(), f.coeffs().size());
    EXPECT_TRUE(std::equal(g.coeffs().begin(), g.coeffs().end(), f.coeffs().begin()));
    EXPECT_EQ(dump(g), text);
    EXPECT_EQ(from_json(to_json(f), ctx), f);
  }
}

TEST(Json, Rejects) {
  EXPECT_THROW(parse(R"({"n":1,"d":2,"p":7,"terms":[[[1,1],3],[[1,1],2]]})"), Error);
  EXPECT_THROW(parse(R"({"n":1,"d":2,"p":7,"terms":[[[2,1],3]]})"), Error);
  EXPECT_THROW(parse(R"({"n":1,"d":2,"p":7,"terms":[[[1,1],7]]})"), Error);
  EXPECT_THROW(parse(R"({"n":1,"d":2,"p":8,"terms":[]})"), Error);
  EXPECT_THROW(parse("not json"), Error);
  auto zero = parse(R"({"n":1,"d":2,"p":7,"terms":[]})");
  EXPECT_TRUE(zero.is_zero());
}
