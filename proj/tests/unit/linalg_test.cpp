#include <gtest/gtest.h>

#include <random>

#include "jacring/error.hpp"
#include "jacring/jacobian.hpp"
#include "jacring/linalg.hpp"
#include "jacring/rational.hpp"
#include "oracles.hpp"

using namespace jacring;
using namespace jacring::linalg;

namespace {

const PrimeField F;

Subspace random_subspace(std::size_t ambient, std::size_t dim, std::mt19937_64& rng) {
  return Subspace::span(F, random_matrix(F, dim, ambient, rng));
}

// Random matrix of rank at most r.
Matrix low_rank(std::size_t rows, std::size_t cols, std::size_t r, std::mt19937_64& rng) {
  return multiply(F, random_matrix(F, rows, r, rng), random_matrix(F, r, cols, rng));
}

}  // namespace

TEST(Field, Arithmetic) {
  EXPECT_EQ(F.modulus(), 32003u);
  EXPECT_EQ(F.add(32002, 5), 4u);
  EXPECT_EQ(F.sub(3, 5), 32001u);
  EXPECT_EQ(F.mul(F.inv(12345), 12345), 1u);
  EXPECT_EQ(F.pow(7, 32002), 1u);
  EXPECT_EQ(F.from_int(-1), 32002u);
  EXPECT_THROW(PrimeField(32001), Error);
  EXPECT_THROW(F.inv(0), Error);
}

TEST(Rref, IdentityAndZero) {
  auto id = rref_rank(F, Matrix::identity(3));
  EXPECT_EQ(id.rank, 3u);
  EXPECT_EQ(id.pivots, (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(rref_rank(F, Matrix(2, 5)).rank, 0u);
}

TEST(Rref, RandomAgreesWithFractionFree) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    Matrix m = random_matrix(F, 50, 50, rng);
    EXPECT_EQ(rank(F, m), oracle::fraction_free_rank(m, F.modulus()));
    Matrix lr = low_rank(50, 50, 17 + trial, rng);
    EXPECT_EQ(rank(F, lr), oracle::fraction_free_rank(lr, F.modulus()));
    EXPECT_EQ(rank(F, lr), 17u + trial);
  }
}

TEST(Rref, ReducedFormShape) {
  std::mt19937_64 rng(3);
  Matrix m = low_rank(8, 12, 5, rng);
  auto r = rref_rank(F, m);
  ASSERT_EQ(r.rank, 5u);
  for (std::size_t i = 0; i < r.rank; ++i) {
    EXPECT_EQ(r.reduced(i, r.pivots[i]), 1u);
    for (std::size_t j = 0; j < r.rank; ++j)
      if (j != i) EXPECT_EQ(r.reduced(j, r.pivots[i]), 0u);
    if (i) EXPECT_LT(r.pivots[i - 1], r.pivots[i]);
  }
  for (std::size_t i = r.rank; i < 8; ++i)
    for (std::size_t c = 0; c < 12; ++c) EXPECT_EQ(r.reduced(i, c), 0u);
  EXPECT_EQ(rref_rank(F, m).reduced, r.reduced);
}

TEST(Rref, RankOfTranspose) {
  std::mt19937_64 rng(5);
  for (std::size_t r : {0, 3, 9}) {
    Matrix m = low_rank(13, 21, r, rng);
    EXPECT_EQ(rank(F, m), rank(F, transpose(m)));
  }
}

TEST(Kernel, Examples) {
  EXPECT_EQ(kernel(F, Matrix::identity(4)).dim(), 0u);
  EXPECT_EQ(kernel(F, Matrix(3, 4)).dim(), 4u);
  std::mt19937_64 rng(7);
  Matrix m = low_rank(30, 40, 22, rng);
  Subspace k = kernel(F, m);
  EXPECT_EQ(k.dim(), 40u - rank(F, m));
  for (std::size_t i = 0; i < k.dim(); ++i) {
    auto img = apply(F, m, k.basis().row(i));
    EXPECT_TRUE(std::all_of(img.begin(), img.end(), [](Elem e) { return e == 0; }));
  }
}

TEST(Inverse, RoundTrip) {
  std::mt19937_64 rng(13);
  Matrix a = random_invertible(F, 9, rng);
  EXPECT_EQ(multiply(F, a, inverse(F, a)), Matrix::identity(9));
  EXPECT_THROW(inverse(F, Matrix(3, 3)), Error);
}

TEST(Subspace, QuotientMapAndCoordinates) {
  std::mt19937_64 rng(17);
  Subspace s = random_subspace(10, 4, rng);
  Matrix q = s.quotient_map();
  EXPECT_EQ(q.rows(), 6u);
  EXPECT_EQ(kernel(F, q), s);
  EXPECT_EQ(s.complement_columns().size(), 6u);
  std::vector<Elem> c{3, 1, 4, 1};
  std::vector<Elem> v(10, 0);
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t j = 0; j < 10; ++j) v[j] = F.add(v[j], F.mul(c[r], s.basis()(r, j)));
  EXPECT_TRUE(s.contains(v));
  EXPECT_EQ(s.coordinates(v), c);
}

TEST(Intersect, Examples) {
  std::mt19937_64 rng(19);
  Subspace u = random_subspace(12, 7, rng);
  EXPECT_EQ(intersect(u, u), u);
  Matrix e1(0, 6), e2(0, 6);
  for (std::size_t i = 0; i < 6; ++i) {
    std::vector<Elem> v(6, 0);
    v[i] = 1;
    (i < 3 ? e1 : e2).append_row(v);
  }
  EXPECT_EQ(intersect(Subspace::span(F, e1), Subspace::span(F, e2)).dim(), 0u);
  EXPECT_THROW(intersect(u, Subspace(F, 5)), Error);
}

TEST(Intersect, MatchesStackAndSolve) {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 10; ++t) {
    std::size_t amb = 15, du = 3 + t % 9, dv = 4 + (t * 5) % 10;
    Subspace u = random_subspace(amb, du, rng), v = random_subspace(amb, dv, rng);
    // Force a shared piece so the intersection is not always the generic one.
    Subspace shared = random_subspace(amb, 2, rng);
    u = sum(u, shared);
    v = sum(v, shared);
    Subspace w = intersect(u, v);
    EXPECT_EQ(w, oracle::stack_and_solve(u, v));
    EXPECT_EQ(u.dim() + v.dim() - sum(u, v).dim(), w.dim());
    EXPECT_EQ(w, intersect(v, u));
  }
}

TEST(Intersect, AssociativeAndMonotone) {
  std::mt19937_64 rng(29);
  Subspace a = random_subspace(10, 8, rng), b = random_subspace(10, 7, rng), c = random_subspace(10, 6, rng);
  EXPECT_EQ(intersect(intersect(a, b), c), intersect(a, intersect(b, c)));
  Subspace big = sum(a, random_subspace(10, 1, rng));
  EXPECT_TRUE(intersect(big, b).contains(intersect(a, b)));
}

TEST(Transporter, Examples) {
  std::mt19937_64 rng(31);
  std::vector<Matrix> acts{random_matrix(F, 8, 5, rng), random_matrix(F, 8, 5, rng)};
  EXPECT_EQ(transporter(Subspace::full(F, 8), acts, 5), Subspace::full(F, 5));
  EXPECT_EQ(transporter(Subspace(F, 8), acts, 5).dim(), 0u);
  EXPECT_EQ(transporter(Subspace(F, 8), std::vector<Matrix>{}, 5), Subspace::full(F, 5));
  EXPECT_THROW(transporter(Subspace(F, 7), acts, 5), Error);
}

TEST(Transporter, IdempotentAndMonotone) {
  std::mt19937_64 rng(37);
  Subspace t = random_subspace(9, 6, rng);
  Matrix a = random_matrix(F, 9, 6, rng), b = random_matrix(F, 9, 6, rng);
  std::vector<Matrix> once{a, b}, twice{a, b, a, b};
  Subspace r = transporter(t, once, 6);
  EXPECT_EQ(r, transporter(t, twice, 6));
  for (std::size_t i = 0; i < r.dim(); ++i)
    for (const auto& m : once) EXPECT_TRUE(t.contains(apply(F, m, r.basis().row(i))));
  Subspace bigger = sum(t, random_subspace(9, 1, rng));
  EXPECT_TRUE(transporter(bigger, once, 6).contains(r));
}

TEST(Transporter, ColonOfJacobianPiece) {
  auto ctx = poly::RingContext::create(3, 4);
  std::mt19937_64 rng(41);
  auto f = poly::random_form(ctx, 4, rng);
  jacobian::JacobianRing jr(f);
  std::vector<Matrix> acts;
  for (std::size_t i = 0; i < 4; ++i) acts.push_back(poly::multiplication_matrix(poly::HomPoly::variable(ctx, i), 3));
  Subspace colon = transporter(jr.ideal_piece(4), acts, ctx->dim(3));
  EXPECT_EQ(colon, oracle::jacobian_generators(f, 3));
  EXPECT_EQ(colon.dim(), 4u);
}

TEST(EchelonBuilder, MatchesRref) {
  std::mt19937_64 rng(43);
  Matrix m = low_rank(40, 25, 14, rng);
  EchelonBuilder eb(F, 25);
  for (std::size_t start = 0; start < 40; start += 7) {
    Matrix batch(0, 25);
    for (std::size_t r = start; r < std::min<std::size_t>(40, start + 7); ++r) batch.append_row(m.row(r));
    eb.add_rows(batch);
  }
  EXPECT_EQ(eb.rank(), 14u);
  EXPECT_EQ(eb.row_space(), Subspace::span(F, m));
  EXPECT_EQ(eb.null_space(), kernel(F, m));
  EXPECT_TRUE(eb.in_span(m.row(3)));
}

TEST(BilinearMap, ApplyAndSwap) {
  std::mt19937_64 rng(47);
  BilinearMap mu(3, 4, 2);
  for (auto& v : mu.data()) v = F.random(rng);
  std::vector<Elem> u{1, 2, 3}, w{0, 5, 0, 7};
  auto direct = mu.apply(F, u, w);
  EXPECT_EQ(mu.swapped().apply(F, w, u), direct);
  EXPECT_EQ(apply(F, mu.left_action(F, u), w), direct);
  EXPECT_EQ(mu.swapped().swapped(), mu);
}

TEST(Rational, AgreesWithModularRank) {
  std::mt19937_64 rng(53);
  std::uniform_int_distribution<int> small(-3, 3);
  rational::RationalMatrix q(12, std::vector<rational::Rational>(15));
  for (auto& row : q)
    for (auto& e : row) e = small(rng);
  for (std::size_t c = 0; c < 15; ++c) q[11][c] = q[0][c] + 2 * q[1][c];
  const auto mod = rational::reduce_mod(q, F);
  ASSERT_TRUE(mod.has_value());
  EXPECT_EQ(rational::rank(q), rank(F, *mod));
  EXPECT_EQ(rational::rank(q), 11u);
  rational::RationalMatrix big(201, std::vector<rational::Rational>(1));
  EXPECT_THROW(rational::rank(big), Error);
}
