#include <gtest/gtest.h>

#include <random>

#include "jacring/error.hpp"
#include "jacring/jacobian.hpp"
#include "oracles.hpp"

using namespace jacring;
using namespace jacring::jacobian;
using poly::HomPoly;

namespace {

struct Case {
  unsigned d;
  std::size_t n;
};
const std::vector<Case> kCases{{3, 2}, {4, 2}, {4, 3}, {5, 2}, {4, 4}};

HomPoly random_f(std::size_t n, unsigned d, std::uint64_t seed) {
  auto ctx = poly::RingContext::create(n, d);
  std::mt19937_64 rng(seed);
  return poly::random_form(ctx, d, rng);
}

RElem random_elem(const JacobianRing& jr, unsigned k, std::mt19937_64& rng) {
  RElem e{k, std::vector<Elem>(jr.quotient_dim(k))};
  for (auto& c : e.coords) c = jr.field().random(rng);
  return e;
}

}  // namespace

TEST(IdealPiece, FermatCubic) {
  auto ctx = poly::RingContext::create(2, 3);
  JacobianRing jr(poly::fermat(ctx));
  auto j2 = jr.ideal_piece(2);
  EXPECT_EQ(j2.dim(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    std::vector<poly::Exponent> e(3, 0);
    e[i] = 2;
    EXPECT_TRUE(j2.contains(HomPoly::monomial(ctx, e).coeffs()));
  }
  EXPECT_EQ(jr.ideal_piece(3).dim(), 9u);
  EXPECT_EQ(jr.ideal_piece(3), oracle::jacobian_generators(jr.polynomial(), 3));
  EXPECT_EQ(jr.ideal_piece(1).dim(), 0u);
}

TEST(IdealPiece, MatchesGeneratorSpan) {
  for (auto c : kCases) {
    JacobianRing jr(random_f(c.n, c.d, 3));
    for (unsigned k = 0; k <= jr.socle_degree() + 1; ++k)
      EXPECT_EQ(jr.ideal_piece(k), oracle::jacobian_generators(jr.polynomial(), k)) << c.d << "," << c.n << " k=" << k;
  }
}

TEST(IdealPiece, DegreeDHasFullRank) {
  for (auto c : kCases) {
    JacobianRing jr(random_f(c.n, c.d, 4));
    EXPECT_EQ(jr.ideal_piece(c.d).dim(), (c.n + 1) * (c.n + 1));
  }
}

TEST(Reduce, FermatCubic) {
  auto ctx = poly::RingContext::create(2, 3);
  JacobianRing jr(poly::fermat(ctx));
  EXPECT_TRUE(jr.reduce(HomPoly::monomial(ctx, std::vector<poly::Exponent>{2, 0, 0})).is_zero());
  auto top = jr.reduce(HomPoly::monomial(ctx, std::vector<poly::Exponent>{1, 1, 1}));
  EXPECT_FALSE(top.is_zero());
  EXPECT_EQ(jr.quotient_dim(3), 1u);
  auto x0 = jr.reduce(HomPoly::variable(ctx, 0)), x1 = jr.reduce(HomPoly::variable(ctx, 1));
  EXPECT_TRUE(jr.multiply(x0, x0).is_zero());
  EXPECT_EQ(jr.multiply(x0, x1), jr.reduce(HomPoly::monomial(ctx, std::vector<poly::Exponent>{1, 1, 0})));
  EXPECT_FALSE(jr.multiply(x0, x1).is_zero());
}

TEST(Reduce, KernelIsIdealAndBasisIsIdentity) {
  JacobianRing jr(random_f(3, 4, 5));
  for (unsigned k : {3u, 4u, 6u}) {
    auto j = jr.ideal_piece(k);
    for (std::size_t r = 0; r < j.dim(); ++r) EXPECT_TRUE(jr.reduce(k, j.basis().row(r)).is_zero());
    for (std::size_t pos = 0; pos < jr.quotient_dim(k); ++pos)
      EXPECT_EQ(jr.reduce(jr.lift(jr.basis_element(k, pos))), jr.basis_element(k, pos));
  }
}

TEST(Reduce, EulerRelation) {
  auto f = random_f(2, 5, 6);
  JacobianRing jr(f);
  HomPoly euler(f.context_ptr(), 5);
  for (std::size_t i = 0; i < 3; ++i)
    euler = euler + poly::multiply(HomPoly::variable(f.context_ptr(), i), jr.partials()[i]);
  EXPECT_EQ(jr.reduce(euler), jr.reduce(f.scaled(5)));
  EXPECT_TRUE(jr.reduce(f).is_zero());
}

TEST(Multiply, LiftIndependent) {
  auto f = random_f(3, 4, 7);
  JacobianRing jr(f);
  std::mt19937_64 rng(8);
  for (int t = 0; t < 5; ++t) {
    auto a = random_elem(jr, 2, rng), b = random_elem(jr, 3, rng);
    auto la = jr.lift(a), lb = jr.lift(b);
    // Second lifts: add random members of the ideal.
    auto j2 = jr.ideal_piece(3);
    HomPoly lb2 = lb;
    for (std::size_t r = 0; r < j2.dim(); ++r) {
      const Elem s = jr.field().random(rng);
      for (std::size_t u = 0; u < lb2.coeffs().size(); ++u)
        lb2.coeffs_mut()[u] = jr.field().add(lb2.coeffs()[u], jr.field().mul(s, j2.basis()(r, u)));
    }
    EXPECT_EQ(jr.multiply(a, b), jr.reduce(poly::multiply(la, lb)));
    EXPECT_EQ(jr.multiply(a, b), jr.reduce(poly::multiply(la, lb2)));
    auto c = random_elem(jr, 1, rng);
    EXPECT_EQ(jr.multiply(jr.multiply(a, b), c), jr.multiply(a, jr.multiply(b, c)));
    EXPECT_EQ(jr.multiply(a, b), jr.multiply(b, a));
  }
}

TEST(Multiply, CapIsEnforced) {
  auto f = random_f(2, 3, 9);
  JacobianRing jr(f, 5);
  EXPECT_THROW(jr.multiply(jr.zero(3), jr.zero(3)), Error);
  EXPECT_NO_THROW(jr.multiply(jr.zero(2), jr.zero(3)));
}

TEST(Hilbert, GenericFormula) {
  const std::vector<std::uint64_t> d4n2{1, 3, 6, 7, 6, 3, 1};
  for (unsigned k = 0; k < d4n2.size(); ++k) EXPECT_EQ(generic_hilbert(2, 4, k), d4n2[k]);
  for (auto c : kCases) {
    const auto conv = oracle::hilbert_by_convolution(c.n, c.d);
    const unsigned top = socle_degree(c.n, c.d);
    EXPECT_EQ(generic_hilbert(c.n, c.d, top), 1u);
    EXPECT_EQ(generic_hilbert(c.n, c.d, top + 1), 0u);
    for (unsigned k = 0; k <= top + 2; ++k) {
      const std::uint64_t want = k < conv.size() ? conv[k] : 0;
      EXPECT_EQ(generic_hilbert(c.n, c.d, k), want);
      EXPECT_EQ(generic_hilbert_alternating(c.n, c.d, k), static_cast<std::int64_t>(want));
    }
  }
}

TEST(Smooth, Certificates) {
  auto ctx = poly::RingContext::create(2, 4);
  EXPECT_TRUE(JacobianRing(poly::fermat(ctx)).smooth());
  std::mt19937_64 rng(10);
  auto g = poly::random_form(ctx, 3, rng);
  JacobianRing singular(poly::multiply(HomPoly::variable(ctx, 0), g));
  EXPECT_FALSE(singular.smooth());
  EXPECT_THROW(macaulay_pairing(singular, 1), Error);
  int smooth = 0;
  for (std::uint64_t s = 0; s < 10; ++s) smooth += JacobianRing(random_f(2, 4, 100 + s)).smooth();
  EXPECT_EQ(smooth, 10);
}

TEST(Smooth, PartialCertificateBelowCap) {
  JacobianRing jr(random_f(4, 4, 11), 6);
  const auto& cert = jr.certificate();
  EXPECT_FALSE(cert.complete);
  EXPECT_EQ(cert.checked_up_to, 6u);
  EXPECT_TRUE(cert.smooth);
}

TEST(Macaulay, Pairing) {
  auto ctx = poly::RingContext::create(2, 3);
  JacobianRing fermat(poly::fermat(ctx));
  EXPECT_EQ(linalg::rank(fermat.field(), macaulay_pairing(fermat, 1)), 3u);
  EXPECT_EQ(linalg::rank(fermat.field(), macaulay_pairing(fermat, 0)), 1u);
  JacobianRing jr(random_f(3, 4, 12));
  EXPECT_EQ(linalg::rank(jr.field(), macaulay_pairing(jr, 4)), 19u);
  for (unsigned k = 0; k <= jr.socle_degree(); ++k) {
    EXPECT_EQ(jr.quotient_dim(k), jr.quotient_dim(jr.socle_degree() - k));
    EXPECT_EQ(linalg::rank(jr.field(), macaulay_pairing(jr, k)), jr.quotient_dim(k));
  }
}

TEST(Injectivity, PowersOfLinearForms) {
  std::mt19937_64 rng(13);
  for (auto c : kCases) {
    auto ctx = poly::RingContext::create(c.n, c.d);
    for (bool use_fermat : {true, false}) {
      JacobianRing jr(use_fermat ? poly::fermat(ctx) : poly::random_form(ctx, c.d, rng));
      HomPoly x = use_fermat ? HomPoly::linear_form(ctx, std::vector<Elem>(c.n + 1, 1)) : oracle::random_linear(ctx, rng);
      const unsigned top = jr.socle_degree();
      for (unsigned k = 0; k <= top; ++k)
        for (unsigned l = 1; k + l <= top; ++l) {
          const auto r = linalg::rank(jr.field(), jr.multiplication_map(poly::power(x, l), k));
          if (2 * k + l <= top)
            EXPECT_EQ(r, jr.quotient_dim(k)) << c.d << "," << c.n << " k=" << k << " l=" << l;
          else
            EXPECT_LE(r, std::min(jr.quotient_dim(k), jr.quotient_dim(k + l)));
        }
    }
  }
}

TEST(Strategy, DirectAndKoszulAgree) {
  for (auto c : kCases) {
    auto f = random_f(c.n, c.d, 14);
    JacobianRing a(f, {}, Strategy::Direct), b(f, {}, Strategy::Koszul);
    for (unsigned k = 0; k <= a.socle_degree() + 1; ++k) {
      EXPECT_EQ(a.normal_forms(k), b.normal_forms(k));
      EXPECT_EQ(a.ideal_piece(k), b.ideal_piece(k));
    }
  }
  // A singular f as well: the quotient is infinite.
  auto ctx = poly::RingContext::create(2, 3);
  auto cone = poly::power(HomPoly::variable(ctx, 0), 3) + poly::power(HomPoly::variable(ctx, 1), 3);
  JacobianRing a(cone, {}, Strategy::Direct), b(cone, {}, Strategy::Koszul);
  for (unsigned k = 0; k <= 8; ++k) EXPECT_EQ(a.normal_forms(k), b.normal_forms(k));
  EXPECT_EQ(a.quotient_dim(8), 4u);
}
