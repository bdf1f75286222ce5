#include "jacring/schiffer.hpp"

#include <algorithm>
#include <future>
#include <random>

#include "jacring/error.hpp"
#include "jacring/torelli.hpp"

namespace jacring::schiffer {

using linalg::BilinearMap;
using linalg::PrimeField;

namespace {

void check_x(const JacobianRing& jr, const HomPoly& x) {
  if (x.degree() != 1) fail(ErrorCode::DegreeMismatch, "x must be a linear form");
  if (!x.context().compatible(jr.context())) fail(ErrorCode::ContextMismatch, "x lives in another ring");
  if (x.is_zero()) fail(ErrorCode::ZeroForm, "x is zero");
}

// Whether u * v stays in target for all u in a, v in b, with mu : A x B -> C.
bool products_within(const PrimeField& f, const BilinearMap& mu, const Subspace& a, const Subspace& b,
                     const Subspace& target) {
  if (target.dim() == target.ambient_dim() || a.dim() == 0 || b.dim() == 0) return true;
  const Matrix q = target.quotient_map();
  const Matrix bt = linalg::transpose(b.basis());
  for (std::size_t r = 0; r < a.dim(); ++r) {
    const Matrix left = linalg::multiply(f, q, mu.left_action(f, a.basis().row(r)));
    if (!linalg::multiply(f, left, bt).is_zero()) return false;
  }
  return true;
}

RElem random_element(const JacobianRing& jr, unsigned k, std::mt19937_64& rng) {
  RElem e{k, std::vector<Elem>(jr.quotient_dim(k))};
  for (auto& c : e.coords) c = jr.field().random(rng);
  return e;
}

HomPoly random_linear(const JacobianRing& jr, std::mt19937_64& rng) {
  std::vector<Elem> c(jr.n() + 1);
  do {
    for (auto& v : c) v = jr.field().random(rng);
  } while (std::all_of(c.begin(), c.end(), [](Elem v) { return v == 0; }));
  return HomPoly::linear_form(jr.context_ptr(), c);
}

}  // namespace

StarData star_data(const JacobianRing& jr, const HomPoly& x, unsigned max_multiple) {
  check_x(jr, x);
  if (max_multiple < 1 || max_multiple > 3) fail(ErrorCode::InvalidArgument, "max_multiple must be 1, 2 or 3");
  const unsigned d = jr.d();
  StarData sd;
  sd.d = d;
  sd.max_multiple = max_multiple;
  sd.ideals.resize(max_multiple);
  for (unsigned i = 1; i <= max_multiple; ++i)
    for (unsigned k = 1; k + 1 <= d; ++k)
      sd.ideals[i - 1].push_back(
          linalg::image(jr.field(), jr.multiplication_map(poly::power(x, k), i * d - k)));
  return sd;
}

bool StarReport::dims_pass() const {
  return std::all_of(dim_ok.begin(), dim_ok.end(), [](const IndexedCheck& c) { return c.ok; });
}

bool StarReport::pairs_pass() const {
  return std::all_of(pair_ok.begin(), pair_ok.end(), [](const IndexedCheck& c) { return c.ok; });
}

bool StarReport::passed() const {
  auto all = [](const std::vector<IndexedCheck>& v) {
    return std::all_of(v.begin(), v.end(), [](const IndexedCheck& c) { return c.ok; });
  };
  return all(dim_ok) && all(pair_ok) && all(absorb_ok) && all(add_ok);
}

StarReport condition_star(const JacobianRing& jr, const HomPoly& x, const RElem& phi, unsigned max_multiple) {
  const unsigned d = jr.d();
  if (phi.degree != d) fail(ErrorCode::DegreeMismatch, "phi must lie in R^d");
  const StarData sd = star_data(jr, x, max_multiple);
  const PrimeField& f = jr.field();
  StarReport rep;
  rep.max_multiple = max_multiple;
  for (unsigned i = 1; i <= max_multiple; ++i)
    for (unsigned k = 1; k < d; ++k) rep.dim_ok.push_back({i, k, sd.ideal(i, k).dim() == jr.quotient_dim(i * d - k)});

  const BilinearMap mdd = jr.multiplication_tensor(d, d);
  const Subspace phi_d = linalg::image(f, jr.multiplication_map(phi, d));
  std::optional<BilinearMap> md2;
  std::optional<Subspace> phi_2d;
  if (max_multiple >= 2) {
    md2 = jr.multiplication_tensor(d, 2 * d);
    phi_2d = linalg::image(f, jr.multiplication_map(phi, 2 * d));
  }
  for (unsigned k = 1; k < d; ++k) {
    bool ok = products_within(f, mdd, sd.ideal(1, k), sd.ideal(1, d - k), phi_d);
    if (ok && md2) ok = products_within(f, *md2, sd.ideal(1, k), sd.ideal(2, d - k), *phi_2d);
    rep.pair_ok.push_back({k, 0, ok});
  }
  const Subspace full_d = Subspace::full(f, jr.quotient_dim(d));
  for (unsigned i = 1; i < max_multiple; ++i) {
    const BilinearMap mu = jr.multiplication_tensor(d, i * d);
    for (unsigned k = 1; k < d; ++k)
      rep.absorb_ok.push_back({i, k, products_within(f, mu, full_d, sd.ideal(i, k), sd.ideal(i + 1, k))});
  }
  if (max_multiple >= 2)
    for (unsigned k = 1; k < d; ++k)
      for (unsigned l = 1; k + l < d; ++l)
        rep.add_ok.push_back({k, l, products_within(f, mdd, sd.ideal(1, k), sd.ideal(1, l), sd.ideal(2, k + l))});
  return rep;
}

bool ConstancyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const ConstancyCheck& c) { return c.equal; });
}

namespace {

// Whether every row of `rows` (vectors of S^k) lands in the image of `extra`
// modulo J^k, i.e. in J^k + span(extra).
bool inside_modulo(const JacobianRing& jr, unsigned k, const Matrix& rows, const Matrix& extra) {
  const PrimeField& f = jr.field();
  const Matrix& nf = jr.normal_forms(k);
  const Subspace img = Subspace::span(f, linalg::multiply(f, extra, nf));
  if (img.dim() == img.ambient_dim()) return true;
  const Matrix red = linalg::multiply(f, rows, nf);
  return linalg::multiply(f, red, linalg::transpose(img.quotient_map())).is_zero();
}

}  // namespace

ConstancyReport family_constancy(const JacobianRing& jr, const HomPoly& g, const HomPoly& x,
                                 const std::vector<Elem>& ts, const std::vector<unsigned>& ks) {
  check_x(jr, x);
  const unsigned d = jr.d();
  if (g.degree() != d || !g.context().compatible(jr.context()))
    fail(ErrorCode::DegreeMismatch, "family direction must be a form of degree d");
  const unsigned kmax = ks.empty() ? 0 : *std::max_element(ks.begin(), ks.end());
  const HomPoly xd1 = poly::power(x, d - 1);
  ConstancyReport rep;
  for (Elem t : ts) {
    const HomPoly ft = jr.polynomial() + g.scaled(t);
    const JacobianRing jt(ft, std::max(kmax, jr.d()));
    for (unsigned k : ks) {
      if (k + 1 < d) {
        rep.checks.push_back({t, k, true});
        continue;
      }
      const Matrix x_part = linalg::transpose(poly::multiplication_matrix(xd1, k - d + 1));
      const bool ok = inside_modulo(jr, k, jt.ideal_piece(k).basis(), x_part) &&
                      inside_modulo(jt, k, jr.ideal_piece(k).basis(), x_part);
      rep.checks.push_back({t, k, ok});
    }
  }
  return rep;
}

ConstancyReport quotient_constancy(const JacobianRing& jr, const HomPoly& x, const std::vector<Elem>& ts,
                                   std::vector<unsigned> ks) {
  check_x(jr, x);
  if (ks.empty()) ks = {jr.d(), 2 * jr.d()};
  return family_constancy(jr, poly::power(x, jr.d()), x, ts, ks);
}

std::uint64_t projective_point_count(std::size_t n, std::uint32_t p) {
  std::uint64_t total = 0, block = 1;
  for (std::size_t j = 0; j <= n; ++j) {
    total += block;
    if (j < n && block > UINT64_MAX / p) return UINT64_MAX;
    block *= p;
  }
  return total;
}

namespace {

struct PowerSearch {
  const PrimeField& f;
  std::size_t nvars;
  unsigned d;
  std::uint32_t p;
  const poly::MonomialTable& monos;
  std::vector<std::vector<Elem>> forms;  // one form per functional, multinomials folded in

  void decode(std::uint64_t idx, std::vector<Elem>& pt) const {
    std::fill(pt.begin(), pt.end(), 0);
    std::uint64_t block = 1;
    for (std::size_t j = 1; j < nvars; ++j) block *= p;
    for (std::size_t lead = 0; lead < nvars; ++lead) {
      if (idx < block) {
        pt[lead] = 1;
        for (std::size_t j = nvars; j-- > lead + 1;) {
          pt[j] = static_cast<Elem>(idx % p);
          idx /= p;
        }
        return;
      }
      idx -= block;
      block /= p;
    }
  }

  bool vanishes(const std::vector<Elem>& form, const std::vector<std::vector<Elem>>& pw) const {
    std::uint64_t acc = 0;
    for (std::size_t u = 0; u < monos.size(); ++u) {
      if (form[u] == 0) continue;
      const auto e = monos.exponents(u);
      std::uint64_t term = form[u];
      for (std::size_t i = 0; i < nvars && term; ++i)
        if (e[i]) term = term * pw[i][e[i]] % p;
      acc += term;
      if (acc >= (1ULL << 62)) acc %= p;
    }
    return acc % p == 0;
  }

  std::optional<std::uint64_t> scan(std::uint64_t begin, std::uint64_t end) const {
    std::vector<Elem> pt(nvars);
    std::vector<std::vector<Elem>> pw(nvars, std::vector<Elem>(d + 1));
    for (std::uint64_t idx = begin; idx < end; ++idx) {
      decode(idx, pt);
      for (std::size_t i = 0; i < nvars; ++i) {
        pw[i][0] = 1;
        for (unsigned e = 1; e <= d; ++e) pw[i][e] = f.mul(pw[i][e - 1], pt[i]);
      }
      bool hit = true;
      for (const auto& form : forms)
        if (!vanishes(form, pw)) {
          hit = false;
          break;
        }
      if (hit) return idx;
    }
    return std::nullopt;
  }
};

Elem multinomial(const PrimeField& f, unsigned d, std::span<const poly::Exponent> e) {
  Elem num = 1;
  for (unsigned i = 2; i <= d; ++i) num = f.mul(num, i);
  Elem den = 1;
  for (auto a : e)
    for (unsigned i = 2; i <= a; ++i) den = f.mul(den, i);
  return f.mul(num, f.inv(den));
}

}  // namespace

std::optional<PowerRoot> is_dth_power(const JacobianRing& jr, const RElem& v, const EnumerationOptions& opts) {
  const unsigned d = jr.d();
  if (v.degree != d) fail(ErrorCode::DegreeMismatch, "power test needs an element of R^d");
  if (v.is_zero()) fail(ErrorCode::ZeroInput, "power test of zero");
  const PrimeField& f = jr.field();
  const std::uint32_t p = f.modulus();
  const std::size_t nvars = jr.n() + 1;
  const std::uint64_t total = projective_point_count(jr.n(), p);
  if (total > opts.budget)
    fail(ErrorCode::BudgetExceeded, "P^" + std::to_string(jr.n()) + "(F_" + std::to_string(p) + ") has " +
                                        std::to_string(total) + " points, budget is " + std::to_string(opts.budget));
  Matrix one(0, v.coords.size());
  one.append_row(v.coords);
  const Matrix q = Subspace::span(f, one).quotient_map();
  const Matrix g = linalg::multiply(f, q, linalg::transpose(jr.normal_forms(d)));
  const auto& monos = jr.context().monomials(d);
  PowerSearch ps{f, nvars, d, p, monos, {}};
  for (std::size_t r = 0; r < g.rows(); ++r) {
    std::vector<Elem> form(monos.size());
    for (std::size_t u = 0; u < monos.size(); ++u) form[u] = f.mul(g(r, u), multinomial(f, d, monos.exponents(u)));
    ps.forms.push_back(std::move(form));
  }
  // Points with [x^d] = 0 pass every functional; skip them and keep going.
  std::uint64_t begin = 0;
  while (begin < total) {
    const unsigned threads = std::max(1u, opts.threads);
    std::optional<std::uint64_t> hit;
    if (threads == 1 || total - begin < 4096) {
      hit = ps.scan(begin, total);
    } else {
      const std::uint64_t chunk = (total - begin + threads - 1) / threads;
      std::vector<std::future<std::optional<std::uint64_t>>> parts;
      for (unsigned t = 0; t < threads; ++t) {
        const std::uint64_t lo = begin + t * chunk, hi = std::min(total, lo + chunk);
        if (lo >= hi) break;
        parts.push_back(std::async(std::launch::async, [&ps, lo, hi] { return ps.scan(lo, hi); }));
      }
      for (auto& part : parts) {
        auto r = part.get();
        if (r && !hit) hit = r;
      }
    }
    if (!hit) return std::nullopt;
    std::vector<Elem> pt(nvars);
    ps.decode(*hit, pt);
    HomPoly x = HomPoly::linear_form(jr.context_ptr(), pt);
    const RElem xd = jr.reduce(poly::power(x, d));
    if (!xd.is_zero()) {
      std::size_t piv = 0;
      while (v.coords[piv] == 0) ++piv;
      const Elem lambda = f.mul(xd.coords[piv], f.inv(v.coords[piv]));
      return PowerRoot{std::move(x), lambda};
    }
    begin = *hit + 1;
  }
  return std::nullopt;
}

std::optional<Detection> detect_schiffer(const JacobianRing& jr, const RElem& phi, const EnumerationOptions& opts,
                                         unsigned max_multiple) {
  if (phi.is_zero()) fail(ErrorCode::ZeroInput, "phi is zero");
  auto root = is_dth_power(jr, phi, opts);
  if (!root) return std::nullopt;
  Detection det{*root, condition_star(jr, root->x, phi, max_multiple), {}};
  det.constancy = quotient_constancy(jr, root->x, {0, 1, 2});
  return det;
}

TransportReport veronese_transport_check(const JacobianRing& jf, const JacobianRing& jg, const Matrix& a,
                                         std::size_t samples, std::uint64_t seed) {
  const PrimeField& f = jf.field();
  if (poly::substitute(jf.polynomial(), a) != jg.polynomial()) fail(ErrorCode::NotRelated, "g is not f(AX)");
  if (!jf.smooth() || !jg.smooth()) fail(ErrorCode::NotSmooth, "transport needs smooth f and g");
  const unsigned d = jf.d();
  const Matrix w = torelli::induced_map(jf, jg, a, d);
  TransportReport rep;
  std::mt19937_64 rng(seed);
  rep.powers_ok = true;
  for (std::size_t s = 0; s < samples && rep.powers_ok; ++s) {
    const HomPoly x = random_linear(jf, rng);
    const auto image = linalg::apply(f, w, jf.reduce(poly::power(x, d)).coords);
    const HomPoly xa = poly::substitute(x, a);
    rep.powers_ok = image == jg.reduce(poly::power(xa, d)).coords;
  }
  const Matrix sub = poly::substitution_matrix(jf.context(), a, d);
  const Subspace jfd = jf.ideal_piece(d);
  Matrix rows(0, sub.rows());
  for (std::size_t r = 0; r < jfd.dim(); ++r) rows.append_row(linalg::apply(f, sub, jfd.basis().row(r)));
  rep.kernel_ok = Subspace::span(f, rows) == jg.ideal_piece(d);
  return rep;
}

bool power_transport(const JacobianRing& jf, const JacobianRing& jg, const Matrix& w, std::size_t samples,
                     std::uint64_t seed, const EnumerationOptions& opts) {
  const unsigned d = jf.d();
  if (w.cols() != jf.quotient_dim(d) || w.rows() != jg.quotient_dim(d))
    fail(ErrorCode::DimensionMismatch, "transport map shape");
  std::mt19937_64 rng(seed);
  for (std::size_t s = 0; s < samples; ++s) {
    const HomPoly x = random_linear(jf, rng);
    RElem img{d, linalg::apply(jf.field(), w, jf.reduce(poly::power(x, d)).coords)};
    if (img.is_zero() || !is_dth_power(jg, img, opts)) return false;
  }
  return true;
}

std::vector<SquareSample> squares_ops(const JacobianRing& jr, unsigned l, std::size_t samples, std::uint64_t seed) {
  if (l == 0) fail(ErrorCode::InvalidArgument, "squares need l >= 1");
  const PrimeField& f = jr.field();
  std::mt19937_64 rng(seed);
  std::vector<SquareSample> out;
  for (std::size_t s = 0; s < samples; ++s) {
    const RElem a = random_element(jr, l, rng), b = random_element(jr, l, rng);
    SquareSample smp;
    const RElem a2 = jr.multiply(a, a), ab = jr.multiply(a, b);
    smp.identity_ok = jr.multiply(a2, jr.multiply(b, b)) == jr.multiply(ab, ab);
    const Subspace target = linalg::image(f, jr.multiplication_map(ab, l + 1));
    const Matrix act = jr.multiplication_map(a2, l + 1);
    const Subspace colon = linalg::transporter(target, std::span<const Matrix>(&act, 1), jr.quotient_dim(l + 1));
    const Subspace bs1 = linalg::image(f, jr.multiplication_map(b, 1));
    smp.colon_dim = colon.dim();
    smp.bs1_dim = bs1.dim();
    smp.contains = colon.contains(bs1);
    smp.equal = colon == bs1;
    out.push_back(smp);
  }
  return out;
}

bool SpecializationReport::passed() const {
  return std::all_of(degrees.begin(), degrees.end(),
                     [](const SpecializationDegree& s) { return !s.below_bound || s.dim == s.generic; });
}

SpecializationReport singular_specialization_dims(std::size_t n, std::size_t m, unsigned d, std::uint64_t seed,
                                                  std::uint32_t p, unsigned extra) {
  if (2 * m > n) fail(ErrorCode::InvalidArgument, "need n - 2m >= 0");
  if (d < 3) fail(ErrorCode::InvalidArgument, "need d >= 3");
  auto ctx = poly::RingContext::create(n, d, p);
  std::mt19937_64 rng(seed);
  const HomPoly f = m == 0 ? poly::random_form(ctx, d, rng)
                           : poly::construct(ctx, poly::random_bilinear_parts(ctx, m, rng));
  SpecializationReport rep;
  rep.n = n;
  rep.m = m;
  rep.d = d;
  rep.dim_z = m == 0 ? -1 : static_cast<long>(n) - 2 * static_cast<long>(m);
  const long rhs = (static_cast<long>(n) - rep.dim_z + 1) * (static_cast<long>(d) - 3);
  for (long k = 0; 2 * k < rhs; ++k) rep.last_bounded = static_cast<int>(k);
  const unsigned kmax = static_cast<unsigned>(std::max(0, rep.last_bounded) + static_cast<int>(extra));
  const JacobianRing jr(f, std::max(kmax, d));
  for (unsigned k = 0; k <= kmax; ++k)
    rep.degrees.push_back({k, jr.quotient_dim(k), jacobian::generic_hilbert(n, d, k),
                           static_cast<int>(k) <= rep.last_bounded});
  rep.smooth = m == 0 ? jr.smooth() : false;
  return rep;
}

}  // namespace jacring::schiffer
