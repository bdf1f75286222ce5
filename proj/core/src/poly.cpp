#include "jacring/poly.hpp"

#include <algorithm>
#include <string>

#include "jacring/error.hpp"

namespace jacring::poly {

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

MonomialTable::MonomialTable(std::size_t nvars, unsigned degree)
    : nvars_(nvars), degree_(degree), size_(static_cast<std::size_t>(binomial(nvars - 1 + degree, nvars - 1))) {
  exps_.reserve(size_ * nvars_);
  std::vector<Exponent> cur(nvars_, 0);
  // Lex-descending: the first exponent runs from degree down to 0.
  auto rec = [&](auto&& self, std::size_t pos, unsigned rem) -> void {
    if (pos + 1 == nvars_) {
      cur[pos] = static_cast<Exponent>(rem);
      exps_.insert(exps_.end(), cur.begin(), cur.end());
      return;
    }
    for (int e = static_cast<int>(rem); e >= 0; --e) {
      cur[pos] = static_cast<Exponent>(e);
      self(self, pos + 1, rem - static_cast<unsigned>(e));
    }
  };
  rec(rec, 0, degree);
}

RingContext::RingContext(std::size_t n, unsigned d, std::uint32_t p, std::optional<unsigned> degree_cap)
    : nvars_(n + 1), d_(d), field_(p), cap_(degree_cap.value_or(3 * d + 2)) {
  if (d == 0) fail(ErrorCode::InvalidArgument, "degree must be positive");
  if (p <= d) fail(ErrorCode::InvalidArgument, "prime must exceed the degree");
}

ContextPtr RingContext::create(std::size_t n, unsigned d, std::uint32_t p, std::optional<unsigned> degree_cap) {
  return std::make_shared<const RingContext>(n, d, p, degree_cap);
}

const MonomialTable& RingContext::monomials(unsigned k) const {
  std::lock_guard lock(mu_);
  auto& slot = monomials_[k];
  if (!slot) slot = std::make_unique<MonomialTable>(nvars_, k);
  return *slot;
}

std::size_t RingContext::index_of(std::span<const Exponent> exps) const {
  if (exps.size() != nvars_) fail(ErrorCode::DimensionMismatch, "exponent vector length");
  unsigned rem = 0;
  for (auto e : exps) rem += e;
  std::size_t idx = 0;
  const std::size_t v = nvars_;
  for (std::size_t i = 0; i + 1 < v; ++i) {
    const unsigned e = exps[i];
    idx += static_cast<std::size_t>(binomial(rem - e + (v - i - 2), v - i - 1));
    rem -= e;
  }
  return idx;
}

std::span<const std::uint32_t> RingContext::product_table(unsigned a, unsigned b) const {
  const MonomialTable& ta = monomials(a);
  const MonomialTable& tb = monomials(b);
  std::lock_guard lock(mu_);
  auto& slot = products_[{a, b}];
  if (!slot) {
    auto table = std::make_unique<std::vector<std::uint32_t>>(ta.size() * tb.size());
    std::vector<Exponent> e(nvars_);
    for (std::size_t i = 0; i < ta.size(); ++i) {
      auto ei = ta.exponents(i);
      for (std::size_t j = 0; j < tb.size(); ++j) {
        auto ej = tb.exponents(j);
        for (std::size_t v = 0; v < nvars_; ++v) e[v] = static_cast<Exponent>(ei[v] + ej[v]);
        (*table)[i * tb.size() + j] = static_cast<std::uint32_t>(index_of(e));
      }
    }
    slot = std::move(table);
  }
  return *slot;
}

std::span<const std::int32_t> RingContext::divisor_table(unsigned k) const {
  if (k == 0) fail(ErrorCode::DegreeZero, "degree-0 monomials have no divisors");
  const MonomialTable& t = monomials(k);
  std::lock_guard lock(mu_);
  auto& slot = divisors_[k];
  if (!slot) {
    auto table = std::make_unique<std::vector<std::int32_t>>(t.size() * nvars_, kNone);
    std::vector<Exponent> e(nvars_);
    for (std::size_t u = 0; u < t.size(); ++u) {
      auto eu = t.exponents(u);
      for (std::size_t i = 0; i < nvars_; ++i) {
        if (eu[i] == 0) continue;
        std::copy(eu.begin(), eu.end(), e.begin());
        --e[i];
        (*table)[u * nvars_ + i] = static_cast<std::int32_t>(index_of(e));
      }
    }
    slot = std::move(table);
  }
  return *slot;
}

HomPoly::HomPoly(ContextPtr ctx, unsigned degree) : ctx_(std::move(ctx)), degree_(degree) {
  if (!ctx_) fail(ErrorCode::InvalidArgument, "null ring context");
  coeffs_.assign(ctx_->dim(degree), 0);
}

HomPoly::HomPoly(ContextPtr ctx, unsigned degree, std::vector<Elem> coeffs)
    : ctx_(std::move(ctx)), degree_(degree), coeffs_(std::move(coeffs)) {
  if (!ctx_) fail(ErrorCode::InvalidArgument, "null ring context");
  if (coeffs_.size() != ctx_->dim(degree)) fail(ErrorCode::DimensionMismatch, "coefficient vector length");
  for (auto c : coeffs_)
    if (c >= ctx_->field().modulus()) fail(ErrorCode::InvalidArgument, "coefficient not reduced");
}

HomPoly HomPoly::monomial(ContextPtr ctx, std::span<const Exponent> exps, Elem coeff) {
  unsigned deg = 0;
  for (auto e : exps) deg += e;
  HomPoly out(ctx, deg);
  out.coeffs_[ctx->index_of(exps)] = ctx->field().reduce(coeff);
  return out;
}

HomPoly HomPoly::variable(ContextPtr ctx, std::size_t i) {
  if (i >= ctx->nvars()) fail(ErrorCode::InvalidArgument, "variable index out of range");
  HomPoly out(ctx, 1);
  out.coeffs_[i] = 1;
  return out;
}

HomPoly HomPoly::linear_form(ContextPtr ctx, std::span<const Elem> coeffs) {
  if (coeffs.size() != ctx->nvars()) fail(ErrorCode::DimensionMismatch, "linear form length");
  return HomPoly(ctx, 1, std::vector<Elem>(coeffs.begin(), coeffs.end()));
}

bool HomPoly::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](Elem c) { return c == 0; });
}

namespace {

void require_compatible(const HomPoly& a, const HomPoly& b) {
  if (!a.context().compatible(b.context())) fail(ErrorCode::ContextMismatch, "polynomials live in different rings");
}

}  // namespace

HomPoly HomPoly::operator+(const HomPoly& o) const {
  require_compatible(*this, o);
  if (o.degree_ != degree_) fail(ErrorCode::DegreeMismatch, "adding polynomials of different degrees");
  HomPoly out = *this;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) out.coeffs_[i] = field().add(coeffs_[i], o.coeffs_[i]);
  return out;
}

HomPoly HomPoly::operator-(const HomPoly& o) const {
  require_compatible(*this, o);
  if (o.degree_ != degree_) fail(ErrorCode::DegreeMismatch, "subtracting polynomials of different degrees");
  HomPoly out = *this;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) out.coeffs_[i] = field().sub(coeffs_[i], o.coeffs_[i]);
  return out;
}

HomPoly HomPoly::scaled(Elem c) const {
  HomPoly out = *this;
  for (auto& x : out.coeffs_) x = field().mul(x, c);
  return out;
}

bool HomPoly::operator==(const HomPoly& o) const {
  return ctx_->compatible(*o.ctx_) && degree_ == o.degree_ && coeffs_ == o.coeffs_;
}

HomPoly multiply(const HomPoly& a, const HomPoly& b) {
  require_compatible(a, b);
  const RingContext& ctx = a.context();
  const auto table = ctx.product_table(a.degree(), b.degree());
  const std::uint64_t p = ctx.field().modulus();
  const std::size_t nb = b.coeffs().size();
  std::vector<std::uint64_t> acc(ctx.dim(a.degree() + b.degree()), 0);
  std::vector<std::uint32_t> hits(acc.size(), 0);
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) {
    const std::uint64_t x = a.coeff(i);
    if (x == 0) continue;
    for (std::size_t j = 0; j < nb; ++j) {
      const std::uint64_t y = b.coeff(j);
      if (y == 0) continue;
      auto& slot = acc[table[i * nb + j]];
      slot += x * y;
      if (slot >= (1ull << 62)) slot %= p;
    }
  }
  std::vector<Elem> out(acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i) out[i] = static_cast<Elem>(acc[i] % p);
  return HomPoly(a.context_ptr(), a.degree() + b.degree(), std::move(out));
}

HomPoly power(const HomPoly& a, unsigned e) {
  std::vector<Exponent> zero(a.context().nvars(), 0);
  HomPoly acc = HomPoly::monomial(a.context_ptr(), zero, 1);
  for (unsigned i = 0; i < e; ++i) acc = multiply(acc, a);
  return acc;
}

HomPoly partial_derivative(const HomPoly& a, std::size_t var) {
  if (a.degree() == 0) fail(ErrorCode::DegreeZero, "derivative of a constant");
  const RingContext& ctx = a.context();
  if (var >= ctx.nvars()) fail(ErrorCode::InvalidArgument, "variable index out of range");
  const auto div = ctx.divisor_table(a.degree());
  const auto& mons = ctx.monomials(a.degree());
  const PrimeField& f = ctx.field();
  HomPoly out(a.context_ptr(), a.degree() - 1);
  for (std::size_t u = 0; u < mons.size(); ++u) {
    const Elem c = a.coeff(u);
    if (c == 0) continue;
    const std::int32_t target = div[u * ctx.nvars() + var];
    if (target == RingContext::kNone) continue;
    const Elem e = f.reduce(mons.exponents(u)[var]);
    auto& slot = out.coeffs_mut()[static_cast<std::size_t>(target)];
    slot = f.add(slot, f.mul(c, e));
  }
  return out;
}

std::vector<HomPoly> gradient(const HomPoly& a) {
  std::vector<HomPoly> out;
  for (std::size_t i = 0; i < a.context().nvars(); ++i) out.push_back(partial_derivative(a, i));
  return out;
}

Elem evaluate(const HomPoly& a, std::span<const Elem> point) {
  const RingContext& ctx = a.context();
  if (point.size() != ctx.nvars()) fail(ErrorCode::DimensionMismatch, "point length");
  const PrimeField& f = ctx.field();
  const auto& mons = ctx.monomials(a.degree());
  Elem acc = 0;
  for (std::size_t u = 0; u < mons.size(); ++u) {
    if (a.coeff(u) == 0) continue;
    Elem term = a.coeff(u);
    auto e = mons.exponents(u);
    for (std::size_t i = 0; i < e.size(); ++i) term = f.mul(term, f.pow(point[i], e[i]));
    acc = f.add(acc, term);
  }
  return acc;
}

Matrix multiplication_matrix(const HomPoly& g, unsigned k) {
  const RingContext& ctx = g.context();
  const auto table = ctx.product_table(g.degree(), k);
  const std::size_t nk = ctx.dim(k);
  Matrix m(ctx.dim(k + g.degree()), nk);
  for (std::size_t i = 0; i < g.coeffs().size(); ++i) {
    const Elem c = g.coeff(i);
    if (c == 0) continue;
    for (std::size_t j = 0; j < nk; ++j) m(table[i * nk + j], j) = ctx.field().add(m(table[i * nk + j], j), c);
  }
  return m;
}

Matrix derivative_matrix(const RingContext& ctx, std::size_t var, unsigned k) {
  if (k == 0) fail(ErrorCode::DegreeZero, "derivative of constants");
  const auto div = ctx.divisor_table(k);
  const auto& mons = ctx.monomials(k);
  Matrix m(ctx.dim(k - 1), mons.size());
  for (std::size_t u = 0; u < mons.size(); ++u) {
    const std::int32_t t = div[u * ctx.nvars() + var];
    if (t != RingContext::kNone) m(static_cast<std::size_t>(t), u) = ctx.field().reduce(mons.exponents(u)[var]);
  }
  return m;
}

Matrix substitution_matrix(const RingContext& ctx, const Matrix& a, unsigned k) {
  const std::size_t v = ctx.nvars();
  if (a.rows() != v || a.cols() != v) fail(ErrorCode::DimensionMismatch, "substitution matrix shape");
  const PrimeField& f = ctx.field();
  // Images of the monomials of degree j, as rows, built degree by degree.
  Matrix prev(1, 1);
  prev(0, 0) = 1;
  for (unsigned j = 1; j <= k; ++j) {
    const auto& mons = ctx.monomials(j);
    const auto div = ctx.divisor_table(j);
    const auto table = ctx.product_table(1, j - 1);
    const std::size_t nprev = ctx.dim(j - 1);
    Matrix cur(mons.size(), mons.size());
    for (std::size_t u = 0; u < mons.size(); ++u) {
      std::size_t i = 0;
      while (div[u * v + i] == RingContext::kNone) ++i;
      const auto src = prev.row(static_cast<std::size_t>(div[u * v + i]));
      auto dst = cur.row(u);
      // X_i -> sum_l A_il X_l
      for (std::size_t l = 0; l < v; ++l) {
        const Elem c = a(i, l);
        if (c == 0) continue;
        for (std::size_t s = 0; s < nprev; ++s) {
          if (src[s] == 0) continue;
          auto& slot = dst[table[l * nprev + s]];
          slot = f.add(slot, f.mul(c, src[s]));
        }
      }
    }
    prev = std::move(cur);
  }
  return k == 0 ? Matrix::identity(1) : transpose(prev);
}

HomPoly substitute(const HomPoly& p, const Matrix& a) {
  Matrix s = substitution_matrix(p.context(), a, p.degree());
  return HomPoly(p.context_ptr(), p.degree(), linalg::apply(p.field(), s, p.coeffs()));
}

HomPoly fermat(ContextPtr ctx, std::optional<unsigned> degree) {
  const unsigned k = degree.value_or(ctx->degree_d());
  HomPoly out(ctx, k);
  std::vector<Exponent> e(ctx->nvars(), 0);
  for (std::size_t i = 0; i < ctx->nvars(); ++i) {
    std::fill(e.begin(), e.end(), 0);
    e[i] = static_cast<Exponent>(k);
    out.coeffs_mut()[ctx->index_of(e)] = 1;
  }
  return out;
}

HomPoly random_form(ContextPtr ctx, unsigned degree, std::mt19937_64& rng) {
  HomPoly out(ctx, degree);
  for (auto& c : out.coeffs_mut()) c = ctx->field().random(rng);
  return out;
}

BilinearSum random_bilinear_parts(ContextPtr ctx, std::size_t m, std::mt19937_64& rng) {
  const unsigned d = ctx->degree_d();
  const unsigned df = d / 2;
  BilinearSum parts;
  for (std::size_t i = 0; i < m; ++i) {
    parts.f.push_back(random_form(ctx, df, rng));
    parts.g.push_back(random_form(ctx, d - df, rng));
  }
  return parts;
}

HomPoly construct(ContextPtr ctx, const Construction& kind) {
  const unsigned d = ctx->degree_d();
  return std::visit(
      [&](const auto& k) -> HomPoly {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Fermat>) {
          return fermat(ctx);
        } else if constexpr (std::is_same_v<K, RandomForm>) {
          std::mt19937_64 rng(k.seed);
          return random_form(ctx, d, rng);
        } else if constexpr (std::is_same_v<K, BilinearSum>) {
          if (k.f.size() != k.g.size()) fail(ErrorCode::DegreeMismatch, "bilinear_sum needs equally many f_i and g_i");
          HomPoly acc(ctx, d);
          for (std::size_t i = 0; i < k.f.size(); ++i) {
            if (k.f[i].degree() + k.g[i].degree() != d)
              fail(ErrorCode::DegreeMismatch, "deg f_i + deg g_i must equal d");
            acc = acc + multiply(k.f[i], k.g[i]);
          }
          return acc;
        } else {
          if (k.f.degree() != d) fail(ErrorCode::DegreeMismatch, "schiffer_line: f must have degree d");
          if (k.x.degree() != 1) fail(ErrorCode::DegreeMismatch, "schiffer_line: x must be linear");
          return k.f + power(k.x, d).scaled(k.t);
        }
      },
      kind);
}

}  // namespace jacring::poly
