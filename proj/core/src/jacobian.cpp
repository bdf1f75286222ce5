#include "jacring/jacobian.hpp"

#include <algorithm>
#include <string>
#include <tuple>

#include "jacring/error.hpp"

namespace jacring::jacobian {

using poly::RingContext;

bool RElem::is_zero() const {
  return std::all_of(coords.begin(), coords.end(), [](Elem c) { return c == 0; });
}

std::uint64_t generic_hilbert(std::size_t n, unsigned d, unsigned k) {
  if (d < 2) return 0;
  // Multiply out (1 + t + ... + t^{d-2})^{n+1} up to t^k.
  std::vector<std::uint64_t> acc(k + 1, 0);
  acc[0] = 1;
  for (std::size_t f = 0; f <= n; ++f) {
    std::vector<std::uint64_t> next(k + 1, 0);
    for (unsigned i = 0; i <= k; ++i) {
      if (acc[i] == 0) continue;
      for (unsigned j = 0; j <= d - 2 && i + j <= k; ++j) next[i + j] += acc[i];
    }
    acc = std::move(next);
  }
  return acc[k];
}

std::int64_t generic_hilbert_alternating(std::size_t n, unsigned d, unsigned k) {
  std::int64_t total = 0;
  for (std::size_t j = 0; j <= n + 1; ++j) {
    const std::int64_t shift = static_cast<std::int64_t>(j) * (d - 1);
    if (shift > static_cast<std::int64_t>(k)) break;
    const auto term = static_cast<std::int64_t>(poly::binomial(n + 1, j) * poly::binomial(k - shift + n, n));
    total += (j % 2 == 0) ? term : -term;
  }
  return total;
}

struct JacobianRing::Degree {
  std::vector<std::uint32_t> basis;
  std::vector<std::int32_t> position;
  Matrix nf;
};

JacobianRing::JacobianRing(HomPoly f, std::optional<unsigned> max_degree, Strategy strategy)
    : f_(std::move(f)), max_degree_(max_degree.value_or(f_.context().degree_cap())), strategy_(strategy) {
  if (f_.degree() < 2) fail(ErrorCode::InvalidArgument, "Jacobian rings need degree at least 2");
  partials_ = poly::gradient(f_);
  degrees_.resize(max_degree_ + 1);
}

JacobianRing::~JacobianRing() = default;

void JacobianRing::check_cap(unsigned k) const {
  if (k > max_degree_)
    fail(ErrorCode::DegreeCapExceeded,
         "degree " + std::to_string(k) + " exceeds the cap " + std::to_string(max_degree_));
}

const JacobianRing::Degree& JacobianRing::degree(unsigned k) const {
  check_cap(k);
  if (k < ready_.load(std::memory_order_acquire)) return *degrees_[k];
  std::lock_guard lock(mu_);
  for (unsigned j = ready_.load(std::memory_order_relaxed); j <= k; ++j) {
    compute(j);
    ready_.store(j + 1, std::memory_order_release);
  }
  return *degrees_[k];
}

namespace {

// Fills standard monomials and normal forms from an RREF whose columns are
// the monomials of degree k in index order.
void from_monomial_rref(const linalg::RrefResult& rr, std::size_t dim, std::vector<std::uint32_t>& basis,
                        std::vector<std::int32_t>& position, Matrix& nf, const PrimeField& f) {
  std::vector<bool> pivot(dim, false);
  for (auto c : rr.pivots) pivot[c] = true;
  position.assign(dim, -1);
  for (std::size_t u = 0; u < dim; ++u)
    if (!pivot[u]) {
      position[u] = static_cast<std::int32_t>(basis.size());
      basis.push_back(static_cast<std::uint32_t>(u));
    }
  nf = Matrix(dim, basis.size());
  for (std::size_t pos = 0; pos < basis.size(); ++pos) nf(basis[pos], pos) = 1;
  for (std::size_t r = 0; r < rr.rank; ++r) {
    const std::size_t u = rr.pivots[r];
    for (std::size_t pos = 0; pos < basis.size(); ++pos) nf(u, pos) = f.neg(rr.reduced(r, basis[pos]));
  }
}

}  // namespace

void JacobianRing::compute(unsigned k) const {
  const RingContext& ctx = context();
  const PrimeField& fld = field();
  const std::size_t v = ctx.nvars();
  const unsigned d = this->d();
  const std::size_t dim = ctx.dim(k);
  auto out = std::make_unique<Degree>();

  if (k + 1 < d) {
    out->basis.resize(dim);
    out->position.resize(dim);
    for (std::size_t u = 0; u < dim; ++u) {
      out->basis[u] = static_cast<std::uint32_t>(u);
      out->position[u] = static_cast<std::int32_t>(u);
    }
    out->nf = Matrix::identity(dim);
    degrees_[k] = std::move(out);
    return;
  }

  const unsigned shift = k - (d - 1);
  const std::size_t direct_rows = v * ctx.dim(shift);
  bool use_direct = strategy_ == Strategy::Direct || k + 1 == d;
  if (!use_direct && strategy_ == Strategy::Auto) {
    const Degree& prev = *degrees_[k - 1];
    const Degree& prev2 = *degrees_[k - 2];
    const double kos_rows = static_cast<double>(v * (v - 1) / 2 * prev2.basis.size());
    const double kos_cols = static_cast<double>(v * prev.basis.size());
    const double dir = static_cast<double>(direct_rows) * dim * std::min<double>(direct_rows, dim);
    const double kos = kos_rows * kos_cols * std::min(kos_rows, kos_cols);
    use_direct = dir <= kos;
  }

  if (use_direct) {
    // Rows m * df/dX_j for monomials m of degree k-d+1.
    const auto table = ctx.product_table(shift, d - 1);
    const std::size_t ns = ctx.dim(shift), np = ctx.dim(d - 1);
    Matrix rows(direct_rows, dim);
    for (std::size_t j = 0; j < v; ++j) {
      const auto& pj = partials_[j];
      for (std::size_t m = 0; m < ns; ++m) {
        auto row = rows.row(j * ns + m);
        for (std::size_t t = 0; t < np; ++t)
          if (pj.coeff(t) != 0) row[table[m * np + t]] = pj.coeff(t);
      }
    }
    linalg::RrefResult rr = linalg::rref_rank(fld, std::move(rows));
    from_monomial_rref(rr, dim, out->basis, out->position, out->nf, fld);
    degrees_[k] = std::move(out);
    return;
  }

  const Degree& prev = *degrees_[k - 1];
  const Degree& prev2 = *degrees_[k - 2];
  const std::size_t r1 = prev.basis.size();
  const std::size_t r2 = prev2.basis.size();
  const std::size_t dim1 = ctx.dim(k - 1);
  const std::size_t dim2 = ctx.dim(k - 2);
  const auto t1 = ctx.product_table(1, k - 1);
  const auto t2 = ctx.product_table(1, k - 2);

  // Columns X_i (x) b for standard b of degree k-1, sorted by the monomial X_i b.
  std::vector<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>> cols;
  cols.reserve(v * r1);
  for (std::size_t i = 0; i < v; ++i)
    for (std::size_t b = 0; b < r1; ++b)
      cols.emplace_back(t1[i * dim1 + prev.basis[b]], static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(b));
  std::sort(cols.begin(), cols.end());
  const std::size_t ncols = cols.size();
  std::vector<std::uint32_t> col_of(v * r1);
  for (std::size_t c = 0; c < ncols; ++c) col_of[std::get<1>(cols[c]) * r1 + std::get<2>(cols[c])] = static_cast<std::uint32_t>(c);

  const std::size_t npairs = v * (v - 1) / 2;
  Matrix rel(npairs * r2, ncols);
  std::size_t row = 0;
  for (std::size_t i = 0; i < v; ++i)
    for (std::size_t j = i + 1; j < v; ++j)
      for (std::size_t r = 0; r < r2; ++r, ++row) {
        const std::size_t mono = prev2.basis[r];
        auto dst = rel.row(row);
        const auto xj_r = prev.nf.row(t2[j * dim2 + mono]);
        const auto xi_r = prev.nf.row(t2[i * dim2 + mono]);
        for (std::size_t b = 0; b < r1; ++b) {
          if (xj_r[b]) dst[col_of[i * r1 + b]] = fld.add(dst[col_of[i * r1 + b]], xj_r[b]);
          if (xi_r[b]) dst[col_of[j * r1 + b]] = fld.sub(dst[col_of[j * r1 + b]], xi_r[b]);
        }
      }
  linalg::RrefResult rr = linalg::rref_rank(fld, std::move(rel));

  std::vector<std::int32_t> pivot_row(ncols, -1);
  for (std::size_t r = 0; r < rr.rank; ++r) pivot_row[rr.pivots[r]] = static_cast<std::int32_t>(r);

  // One non-pivot column at most per monomial (the last of its group).
  out->position.assign(dim, -1);
  std::vector<std::int32_t> col_pos(ncols, -1);
  for (std::size_t c = 0; c < ncols; ++c) {
    if (pivot_row[c] >= 0) continue;
    const std::uint32_t u = std::get<0>(cols[c]);
    if (out->position[u] >= 0) fail(ErrorCode::InvalidArgument, "internal: monomial counted twice in R^k");
    col_pos[c] = static_cast<std::int32_t>(out->basis.size());
    out->position[u] = col_pos[c];
    out->basis.push_back(u);
  }
  const std::size_t rk = out->basis.size();
  std::vector<std::uint32_t> nonpivot_cols;
  for (std::size_t c = 0; c < ncols; ++c)
    if (col_pos[c] >= 0) nonpivot_cols.push_back(static_cast<std::uint32_t>(c));

  out->nf = Matrix(dim, rk);
  std::vector<bool> done(dim, false);
  for (std::size_t c = ncols; c-- > 0;) {
    const std::uint32_t u = std::get<0>(cols[c]);
    if (done[u]) continue;
    done[u] = true;
    auto dst = out->nf.row(u);
    if (col_pos[c] >= 0) {
      dst[static_cast<std::size_t>(col_pos[c])] = 1;
      continue;
    }
    const auto src = rr.reduced.row(static_cast<std::size_t>(pivot_row[c]));
    for (std::size_t pos = 0; pos < rk; ++pos) dst[pos] = fld.neg(src[nonpivot_cols[pos]]);
  }

  // Monomials outside the candidate set: u = X_i w with w non-standard.
  const auto div = ctx.divisor_table(k);
  const std::uint64_t p = fld.modulus();
  std::vector<std::uint64_t> acc(rk);
  for (std::size_t u = 0; u < dim; ++u) {
    if (done[u]) continue;
    std::size_t i = 0;
    while (div[u * v + i] == RingContext::kNone) ++i;
    const auto w = prev.nf.row(static_cast<std::size_t>(div[u * v + i]));
    std::fill(acc.begin(), acc.end(), 0);
    std::uint64_t pending = 0;
    for (std::size_t b = 0; b < r1; ++b) {
      const std::uint64_t x = w[b];
      if (x == 0) continue;
      if (pending == fld.lazy_budget()) {
        for (auto& a : acc) a %= p;
        pending = 0;
      }
      const auto src = out->nf.row(t1[i * dim1 + prev.basis[b]]);
      for (std::size_t pos = 0; pos < rk; ++pos) acc[pos] += x * src[pos];
      ++pending;
    }
    auto dst = out->nf.row(u);
    for (std::size_t pos = 0; pos < rk; ++pos) dst[pos] = static_cast<Elem>(acc[pos] % p);
  }
  degrees_[k] = std::move(out);
}

std::size_t JacobianRing::quotient_dim(unsigned k) const { return degree(k).basis.size(); }

std::span<const std::uint32_t> JacobianRing::quotient_basis(unsigned k) const { return degree(k).basis; }

const Matrix& JacobianRing::normal_forms(unsigned k) const { return degree(k).nf; }

std::int32_t JacobianRing::basis_position(unsigned k, std::size_t u) const { return degree(k).position.at(u); }

Subspace JacobianRing::ideal_piece(unsigned k) const {
  const std::size_t dim = context().dim(k);
  if (k + 1 < d()) return Subspace(field(), dim);
  const Degree& dg = degree(k);
  Matrix basis;
  basis = Matrix(dim - dg.basis.size(), dim);
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t u = 0; u < dim; ++u) {
    if (dg.position[u] >= 0) continue;
    auto row = basis.row(r++);
    row[u] = 1;
    for (std::size_t pos = 0; pos < dg.basis.size(); ++pos) row[dg.basis[pos]] = field().neg(dg.nf(u, pos));
    pivots.push_back(u);
  }
  return Subspace::from_rref(field(), std::move(basis), std::move(pivots));
}

RElem JacobianRing::reduce(unsigned k, std::span<const Elem> coeffs) const {
  const Degree& dg = degree(k);
  if (coeffs.size() != dg.nf.rows()) fail(ErrorCode::DimensionMismatch, "reduce: coefficient length");
  const std::uint64_t p = field().modulus();
  const std::size_t rk = dg.basis.size();
  std::vector<std::uint64_t> acc(rk, 0);
  std::uint64_t pending = 0;
  for (std::size_t u = 0; u < coeffs.size(); ++u) {
    const std::uint64_t x = coeffs[u];
    if (x == 0) continue;
    if (pending == field().lazy_budget()) {
      for (auto& a : acc) a %= p;
      pending = 0;
    }
    const auto src = dg.nf.row(u);
    for (std::size_t pos = 0; pos < rk; ++pos) acc[pos] += x * src[pos];
    ++pending;
  }
  RElem out{k, std::vector<Elem>(rk)};
  for (std::size_t pos = 0; pos < rk; ++pos) out.coords[pos] = static_cast<Elem>(acc[pos] % p);
  return out;
}

RElem JacobianRing::reduce(const HomPoly& v) const {
  if (!v.context().compatible(context())) fail(ErrorCode::ContextMismatch, "reduce: polynomial from another ring");
  return reduce(v.degree(), v.coeffs());
}

HomPoly JacobianRing::lift(const RElem& e) const {
  const Degree& dg = degree(e.degree);
  if (e.coords.size() != dg.basis.size()) fail(ErrorCode::DimensionMismatch, "lift: coordinate length");
  HomPoly out(context_ptr(), e.degree);
  for (std::size_t pos = 0; pos < dg.basis.size(); ++pos) out.coeffs_mut()[dg.basis[pos]] = e.coords[pos];
  return out;
}

RElem JacobianRing::basis_element(unsigned k, std::size_t pos) const {
  RElem e = zero(k);
  e.coords.at(pos) = 1;
  return e;
}

RElem JacobianRing::zero(unsigned k) const { return RElem{k, std::vector<Elem>(quotient_dim(k), 0)}; }

RElem JacobianRing::multiply(const RElem& a, const RElem& b) const {
  const unsigned k = a.degree + b.degree;
  check_cap(k);
  const Degree& da = degree(a.degree);
  const Degree& db = degree(b.degree);
  const Degree& dc = degree(k);
  if (a.coords.size() != da.basis.size() || b.coords.size() != db.basis.size())
    fail(ErrorCode::DimensionMismatch, "multiply: coordinate length");
  const auto table = context().product_table(a.degree, b.degree);
  const std::size_t nb = context().dim(b.degree);
  const std::uint64_t p = field().modulus();
  const std::size_t rc = dc.basis.size();
  std::vector<std::uint64_t> acc(rc, 0);
  std::uint64_t pending = 0;
  for (std::size_t i = 0; i < da.basis.size(); ++i) {
    if (a.coords[i] == 0) continue;
    for (std::size_t j = 0; j < db.basis.size(); ++j) {
      if (b.coords[j] == 0) continue;
      if (pending == field().lazy_budget()) {
        for (auto& x : acc) x %= p;
        pending = 0;
      }
      const std::uint64_t c = field().mul(a.coords[i], b.coords[j]);
      const auto src = dc.nf.row(table[da.basis[i] * nb + db.basis[j]]);
      for (std::size_t pos = 0; pos < rc; ++pos) acc[pos] += c * src[pos];
      ++pending;
    }
  }
  RElem out{k, std::vector<Elem>(rc)};
  for (std::size_t pos = 0; pos < rc; ++pos) out.coords[pos] = static_cast<Elem>(acc[pos] % p);
  return out;
}

Matrix JacobianRing::multiplication_map(const HomPoly& g, unsigned k) const {
  if (!g.context().compatible(context())) fail(ErrorCode::ContextMismatch, "multiplication_map: foreign polynomial");
  const unsigned target = k + g.degree();
  check_cap(target);
  const Degree& dk = degree(k);
  const Degree& dt = degree(target);
  const auto table = context().product_table(g.degree(), k);
  const std::size_t nk = context().dim(k);
  const std::uint64_t p = field().modulus();
  const std::size_t rt = dt.basis.size();
  Matrix m(rt, dk.basis.size());
  std::vector<std::uint64_t> acc(rt);
  for (std::size_t j = 0; j < dk.basis.size(); ++j) {
    std::fill(acc.begin(), acc.end(), 0);
    std::uint64_t pending = 0;
    for (std::size_t i = 0; i < g.coeffs().size(); ++i) {
      const std::uint64_t c = g.coeff(i);
      if (c == 0) continue;
      if (pending == field().lazy_budget()) {
        for (auto& x : acc) x %= p;
        pending = 0;
      }
      const auto src = dt.nf.row(table[i * nk + dk.basis[j]]);
      for (std::size_t pos = 0; pos < rt; ++pos) acc[pos] += c * src[pos];
      ++pending;
    }
    for (std::size_t pos = 0; pos < rt; ++pos) m(pos, j) = static_cast<Elem>(acc[pos] % p);
  }
  return m;
}

Matrix JacobianRing::multiplication_map(const RElem& a, unsigned k) const {
  const std::size_t rk = quotient_dim(k);
  Matrix m(quotient_dim(a.degree + k), rk);
  for (std::size_t j = 0; j < rk; ++j) {
    const RElem col = multiply(a, basis_element(k, j));
    for (std::size_t r = 0; r < col.coords.size(); ++r) m(r, j) = col.coords[r];
  }
  return m;
}

Matrix JacobianRing::reduction_matrix(unsigned k) const { return linalg::transpose(normal_forms(k)); }

linalg::BilinearMap JacobianRing::multiplication_tensor(unsigned a, unsigned b) const {
  check_cap(a + b);
  const Degree& da = degree(a);
  const Degree& db = degree(b);
  const Degree& dc = degree(a + b);
  const auto table = context().product_table(a, b);
  const std::size_t nb = context().dim(b);
  linalg::BilinearMap mu(da.basis.size(), db.basis.size(), dc.basis.size());
  for (std::size_t i = 0; i < da.basis.size(); ++i)
    for (std::size_t j = 0; j < db.basis.size(); ++j) {
      const auto src = dc.nf.row(table[da.basis[i] * nb + db.basis[j]]);
      auto dst = mu.product(i, j);
      std::copy(src.begin(), src.end(), dst.begin());
    }
  return mu;
}

const SmoothCertificate& JacobianRing::certificate() const {
  std::call_once(cert_once_, [this] {
    const unsigned top = socle_degree() + 1;
    const unsigned upto = std::min(top, max_degree_);
    SmoothCertificate c;
    c.complete = upto == top;
    c.checked_up_to = upto;
    c.smooth = true;
    for (unsigned k = 0; k <= upto; ++k) {
      c.dims.push_back(quotient_dim(k));
      c.generic.push_back(generic_hilbert(n(), d(), k));
      if (c.dims.back() != c.generic.back()) c.smooth = false;
    }
    cert_ = std::move(c);
  });
  return cert_;
}

SmoothCertificate smooth_check(const JacobianRing& jr) { return jr.certificate(); }

Matrix macaulay_pairing(const JacobianRing& jr, unsigned k) {
  if (!jr.smooth()) fail(ErrorCode::NotSmooth, "Macaulay pairing needs a smooth certificate");
  const unsigned top = jr.socle_degree();
  if (k > top) fail(ErrorCode::InvalidArgument, "pairing degree above the socle");
  const linalg::BilinearMap mu = jr.multiplication_tensor(k, top - k);
  Matrix m(mu.dim_a(), mu.dim_b());
  for (std::size_t a = 0; a < mu.dim_a(); ++a)
    for (std::size_t b = 0; b < mu.dim_b(); ++b) m(a, b) = mu.at(a, b, 0);
  return m;
}

}  // namespace jacring::jacobian
