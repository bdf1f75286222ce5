#include "jacring/ivhs.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "jacring/error.hpp"

namespace jacring::ivhs {

using jacobian::JacobianRing;

std::size_t PartialRing::add_piece(Piece piece) {
  if (piece_of_degree(piece.degree)) fail(ErrorCode::InvalidArgument, "duplicate piece degree");
  if (!piece.provenance.empty() && piece.provenance.size() != piece.dim)
    fail(ErrorCode::DimensionMismatch, "provenance length");
  pieces_.push_back(std::move(piece));
  return pieces_.size() - 1;
}

std::size_t PartialRing::add_multiplication(std::size_t left, std::size_t right, std::size_t target,
                                            BilinearMap map) {
  if (left >= pieces_.size() || right >= pieces_.size() || target >= pieces_.size())
    fail(ErrorCode::InvalidArgument, "multiplication refers to a missing piece");
  if (pieces_[left].degree + pieces_[right].degree != pieces_[target].degree)
    fail(ErrorCode::DegreeMismatch, "multiplication degrees do not add up");
  if (map.dim_a() != pieces_[left].dim || map.dim_b() != pieces_[right].dim || map.dim_c() != pieces_[target].dim)
    fail(ErrorCode::DimensionMismatch, "multiplication tensor shape");
  mults_.push_back({left, right, target, std::move(map)});
  return mults_.size() - 1;
}

std::optional<std::size_t> PartialRing::piece_of_degree(int degree) const {
  for (std::size_t i = 0; i < pieces_.size(); ++i)
    if (pieces_[i].degree == degree) return i;
  return std::nullopt;
}

std::vector<int> PartialRing::degrees() const {
  std::vector<int> out;
  for (const auto& p : pieces_) out.push_back(p.degree);
  return out;
}

bool PartialRing::operator==(const PartialRing& o) const {
  if (!(field_ == o.field_) || n_ != o.n_ || d_ != o.d_ || pieces_.size() != o.pieces_.size() ||
      mults_.size() != o.mults_.size())
    return false;
  for (std::size_t i = 0; i < pieces_.size(); ++i)
    if (pieces_[i].degree != o.pieces_[i].degree || pieces_[i].dim != o.pieces_[i].dim) return false;
  for (std::size_t i = 0; i < mults_.size(); ++i) {
    const auto &a = mults_[i], &b = o.mults_[i];
    if (a.left != b.left || a.right != b.right || a.target != b.target || !(a.map == b.map)) return false;
  }
  return true;
}

std::vector<int> ivhs_degrees(std::size_t n, unsigned d) {
  const int top = static_cast<int>(jacobian::socle_degree(n, d));
  std::set<int> degs{static_cast<int>(d)};
  for (int i = 1;; ++i) {
    const int k = i * static_cast<int>(d) - static_cast<int>(n + 1);
    if (k > top) break;
    if (k >= 0) degs.insert(k);
  }
  return {degs.begin(), degs.end()};
}

PartialRing extract_partial_ring(const JacobianRing& jr, Shape shape) {
  const unsigned d = jr.d();
  const int top = static_cast<int>(jr.socle_degree());
  if (shape == Shape::Ivhs && !jr.smooth()) fail(ErrorCode::NotSmooth, "ivhs data needs a smooth f");
  PartialRing pr(jr.field(), jr.n(), d);
  auto add = [&](int k) {
    const auto basis = jr.quotient_basis(static_cast<unsigned>(k));
    if (basis.empty()) fail(ErrorCode::InvalidArgument, "piece of degree " + std::to_string(k) + " vanishes");
    return pr.add_piece({k, basis.size(), {basis.begin(), basis.end()}});
  };
  if (shape == Shape::DegreeTriple) {
    const auto a = add(static_cast<int>(d));
    const auto b = add(2 * static_cast<int>(d));
    pr.add_multiplication(a, a, b, jr.multiplication_tensor(d, d));
    return pr;
  }
  for (int k : ivhs_degrees(jr.n(), d)) add(k);
  const std::size_t pd = *pr.piece_of_degree(static_cast<int>(d));
  for (int i = 1;; ++i) {
    const int e = i * static_cast<int>(d) - static_cast<int>(jr.n() + 1);
    if (e + static_cast<int>(d) > top) break;
    if (e < 0) continue;
    pr.add_multiplication(pd, *pr.piece_of_degree(e), *pr.piece_of_degree(e + static_cast<int>(d)),
                          jr.multiplication_tensor(d, static_cast<unsigned>(e)));
  }
  return pr;
}

ScrambleWitness identity_witness(const PartialRing& pr) {
  ScrambleWitness w;
  for (const auto& p : pr.pieces()) w.transforms.push_back(Matrix::identity(p.dim));
  return w;
}

ScrambleWitness inverse(const PrimeField& f, const ScrambleWitness& w) {
  ScrambleWitness out;
  for (const auto& g : w.transforms) out.transforms.push_back(linalg::inverse(f, g));
  return out;
}

BilinearMap transform(const PrimeField& f, const BilinearMap& mu, const Matrix& p_a, const Matrix& p_b,
                      const Matrix& g_c) {
  const std::size_t A = mu.dim_a(), B = mu.dim_b(), C = mu.dim_c();
  if (p_a.rows() != A || p_b.rows() != B || g_c.cols() != C)
    fail(ErrorCode::DimensionMismatch, "transform: coordinate change shapes");
  const std::size_t A2 = p_a.cols(), B2 = p_b.cols(), C2 = g_c.rows();
  // View mu as an (A*B) x C matrix and change each mode in turn.
  Matrix m(A * B, C, mu.data());
  Matrix mc = linalg::multiply(f, m, linalg::transpose(g_c));  // (A*B) x C2
  // Mode b: for each a, (B x C2) -> (B2 x C2).
  const Matrix pbt = linalg::transpose(p_b);
  Matrix mb(A * B2, C2);
  for (std::size_t a = 0; a < A; ++a) {
    Matrix slab(B, C2, std::vector<Elem>(mc.data().begin() + a * B * C2, mc.data().begin() + (a + 1) * B * C2));
    Matrix out = linalg::multiply(f, pbt, slab);
    std::copy(out.data().begin(), out.data().end(), mb.data().begin() + a * B2 * C2);
  }
  // Mode a: (A x (B2*C2)) -> (A2 x (B2*C2)).
  Matrix ma_in(A, B2 * C2, std::move(mb.data()));
  Matrix ma = linalg::multiply(f, linalg::transpose(p_a), ma_in);
  BilinearMap res(A2, B2, C2);
  res.data() = std::move(ma.data());
  return res;
}

PartialRing apply_scramble(const PartialRing& pr, const ScrambleWitness& w) {
  if (w.transforms.size() != pr.pieces().size()) fail(ErrorCode::DimensionMismatch, "witness size");
  const PrimeField& f = pr.field();
  std::vector<Matrix> inv;
  for (std::size_t i = 0; i < pr.pieces().size(); ++i) {
    if (w.transforms[i].rows() != pr.pieces()[i].dim || w.transforms[i].cols() != pr.pieces()[i].dim)
      fail(ErrorCode::DimensionMismatch, "witness matrix shape");
    inv.push_back(linalg::inverse(f, w.transforms[i]));
  }
  PartialRing out(f, pr.n(), pr.d());
  for (const auto& p : pr.pieces()) out.add_piece({p.degree, p.dim, {}});
  for (const auto& m : pr.multiplications())
    out.add_multiplication(m.left, m.right, m.target,
                           transform(f, m.map, inv[m.left], inv[m.right], w.transforms[m.target]));
  return out;
}

std::pair<PartialRing, ScrambleWitness> scramble(const PartialRing& pr, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  ScrambleWitness w;
  for (const auto& p : pr.pieces()) w.transforms.push_back(linalg::random_invertible(pr.field(), p.dim, rng));
  return {apply_scramble(pr, w), std::move(w)};
}

namespace {

void append_pair_rows(const BilinearMap& mu, const PrimeField& f, std::size_t i, std::size_t ip, Matrix& rows) {
  const std::size_t B = mu.dim_b(), C = mu.dim_c(), U = mu.dim_a() * B;
  std::vector<Elem> row(U);
  for (std::size_t c = 0; c < C; ++c) {
    std::fill(row.begin(), row.end(), 0);
    for (std::size_t j = 0; j < B; ++j) {
      row[i * B + j] = mu.at(ip, j, c);
      row[ip * B + j] = f.neg(mu.at(i, j, c));
    }
    rows.append_row(row);
  }
}

// Pairs (i, i') whose constraint h violates.
std::vector<std::size_t> violated_pairs(const PrimeField& f, const BilinearMap& mu, std::span<const Elem> h,
                                        const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
  const std::size_t A = mu.dim_a(), B = mu.dim_b(), C = mu.dim_c();
  const std::uint64_t p = f.modulus();
  // prod[i'][i] = mu(a_i', h(a_i))
  std::vector<Elem> prod(A * A * C);
  std::vector<std::uint64_t> acc(C);
  for (std::size_t ip = 0; ip < A; ++ip)
    for (std::size_t i = 0; i < A; ++i) {
      std::fill(acc.begin(), acc.end(), 0);
      std::uint64_t pending = 0;
      for (std::size_t j = 0; j < B; ++j) {
        const std::uint64_t x = h[i * B + j];
        if (x == 0) continue;
        if (pending == f.lazy_budget()) {
          for (auto& a : acc) a %= p;
          pending = 0;
        }
        const auto src = mu.product(ip, j);
        for (std::size_t c = 0; c < C; ++c) acc[c] += x * src[c];
        ++pending;
      }
      for (std::size_t c = 0; c < C; ++c) prod[(ip * A + i) * C + c] = static_cast<Elem>(acc[c] % p);
    }
  std::vector<std::size_t> bad;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto [i, ip] = pairs[k];
    if (!std::equal(prod.begin() + (ip * A + i) * C, prod.begin() + (ip * A + i + 1) * C,
                    prod.begin() + (i * A + ip) * C))
      bad.push_back(k);
  }
  return bad;
}

}  // namespace

bool symmetrizer_holds(const PrimeField& f, const BilinearMap& mu, std::span<const Elem> h) {
  if (h.size() != mu.dim_a() * mu.dim_b()) fail(ErrorCode::DimensionMismatch, "hom vector length");
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < mu.dim_a(); ++i)
    for (std::size_t ip = i + 1; ip < mu.dim_a(); ++ip) pairs.emplace_back(i, ip);
  return violated_pairs(f, mu, h, pairs).empty();
}

Subspace symmetrizer(const PrimeField& f, const BilinearMap& mu, SymmetrizerStats* stats) {
  const std::size_t A = mu.dim_a(), B = mu.dim_b(), C = mu.dim_c(), U = A * B;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < A; ++i)
    for (std::size_t ip = i + 1; ip < A; ++ip) pairs.emplace_back(i, ip);
  SymmetrizerStats st;
  st.unknowns = U;
  st.total_constraints = pairs.size() * C;
  if (pairs.empty() || C == 0) {
    if (stats) *stats = st;
    return Subspace::full(f, U);
  }
  linalg::EchelonBuilder eb(f, U);
  std::vector<bool> used(pairs.size(), false);
  const std::size_t rows_per_batch = std::max<std::size_t>(32, U / 8);
  const std::size_t pairs_per_batch = std::max<std::size_t>(1, (rows_per_batch + C - 1) / C);
  std::size_t cursor = 0, stable = 0;
  Subspace result(f, U);
  bool done = false;
  while (!done) {
    Matrix batch(0, U);
    std::size_t taken = 0;
    while (cursor < pairs.size() && taken < pairs_per_batch) {
      if (!used[cursor]) {
        append_pair_rows(mu, f, pairs[cursor].first, pairs[cursor].second, batch);
        used[cursor] = true;
        ++taken;
      }
      ++cursor;
    }
    if (taken == 0) {
      result = eb.null_space();
      break;
    }
    st.constraints_used += taken * C;
    ++st.batches;
    stable = eb.add_rows(batch) == 0 ? stable + 1 : 0;
    if (stable < 2 || cursor >= pairs.size()) continue;
    // Corank has settled: check the candidate against every constraint.
    Subspace cand = eb.null_space();
    std::set<std::size_t> bad;
    for (std::size_t r = 0; r < cand.dim(); ++r)
      for (auto k : violated_pairs(f, mu, cand.basis().row(r), pairs)) bad.insert(k);
    if (bad.empty()) {
      result = std::move(cand);
      st.early_exit = true;
      done = true;
      break;
    }
    Matrix extra(0, U);
    for (auto k : bad) {
      if (used[k]) continue;
      append_pair_rows(mu, f, pairs[k].first, pairs[k].second, extra);
      used[k] = true;
      st.constraints_used += C;
    }
    eb.add_rows(extra);
    stable = 0;
  }
  if (stats) *stats = st;
  return result;
}

bool symmetrizer_hypotheses(std::size_t n, unsigned d, unsigned k, unsigned kprime) {
  const long top = static_cast<long>(jacobian::socle_degree(n, d));
  const long a = static_cast<long>(k), b = static_cast<long>(kprime);
  return std::max(a, top - b) >= static_cast<long>(d) - 1 && top - a - b > 0;
}

std::vector<Elem> flatten(const Matrix& m) {
  std::vector<Elem> h(m.rows() * m.cols());
  for (std::size_t i = 0; i < m.cols(); ++i)
    for (std::size_t j = 0; j < m.rows(); ++j) h[i * m.rows() + j] = m(j, i);
  return h;
}

Matrix unflatten(std::span<const Elem> h, std::size_t dim_a, std::size_t dim_b) {
  if (h.size() != dim_a * dim_b) fail(ErrorCode::DimensionMismatch, "hom vector length");
  Matrix m(dim_b, dim_a);
  for (std::size_t i = 0; i < dim_a; ++i)
    for (std::size_t j = 0; j < dim_b; ++j) m(j, i) = h[i * dim_b + j];
  return m;
}

Subspace multiplication_embedding(const JacobianRing& jr, unsigned k, unsigned kprime) {
  if (kprime < k) fail(ErrorCode::InvalidArgument, "embedding needs k <= k'");
  const BilinearMap t = jr.multiplication_tensor(kprime - k, k);
  Matrix rows(t.dim_a(), t.dim_b() * t.dim_c());
  for (std::size_t m = 0; m < t.dim_a(); ++m)
    for (std::size_t i = 0; i < t.dim_b(); ++i) {
      const auto src = t.product(m, i);
      std::copy(src.begin(), src.end(), rows.row(m).begin() + i * t.dim_c());
    }
  return Subspace::span(jr.field(), rows);
}

Subspace conjugate(const PrimeField& f, const Subspace& homs, const Matrix& g_a, const Matrix& g_b) {
  const std::size_t A = g_a.rows(), B = g_b.rows();
  if (homs.ambient_dim() != A * B) fail(ErrorCode::DimensionMismatch, "conjugate: hom space size");
  const Matrix ga_inv = linalg::inverse(f, g_a);
  Matrix rows(0, A * B);
  for (std::size_t r = 0; r < homs.dim(); ++r) {
    const Matrix m = unflatten(homs.basis().row(r), A, B);
    rows.append_row(flatten(linalg::multiply(f, linalg::multiply(f, g_b, m), ga_inv)));
  }
  return Subspace::span(f, rows);
}

namespace {

struct QuotientFrame {
  Subspace image;                    // x R^{k-1} inside R^k
  std::vector<std::size_t> comp;     // complement columns
  Matrix q;                          // quotient map
};

QuotientFrame quotient_by_x(const JacobianRing& jr, const poly::HomPoly& x, unsigned k) {
  QuotientFrame fr;
  fr.image = linalg::image(jr.field(), jr.multiplication_map(x, k - 1));
  fr.comp = fr.image.complement_columns();
  fr.q = fr.image.quotient_map();
  return fr;
}

void check_linear_form(const JacobianRing& jr, const poly::HomPoly& x) {
  if (x.degree() != 1) fail(ErrorCode::DegreeMismatch, "x must be a linear form");
  if (!x.context().compatible(jr.context())) fail(ErrorCode::ContextMismatch, "x lives in another ring");
  if (x.is_zero()) fail(ErrorCode::ZeroForm, "x is zero");
}

}  // namespace

std::vector<Elem> multiplication_morphism(const JacobianRing& jr, const poly::HomPoly& x, const poly::HomPoly& y) {
  check_linear_form(jr, x);
  const unsigned d = jr.d();
  const QuotientFrame fr = quotient_by_x(jr, x, d);
  const Matrix my = linalg::multiply(jr.field(), fr.q, jr.multiplication_map(y, d - 1));  // q x r_{d-1}
  return flatten(my);
}

MorphismSpace module_morphisms(const JacobianRing& jr, const poly::HomPoly& x) {
  check_linear_form(jr, x);
  const PrimeField& f = jr.field();
  const unsigned d = jr.d();
  const Matrix mx = jr.multiplication_map(x, d - 1);
  if (linalg::rank(f, mx) != mx.cols()) fail(ErrorCode::NonInjectiveX, "x is a zero divisor on R^{d-1}");

  MorphismSpace out;
  const QuotientFrame fd = quotient_by_x(jr, x, d);
  const QuotientFrame f2 = quotient_by_x(jr, x, 2 * d);
  const std::size_t rs = jr.quotient_dim(d - 1), rd = jr.quotient_dim(d);
  const std::size_t q = fd.comp.size(), q2 = f2.comp.size();
  out.source_dim = rs;
  out.quotient_dim = q;
  out.target_quotient_dim = q2;
  const std::size_t U = rs * q;
  if (q2 == 0 || q == 0) {
    out.homs = Subspace::full(f, U);
    return out;
  }
  // Relations: kernel of R^d (x) R^{d-1} -> R^{2d-1}, index a * rs + b.
  const BilinearMap m1 = jr.multiplication_tensor(d, d - 1);
  Matrix mm(m1.dim_c(), rd * rs);
  for (std::size_t a = 0; a < rd; ++a)
    for (std::size_t b = 0; b < rs; ++b) {
      const auto src = m1.product(a, b);
      for (std::size_t c = 0; c < src.size(); ++c) mm(c, a * rs + b) = src[c];
    }
  const Subspace rel = linalg::kernel(f, mm);
  out.relations = rel.dim();
  // W[a][s] = [A_a * e_{c_s}] in R^{2d} / x R^{2d-1}.
  const BilinearMap m2 = jr.multiplication_tensor(d, d);
  std::vector<std::vector<Elem>> w(rd * q);
  for (std::size_t a = 0; a < rd; ++a)
    for (std::size_t s = 0; s < q; ++s) {
      const auto prod = m2.product(a, fd.comp[s]);
      w[a * q + s] = linalg::apply(f, f2.q, prod);
    }
  Matrix cons(0, U);
  std::vector<Elem> row(U);
  for (std::size_t t = 0; t < rel.dim(); ++t) {
    const auto tv = rel.basis().row(t);
    for (std::size_t o = 0; o < q2; ++o) {
      std::fill(row.begin(), row.end(), 0);
      for (std::size_t a = 0; a < rd; ++a)
        for (std::size_t b = 0; b < rs; ++b) {
          const Elem c = tv[a * rs + b];
          if (c == 0) continue;
          for (std::size_t s = 0; s < q; ++s) {
            const Elem wv = w[a * q + s][o];
            if (wv) row[b * q + s] = f.add(row[b * q + s], f.mul(c, wv));
          }
        }
      cons.append_row(row);
    }
  }
  out.homs = linalg::kernel(f, cons);
  return out;
}

}  // namespace jacring::ivhs
