#include "jacring/torelli.hpp"

#include <algorithm>
#include <map>

#include "jacring/error.hpp"

namespace jacring::torelli {

using jacobian::JacobianRing;
using linalg::Elem;
using linalg::PrimeField;

std::string PlanStep::label(const std::vector<PlanPiece>& pieces) const {
  switch (kind) {
    case StepKind::Symmetrize: {
      std::string out = "sym(" + std::to_string(pieces[low].degree) + "," + std::to_string(pieces[high].degree) +
                        ")->" + std::to_string(pieces[result].degree);
      const auto same = std::count_if(pieces.begin(), pieces.begin() + result,
                                       [&](const PlanPiece& p) { return p.degree == pieces[result].degree; });
      return out + std::string(same, '\'');
    }
    case StepKind::Cohere:
      return "cohere";
    case StepKind::Chain:
      return "chain->" + std::to_string(pieces[high].degree);
  }
  return {};
}

std::vector<std::string> DerivationPlan::labels() const {
  std::vector<std::string> out;
  for (const auto& s : steps) out.push_back(s.label(pieces));
  return out;
}

namespace {

std::size_t generic_dim(std::size_t n, unsigned d, int k) {
  return k < 0 ? 0 : static_cast<std::size_t>(jacobian::generic_hilbert(n, d, static_cast<unsigned>(k)));
}

// Products fired to reach `top` starting from `start`, or empty if unreachable.
std::vector<std::size_t> chain_products(const DerivationPlan& plan, std::size_t start, std::size_t top) {
  std::vector<bool> known(plan.pieces.size(), false);
  known[start] = true;
  std::vector<std::size_t> fired;
  for (bool changed = true; changed && !known[top];) {
    changed = false;
    for (std::size_t i = 0; i < plan.products.size() && !known[top]; ++i) {
      const auto& pr = plan.products[i];
      if (known[pr.left] && known[pr.right] && !known[pr.target]) {
        known[pr.target] = true;
        fired.push_back(i);
        changed = true;
      }
    }
  }
  if (!known[top]) fired.clear();
  return fired;
}

}  // namespace

DerivationPlan plan_derivation(std::size_t n, unsigned d, ivhs::Shape shape) {
  if (d < 3) fail(ErrorCode::InvalidArgument, "planner needs d >= 3");
  DerivationPlan plan;
  plan.n = n;
  plan.d = d;
  const int top = static_cast<int>(jacobian::socle_degree(n, d));
  const int di = static_cast<int>(d);
  std::vector<int> degs = shape == ivhs::Shape::Ivhs ? ivhs::ivhs_degrees(n, d) : std::vector<int>{di, 2 * di};
  for (int k : degs) plan.pieces.push_back({k, generic_dim(n, d, k), false, 0, 0});
  auto id_of = [&](int k) {
    for (std::size_t i = 0; i < plan.pieces.size(); ++i)
      if (plan.pieces[i].degree == k) return i;
    return plan.pieces.size();
  };
  plan.top = id_of(di);
  if (shape == ivhs::Shape::DegreeTriple) {
    plan.products.push_back({0, 0, 1});
  } else {
    for (int i = 1;; ++i) {
      const int e = i * di - static_cast<int>(n + 1);
      if (e + di > top) break;
      if (e >= 0) plan.products.push_back({plan.top, id_of(e), id_of(e + di)});
    }
  }

  std::vector<std::pair<std::size_t, std::size_t>> used;  // (product, low piece)
  std::optional<std::size_t> v1, v1_copy;
  bool cohered = false;
  for (;;) {
    if (cohered) {
      auto chain = chain_products(plan, *v1, plan.top);
      if (!chain.empty()) {
        PlanStep st;
        st.kind = StepKind::Chain;
        st.high = plan.top;
        st.chain = std::move(chain);
        plan.steps.push_back(std::move(st));
        return plan;
      }
    }
    struct Candidate {
      std::size_t product, low, high, hom_dim;
    };
    std::optional<Candidate> best;
    for (std::size_t pi = 0; pi < plan.products.size(); ++pi) {
      const auto& pr = plan.products[pi];
      for (auto [low, high] : {std::pair{pr.left, pr.right}, std::pair{pr.right, pr.left}}) {
        const int k = plan.pieces[low].degree, kp = plan.pieces[high].degree;
        if (kp <= k || k < 1) continue;
        if (std::find(used.begin(), used.end(), std::pair{pi, low}) != used.end()) continue;
        if (!ivhs::symmetrizer_hypotheses(n, d, static_cast<unsigned>(k), static_cast<unsigned>(kp))) continue;
        const int delta = kp - k;
        if (id_of(delta) != plan.pieces.size()) {
          // A second degree-1 piece is only useful as Hom(V1, R^2).
          if (!(delta == 1 && v1 && !v1_copy && low == *v1)) continue;
        }
        const std::size_t hd = plan.pieces[low].dim * plan.pieces[high].dim;
        if (hd == 0) continue;
        if (!best || hd < best->hom_dim) best = Candidate{pi, low, high, hd};
      }
    }
    if (!best) fail(ErrorCode::PlanNotFound, "no admissible symmetrizer step reaches degree 1");
    used.emplace_back(best->product, best->low);
    const int delta = plan.pieces[best->high].degree - plan.pieces[best->low].degree;
    const std::size_t rid = plan.pieces.size();
    plan.pieces.push_back({delta, generic_dim(n, d, delta), true, best->low, best->high});
    plan.products.push_back({rid, best->low, best->high});
    PlanStep st;
    st.kind = StepKind::Symmetrize;
    st.product = best->product;
    st.low = best->low;
    st.high = best->high;
    st.result = rid;
    st.hom_dim = best->hom_dim;
    plan.steps.push_back(st);
    if (delta == 1) {
      if (!v1) {
        v1 = rid;
      } else {
        v1_copy = rid;
        const std::size_t r2 = best->high;
        PlanStep c;
        c.kind = StepKind::Cohere;
        c.low = *v1;
        c.high = *v1_copy;
        c.result = plan.products.size();
        plan.products.push_back({*v1, *v1, r2});
        plan.steps.push_back(c);
        plan.v1 = *v1;
        plan.v1_copy = *v1_copy;
        cohered = true;
      }
    }
  }
}

namespace {

BilinearMap eval_product(const Subspace& homs, std::size_t dim_a, std::size_t dim_b) {
  BilinearMap m(homs.dim(), dim_a, dim_b);
  std::copy(homs.basis().data().begin(), homs.basis().data().end(), m.data().begin());
  return m;
}

// Variables of a monomial listed with multiplicity, in increasing order.
std::vector<std::size_t> unpack(std::span<const poly::Exponent> e) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < e.size(); ++i) out.insert(out.end(), e[i], i);
  return out;
}

std::size_t pack(const poly::RingContext& ctx, std::span<const std::size_t> vars) {
  std::vector<poly::Exponent> e(ctx.nvars(), 0);
  for (auto v : vars) ++e[v];
  return ctx.index_of(e);
}

}  // namespace

RecoveredStructure reconstruct_ring(const ivhs::PartialRing& pr, const DerivationPlan& plan) {
  const PrimeField& f = pr.field();
  if (pr.n() != plan.n || pr.d() != plan.d) fail(ErrorCode::InvalidArgument, "plan is for another (n, d)");
  const std::size_t ninputs = pr.pieces().size();
  for (std::size_t i = 0; i < plan.pieces.size() && !plan.pieces[i].derived; ++i) {
    if (i >= ninputs || pr.pieces()[i].degree != plan.pieces[i].degree)
      fail(ErrorCode::InvalidArgument, "partial ring pieces do not match the plan");
    if (pr.pieces()[i].dim != plan.pieces[i].dim)
      fail(ErrorCode::StepHypothesisFailed, "piece of degree " + std::to_string(plan.pieces[i].degree) +
                                                " does not have the generic dimension");
  }
  RecoveredStructure rs;
  rs.plan = plan;
  rs.pieces.resize(plan.pieces.size());
  rs.products.resize(plan.products.size());
  for (const auto& m : pr.multiplications()) {
    auto it = std::find_if(plan.products.begin(), plan.products.end(), [&](const PlanProduct& p) {
      return p.left == m.left && p.right == m.right && p.target == m.target;
    });
    if (it != plan.products.end()) rs.products[static_cast<std::size_t>(it - plan.products.begin())] = m.map;
  }
  auto dim = [&](std::size_t id) { return plan.pieces[id].dim; };

  for (const auto& st : plan.steps) {
    switch (st.kind) {
      case StepKind::Symmetrize: {
        const auto& pp = plan.products[st.product];
        const BilinearMap& stored = rs.products[st.product];
        if (stored.data().empty()) fail(ErrorCode::InvalidArgument, "partial ring lacks a multiplication the plan uses");
        const BilinearMap mu = pp.left == st.low ? stored : stored.swapped();
        Subspace s = ivhs::symmetrizer(f, mu);
        if (s.dim() != dim(st.result))
          fail(ErrorCode::StepHypothesisFailed, st.label(plan.pieces) + " produced dimension " +
                                                    std::to_string(s.dim()) + ", expected " +
                                                    std::to_string(dim(st.result)));
        // The product id created alongside the piece is the one right after.
        const auto pid = static_cast<std::size_t>(
            std::find_if(plan.products.begin(), plan.products.end(),
                         [&](const PlanProduct& p) { return p.left == st.result; }) -
            plan.products.begin());
        rs.products[pid] = eval_product(s, dim(st.low), dim(st.high));
        rs.pieces[st.result].homs = std::move(s);
        break;
      }
      case StepKind::Cohere: {
        const std::size_t a = st.low, b = st.high;
        const std::size_t eval_id = static_cast<std::size_t>(
            std::find_if(plan.products.begin(), plan.products.end(),
                         [&](const PlanProduct& p) { return p.left == b; }) -
            plan.products.begin());
        // mult'(u, w) = w(u) on V1 x V1'.
        const BilinearMap mu = rs.products[eval_id].swapped();
        Subspace s = ivhs::symmetrizer(f, mu);
        if (s.dim() != 1)
          fail(ErrorCode::CoherenceFailed,
               "degree-1 identification space has dimension " + std::to_string(s.dim()));
        rs.coherence = ivhs::unflatten(s.basis().row(0), dim(a), dim(b));
        if (!linalg::is_invertible(f, rs.coherence))
          fail(ErrorCode::CoherenceFailed, "degree-1 identification is not invertible");
        // V1 x V1 -> R^2, (u, v) -> iota(u)(v).
        const BilinearMap& ev = rs.products[eval_id];
        const std::size_t c = ev.dim_c();
        BilinearMap m(dim(a), dim(a), c);
        for (std::size_t u = 0; u < dim(a); ++u)
          for (std::size_t w = 0; w < dim(b); ++w) {
            const Elem co = rs.coherence(w, u);
            if (co == 0) continue;
            for (std::size_t v = 0; v < dim(a); ++v) {
              const auto src = ev.product(w, v);
              auto dst = m.product(u, v);
              for (std::size_t t = 0; t < c; ++t) dst[t] = f.add(dst[t], f.mul(co, src[t]));
            }
          }
        rs.products[st.result] = std::move(m);
        break;
      }
      case StepKind::Chain: {
        const std::size_t nv = dim(plan.v1);
        if (nv != plan.n + 1) fail(ErrorCode::StepHypothesisFailed, "degree-1 piece has the wrong dimension");
        rs.sym_ctx = poly::RingContext::create(plan.n, plan.d, f.modulus());
        const auto& ctx = *rs.sym_ctx;
        // E[id]: column m = image of monomial m of degree deg(id) in piece id.
        std::map<std::size_t, Matrix> e;
        e[plan.v1] = Matrix::identity(nv);
        for (auto pid : st.chain) {
          const auto& pp = plan.products[pid];
          const BilinearMap& mu = rs.products[pid];
          const unsigned da = static_cast<unsigned>(plan.pieces[pp.left].degree);
          const unsigned db = static_cast<unsigned>(plan.pieces[pp.right].degree);
          const unsigned dc = da + db;
          const Matrix& ea = e.at(pp.left);
          const Matrix& eb = e.at(pp.right);
          const std::size_t cols = ctx.dim(dc);
          Matrix out(dim(pp.target), cols);
          auto column = [&](const Matrix& m, std::size_t j) {
            std::vector<Elem> v(m.rows());
            for (std::size_t r = 0; r < m.rows(); ++r) v[r] = m(r, j);
            return v;
          };
          for (std::size_t mono = 0; mono < cols; ++mono) {
            const auto vars = unpack(ctx.monomials(dc).exponents(mono));
            const std::span<const std::size_t> all(vars);
            // First split takes the smallest variables for the left factor,
            // the second takes the largest.
            const auto l1 = pack(ctx, all.first(da)), r1 = pack(ctx, all.subspan(da));
            const auto l2 = pack(ctx, all.last(da)), r2 = pack(ctx, all.first(db));
            const auto v1 = mu.apply(f, column(ea, l1), column(eb, r1));
            const auto v2 = mu.apply(f, column(ea, l2), column(eb, r2));
            if (v1 != v2) fail(ErrorCode::CoherenceFailed, "products disagree across splittings");
            for (std::size_t r = 0; r < v1.size(); ++r) out(r, mono) = v1[r];
          }
          e[pp.target] = std::move(out);
        }
        rs.top_map = e.at(plan.top);
        if (linalg::rank(f, rs.top_map) != dim(plan.top))
          fail(ErrorCode::StepHypothesisFailed, "Sym^d of the degree-1 piece does not map onto the degree-d piece");
        rs.kernel_Jd = linalg::kernel(f, rs.top_map);
        break;
      }
    }
  }
  if (!rs.sym_ctx) fail(ErrorCode::InvalidArgument, "plan has no chain step");
  return rs;
}

std::vector<Matrix> input_frames(const JacobianRing& jr, const ivhs::PartialRing& pr, const ivhs::ScrambleWitness* w) {
  if (w && w->transforms.size() != pr.pieces().size()) fail(ErrorCode::DimensionMismatch, "witness size");
  std::vector<Matrix> out;
  for (std::size_t i = 0; i < pr.pieces().size(); ++i) {
    const unsigned k = static_cast<unsigned>(pr.pieces()[i].degree);
    if (jr.quotient_dim(k) != pr.pieces()[i].dim) fail(ErrorCode::DimensionMismatch, "frame: piece dimension");
    Matrix fr = linalg::transpose(jr.normal_forms(k));
    if (w) fr = linalg::multiply(jr.field(), w->transforms[i], fr);
    out.push_back(std::move(fr));
  }
  return out;
}

namespace {

// L with F L = 1 for a surjective F.
Matrix right_inverse(const PrimeField& f, const Matrix& fr) {
  const auto rr = linalg::rref_rank(f, fr);
  if (rr.rank != fr.rows()) fail(ErrorCode::InvalidArgument, "frame is not onto");
  Matrix sub(fr.rows(), fr.rows());
  for (std::size_t r = 0; r < fr.rows(); ++r)
    for (std::size_t j = 0; j < rr.pivots.size(); ++j) sub(r, j) = fr(r, rr.pivots[j]);
  const Matrix inv = linalg::inverse(f, sub);
  Matrix out(fr.cols(), fr.rows());
  for (std::size_t j = 0; j < rr.pivots.size(); ++j)
    for (std::size_t c = 0; c < fr.rows(); ++c) out(rr.pivots[j], c) = inv(j, c);
  return out;
}

}  // namespace

std::optional<Subspace> kernel_in_frame(const poly::ContextPtr& ctx, const RecoveredStructure& rs,
                                        const std::vector<Matrix>& frames) {
  const auto& plan = rs.plan;
  const PrimeField& f = ctx->field();
  std::vector<Matrix> fr(plan.pieces.size());
  std::size_t inputs = 0;
  while (inputs < plan.pieces.size() && !plan.pieces[inputs].derived) ++inputs;
  if (frames.size() != inputs) fail(ErrorCode::DimensionMismatch, "one frame per input piece");
  for (std::size_t i = 0; i < inputs; ++i) fr[i] = frames[i];
  for (std::size_t id = inputs; id < plan.pieces.size(); ++id) {
    const auto& pc = plan.pieces[id];
    const Subspace& homs = rs.pieces[id].homs;
    if (homs.ambient_dim() == 0 && pc.dim > 0) return std::nullopt;
    const unsigned da = static_cast<unsigned>(plan.pieces[pc.domain].degree);
    const unsigned k = static_cast<unsigned>(pc.degree);
    const Matrix lift = right_inverse(f, fr[pc.domain]);
    Matrix out(pc.dim, ctx->dim(k));
    for (std::size_t m = 0; m < ctx->dim(k); ++m) {
      poly::HomPoly mono(ctx, k);
      mono.coeffs_mut()[m] = 1;
      const Matrix h = linalg::multiply(
          f, linalg::multiply(f, fr[pc.codomain], poly::multiplication_matrix(mono, da)), lift);
      const auto flat = ivhs::flatten(h);
      if (!homs.contains(flat)) return std::nullopt;
      const auto c = homs.coordinates(flat);
      for (std::size_t r = 0; r < c.size(); ++r) out(r, m) = c[r];
    }
    fr[id] = std::move(out);
  }
  const Matrix& t = fr[plan.v1];
  if (!linalg::is_invertible(f, t)) return std::nullopt;
  // Basis vector r of V1 is the linear form with X-coordinates column r of t^{-1}.
  const Matrix a = linalg::transpose(linalg::inverse(f, t));
  const Matrix sub = poly::substitution_matrix(*ctx, a, plan.d);
  Matrix rows(0, ctx->dim(plan.d));
  for (std::size_t r = 0; r < rs.kernel_Jd.dim(); ++r) rows.append_row(linalg::apply(f, sub, rs.kernel_Jd.basis().row(r)));
  return Subspace::span(f, rows);
}

Matrix induced_map(const JacobianRing& jf, const JacobianRing& jg, const Matrix& a, unsigned k) {
  if (!jf.context().compatible(jg.context())) fail(ErrorCode::ContextMismatch, "induced map across rings");
  const Matrix sub = poly::substitution_matrix(jf.context(), a, k);
  const auto basis = jf.quotient_basis(k);
  const Matrix& nf = jg.normal_forms(k);
  Matrix out(jg.quotient_dim(k), basis.size());
  const PrimeField& f = jf.field();
  for (std::size_t pos = 0; pos < basis.size(); ++pos)
    for (std::size_t v = 0; v < sub.rows(); ++v) {
      const Elem c = sub(v, basis[pos]);
      if (c == 0) continue;
      for (std::size_t r = 0; r < out.rows(); ++r) out(r, pos) = f.add(out(r, pos), f.mul(c, nf(v, r)));
    }
  return out;
}

ivhs::ScrambleWitness gl_witness(const JacobianRing& jf, const JacobianRing& jg, const ivhs::PartialRing& pr,
                                 const Matrix& a) {
  ivhs::ScrambleWitness w;
  for (const auto& p : pr.pieces()) w.transforms.push_back(induced_map(jf, jg, a, static_cast<unsigned>(p.degree)));
  return w;
}

Subspace colon_down(const poly::ContextPtr& ctx, const Subspace& jd, unsigned d) {
  if (d == 0) fail(ErrorCode::DegreeZero, "colon_down needs d >= 1");
  if (jd.ambient_dim() != ctx->dim(d)) fail(ErrorCode::DimensionMismatch, "colon_down: ambient is not S^d");
  std::vector<Matrix> acts;
  for (std::size_t i = 0; i < ctx->nvars(); ++i)
    acts.push_back(poly::multiplication_matrix(poly::HomPoly::variable(ctx, i), d - 1));
  return linalg::transporter(jd, acts, ctx->dim(d - 1));
}

Subspace integrate_gradient(const poly::ContextPtr& ctx, const Subspace& w, unsigned d) {
  if (d == 0) fail(ErrorCode::DegreeZero, "integrate_gradient needs d >= 1");
  if (w.ambient_dim() != ctx->dim(d - 1)) fail(ErrorCode::DimensionMismatch, "integrate_gradient: ambient is not S^{d-1}");
  std::vector<Matrix> acts;
  for (std::size_t i = 0; i < ctx->nvars(); ++i) acts.push_back(poly::derivative_matrix(*ctx, i, d));
  return linalg::transporter(w, acts, ctx->dim(d));
}

Subspace gradient_span(const poly::HomPoly& f) {
  const auto parts = poly::gradient(f);
  Matrix rows(0, f.context().dim(f.degree() - 1));
  for (const auto& g : parts) rows.append_row(g.coeffs());
  return Subspace::span(f.field(), rows);
}

std::size_t jacobian_closeness(const poly::HomPoly& f, const poly::HomPoly& g) {
  if (!f.context().compatible(g.context())) fail(ErrorCode::ContextMismatch, "closeness across rings");
  if (f.degree() != g.degree()) fail(ErrorCode::DegreeMismatch, "closeness needs equal degrees");
  return linalg::sum(gradient_span(f), gradient_span(g)).dim();
}

}  // namespace jacring::torelli
