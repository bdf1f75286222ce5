#include "jacring_cli/harness.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <random>
#include <string>

#include "jacring/error.hpp"
#include "jacring/ivhs.hpp"
#include "jacring/jacobian.hpp"
#include "jacring/schiffer.hpp"
#include "jacring/torelli.hpp"

namespace jacring::cli {

namespace {

using jacobian::JacobianRing;
using jacobian::RElem;
using linalg::Elem;
using linalg::Matrix;
using linalg::Subspace;
using nlohmann::json;
using poly::HomPoly;

struct Case {
  unsigned d;
  std::size_t n;
  std::string label() const { return std::to_string(d) + "," + std::to_string(n); }
};

const std::vector<Case> kCases{{3, 2}, {4, 2}, {4, 3}, {5, 2}, {4, 4}, {5, 4}};

std::mt19937_64 rng_for(const HarnessConfig& cfg, int criterion, std::uint64_t a, std::uint64_t b = 0) {
  std::seed_seq seq{cfg.seed, static_cast<std::uint64_t>(criterion), a, b};
  return std::mt19937_64(seq);
}

HomPoly random_linear(const poly::ContextPtr& ctx, std::mt19937_64& rng) {
  std::vector<Elem> c(ctx->nvars());
  do
    for (auto& v : c) v = ctx->field().random(rng);
  while (std::all_of(c.begin(), c.end(), [](Elem e) { return e == 0; }));
  return HomPoly::linear_form(ctx, c);
}

RElem random_elem(const JacobianRing& jr, unsigned k, std::mt19937_64& rng) {
  RElem e{k, std::vector<Elem>(jr.quotient_dim(k))};
  for (auto& c : e.coords) c = jr.field().random(rng);
  return e;
}

bool proportional(const HomPoly& a, const HomPoly& b) {
  Matrix m(0, a.coeffs().size());
  m.append_row(a.coeffs());
  m.append_row(b.coeffs());
  return linalg::rank(a.field(), m) == 1;
}

std::vector<std::string> failed_checks(const std::vector<schiffer::IndexedCheck>& v) {
  std::vector<std::string> out;
  for (const auto& c : v)
    if (!c.ok) out.push_back(std::to_string(c.a) + "," + std::to_string(c.b));
  return out;
}

// 1
bool hilbert_exactness(const HarnessConfig& cfg, json& out) {
  bool ok = true;
  for (std::size_t ci = 0; ci < kCases.size(); ++ci) {
    const auto c = kCases[ci];
    auto ctx = poly::RingContext::create(c.n, c.d);
    std::size_t checked = 0, mismatches = 0, smooth = 0;
    unsigned top = 0;
    for (std::uint64_t s = 0; s < 10; ++s) {
      auto rng = rng_for(cfg, 1, ci, s);
      JacobianRing jr(poly::random_form(ctx, c.d, rng));
      top = std::min(jr.socle_degree() + 1, jr.max_degree());
      for (unsigned k = 0; k <= top; ++k, ++checked)
        mismatches += jr.quotient_dim(k) != jacobian::generic_hilbert(c.n, c.d, k);
      smooth += jr.smooth();
    }
    out["cases"][c.label()] = {{"seeds", 10}, {"max_k", top}, {"checks", checked}, {"mismatches", mismatches},
                               {"smooth", smooth}};
    ok = ok && mismatches == 0;
  }
  return ok;
}

// 2
bool macaulay_duality(const HarnessConfig& cfg, json& out) {
  bool ok = true;
  for (std::size_t ci = 0; ci < kCases.size(); ++ci) {
    const auto c = kCases[ci];
    auto ctx = poly::RingContext::create(c.n, c.d);
    std::size_t checked = 0, deficient = 0;
    for (std::uint64_t s = 0; s < 3; ++s) {
      auto rng = rng_for(cfg, 2, ci, s);
      JacobianRing jr(poly::random_form(ctx, c.d, rng));
      for (unsigned k = 0; k <= jr.socle_degree(); ++k, ++checked)
        deficient += linalg::rank(jr.field(), jacobian::macaulay_pairing(jr, k)) != jr.quotient_dim(k);
    }
    out["cases"][c.label()] = {{"seeds", 3}, {"pairings", checked}, {"rank_deficient", deficient}};
    ok = ok && deficient == 0;
  }
  return ok;
}

// 3
bool injectivity(const HarnessConfig& cfg, json& out) {
  std::size_t probes = 0, failures = 0, beyond = 0, beyond_bad = 0;
  for (std::size_t ci = 0; ci < kCases.size(); ++ci) {
    const auto c = kCases[ci];
    auto ctx = poly::RingContext::create(c.n, c.d);
    for (int which = 0; which < 2; ++which) {
      auto rng = rng_for(cfg, 3, ci, which);
      JacobianRing jr(which == 0 ? poly::fermat(ctx) : poly::random_form(ctx, c.d, rng));
      if (!jr.smooth()) {
        ++failures;
        continue;
      }
      const HomPoly x = random_linear(ctx, rng);
      const unsigned top = jr.socle_degree();
      for (unsigned k = 0; k <= top; ++k)
        for (unsigned l = 1; k + l <= top; ++l) {
          const auto r = linalg::rank(jr.field(), jr.multiplication_map(poly::power(x, l), k));
          if (2 * k + l <= top) {
            ++probes;
            failures += r != jr.quotient_dim(k);
          } else if (jr.quotient_dim(k) > jr.quotient_dim(k + l)) {
            ++beyond;
            beyond_bad += r > jr.quotient_dim(k + l);
          }
        }
    }
  }
  out = {{"probes", probes}, {"failures", failures}, {"dimension_bound_probes", beyond},
         {"dimension_bound_failures", beyond_bad}};
  return probes >= 50 && failures == 0 && beyond_bad == 0;
}

// 4
bool symmetrizer_dims(const HarnessConfig& cfg, json& out) {
  bool ok = true;
  for (const Case c : {Case{5, 2}, Case{4, 4}}) {
    auto ctx = poly::RingContext::create(c.n, c.d);
    auto rng = rng_for(cfg, 4, c.d, c.n);
    JacobianRing jr(poly::random_form(ctx, c.d, rng));
    const unsigned top = jr.socle_degree();
    json pairs = json::array();
    for (unsigned k = 1; k <= top; ++k)
      for (unsigned kp = k + 1; kp <= top; ++kp) {
        if (!ivhs::symmetrizer_hypotheses(c.n, c.d, k, kp)) continue;
        const auto s = ivhs::symmetrizer(jr.field(), jr.multiplication_tensor(k, kp));
        const bool dim_ok = s.dim() == jr.quotient_dim(kp - k);
        const bool emb_ok = s == ivhs::multiplication_embedding(jr, k, kp);
        pairs.push_back({{"k", k}, {"kprime", kp}, {"dim", s.dim()}, {"expected", jr.quotient_dim(kp - k)},
                         {"equals_embedding", emb_ok}});
        ok = ok && dim_ok && emb_ok;
      }
    out["cases"][c.label()] = pairs;
  }
  return ok;
}

// 5
bool donagi_round_trip(const HarnessConfig& cfg, json& out) {
  bool ok = true;
  for (const Case c : {Case{5, 2}, Case{4, 4}}) {
    const auto plan = torelli::plan_derivation(c.n, c.d);
    auto ctx = poly::RingContext::create(c.n, c.d);
    std::size_t plain = 0, gl = 0, span_f = 0;
    for (std::uint64_t s = 0; s < 5; ++s) {
      auto rng = rng_for(cfg, 5, c.d * 10 + c.n, s);
      const HomPoly f = poly::random_form(ctx, c.d, rng);
      JacobianRing jf(f);
      const auto pr = ivhs::extract_partial_ring(jf, ivhs::Shape::Ivhs);
      const auto rs = torelli::reconstruct_ring(pr, plan);
      const auto k = torelli::kernel_in_frame(ctx, rs, torelli::input_frames(jf, pr));
      const Subspace jd = jf.ideal_piece(c.d);
      if (k && *k == jd) {
        ++plain;
        const auto ig = torelli::integrate_gradient(ctx, torelli::colon_down(ctx, *k, c.d), c.d);
        span_f += ig.dim() == 1 && ig.contains(f.coeffs());
      }

      const Matrix a = linalg::random_invertible(jf.field(), c.n + 1, rng);
      JacobianRing jg(poly::substitute(f, a));
      const auto gpr = ivhs::apply_scramble(pr, torelli::gl_witness(jf, jg, pr, a));
      const auto grs = torelli::reconstruct_ring(gpr, plan);
      const auto gk = torelli::kernel_in_frame(ctx, grs, torelli::input_frames(jg, gpr));
      const Subspace moved = linalg::image(poly::substitution_matrix(*ctx, a, c.d), jd);
      gl += gk && *gk == moved && gpr == ivhs::extract_partial_ring(jg, ivhs::Shape::Ivhs);
    }
    out["cases"][c.label()] = {{"seeds", 5}, {"unscrambled_match", plain}, {"gl_match", gl}, {"span_f", span_f}};
    ok = ok && plain == 5 && gl == 5 && span_f == 5;
  }
  return ok;
}

// 6
bool divisibility_obstruction(const HarnessConfig&, json& out) {
  bool ok = true;
  for (const Case c : {Case{5, 4}, Case{4, 3}}) {
    std::string got = "plan found";
    try {
      torelli::plan_derivation(c.n, c.d);
    } catch (const Error& e) {
      got = std::string(to_string(e.code()));
    }
    out["cases"][c.label()] = got;
    ok = ok && got == "PlanNotFound";
  }
  return ok;
}

// 7
bool condition_star(const HarnessConfig& cfg, json& out) {
  auto ctx = poly::RingContext::create(4, 5);
  std::size_t power_pass = 0, random_fail = 0;
  json seeds = json::array();
  for (std::uint64_t s = 0; s < 5; ++s) {
    auto rng = rng_for(cfg, 7, s);
    JacobianRing jr(poly::random_form(ctx, 5, rng));
    const HomPoly x = random_linear(ctx, rng);
    const auto rep = schiffer::condition_star(jr, x, jr.reduce(poly::power(x, 5)));
    const auto rnd = schiffer::condition_star(jr, x, random_elem(jr, 5, rng));
    power_pass += rep.passed();
    random_fail += !rnd.pairs_pass();
    seeds.push_back({{"power_passed", rep.passed()},
                     {"power_failed_dims", failed_checks(rep.dim_ok)},
                     {"power_failed_pairs", failed_checks(rep.pair_ok)},
                     {"power_failed_absorb", failed_checks(rep.absorb_ok)},
                     {"power_failed_add", failed_checks(rep.add_ok)},
                     {"random_pairs_pass", rnd.pairs_pass()}});
  }
  out = {{"power_reports_passed", power_pass}, {"random_pair_failures", random_fail}, {"seeds", seeds}};
  return power_pass == 5 && random_fail >= 4;
}

// 8
bool quotient_constancy(const HarnessConfig& cfg, json& out) {
  bool ok = true;
  for (std::size_t ci = 0; ci < kCases.size(); ++ci) {
    const auto c = kCases[ci];
    auto ctx = poly::RingContext::create(c.n, c.d);
    std::size_t constant = 0, broken = 0;
    for (std::uint64_t s = 0; s < 5; ++s) {
      auto rng = rng_for(cfg, 8, ci, s);
      JacobianRing jr(poly::random_form(ctx, c.d, rng));
      const HomPoly x = random_linear(ctx, rng);
      constant += schiffer::quotient_constancy(jr, x, {0, 1, 2, 5}).passed();
      const HomPoly g = poly::random_form(ctx, c.d, rng);
      broken += !schiffer::family_constancy(jr, g, x, {1}, {c.d}).passed();
    }
    // J^d + x^{d-1} S^1 fills S^d at (3,2), so no direction can break it there.
    const bool break_expected = !(c.d == 3 && c.n == 2);
    out["cases"][c.label()] = {{"seeds", 5}, {"constant", constant}, {"broken_by_random_direction", broken},
                               {"break_tested", break_expected}};
    ok = ok && constant == 5 && (!break_expected || broken >= 4);
  }
  return ok;
}

// 9
bool schiffer_closeness(const HarnessConfig& cfg, json& out) {
  bool ok = true;
  for (std::size_t ci = 0; ci < kCases.size(); ++ci) {
    const auto c = kCases[ci];
    auto ctx = poly::RingContext::create(c.n, c.d);
    auto rng = rng_for(cfg, 9, ci);
    const HomPoly f = poly::random_form(ctx, c.d, rng);
    std::size_t at_most = 0, equal = 0;
    for (int s = 0; s < 5; ++s) {
      const HomPoly x = random_linear(ctx, rng);
      const auto v = torelli::jacobian_closeness(f, f + poly::power(x, c.d));
      at_most += v <= c.n + 2;
      equal += v == c.n + 2;
    }
    out["cases"][c.label()] = {{"samples", 5}, {"at_most_n_plus_2", at_most}, {"equal_n_plus_2", equal}};
    ok = ok && at_most == 5 && equal >= 4;
  }
  auto ctx = poly::RingContext::create(4, 5);
  std::size_t independent = 0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    auto rng = rng_for(cfg, 9, 100, s);
    const HomPoly f = poly::random_form(ctx, 5, rng), g = poly::random_form(ctx, 5, rng);
    independent += torelli::jacobian_closeness(f, g) == 10;
  }
  out["independent_5_4"] = {{"seeds", 10}, {"equal_2n_plus_2", independent}};
  return ok && independent == 10;
}

// 10
bool detection(const HarnessConfig& cfg, json& out) {
  bool ok = true;
  schiffer::EnumerationOptions opts;
  opts.threads = cfg.threads;
  for (const Case c : {Case{4, 2}, Case{5, 2}}) {
    auto ctx = poly::RingContext::create(c.n, c.d, 211);
    auto rng = rng_for(cfg, 10, c.d);
    JacobianRing jr(poly::random_form(ctx, c.d, rng));
    std::size_t recovered = 0, rejected = 0, reports = 0, constant = 0;
    for (int s = 0; s < 20; ++s) {
      const HomPoly x = random_linear(ctx, rng);
      const auto det = schiffer::detect_schiffer(jr, jr.reduce(poly::power(x, c.d)), opts);
      if (det && proportional(det->root.x, x)) {
        ++recovered;
        reports += det->report.passed();
        constant += det->constancy.passed();
      }
      rejected += !schiffer::detect_schiffer(jr, random_elem(jr, c.d, rng), opts).has_value();
    }
    out["cases"][c.label()] = {{"p", 211},         {"smooth", jr.smooth()},      {"recovered", recovered},
                               {"random_rejected", rejected}, {"star_reports_passed", reports},
                               {"constancy_passed", constant}};
    ok = ok && recovered == 20 && rejected == 20;
  }
  return ok;
}

// 11
bool veronese_transport(const HarnessConfig& cfg, json& out) {
  // Power recognition enumerates P^3(F_p); p = 101 keeps that at about a million points.
  auto ctx = poly::RingContext::create(3, 4, 101);
  auto rng = rng_for(cfg, 11, 0);
  const HomPoly f = poly::random_form(ctx, 4, rng);
  JacobianRing jf(f);
  schiffer::EnumerationOptions opts;
  opts.threads = cfg.threads;
  std::size_t related = 0, kernels = 0, unrelated_fail = 0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Matrix a = linalg::random_invertible(jf.field(), 4, rng);
    JacobianRing jg(poly::substitute(f, a));
    const auto rep = schiffer::veronese_transport_check(jf, jg, a, 3, s + 1);
    related += rep.passed();
    kernels += rep.kernel_ok;
    const Matrix w = linalg::random_matrix(jf.field(), jf.quotient_dim(4), jg.quotient_dim(4), rng);
    unrelated_fail += !schiffer::power_transport(jf, jg, w, 2, s + 1, opts);
  }
  out = {{"p", 101},
         {"smooth", jf.smooth()},
         {"related_passed", related},
         {"kernel_equal", kernels},
         {"random_maps_failing_power_transport", unrelated_fail}};
  return related == 10 && unrelated_fail == 10;
}

// 12
bool singular_specialization(const HarnessConfig& cfg, json& out) {
  std::size_t passed = 0;
  json seeds = json::array();
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto r = schiffer::singular_specialization_dims(5, 1, 7, cfg.seed * 100 + s);
    passed += r.passed();
    json degs = json::array();
    for (const auto& d : r.degrees) degs.push_back({d.k, d.dim, d.generic, d.below_bound});
    seeds.push_back({{"dim_z", r.dim_z}, {"last_bounded", r.last_bounded}, {"smooth", r.smooth}, {"degrees", degs}});
  }
  out = {{"passed", passed}, {"seeds", seeds}};
  return passed == 5;
}

// 13
bool module_morphism_containment(const HarnessConfig& cfg, json& out) {
  bool ok = true;
  for (std::size_t ci = 0; ci < kCases.size(); ++ci) {
    const auto c = kCases[ci];
    auto ctx = poly::RingContext::create(c.n, c.d);
    auto rng = rng_for(cfg, 13, ci);
    JacobianRing jr(poly::random_form(ctx, c.d, rng));
    const HomPoly x = random_linear(ctx, rng);
    ivhs::MorphismSpace ms;
    try {
      ms = ivhs::module_morphisms(jr, x);
    } catch (const Error& e) {
      out["cases"][c.label()] = {{"tested", false}, {"reason", std::string(to_string(e.code()))}};
      continue;
    }
    if (ms.quotient_dim == 0) {
      out["cases"][c.label()] = {{"tested", false}, {"reason", "R^d = x R^{d-1}"}};
      continue;
    }
    Matrix ys(0, ms.homs.ambient_dim());
    for (std::size_t i = 0; i <= c.n; ++i)
      ys.append_row(ivhs::multiplication_morphism(jr, x, HomPoly::variable(ctx, i)));
    const auto image = Subspace::span(jr.field(), ys);
    const bool contained = ms.homs.contains(image);
    out["cases"][c.label()] = {{"tested", true},       {"solver_dim", ms.homs.dim()},   {"image_dim", image.dim()},
                               {"contained", contained}, {"source_dim", ms.source_dim}, {"quotient_dim", ms.quotient_dim},
                               {"target_quotient_dim", ms.target_quotient_dim}};
    ok = ok && contained && ms.homs.dim() >= c.n;
  }
  return ok;
}

struct Entry {
  const char* name;
  double limit;
  std::function<bool(const HarnessConfig&, json&)> run;
};

const std::vector<Entry>& entries() {
  static const std::vector<Entry> e{
      {"hilbert_exactness", 120, hilbert_exactness},
      {"macaulay_duality", 120, macaulay_duality},
      {"injectivity", 120, injectivity},
      {"symmetrizer", 60, symmetrizer_dims},
      {"reconstruction_round_trip", 300, donagi_round_trip},
      {"divisibility_obstruction", 10, divisibility_obstruction},
      {"condition_star", 300, condition_star},
      {"quotient_constancy", 120, quotient_constancy},
      {"schiffer_closeness", 60, schiffer_closeness},
      {"detection", 300, detection},
      {"veronese_transport", 120, veronese_transport},
      {"singular_specialization", 180, singular_specialization},
      {"module_morphism_containment", 120, module_morphism_containment},
  };
  return e;
}

const Entry& entry(int id) {
  if (id < 1 || id > kCriterionCount) fail(ErrorCode::InvalidArgument, "criterion id out of range");
  return entries()[static_cast<std::size_t>(id - 1)];
}

}  // namespace

std::string criterion_name(int id) { return entry(id).name; }
double criterion_limit(int id) { return entry(id).limit; }

CriterionResult run_criterion(int id, const HarnessConfig& cfg) {
  const Entry& e = entry(id);
  CriterionResult r;
  r.id = id;
  r.name = e.name;
  r.limit_seconds = e.limit;
  r.details = json::object();
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = false;
  try {
    ok = e.run(cfg, r.details);
  } catch (const Error& err) {
    r.details["error"] = err.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.within_time_limit = r.seconds < e.limit;
  r.passed = ok && r.within_time_limit;
  return r;
}

nlohmann::json to_json(const CriterionResult& r, bool with_timing) {
  json j{{"criterion", r.id}, {"name", r.name}, {"passed", r.passed}, {"within_time_limit", r.within_time_limit},
         {"details", r.details}};
  if (with_timing) j["seconds"] = r.seconds;
  return j;
}

}  // namespace jacring::cli
