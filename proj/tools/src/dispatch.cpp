#include "jacring_cli/dispatch.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

#include "jacring/error.hpp"
#include "jacring/ivhs.hpp"
#include "jacring/jacobian.hpp"
#include "jacring/poly_json.hpp"
#include "jacring/schiffer.hpp"
#include "jacring/torelli.hpp"
#include "jacring_cli/harness.hpp"

#ifndef JACRING_VERSION
#define JACRING_VERSION "0.0.0"
#endif

namespace jacring::cli {

namespace {

using jacobian::JacobianRing;
using linalg::Elem;
using linalg::Matrix;
using linalg::Subspace;
using nlohmann::json;
using poly::HomPoly;

struct RunConfig {
  std::size_t n = 2;
  unsigned d = 3;
  std::uint32_t p = 32003;
  std::uint64_t seed = 1;
  std::optional<unsigned> degree_cap;
  unsigned threads = 1;
  std::uint64_t budget = schiffer::EnumerationOptions{}.budget;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void validate(const RunConfig& c) {
  if (c.n < 1) throw UsageError("--n must be at least 1");
  if (c.d < 2) throw UsageError("--d must be at least 2");
  if (!linalg::is_prime(c.p) || c.p >= (1u << 31)) throw UsageError("--p must be a prime below 2^31");
  if (c.p <= c.d) throw UsageError("--p must exceed --d");
}

void add_ring_options(CLI::App* sub, RunConfig& c) {
  sub->add_option("--n", c.n, "projective dimension")->required();
  sub->add_option("--d", c.d, "degree")->required();
  sub->add_option("--p", c.p, "prime field size")->capture_default_str();
  sub->add_option("--seed", c.seed, "random seed")->capture_default_str();
  sub->add_option("--cap", c.degree_cap, "largest degree computed");
}

HomPoly random_poly(const RunConfig& c) {
  auto ctx = poly::RingContext::create(c.n, c.d, c.p, c.degree_cap);
  std::mt19937_64 rng(c.seed);
  return poly::random_form(ctx, c.d, rng);
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return json::parse(ss.str());
  } catch (const json::exception& e) {
    throw UsageError(path + ": " + e.what());
  }
}

json vec_json(std::span<const Elem> v) { return json(std::vector<Elem>(v.begin(), v.end())); }

json checks_json(const std::vector<schiffer::IndexedCheck>& v, const char* a, const char* b) {
  json out = json::array();
  for (const auto& c : v) {
    json e{{a, c.a}, {"ok", c.ok}};
    if (b) e[b] = c.b;
    out.push_back(e);
  }
  return out;
}

json star_json(const schiffer::StarReport& r) {
  return {{"max_multiple", r.max_multiple},
          {"dim_ok", checks_json(r.dim_ok, "i", "k")},
          {"pair_ok", checks_json(r.pair_ok, "k", nullptr)},
          {"absorb_ok", checks_json(r.absorb_ok, "i", "k")},
          {"add_ok", checks_json(r.add_ok, "k", "l")},
          {"dims_pass", r.dims_pass()},
          {"pairs_pass", r.pairs_pass()},
          {"passed", r.passed()}};
}

json constancy_json(const schiffer::ConstancyReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) checks.push_back({{"t", c.t}, {"k", c.k}, {"equal", c.equal}});
  return {{"checks", checks}, {"passed", r.passed()}};
}

// Each command fills `out` and returns the exit status.
int cmd_hilbert(const RunConfig& c, bool fermat, const std::string& file, json& out) {
  HomPoly f = [&] {
    if (!file.empty()) return poly::from_json(read_json_file(file));
    if (fermat) return poly::fermat(poly::RingContext::create(c.n, c.d, c.p, c.degree_cap));
    return random_poly(c);
  }();
  JacobianRing jr(f, c.degree_cap);
  const unsigned top = std::min(jr.socle_degree(), jr.max_degree());
  std::vector<std::size_t> dims;
  std::vector<std::uint64_t> generic;
  for (unsigned k = 0; k <= top; ++k) {
    dims.push_back(jr.quotient_dim(k));
    generic.push_back(jacobian::generic_hilbert(jr.n(), jr.d(), k));
  }
  const auto& cert = jr.certificate();
  out = {{"n", jr.n()}, {"d", jr.d()}, {"p", jr.field().modulus()}, {"dims", dims}, {"generic", generic},
         {"smooth", cert.smooth}, {"certificate_complete", cert.complete}, {"checked_up_to", cert.checked_up_to}};
  return cert.smooth && dims == std::vector<std::size_t>(generic.begin(), generic.end()) ? 0 : 1;
}

int cmd_symmetrizer(const RunConfig& c, unsigned k, unsigned kp, json& out) {
  if (kp <= k) throw UsageError("--kprime must exceed --k");
  JacobianRing jr(random_poly(c), c.degree_cap);
  if (k + kp > jr.max_degree()) throw UsageError("k + kprime exceeds the degree cap");
  ivhs::SymmetrizerStats stats;
  const auto s = ivhs::symmetrizer(jr.field(), jr.multiplication_tensor(k, kp), &stats);
  const bool hyp = ivhs::symmetrizer_hypotheses(c.n, c.d, k, kp);
  const std::size_t expected = jr.quotient_dim(kp - k);
  const bool emb = s == ivhs::multiplication_embedding(jr, k, kp);
  out = {{"dim", s.dim()},
         {"expected_dim", expected},
         {"hypotheses_hold", hyp},
         {"equals_embedding", emb},
         {"unknowns", stats.unknowns},
         {"constraints_used", stats.constraints_used},
         {"total_constraints", stats.total_constraints}};
  return !hyp || (s.dim() == expected && emb) ? 0 : 1;
}

int cmd_reconstruct(const RunConfig& c, const std::string& mode, json& out) {
  const HomPoly f = random_poly(c);
  const auto& ctx = f.context_ptr();
  JacobianRing jf(f, c.degree_cap);
  const auto plan = torelli::plan_derivation(c.n, c.d);
  const auto pr = ivhs::extract_partial_ring(jf, ivhs::Shape::Ivhs);
  const Subspace jd = jf.ideal_piece(c.d);
  bool match = false;
  json equivariant = nullptr;
  std::size_t kernel_dim = 0;
  if (mode == "none") {
    const auto rs = torelli::reconstruct_ring(pr, plan);
    kernel_dim = rs.kernel_Jd.dim();
    const auto k = torelli::kernel_in_frame(ctx, rs, torelli::input_frames(jf, pr));
    match = k && *k == jd;
  } else if (mode == "full") {
    const auto base = torelli::reconstruct_ring(pr, plan);
    const auto k0 = torelli::kernel_in_frame(ctx, base, torelli::input_frames(jf, pr));
    const auto [spr, w] = ivhs::scramble(pr, c.seed);
    const auto rs = torelli::reconstruct_ring(spr, plan);
    kernel_dim = rs.kernel_Jd.dim();
    const auto k = torelli::kernel_in_frame(ctx, rs, torelli::input_frames(jf, pr, &w));
    match = k && *k == jd;
    equivariant = k && k0 && *k == *k0;
  } else {
    std::mt19937_64 rng(c.seed ^ 0x9e3779b97f4a7c15ULL);
    const Matrix a = linalg::random_invertible(jf.field(), c.n + 1, rng);
    JacobianRing jg(poly::substitute(f, a), c.degree_cap);
    const auto gpr = ivhs::apply_scramble(pr, torelli::gl_witness(jf, jg, pr, a));
    const auto rs = torelli::reconstruct_ring(gpr, plan);
    kernel_dim = rs.kernel_Jd.dim();
    const auto k = torelli::kernel_in_frame(ctx, rs, torelli::input_frames(jg, gpr));
    match = k && *k == jg.ideal_piece(c.d);
    const Subspace moved = linalg::image(poly::substitution_matrix(*ctx, a, c.d), jd);
    equivariant = k && *k == moved && gpr == ivhs::extract_partial_ring(jg, ivhs::Shape::Ivhs);
  }
  out = {{"plan", plan.labels()}, {"scramble", mode}, {"kernel_dim", kernel_dim}, {"match", match},
         {"equivariant", equivariant}};
  return match && (equivariant.is_null() || equivariant.get<bool>()) ? 0 : 1;
}

HomPoly parse_x(const poly::ContextPtr& ctx, const std::string& spec) {
  std::vector<Elem> c;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      c.push_back(ctx->field().from_int(std::stoll(item)));
    } catch (const std::exception&) {
      throw UsageError("--x-coeffs: not an integer: " + item);
    }
  }
  if (c.size() != ctx->nvars()) throw UsageError("--x-coeffs needs n+1 entries");
  if (std::all_of(c.begin(), c.end(), [](Elem e) { return e == 0; })) throw UsageError("--x-coeffs is zero");
  return HomPoly::linear_form(ctx, c);
}

int cmd_schiffer_check(const RunConfig& c, const std::string& xmode, const std::string& xcoeffs,
                       const std::string& phimode, unsigned max_multiple, json& out) {
  const HomPoly f = random_poly(c);
  const auto& ctx = f.context_ptr();
  std::mt19937_64 rng(c.seed + 1);
  HomPoly x = xmode == "given" ? parse_x(ctx, xcoeffs) : [&] {
    std::vector<Elem> v(ctx->nvars());
    for (auto& e : v) e = ctx->field().random(rng);
    if (v[0] == 0) v[0] = 1;
    return HomPoly::linear_form(ctx, v);
  }();
  JacobianRing jr(f, c.degree_cap);
  jacobian::RElem phi = jr.reduce(poly::power(x, c.d));
  if (phimode == "random")
    for (auto& e : phi.coords) e = jr.field().random(rng);
  const auto rep = schiffer::condition_star(jr, x, phi, max_multiple);
  out = star_json(rep);
  out["x"] = vec_json(x.coeffs());
  out["phi"] = phimode;
  return rep.passed() ? 0 : 1;
}

int cmd_schiffer_detect(const RunConfig& c, const std::string& file, unsigned max_multiple, json& out) {
  const json in = read_json_file(file);
  if (!in.contains("f") || !in.contains("phi")) throw UsageError(file + ": expected keys \"f\" and \"phi\"");
  const HomPoly f = poly::from_json(in["f"]);
  const HomPoly phi = poly::from_json(in["phi"], f.context_ptr());
  if (phi.degree() != f.degree()) throw UsageError(file + ": phi must have the degree of f");
  JacobianRing jr(f);
  schiffer::EnumerationOptions opts;
  opts.threads = c.threads;
  opts.budget = c.budget;
  const auto det = schiffer::detect_schiffer(jr, jr.reduce(phi), opts, max_multiple);
  out = {{"found", det.has_value()}, {"x", nullptr}, {"report", nullptr}};
  if (det) {
    out["x"] = vec_json(det->root.x.coeffs());
    out["lambda"] = det->root.lambda;
    out["report"] = star_json(det->report);
    out["constancy"] = constancy_json(det->constancy);
    // The i-range of the ideal chains is a free parameter; report each choice.
    json by_range = json::object();
    for (unsigned m = 1; m <= 3; ++m)
      by_range[std::to_string(m)] = schiffer::condition_star(jr, det->root.x, jr.reduce(phi), m).passed();
    out["passed_by_max_multiple"] = by_range;
  }
  return det ? 0 : 1;
}

int cmd_closeness(const RunConfig& c, const std::string& gmode, json& out) {
  const HomPoly f = random_poly(c);
  const auto& ctx = f.context_ptr();
  std::mt19937_64 rng(c.seed + 1);
  HomPoly g(ctx, c.d);
  if (gmode == "random") {
    g = poly::random_form(ctx, c.d, rng);
  } else {
    std::vector<Elem> v(ctx->nvars());
    for (auto& e : v) e = ctx->field().random(rng);
    if (v[0] == 0) v[0] = 1;
    g = f + poly::power(HomPoly::linear_form(ctx, v), c.d);
  }
  const std::size_t dim = torelli::jacobian_closeness(f, g);
  const bool ok = gmode == "random" ? dim == 2 * c.n + 2 : dim <= c.n + 2;
  out = {{"g", gmode}, {"closeness", dim}, {"schiffer_bound", c.n + 2}, {"independent", 2 * c.n + 2}};
  return ok ? 0 : 1;
}

int cmd_verify(const std::vector<int>& ids, bool timings, unsigned threads, std::uint64_t seed, std::ostream& out) {
  HarnessConfig cfg;
  cfg.threads = threads;
  cfg.seed = seed;
  std::vector<int> run = ids;
  if (run.empty())
    for (int i = 1; i <= kCriterionCount; ++i) run.push_back(i);
  std::vector<int> failed;
  for (int id : run) {
    const auto r = run_criterion(id, cfg);
    json line = to_json(r, timings);
    line["version"] = JACRING_VERSION;
    out << line.dump() << "\n" << std::flush;
    if (!r.passed) failed.push_back(id);
  }
  json summary{{"version", JACRING_VERSION}, {"profile", "desk"}, {"criteria", run}, {"failed", failed},
               {"passed", failed.empty()}};
  out << summary.dump() << "\n";
  return failed.empty() ? 0 : 1;
}

}  // namespace

unsigned default_threads() {
  if (const char* env = std::getenv("JACRING_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Jacobian rings, symmetrizers and Schiffer variations over F_p", "jacring"};
  app.set_version_flag("--version", JACRING_VERSION);
  app.require_subcommand(1);

  RunConfig cfg;
  cfg.threads = default_threads();
  app.add_option("--threads", cfg.threads, "worker threads (default: JACRING_THREADS or all cores)");

  auto* hilbert = app.add_subcommand("hilbert", "Hilbert function of R_f and the smoothness certificate");
  bool fermat = false;
  std::string poly_file;
  add_ring_options(hilbert, cfg);
  auto* fermat_flag = hilbert->add_flag("--fermat", fermat, "use the Fermat polynomial");
  hilbert->add_option("--f", poly_file, "polynomial JSON file")->excludes(fermat_flag);

  auto* sym = app.add_subcommand("symmetrizer", "symmetrizer of R^k x R^k' -> R^{k+k'}");
  unsigned k = 1, kp = 2;
  add_ring_options(sym, cfg);
  sym->add_option("--k", k)->required();
  sym->add_option("--kprime", kp)->required();

  auto* rec = app.add_subcommand("reconstruct", "recover J_f^d from the partial ring");
  std::string scramble = "none";
  add_ring_options(rec, cfg);
  rec->add_option("--scramble", scramble)->check(CLI::IsMember({"gl", "full", "none"}))->capture_default_str();

  auto* check = app.add_subcommand("schiffer-check", "ideal-chain conditions for phi = [x^d]");
  std::string xmode = "random", xcoeffs, phimode = "power";
  unsigned max_multiple = 3;
  add_ring_options(check, cfg);
  check->add_option("--x", xmode)->check(CLI::IsMember({"random", "given"}))->capture_default_str();
  check->add_option("--x-coeffs", xcoeffs, "comma separated coefficients of x, with --x given");
  check->add_option("--phi", phimode, "phi = [x^d] or a random element")
      ->check(CLI::IsMember({"power", "random"}))
      ->capture_default_str();
  check->add_option("--max-multiple", max_multiple, "largest i in degrees i d")
      ->check(CLI::Range(1u, 3u))
      ->capture_default_str();

  auto* detect = app.add_subcommand("schiffer-detect", "look for x with [x^d] proportional to phi");
  std::string phi_file;
  unsigned detect_multiple = 3;
  detect->add_option("--phi", phi_file, "JSON file {\"f\": polynomial, \"phi\": polynomial}")->required();
  detect->add_option("--budget", cfg.budget, "largest number of points visited")->capture_default_str();
  detect->add_option("--max-multiple", detect_multiple)->check(CLI::Range(1u, 3u))->capture_default_str();

  auto* close = app.add_subcommand("closeness", "dim J_f^{d-1} + J_g^{d-1}");
  std::string gmode = "schiffer";
  add_ring_options(close, cfg);
  close->add_option("--g", gmode, "g = f + x^d or an independent random form")
      ->check(CLI::IsMember({"schiffer", "random"}))
      ->capture_default_str();

  auto* verify = app.add_subcommand("verify", "run the acceptance suite");
  std::string profile = "desk";
  std::vector<int> ids;
  bool timings = false;
  verify->add_option("--profile", profile)->check(CLI::IsMember({"desk"}))->capture_default_str();
  verify->add_option("--criterion", ids, "run only these criteria")->check(CLI::Range(1, kCriterionCount));
  verify->add_flag("--timings", timings, "add wall-clock seconds to each line");
  verify->add_option("--seed", cfg.seed)->capture_default_str();

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  json result;
  int status = 0;
  try {
    if (*verify) return cmd_verify(ids, timings, cfg.threads, cfg.seed, out);
    if (*detect) {
      status = cmd_schiffer_detect(cfg, phi_file, detect_multiple, result);
    } else {
      validate(cfg);
      if (*hilbert)
        status = cmd_hilbert(cfg, fermat, poly_file, result);
      else if (*sym)
        status = cmd_symmetrizer(cfg, k, kp, result);
      else if (*rec)
        status = cmd_reconstruct(cfg, scramble, result);
      else if (*check)
        status = cmd_schiffer_check(cfg, xmode, xcoeffs, phimode, max_multiple, result);
      else
        status = cmd_closeness(cfg, gmode, result);
    }
  } catch (const UsageError& e) {
    err << "jacring: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    result = {{"error", std::string(to_string(e.code()))}, {"message", e.what()}};
    status = 1;
  }
  result["version"] = JACRING_VERSION;
  out << result.dump() << "\n";
  return status;
}

}  // namespace jacring::cli
