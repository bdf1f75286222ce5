#include "jacring/poly_json.hpp"

#include <set>

#include "jacring/error.hpp"

namespace jacring::poly {

nlohmann::json to_json(const HomPoly& f) {
  const RingContext& ctx = f.context();
  const auto& mons = ctx.monomials(f.degree());
  nlohmann::json terms = nlohmann::json::array();
  for (std::size_t u = 0; u < mons.size(); ++u) {
    if (f.coeff(u) == 0) continue;
    auto e = mons.exponents(u);
    terms.push_back(nlohmann::json::array({std::vector<unsigned>(e.begin(), e.end()), f.coeff(u)}));
  }
  return {{"n", ctx.n()}, {"d", f.degree()}, {"p", ctx.field().modulus()}, {"terms", terms}};
}

std::string dump(const HomPoly& f) { return to_json(f).dump(); }

namespace {

std::uint64_t read_uint(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number_unsigned())
    fail(ErrorCode::InvalidArgument, std::string("polynomial file: missing or invalid '") + key + "'");
  return j.at(key).get<std::uint64_t>();
}

}  // namespace

HomPoly from_json(const nlohmann::json& j) {
  const auto n = read_uint(j, "n");
  const auto d = read_uint(j, "d");
  const auto p = read_uint(j, "p");
  if (p > 0xffffffffu) fail(ErrorCode::InvalidArgument, "polynomial file: prime too large");
  return from_json(j, RingContext::create(n, static_cast<unsigned>(std::max<std::uint64_t>(d, 1)),
                                          static_cast<std::uint32_t>(p)));
}

HomPoly from_json(const nlohmann::json& j, ContextPtr ctx) {
  if (!j.is_object()) fail(ErrorCode::InvalidArgument, "polynomial file: expected an object");
  const auto n = read_uint(j, "n");
  const auto d = read_uint(j, "d");
  const auto p = read_uint(j, "p");
  if (n != ctx->n() || p != ctx->field().modulus())
    fail(ErrorCode::ContextMismatch, "polynomial file: n or p disagrees with the ring");
  if (!j.contains("terms") || !j.at("terms").is_array()) fail(ErrorCode::InvalidArgument, "polynomial file: 'terms'");
  HomPoly out(ctx, static_cast<unsigned>(d));
  std::set<std::size_t> seen;
  for (const auto& term : j.at("terms")) {
    if (!term.is_array() || term.size() != 2 || !term[0].is_array() || !term[1].is_number_unsigned())
      fail(ErrorCode::InvalidArgument, "polynomial file: malformed term");
    if (term[0].size() != ctx->nvars()) fail(ErrorCode::InvalidArgument, "polynomial file: exponent length");
    std::vector<Exponent> e;
    std::uint64_t total = 0;
    for (const auto& x : term[0]) {
      if (!x.is_number_unsigned()) fail(ErrorCode::InvalidArgument, "polynomial file: exponent");
      const auto v = x.get<std::uint64_t>();
      total += v;
      if (total > d) fail(ErrorCode::DegreeMismatch, "polynomial file: term degree");
      e.push_back(static_cast<Exponent>(v));
    }
    if (total != d) fail(ErrorCode::DegreeMismatch, "polynomial file: term degree");
    const auto c = term[1].get<std::uint64_t>();
    if (c >= p) fail(ErrorCode::InvalidArgument, "polynomial file: coefficient not in [0, p)");
    const std::size_t idx = ctx->index_of(e);
    if (!seen.insert(idx).second) fail(ErrorCode::InvalidArgument, "polynomial file: repeated monomial");
    out.coeffs_mut()[idx] = static_cast<Elem>(c);
  }
  return out;
}

HomPoly parse(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::InvalidArgument, std::string("polynomial file: ") + e.what());
  }
  return from_json(j);
}

}  // namespace jacring::poly
