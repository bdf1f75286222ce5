#pragma once

// Polynomial files: {"n": int, "d": int, "p": int, "terms": [[[e_0..e_n], c], ...]}.
// Terms are written in monomial index order with zero coefficients omitted,
// so writing what was read reproduces the input byte for byte.

#include <nlohmann/json.hpp>
#include <string>

#include "jacring/poly.hpp"

namespace jacring::poly {

nlohmann::json to_json(const HomPoly& f);
std::string dump(const HomPoly& f);

// Builds a fresh context with degree_d = the polynomial degree.
HomPoly from_json(const nlohmann::json& j);
// Reads into an existing ring; n and p must agree with ctx.
HomPoly from_json(const nlohmann::json& j, ContextPtr ctx);
HomPoly parse(const std::string& text);

}  // namespace jacring::poly
