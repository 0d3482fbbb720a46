#pragma once

#include <string>

#include <json.hpp>

#include "padic/recurrence.hpp"

namespace padic {

using json = nlohmann::json;

/// Integer valuation, or the string "inf".
json to_json(Valuation v);
/// {"prime", "valuation", "unit_digits"}; an inexact zero also carries "absolute_precision".
json to_json(const PadicNumber& x);
/// {"shape", "size", "components": [...]}.
json to_json(const AlgebraElement& x);
/// Certificate with the trace as [[n, gap_valuation], ...].
json to_json(const ConvergenceCertificate& cert);

/// Accepts an integer, a rational string "a/b", or the object form of to_json.
PadicNumber padic_from_json(const json& j, Prime prime, int digits);
/// A single value (filled into every component) or an array of component values.
AlgebraElement element_from_json(const json& j, const Shape& shape, Prime prime, int digits);

/// "n,gap_valuation,limit_distance_valuation" rows.
std::string trace_csv(const ConvergenceCertificate& cert);

}  // namespace padic
