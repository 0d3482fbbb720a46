#include "padic/serialization.hpp"

#include <sstream>

namespace padic {

json to_json(Valuation v) {
  if (v.is_infinite()) return "inf";
  return v.value();
}

json to_json(const PadicNumber& x) {
  json j{{"prime", x.prime()}, {"valuation", to_json(x.valuation())}, {"unit_digits", x.unit_digits()}};
  if (x.is_zero() && !x.is_exact_zero()) j["absolute_precision"] = to_json(x.absolute_precision());
  return j;
}

json to_json(const AlgebraElement& x) {
  json comps = json::array();
  for (const auto& c : x.components()) comps.push_back(to_json(c));
  return {{"shape", x.shape().to_string()}, {"size", x.size()}, {"components", comps}};
}

json to_json(const ConvergenceCertificate& cert) {
  json trace = json::array();
  for (const auto& t : cert.trace) trace.push_back({t.n, to_json(t.valuation)});
  return {{"iterations", cert.iterations},
          {"window_length", cert.window_length},
          {"contraction_exponent", to_json(cert.contraction_exponent)},
          {"target", to_json(cert.target)},
          {"guaranteed_valuation", to_json(cert.guaranteed_valuation)},
          {"residual_valuation", to_json(cert.residual_valuation)},
          {"rate_certificate", rate_certificate_holds(cert)},
          {"limit", to_json(cert.limit)},
          {"limit_text", cert.limit.to_string()},
          {"trace", trace}};
}

namespace {

mpz_class parse_integer(const std::string& s, const std::string& whole) {
  mpz_class z;
  if (s.empty() || z.set_str(s, 10) != 0) throw FormatError("not a rational number: \"" + whole + "\"");
  return z;
}

}  // namespace

PadicNumber padic_from_json(const json& j, Prime prime, int digits) {
  if (j.is_number_integer()) return PadicNumber::from_integer(mpz_class(j.get<long>()), prime, digits);
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    const auto slash = s.find('/');
    if (slash == std::string::npos) return PadicNumber::from_integer(parse_integer(s, s), prime, digits);
    return PadicNumber::from_rational(parse_integer(s.substr(0, slash), s),
                                      parse_integer(s.substr(slash + 1), s), prime, digits);
  }
  if (j.is_object()) {
    if (j.contains("prime") && j.at("prime").get<Prime>() != prime) {
      throw FormatError("value over prime " + j.at("prime").dump() + " used with prime " +
                        std::to_string(prime));
    }
    const json& v = j.at("valuation");
    if (v.is_string()) {
      if (v.get<std::string>() != "inf") throw FormatError("valuation must be an integer or \"inf\"");
      if (j.contains("absolute_precision")) {
        return PadicNumber::zero(prime, j.at("absolute_precision").get<std::int64_t>());
      }
      return PadicNumber::zero(prime);
    }
    const auto ds = j.at("unit_digits").get<std::vector<int>>();
    if (ds.empty()) throw FormatError("unit_digits must not be empty");
    mpz_class unit = 0;
    for (auto it = ds.rbegin(); it != ds.rend(); ++it) {
      if (*it < 0 || *it >= prime) throw FormatError("unit digit out of range");
      unit = unit * static_cast<unsigned long>(prime) + *it;
    }
    return PadicNumber::from_unit(prime, v.get<std::int64_t>(), unit,
                                  std::min(digits, static_cast<int>(ds.size())));
  }
  throw FormatError("expected an integer, \"a/b\" string or p-adic object, got " + j.dump());
}

AlgebraElement element_from_json(const json& j, const Shape& shape, Prime prime, int digits) {
  if (!j.is_array()) return AlgebraElement::filled(shape, padic_from_json(j, prime, digits));
  if (j.size() != shape.size) {
    throw FormatError("expected " + std::to_string(shape.size) + " components for " +
                      shape.to_string() + ", got " + std::to_string(j.size()));
  }
  std::vector<PadicNumber> xs;
  for (const auto& c : j) xs.push_back(padic_from_json(c, prime, digits));
  return AlgebraElement::of_shape(shape, std::move(xs));
}

std::string trace_csv(const ConvergenceCertificate& cert) {
  std::ostringstream os;
  os << "n,gap_valuation,limit_distance_valuation\n";
  for (std::size_t i = 0; i < cert.trace.size(); ++i) {
    os << cert.trace[i].n << ',' << cert.trace[i].valuation.to_string() << ',';
    if (i < cert.limit_distance.size()) os << cert.limit_distance[i].valuation.to_string();
    os << '\n';
  }
  return os.str();
}

}  // namespace padic
