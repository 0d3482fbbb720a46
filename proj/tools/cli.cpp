#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "padic/applications.hpp"
#include "padic/sampling.hpp"
#include "padic/serialization.hpp"
#include "padic/special_fn.hpp"
#include "padic/tree.hpp"

namespace padic::cli {

namespace {

/// Malformed spec or usage; the message names the offending field.
class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

[[noreturn]] void bad_field(const std::string& path, const std::string& what) {
  throw SpecError("field '" + path + "': " + what);
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& path) {
  if (!obj.is_object()) bad_field(path.empty() ? "<root>" : path, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) bad_field(join(path, key), "unknown field");
  }
}

std::int64_t get_int(const json& obj, const std::string& key, const std::string& path,
                     std::int64_t fallback) {
  if (!obj.is_object() || !obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) bad_field(join(path, key), "expected an integer");
  return v.get<std::int64_t>();
}

std::string get_string(const json& obj, const std::string& key, const std::string& path,
                       const std::string& fallback) {
  if (!obj.is_object() || !obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string()) bad_field(join(path, key), "expected a string");
  return v.get<std::string>();
}

bool get_bool(const json& obj, const std::string& key, const std::string& path, bool fallback) {
  if (!obj.is_object() || !obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_boolean()) bad_field(join(path, key), "expected true or false");
  return v.get<bool>();
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) bad_field(join(path, key), "missing");
  return obj.at(key);
}

json load_json(const std::string& source, const std::string& what) {
  const auto first = source.find_first_not_of(" \t\r\n");
  std::string text;
  if (first != std::string::npos && (source[first] == '{' || source[first] == '[')) {
    text = source;
  } else {
    std::ifstream in(source);
    if (!in) throw SpecError("cannot read " + what + " file '" + source + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SpecError("malformed JSON in " + what + ": " + e.what());
  }
}

struct Flags {
  std::optional<Prime> prime;
  std::optional<int> precision;
  std::optional<int> target;
  std::optional<int> max_iter;
  std::uint64_t seed = 0;
  std::string format = "json";
  int max_depth = 12;
  std::string compare_boundary;
};

struct RunConfig {
  Prime prime = 5;
  int precision = kDefaultDigits;
  int target = 40;
  int max_iter = 512;
  std::uint64_t seed = 0;
  std::string format = "json";
};

RunConfig resolve_config(const Flags& flags, const json& spec) {
  RunConfig c;
  c.prime = flags.prime ? *flags.prime : get_int(spec, "prime", "", 5);
  if (c.prime < 2 || !is_prime(c.prime)) bad_field("prime", std::to_string(c.prime) + " is not a prime");
  c.precision = flags.precision ? *flags.precision
                                : static_cast<int>(get_int(spec, "precision", "", kDefaultDigits));
  if (c.precision < 5) bad_field("precision", "must be at least 5 digits");
  const int fallback_target = c.precision >= 44 ? 40 : c.precision - 4;
  c.target = flags.target ? *flags.target : static_cast<int>(get_int(spec, "target", "", fallback_target));
  if (c.target < 1) bad_field("target", "must be >= 1");
  if (c.target + 4 > c.precision) {
    bad_field("target", "target + 4 = " + std::to_string(c.target + 4) + " exceeds precision " +
                            std::to_string(c.precision));
  }
  c.max_iter = flags.max_iter ? *flags.max_iter : static_cast<int>(get_int(spec, "max_iter", "", 512));
  if (c.max_iter < 1) bad_field("max_iter", "must be >= 1");
  c.seed = flags.seed;
  c.format = flags.format;
  return c;
}

// ---- values, shapes, domains ------------------------------------------------

PadicNumber value(const json& j, const RunConfig& c, const std::string& path) {
  try {
    return padic_from_json(j, c.prime, c.precision);
  } catch (const FormatError& e) {
    bad_field(path, e.what());
  } catch (const json::exception& e) {
    bad_field(path, e.what());
  }
}

PadicNumber value_or(const json& obj, const std::string& key, const RunConfig& c,
                     const std::string& path, std::int64_t fallback) {
  if (obj.is_object() && obj.contains(key)) return value(obj.at(key), c, join(path, key));
  return PadicNumber::from_integer(fallback, c.prime, c.precision);
}

AlgebraElement element(const json& j, const Shape& shape, const RunConfig& c, const std::string& path) {
  try {
    return element_from_json(j, shape, c.prime, c.precision);
  } catch (const FormatError& e) {
    bad_field(path, e.what());
  } catch (const json::exception& e) {
    bad_field(path, e.what());
  }
}

DomainSpec parse_domain(const json& obj, const std::string& path, DomainSpec fallback) {
  const std::string d = get_string(obj, "domain", path, "");
  if (d.empty()) return fallback;
  if (d == "unit_ball") return DomainSpec::unit_ball();
  if (d == "unit_sphere") return DomainSpec::unit_sphere();
  if (d == "ep") return DomainSpec::ep();
  bad_field(join(path, "domain"), "expected unit_ball, unit_sphere or ep");
}

Shape parse_shape(const json& obj, const std::string& path) {
  const std::string kind = get_string(obj, "shape", path, "scalar");
  const auto size = get_int(obj, "size", path, 1);
  if (size < 1) bad_field(join(path, "size"), "must be >= 1");
  if (kind == "scalar") return Shape{};
  if (kind == "vector") return Shape{AlgebraKind::kVector, static_cast<std::size_t>(size)};
  if (kind == "seq") return Shape{AlgebraKind::kSeq, static_cast<std::size_t>(size)};
  bad_field(join(path, "shape"), "expected scalar, vector or seq");
}

Valuation parse_k(const json& obj, const std::string& path, std::int64_t fallback) {
  if (obj.is_object() && obj.contains("k") && obj.at("k") == "inf") return Valuation::infinity();
  const auto k = get_int(obj, "k", path, fallback);
  if (k < 0) bad_field(join(path, "k"), "must be >= 0");
  return k;
}

// ---- maps ---------------------------------------------------------------------

struct MapContext {
  const RunConfig& config;
  const json* named = nullptr;
  SelfCheck check;
};

std::vector<Monomial> parse_monomials(const json& j, int arity, const RunConfig& c,
                                      const std::string& path) {
  std::vector<Monomial> out;
  if (j.is_null()) return out;
  if (!j.is_array()) bad_field(path, "expected a list of monomials");
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    check_keys(j[i], {"coefficient", "exponents"}, p);
    const json& e = require(j[i], "exponents", p);
    if (!e.is_array() || e.size() != static_cast<std::size_t>(arity)) {
      bad_field(join(p, "exponents"), "expected " + std::to_string(arity) + " integers");
    }
    std::vector<int> exps;
    for (const auto& x : e) {
      if (!x.is_number_integer() || x.get<int>() < 0) bad_field(join(p, "exponents"), "expected nonnegative integers");
      exps.push_back(x.get<int>());
    }
    out.push_back({exps, value(require(j[i], "coefficient", p), c, join(p, "coefficient"))});
  }
  return out;
}

std::vector<std::vector<PadicNumber>> parse_matrix(const json& j, int m, const RunConfig& c,
                                                   const std::string& path) {
  if (!j.is_array() || j.size() != static_cast<std::size_t>(m)) {
    bad_field(path, "expected " + std::to_string(m) + " rows");
  }
  std::vector<std::vector<PadicNumber>> out;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const std::string p = path + "[" + std::to_string(k) + "]";
    if (!j[k].is_array() || j[k].size() != static_cast<std::size_t>(m)) {
      bad_field(p, "expected " + std::to_string(m) + " entries");
    }
    std::vector<PadicNumber> row;
    for (std::size_t i = 0; i < j[k].size(); ++i) row.push_back(value(j[k][i], c, p + "[" + std::to_string(i) + "]"));
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<PadicNumber> parse_row(const json& j, int m, const RunConfig& c, const std::string& path) {
  if (!j.is_array() || j.size() != static_cast<std::size_t>(m)) {
    bad_field(path, "expected " + std::to_string(m) + " entries");
  }
  std::vector<PadicNumber> row;
  for (std::size_t i = 0; i < j.size(); ++i) row.push_back(value(j[i], c, path + "[" + std::to_string(i) + "]"));
  return row;
}

ContractiveMap build_mobius(const json& params, const MapContext& ctx, const std::string& path) {
  check_keys(params, {"a", "b", "c", "a1", "b1", "c1"}, path);
  const auto& c = ctx.config;
  MobiusParams mp{value_or(params, "a", c, path, 1),  value_or(params, "b", c, path, 1),
                  value_or(params, "c", c, path, 1),  value_or(params, "a1", c, path, 1),
                  value_or(params, "b1", c, path, 1), value_or(params, "c1", c, path, 1 + c.prime)};
  return make_mobius(mp, ctx.check);
}

ContractiveMap build_ratpoly(const json& params, const MapContext& ctx, const std::string& path) {
  check_keys(params, {"arity", "degree", "numerator", "denominator", "C", "C1", "seed"}, path);
  const auto& c = ctx.config;
  const int arity = static_cast<int>(get_int(params, "arity", path, 2));
  if (arity < 1) bad_field(join(path, "arity"), "must be >= 1");
  PadicNumber cc = value_or(params, "C", c, path, 1);
  PadicNumber cc1 = value_or(params, "C1", c, path, 2);
  const bool explicit_terms = params.is_object() && (params.contains("numerator") || params.contains("denominator"));
  if (explicit_terms) {
    RationalPolyParams rp{arity,
                          parse_monomials(params.value("numerator", json()), arity, c, join(path, "numerator")),
                          parse_monomials(params.value("denominator", json()), arity, c, join(path, "denominator")),
                          cc, cc1};
    return make_rational_poly(rp, ctx.check);
  }
  const int degree = static_cast<int>(get_int(params, "degree", path, 2));
  if (degree < 1) bad_field(join(path, "degree"), "must be >= 1");
  const auto seed = static_cast<std::uint64_t>(get_int(params, "seed", path, static_cast<std::int64_t>(c.seed)));
  RationalPolyParams rp = RationalPolyParams::random(c.prime, arity, degree, cc, cc1, seed, c.precision);
  return make_rational_poly(rp, ctx.check);
}

ContractiveMap build_linfrac(const json& params, const MapContext& ctx, const std::string& path) {
  check_keys(params, {"dimension", "a", "b", "a0", "b0", "fill", "seed"}, path);
  const auto& c = ctx.config;
  const int m = static_cast<int>(get_int(params, "dimension", path, 2));
  if (m < 1) bad_field(join(path, "dimension"), "must be >= 1");
  LinearFractionalParams lp;
  if (params.is_object() && params.contains("a")) {
    lp.dimension = m;
    lp.a = parse_matrix(params.at("a"), m, c, join(path, "a"));
    lp.b = parse_matrix(require(params, "b", path), m, c, join(path, "b"));
    lp.a0 = parse_row(require(params, "a0", path), m, c, join(path, "a0"));
    lp.b0 = parse_row(require(params, "b0", path), m, c, join(path, "b0"));
  } else if (params.is_object() && params.contains("fill")) {
    lp = LinearFractionalParams::filled(m, value(params.at("fill"), c, join(path, "fill")));
  } else {
    const auto seed = static_cast<std::uint64_t>(get_int(params, "seed", path, static_cast<std::int64_t>(c.seed)));
    lp = LinearFractionalParams::random(c.prime, m, seed, c.precision);
  }
  return make_linear_fractional(lp, ctx.check);
}

SeqMapParams parse_seq_params(const json& params, const RunConfig& c, const std::string& path,
                              bool preset) {
  const auto length = get_int(params, "length", path, 8);
  if (length < 1) bad_field(join(path, "length"), "must be >= 1");
  const Shape shape{AlgebraKind::kSeq, static_cast<std::size_t>(length)};
  AlgebraElement lambda = params.is_object() && params.contains("lambda")
                              ? element(params.at("lambda"), shape, c, join(path, "lambda"))
                              : AlgebraElement::filled(shape, PadicNumber::from_integer(1, c.prime, c.precision));
  const int shifts = static_cast<int>(get_int(params, "shifts", path, 2));
  const bool explicit_ab = params.is_object() && (params.contains("a") || params.contains("b"));
  if (preset || !explicit_ab) {
    if (explicit_ab) bad_field(path, "give either theta or a and b");
    PadicNumber theta = value_or(params, "theta", c, path, 1 + c.prime);
    return km2009_params(theta, static_cast<std::size_t>(length), lambda, shifts);
  }
  const std::string family = get_string(params, "family", path, "km2009");
  if (family != "km2009") bad_field(join(path, "family"), "only the km2009 family is built in");
  return {static_cast<std::size_t>(length), lambda, value(require(params, "a", path), c, join(path, "a")),
          value(require(params, "b", path), c, join(path, "b")), km2009_family(c.prime), shifts};
}

ContractiveMap build_constant(const json& params, const MapContext& ctx, const std::string& path) {
  check_keys(params, {"value", "arity", "shape", "size", "domain"}, path);
  const Shape shape = parse_shape(params, path);
  const int arity = static_cast<int>(get_int(params, "arity", path, 1));
  if (arity < 1) bad_field(join(path, "arity"), "must be >= 1");
  AlgebraElement v = params.is_object() && params.contains("value")
                         ? element(params.at("value"), shape, ctx.config, join(path, "value"))
                         : AlgebraElement::filled(shape, PadicNumber::from_integer(1, ctx.config.prime,
                                                                                  ctx.config.precision));
  return constant_map(v, arity, parse_domain(params, path, DomainSpec::unit_ball()), ctx.config.precision);
}

ContractiveMap build_identity(const json& params, const MapContext& ctx, const std::string& path) {
  check_keys(params, {"shape", "size", "domain", "k"}, path);
  return identity_map(parse_shape(params, path), parse_domain(params, path, DomainSpec::unit_ball()),
                      ctx.config.prime, parse_k(params, path, 1), ctx.config.precision);
}

ContractiveMap build_literal(const json& lit, const MapContext& ctx, const std::string& path) {
  check_keys(lit, {"arity", "domain", "k", "numerator", "denominator"}, path);
  const auto& c = ctx.config;
  const int arity = static_cast<int>(get_int(lit, "arity", path, 1));
  if (arity < 1) bad_field(join(path, "arity"), "must be >= 1");
  auto num = parse_monomials(require(lit, "numerator", path), arity, c, join(path, "numerator"));
  auto den = lit.contains("denominator")
                 ? parse_monomials(lit.at("denominator"), arity, c, join(path, "denominator"))
                 : std::vector<Monomial>{{std::vector<int>(static_cast<std::size_t>(arity), 0),
                                          PadicNumber::from_integer(1, c.prime, c.precision)}};
  ContractiveMap f;
  f.label = "literal";
  f.arity = arity;
  f.shape = Shape{};
  f.domain = parse_domain(lit, path, DomainSpec::unit_ball());
  f.prime = c.prime;
  f.digits = c.precision;
  f.contraction_exponent = parse_k(lit, path, 1);
  const Prime p = c.prime;
  auto poly = [p](const std::vector<Monomial>& terms, std::span<const AlgebraElement> xs) {
    PadicNumber sum = PadicNumber::zero(p);
    for (const auto& t : terms) {
      PadicNumber v = t.coefficient;
      for (std::size_t i = 0; i < t.exponents.size(); ++i) {
        v = v * xs[i].as_scalar().pow(static_cast<unsigned>(t.exponents[i]));
      }
      sum = sum + v;
    }
    return sum;
  };
  f.eval = [num, den, poly](std::span<const AlgebraElement> xs) {
    return AlgebraElement::scalar(poly(num, xs) / poly(den, xs));
  };
  if (ctx.check.samples > 0) {
    ContractionReport r = verify_contraction(f, ctx.check.samples, ctx.check.seed);
    if (!r.pass) {
      throw DomainError("literal map at '" + path + "' fails the sampled contraction check (gap " +
                        r.min_observed_gap.to_string() + ", closure failures " +
                        std::to_string(r.closure_failures) + ")");
    }
  }
  return f;
}

ContractiveMap build_builtin(const std::string& id, const json& params, const MapContext& ctx,
                             const std::string& path) {
  if (id == "mobius") return build_mobius(params, ctx, path);
  if (id == "ratpoly") return build_ratpoly(params, ctx, path);
  if (id == "linfrac") return build_linfrac(params, ctx, path);
  if (id == "seqmap" || id == "seqmap-km2009" || id == "shiftprod") {
    if (id == "shiftprod") {
      check_keys(params, {"theta", "a", "b", "family", "length", "lambda", "shifts"}, path);
    } else {
      check_keys(params, {"theta", "a", "b", "family", "length", "lambda"}, path);
    }
    SeqMapParams sp = parse_seq_params(params, ctx.config, path, id == "seqmap-km2009");
    return id == "shiftprod" ? shifted_product_map(sp, ctx.check) : make_seq_map(sp, ctx.check);
  }
  if (id == "constant") return build_constant(params, ctx, path);
  if (id == "identity") return build_identity(params, ctx, path);
  bad_field(path, "unknown map '" + id + "'");
}

ContractiveMap build_map(const json& ref, const MapContext& ctx, const std::string& path, int depth = 0) {
  if (depth > 8) bad_field(path, "map references nest too deeply");
  if (ref.is_string()) {
    const auto name = ref.get<std::string>();
    if (ctx.named && ctx.named->contains(name)) {
      return build_map(ctx.named->at(name), ctx, "maps." + name, depth + 1);
    }
    return build_builtin(name, json::object(), ctx, path);
  }
  if (ref.is_object() && ref.contains("builtin")) {
    check_keys(ref, {"builtin", "params"}, path);
    const json& id = ref.at("builtin");
    if (!id.is_string()) bad_field(join(path, "builtin"), "expected a map identifier");
    return build_builtin(id.get<std::string>(), ref.value("params", json::object()), ctx,
                         join(path, "params"));
  }
  if (ref.is_object() && ref.contains("literal")) {
    check_keys(ref, {"literal"}, path);
    return build_literal(ref.at("literal"), ctx, join(path, "literal"));
  }
  bad_field(path, "expected a map identifier, {\"builtin\": ...} or {\"literal\": ...}");
}

const json* named_maps(const json& spec) {
  if (!spec.contains("maps")) return nullptr;
  if (!spec.at("maps").is_object()) bad_field("maps", "expected an object of named maps");
  return &spec.at("maps");
}

// ---- initial values -----------------------------------------------------------

std::vector<AlgebraElement> parse_window(const json& spec, std::size_t length, const ContractiveMap& f,
                                         const RunConfig& c) {
  const Shape& shape = f.shape;
  if (!spec.contains("initial")) {
    return std::vector<AlgebraElement>(length, AlgebraElement::filled(shape, PadicNumber::from_integer(1, c.prime, c.precision)));
  }
  const json& init = spec.at("initial");
  if (init == "random") {
    DomainSampler sampler(c.prime, c.precision, c.seed);
    std::vector<AlgebraElement> out;
    for (std::size_t i = 0; i < length; ++i) out.push_back(sampler.element(f.domain, shape));
    return out;
  }
  const bool per_entry = init.is_array() && (shape.kind == AlgebraKind::kScalar ||
                                             (!init.empty() && init.front().is_array()));
  if (!per_entry) return std::vector<AlgebraElement>(length, element(init, shape, c, "initial"));
  if (init.size() < length) {
    bad_field("initial", "expected " + std::to_string(length) + " values, got " + std::to_string(init.size()));
  }
  std::vector<AlgebraElement> out;
  for (std::size_t i = 0; i < length; ++i) {
    out.push_back(element(init[i], shape, c, "initial[" + std::to_string(i) + "]"));
  }
  return out;
}

std::string csv_valuation(Valuation v) { return v.to_string(); }

void emit(std::ostream& out, const json& j) { out << j.dump(2) << "\n"; }

json config_json(const RunConfig& c) {
  return {{"prime", c.prime}, {"precision", c.precision}, {"target", c.target},
          {"max_iter", c.max_iter}, {"seed", c.seed}};
}

SolveOptions solve_options(const RunConfig& c) { return {Valuation(c.target), c.max_iter}; }

// ---- commands -------------------------------------------------------------------

int cmd_solve(const json& spec, const Flags& flags, std::ostream& out) {
  check_keys(spec, {"prime", "precision", "target", "max_iter", "maps", "terms", "offset_policy", "map",
                    "power", "initial", "domain", "description"},
             "");
  const RunConfig c = resolve_config(flags, spec);
  MapContext ctx{c, named_maps(spec), {64, c.seed}};

  ConvergenceCertificate cert;
  std::string policy_name;
  if (spec.contains("map")) {
    if (spec.contains("terms")) bad_field("terms", "give either map/power or terms");
    const ContractiveMap f = build_map(spec.at("map"), ctx, "map");
    const auto power = get_int(spec, "power", "", 1);
    if (power < 1) bad_field("power", "must be >= 1");
    auto window = parse_window(spec, static_cast<std::size_t>(f.arity), f, c);
    cert = solve_power_fixed_point(f, static_cast<unsigned>(power), solve_options(c), window);
    policy_name = "stacked";
  } else {
    const json& terms = require(spec, "terms", "");
    if (!terms.is_array() || terms.empty()) bad_field("terms", "expected a non-empty list of summands");
    std::vector<Term> ts;
    for (std::size_t k = 0; k < terms.size(); ++k) {
      const std::string tp = "terms[" + std::to_string(k) + "]";
      check_keys(terms[k], {"factors"}, tp);
      const json& fs = require(terms[k], "factors", tp);
      if (!fs.is_array() || fs.empty()) bad_field(join(tp, "factors"), "expected a non-empty list");
      Term t;
      for (std::size_t i = 0; i < fs.size(); ++i) {
        const std::string fp = tp + ".factors[" + std::to_string(i) + "]";
        check_keys(fs[i], {"map", "offset", "diagonal"}, fp);
        ContractiveMap m = build_map(require(fs[i], "map", fp), ctx, join(fp, "map"));
        if (get_bool(fs[i], "diagonal", fp, false)) m = diagonal(m);
        t.factors.push_back({m, static_cast<int>(get_int(fs[i], "offset", fp, 0))});
      }
      ts.push_back(std::move(t));
    }
    policy_name = get_string(spec, "offset_policy", "", "strict");
    OffsetPolicy policy;
    if (policy_name == "strict") policy = OffsetPolicy::kStrict;
    else if (policy_name == "relaxed") policy = OffsetPolicy::kRelaxed;
    else if (policy_name == "stacked") policy = OffsetPolicy::kStacked;
    else bad_field("offset_policy", "expected strict, relaxed or stacked");
    RecurrenceSpec rs(std::move(ts), policy);
    if (spec.contains("domain") && parse_domain(spec, "", rs.domain()) != rs.domain()) {
      bad_field("domain", "maps act on " + rs.domain().to_string());
    }
    const ContractiveMap& f0 = rs.terms().front().factors.front().map;
    auto window = parse_window(spec, static_cast<std::size_t>(rs.window_length()), f0, c);
    cert = solve_recurrence(rs, window, solve_options(c));
  }

  if (c.format == "csv") {
    out << trace_csv(cert);
  } else {
    emit(out, {{"command", "solve"}, {"config", config_json(c)}, {"offset_policy", policy_name},
               {"certificate", to_json(cert)}});
  }
  return kOk;
}

std::vector<MapPair> parse_pairs(const json& spec, const std::string& key, const MapContext& ctx) {
  const json& list = require(spec, key, "");
  if (!list.is_array() || list.empty()) bad_field(key, "expected a non-empty list of map pairs");
  std::vector<MapPair> out;
  for (std::size_t k = 0; k < list.size(); ++k) {
    const std::string p = key + "[" + std::to_string(k) + "]";
    if (!list[k].is_array() || list[k].size() != 2) bad_field(p, "expected a pair [first, second]");
    out.push_back({build_map(list[k][0], ctx, p + "[0]"), build_map(list[k][1], ctx, p + "[1]")});
  }
  return out;
}

int cmd_coupled(const json& spec, const Flags& flags, std::ostream& out) {
  check_keys(spec, {"prime", "precision", "target", "max_iter", "maps", "x_terms", "y_terms", "z_terms",
                    "initial", "description"},
             "");
  const RunConfig c = resolve_config(flags, spec);
  MapContext ctx{c, named_maps(spec), {64, c.seed}};
  CoupledSpec cs{parse_pairs(spec, "x_terms", ctx), parse_pairs(spec, "y_terms", ctx),
                 parse_pairs(spec, "z_terms", ctx)};
  cs.validate();
  const ContractiveMap& f = cs.any_map();
  std::array<AlgebraElement, 3> init;
  if (spec.contains("initial") && spec.at("initial").is_array() && spec.at("initial").size() == 3) {
    for (std::size_t i = 0; i < 3; ++i) {
      init[i] = element(spec.at("initial")[i], f.shape, c, "initial[" + std::to_string(i) + "]");
    }
  } else if (spec.contains("initial")) {
    bad_field("initial", "expected [x1, y1, z1]");
  } else {
    init.fill(AlgebraElement::filled(f.shape, PadicNumber::from_integer(1, c.prime, c.precision)));
  }
  CoupledCertificate cert = solve_coupled(cs, init, solve_options(c));

  if (c.format == "csv") {
    out << "n,d_valuation,x_gap,y_gap,z_gap\n";
    for (std::size_t i = 0; i < cert.envelope.size(); ++i) {
      out << cert.envelope[i].n << ',' << csv_valuation(cert.envelope[i].valuation);
      for (const auto& comp : cert.components) out << ',' << csv_valuation(comp.trace[i].valuation);
      out << '\n';
    }
    return kOk;
  }
  json envelope = json::array();
  for (const auto& t : cert.envelope) envelope.push_back({t.n, to_json(t.valuation)});
  emit(out, {{"command", "coupled"},
             {"config", config_json(c)},
             {"components",
              {{"x", to_json(cert.components[0])}, {"y", to_json(cert.components[1])}, {"z", to_json(cert.components[2])}}},
             {"envelope", envelope}});
  return kOk;
}

std::vector<AlgebraElement> parse_boundary(const json& spec, const std::string& mode_override,
                                           const std::string& key, std::size_t leaves,
                                           const ContractiveMap& f, const RunConfig& c,
                                           std::uint64_t seed) {
  json b = mode_override.empty() ? spec.value(key, json("constant")) : json(mode_override);
  if (b.is_string() && b.get<std::string>() == "random") {
    DomainSampler sampler(c.prime, c.precision, seed);
    std::vector<AlgebraElement> out;
    out.reserve(leaves);
    for (std::size_t i = 0; i < leaves; ++i) out.push_back(sampler.element(f.domain, f.shape));
    return out;
  }
  if (b.is_string() && b.get<std::string>() == "constant") {
    AlgebraElement v = spec.contains("boundary_value")
                           ? element(spec.at("boundary_value"), f.shape, c, "boundary_value")
                           : AlgebraElement::filled(f.shape, PadicNumber::from_integer(1, c.prime, c.precision));
    return std::vector<AlgebraElement>(leaves, v);
  }
  if (!b.is_array() || b.size() != leaves) {
    bad_field(key, "expected \"constant\", \"random\" or a list of " + std::to_string(leaves) + " leaf values");
  }
  std::vector<AlgebraElement> out;
  for (std::size_t i = 0; i < leaves; ++i) out.push_back(element(b[i], f.shape, c, key + "[" + std::to_string(i) + "]"));
  return out;
}

std::string fnv1a_hex(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

int cmd_tree(const json& spec, const Flags& flags, std::ostream& out) {
  check_keys(spec, {"prime", "precision", "target", "max_iter", "maps", "branching", "depth", "map", "form",
                    "boundary", "boundary_value", "compare_boundary", "invariant", "description"},
             "");
  const RunConfig c = resolve_config(flags, spec);
  MapContext ctx{c, named_maps(spec), {64, c.seed}};
  const auto k = get_int(spec, "branching", "", 2);
  if (k < 1) bad_field("branching", "must be >= 1");
  const auto depth = get_int(spec, "depth", "", 0);
  if (depth < 1) bad_field("depth", "must be >= 1");
  if (depth > flags.max_depth) {
    bad_field("depth", std::to_string(depth) + " exceeds the cap of " + std::to_string(flags.max_depth));
  }
  double leaves = 1;
  for (std::int64_t i = 0; i < depth; ++i) leaves *= static_cast<double>(k);
  if (leaves > static_cast<double>(kDefaultMaxLeaves)) {
    bad_field("depth", "branching^depth exceeds the cap of " + std::to_string(kDefaultMaxLeaves) + " leaves");
  }

  const ContractiveMap f = build_map(require(spec, "map", ""), ctx, "map");
  const std::string form = get_string(spec, "form", "", "literal");
  VertexFamily family;
  if (form == "literal") family = VertexFamily::literal(f, static_cast<int>(k));
  else if (form == "single") family = VertexFamily::single(f, static_cast<int>(k));
  else if (form == "per_edge") family = VertexFamily::per_edge(f, static_cast<int>(k));
  else bad_field("form", "expected literal, single or per_edge");

  TreeShape shape = TreeShape::uniform(static_cast<int>(k), static_cast<int>(depth));
  auto boundary = parse_boundary(spec, "", "boundary", shape.leaf_count(), f, c, c.seed);
  TreeProblem problem = TreeProblem::uniform(shape, family, boundary);
  TreeSolution sol = backward_sweep(problem);

  json levels = json::array();
  for (int n = 0; n <= depth; ++n) {
    std::string text;
    for (const auto& v : sol.values[static_cast<std::size_t>(n)]) text += v.to_string() + "\n";
    json level{{"level", n}, {"vertices", shape.level_size(n)}, {"digest", fnv1a_hex(text)}};
    if (n < depth) {
      Valuation r = Valuation::infinity();
      for (auto v : sol.residuals[static_cast<std::size_t>(n)]) r = std::min(r, v);
      level["min_residual"] = to_json(r);
    }
    levels.push_back(level);
  }
  json report{{"command", "tree"},
              {"config", config_json(c)},
              {"branching", k},
              {"depth", depth},
              {"form", form},
              {"leaves", shape.leaf_count()},
              {"beta_exponent", to_json(problem.beta_exponent())},
              {"root", sol.root().to_string()},
              {"root_value", to_json(sol.root())},
              {"levels", levels}};

  int code = kOk;
  const bool compare = !flags.compare_boundary.empty() || spec.contains("compare_boundary");
  if (compare) {
    auto boundary2 = parse_boundary(spec, flags.compare_boundary, "compare_boundary", shape.leaf_count(),
                                    f, c, c.seed + 1);
    GapReport gap = uniqueness_gap(problem, boundary2);
    json level_gaps = json::array();
    json level_bounds = json::array();
    for (auto v : gap.level_gaps) level_gaps.push_back(to_json(v));
    for (auto v : gap.level_bounds) level_bounds.push_back(to_json(v));
    report["gap"] = {{"root_gap_valuation", to_json(gap.root_gap_valuation)},
                     {"bound", to_json(gap.bound)},
                     {"level_gaps", level_gaps},
                     {"level_bounds", level_bounds},
                     {"pass", gap.pass}};
    if (!gap.pass) code = kVerifyFailed;
  }
  if (get_bool(spec, "invariant", "", false)) {
    InvariantSolution inv = invariant_solution(problem, solve_options(c));
    report["invariant"] = {{"value", inv.value.to_string()},
                           {"residual_valuation", to_json(inv.residual_valuation)},
                           {"iterations", inv.certificate.iterations}};
  }

  if (c.format == "csv") {
    out << "level,vertices,digest,min_residual\n";
    for (const auto& l : levels) {
      out << l["level"] << ',' << l["vertices"] << ',' << l["digest"].get<std::string>() << ',';
      if (l.contains("min_residual")) {
        const auto& r = l["min_residual"];
        out << (r.is_string() ? r.get<std::string>() : r.dump());
      }
      out << '\n';
    }
  } else {
    emit(out, report);
  }
  return code;
}

int cmd_verify(const std::string& map_id, const std::string& params_src, int samples,
               std::optional<int> declared_k, const Flags& flags, std::ostream& out) {
  const json params = params_src.empty() ? json::object() : load_json(params_src, "params");
  json spec = json::object();
  if (params.is_object() && params.contains("prime") && !flags.prime) spec["prime"] = params.at("prime");
  json map_params = params;
  if (map_params.is_object()) map_params.erase("prime");
  const RunConfig c = resolve_config(flags, spec);
  if (samples < 1) bad_field("samples", "must be >= 1");
  // The report is the check; skip the constructor's own sampling.
  MapContext ctx{c, nullptr, {0, c.seed}};
  ContractiveMap f = map_id == "literal" ? build_literal(map_params, ctx, "params")
                                         : build_builtin(map_id, map_params, ctx, "params");
  if (declared_k) {
    if (*declared_k < 0) bad_field("declared-k", "must be >= 0");
    f.contraction_exponent = *declared_k;
  }
  ContractionReport r = verify_contraction(f, samples, c.seed);
  json report{{"command", "verify"},
              {"map", f.label},
              {"prime", c.prime},
              {"domain", f.domain.to_string()},
              {"shape", f.shape.to_string()},
              {"samples", r.samples},
              {"declared_k", to_json(f.contraction_exponent)},
              {"min_observed_gap", to_json(r.min_observed_gap)},
              {"closure_failures", r.closure_failures},
              {"pass", r.pass}};
  if (c.format == "csv") {
    for (const auto& [key, v] : report.items()) out << key << ',' << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
  } else {
    emit(out, report);
  }
  return r.pass ? kOk : kVerifyFailed;
}

int cmd_eval(const json& spec, const Flags& flags, std::ostream& out) {
  check_keys(spec, {"prime", "precision", "maps", "map", "args", "function", "arg", "description"}, "");
  json trimmed = spec;
  const RunConfig c = resolve_config(flags, trimmed);
  AlgebraElement result;
  if (spec.contains("function")) {
    const std::string fn = get_string(spec, "function", "", "");
    PadicNumber x = value(require(spec, "arg", ""), c, "arg");
    SeriesBudget budget{4096, c.precision};
    if (fn == "exp") result = AlgebraElement::scalar(padic_exp(x, budget));
    else if (fn == "log") result = AlgebraElement::scalar(padic_log(x, budget));
    else bad_field("function", "expected exp or log");
  } else {
    MapContext ctx{c, named_maps(spec), {64, c.seed}};
    const ContractiveMap f = build_map(require(spec, "map", ""), ctx, "map");
    const json& args = require(spec, "args", "");
    if (!args.is_array() || args.size() != static_cast<std::size_t>(f.arity)) {
      bad_field("args", "expected " + std::to_string(f.arity) + " arguments");
    }
    std::vector<AlgebraElement> xs;
    for (std::size_t i = 0; i < args.size(); ++i) {
      xs.push_back(element(args[i], f.shape, c, "args[" + std::to_string(i) + "]"));
      if (!f.domain.contains(xs.back())) {
        throw DomainError("args[" + std::to_string(i) + "] outside " + f.domain.to_string());
      }
    }
    result = f(xs);
  }
  json report{{"command", "eval"}, {"prime", c.prime}, {"precision", c.precision},
              {"text", result.to_string()}, {"value", to_json(result)}};
  if (c.format == "csv") {
    out << "text\n" << result.to_string() << '\n';
  } else {
    emit(out, report);
  }
  return kOk;
}

void add_common(CLI::App* cmd, Flags& flags) {
  cmd->add_option("--prime", flags.prime, "Prime p (overrides the spec)");
  cmd->add_option("--precision", flags.precision, "Working precision in base-p digits (default 60)");
  cmd->add_option("--target", flags.target, "Target valuation of the stopping rule");
  cmd->add_option("--max-iter", flags.max_iter, "Iteration cap (default 512)");
  cmd->add_option("--seed", flags.seed, "Seed for all sampling (default 0)");
  cmd->add_option("--format", flags.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact p-adic fixed-point solver"};
  app.name("padicfp");
  app.require_subcommand(1);
  Flags flags;
  std::string spec_path;
  std::string map_id;
  std::string params_src;
  int samples = 1000;
  std::optional<int> declared_k;

  auto* solve = app.add_subcommand("solve", "Iterate a recurrence to its fixed point");
  solve->add_option("spec", spec_path, "Problem spec (file or inline JSON)")->required();
  add_common(solve, flags);
  auto* coupled = app.add_subcommand("coupled", "Solve the staggered three-sequence system");
  coupled->add_option("spec", spec_path, "Problem spec (file or inline JSON)")->required();
  add_common(coupled, flags);
  auto* tree = app.add_subcommand("tree", "Backward sweep of a tree equation");
  tree->add_option("spec", spec_path, "Tree spec (file or inline JSON)")->required();
  add_common(tree, flags);
  tree->add_option("--compare-boundary", flags.compare_boundary,
                   "Second boundary (random or constant) for the uniqueness gap");
  tree->add_option("--max-depth", flags.max_depth, "Largest accepted depth (default 12)");
  auto* verify = app.add_subcommand("verify", "Sample the contraction bound of a map");
  verify->add_option("map", map_id, "Map identifier")->required();
  verify->add_option("--params", params_src, "Parameter block (file or inline JSON)");
  verify->add_option("--samples", samples, "Number of sampled pairs (default 1000)");
  verify->add_option("--declared-k", declared_k, "Override the declared contraction exponent");
  add_common(verify, flags);
  auto* eval = app.add_subcommand("eval", "Evaluate a map or exp/log at a point");
  eval->add_option("spec", spec_path, "Evaluation spec (file or inline JSON)")->required();
  add_common(eval, flags);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kBadInput;
  }

  try {
    if (verify->parsed()) return cmd_verify(map_id, params_src, samples, declared_k, flags, out);
    const json spec = load_json(spec_path, "spec");
    if (solve->parsed()) return cmd_solve(spec, flags, out);
    if (coupled->parsed()) return cmd_coupled(spec, flags, out);
    if (tree->parsed()) return cmd_tree(spec, flags, out);
    return cmd_eval(spec, flags, out);
  } catch (const SpecError& e) {
    err << "error: " << e.what() << "\n";
    return kBadInput;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << "\n";
    return kBadInput;
  } catch (const json::exception& e) {
    err << "error: malformed spec: " << e.what() << "\n";
    return kBadInput;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return kDomain;
  } catch (const PrecisionError& e) {
    err << "precision error: " << e.what() << "\n";
    return kPrecision;
  } catch (const IterationLimitError& e) {
    err << "iteration limit: " << e.what() << "\n";
    return kMaxIter;
  }
}

}  // namespace padic::cli
