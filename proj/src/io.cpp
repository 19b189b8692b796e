#include "momcert/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "momcert/errors.hpp"

namespace momcert {

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorKind::Validation, what); }

}  // namespace

std::string to_text(const Polynomial& p) {
  if (p.is_zero()) return "0";
  std::string out;
  for (const auto& [exp, c] : p.terms()) {
    if (!out.empty()) out += " + ";
    out += to_string(c);
    const char* sep = " * ";
    for (std::size_t i = 0; i < exp.size(); ++i) {
      if (exp[i] == 0) continue;
      out += sep;
      out += "X" + std::to_string(i + 1) + "^" + std::to_string(exp[i]);
      sep = " ";
    }
  }
  return out;
}

namespace {

class PolyParser {
 public:
  PolyParser(std::string_view text, std::size_t num_vars) : s_(text), m_(num_vars) {}

  Polynomial parse() {
    Polynomial result(m_);
    skip();
    if (pos_ == s_.size()) fail("empty polynomial");
    bool first = true;
    while (pos_ < s_.size()) {
      int sign = 1;
      bool saw_sign = false;
      while (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) {
        if (s_[pos_] == '-') sign = -sign;
        saw_sign = true;
        ++pos_;
        skip();
      }
      if (!first && !saw_sign) fail("expected '+' or '-'");
      first = false;
      Polynomial term = parse_term();
      result += sign > 0 ? term : -term;
      skip();
    }
    return result;
  }

 private:
  Polynomial parse_term() {
    Rational coef = 1;
    std::vector<std::uint32_t> exp(m_, 0);
    bool any = false;
    while (true) {
      skip();
      if (pos_ >= s_.size()) break;
      const char c = s_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        coef *= parse_number();
      } else if (c == '-' && any && pos_ + 1 < s_.size() &&
                 (std::isdigit(static_cast<unsigned char>(s_[pos_ + 1])) || s_[pos_ + 1] == '.') &&
                 last_was_star_) {
        ++pos_;
        coef *= -parse_number();
      } else if (c == 'X' || c == 'x') {
        ++pos_;
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        std::size_t var = 1;
        if (pos_ > start) var = std::stoul(std::string(s_.substr(start, pos_ - start)));
        if (var == 0 || var > m_) fail("variable index out of range");
        std::uint32_t e = 1;
        skip();
        if (pos_ < s_.size() && s_[pos_] == '^') {
          ++pos_;
          skip();
          start = pos_;
          while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
          if (pos_ == start) fail("expected exponent after '^'");
          e = static_cast<std::uint32_t>(std::stoul(std::string(s_.substr(start, pos_ - start))));
        }
        exp[var - 1] += e;
      } else {
        break;
      }
      any = true;
      skip();
      last_was_star_ = false;
      if (pos_ < s_.size() && s_[pos_] == '*') {
        ++pos_;
        last_was_star_ = true;
      }
    }
    if (!any) fail("expected a term");
    if (last_was_star_) fail("dangling '*'");
    return Polynomial::monomial(Exponent(std::move(exp)), coef);
  }

  Rational parse_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
    };
    digits();
    if (pos_ < s_.size() && s_[pos_] == '/') {
      ++pos_;
      digits();
    } else if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
      digits();
    }
    return parse_rational(s_.substr(start, pos_ - start));
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& why) {
    invalid("cannot parse polynomial '" + std::string(s_) + "': " + why);
  }

  std::string_view s_;
  std::size_t m_;
  std::size_t pos_ = 0;
  bool last_was_star_ = false;
};

}  // namespace

Polynomial parse_polynomial(std::string_view text, std::size_t num_vars) {
  return PolyParser(text, num_vars).parse();
}

namespace {

Rational rational_from_json(const json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(std::to_string(v.get<long long>()));
  if (v.is_number()) {
    // Exact decimal reading of the literal as printed.
    return parse_rational(v.dump());
  }
  invalid("expected a rational string or number, got " + v.dump());
}

std::vector<std::uint32_t> exponent_from_json(const json& v, std::size_t m) {
  if (!v.is_array() || v.size() != m) invalid("exponent must be an array of length " + std::to_string(m));
  std::vector<std::uint32_t> e;
  for (const auto& x : v) {
    if (!x.is_number_unsigned() && !(x.is_number_integer() && x.get<long long>() >= 0)) {
      invalid("exponent entries must be natural numbers");
    }
    e.push_back(x.get<std::uint32_t>());
  }
  return e;
}

std::size_t num_vars_from_json(const json& j) {
  if (!j.is_object() || !j.contains("num_vars") || !j["num_vars"].is_number_integer() ||
      j["num_vars"].get<long long>() < 1) {
    invalid("missing or invalid num_vars");
  }
  return j["num_vars"].get<std::size_t>();
}

}  // namespace

json to_json(const Polynomial& p) {
  json terms = json::array();
  for (const auto& [exp, c] : p.terms()) {
    terms.push_back({{"exp", exp.entries()}, {"coef", to_string(c)}});
  }
  return {{"num_vars", p.num_vars()}, {"terms", terms}};
}

Polynomial polynomial_from_json(const json& j) {
  const std::size_t m = num_vars_from_json(j);
  if (!j.contains("terms") || !j["terms"].is_array()) invalid("polynomial needs a terms array");
  Polynomial p(m);
  for (const auto& t : j["terms"]) {
    if (!t.contains("exp") || !t.contains("coef")) invalid("term needs exp and coef");
    p += Polynomial::monomial(Exponent(exponent_from_json(t["exp"], m)), rational_from_json(t["coef"]));
  }
  return p;
}

json to_json(const MomentSequence& L) {
  json moments = json::array();
  for (const auto& [exp, v] : L.values()) {
    moments.push_back({{"exp", exp.entries()}, {"value", to_string(v)}});
  }
  return {{"num_vars", L.num_vars()},
          {"max_degree", L.max_degree()},
          {"moments", moments},
          {"provenance", L.provenance().label()}};
}

MomentSequence moments_from_json(const json& j) {
  const std::size_t m = num_vars_from_json(j);
  if (!j.contains("max_degree") || !j["max_degree"].is_number_integer() ||
      j["max_degree"].get<long long>() < 0) {
    invalid("missing or invalid max_degree");
  }
  const unsigned D = j["max_degree"].get<unsigned>();
  if (!j.contains("moments") || !j["moments"].is_array()) invalid("moment file needs a moments array");
  MomentSequence::Values values;
  for (const auto& entry : j["moments"]) {
    if (!entry.contains("exp") || !entry.contains("value")) invalid("moment entry needs exp and value");
    Exponent e(exponent_from_json(entry["exp"], m));
    if (!values.emplace(e, rational_from_json(entry["value"])).second) {
      invalid("duplicate moment entry");
    }
  }
  Provenance prov{Provenance::Kind::File, "file"};
  if (j.contains("provenance") && j["provenance"].is_string()) {
    const auto label = j["provenance"].get<std::string>();
    if (label == "atomic") {
      prov = {Provenance::Kind::Atomic, ""};
    } else if (label.rfind("closed_form:", 0) == 0) {
      prov = {Provenance::Kind::ClosedForm, label.substr(12)};
    } else {
      prov = {Provenance::Kind::File, label};
    }
  }
  return MomentSequence(m, D, std::move(values), prov);
}

AtomicMeasure parse_atoms(std::string_view text) {
  std::vector<Atom> atoms;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t open = text.find('(', pos);
    if (open == std::string_view::npos) {
      if (text.substr(pos).find_first_not_of(" ,\t\n") != std::string_view::npos) {
        invalid("malformed atom list '" + std::string(text) + "'");
      }
      break;
    }
    const std::size_t close = text.find(')', open);
    if (close == std::string_view::npos) invalid("unbalanced parenthesis in atom list");
    const std::string_view body = text.substr(open + 1, close - open - 1);
    const std::size_t colon = body.find(':');
    if (colon == std::string_view::npos) invalid("atom needs 'point:weight'");
    Atom atom;
    atom.point = parse_point(body.substr(0, colon));
    atom.weight = parse_rational(body.substr(colon + 1));
    atoms.push_back(std::move(atom));
    pos = close + 1;
  }
  if (atoms.empty()) invalid("no atoms given");
  return AtomicMeasure(std::move(atoms));
}

Point parse_point(std::string_view text) {
  Point p;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = text.find(',', pos);
    p.push_back(parse_rational(text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return p;
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

json number(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? json("inf") : json("-inf");
}

json point_json(const Point& p) {
  json a = json::array();
  for (const auto& x : p) a.push_back(to_string(x));
  return a;
}

}  // namespace

json to_json(const PsdReport& r) {
  return {{"size", r.size},
          {"min_eigenvalue", number(r.min_eigenvalue)},
          {"tolerance", number(r.tolerance)},
          {"verdict", to_string(r.verdict)},
          {"rank_estimate", r.rank_estimate},
          {"exact_tiebreak", r.exact_tiebreak}};
}

json to_json(const GrowthProfile& g) {
  json ladder = json::array();
  for (const auto& e : g.ladder) ladder.push_back({e.index, number(e.value)});
  json roots = json::array();
  for (const auto& e : g.roots) roots.push_back({e.index, number(e.value)});
  return {{"check", "growth-condition"},
          {"poly", to_text(g.poly)},
          {"ladder", ladder},
          {"roots", roots},
          {"d_max", g.d_max},
          {"p_L_estimate", number(g.p_L_estimate)},
          {"p_L_estimate_kind", "lower-bound"},
          {"slope", number(g.slope)},
          {"verdict", to_string(g.verdict)}};
}

json to_json(const SupportBox& box) {
  json intervals = json::array();
  for (const auto& [lo, hi] : box.intervals) intervals.push_back({number(lo), number(hi)});
  json radius = json::array();
  for (double r : box.radius) radius.push_back(number(r));
  return {{"check", "support-box"}, {"intervals", intervals}, {"radius", radius}, {"slack", box.slack}};
}

json to_json(const MassEstimate& m) {
  json bounds = json::array();
  for (const auto& [n, v] : m.upper_bounds) bounds.push_back({n, number(v)});
  json tags = json::array();
  tags.push_back("upper-bounds-from-bump-family");
  if (m.outside_box) tags.push_back("outside box");
  return {{"check", "singleton-mass"},
          {"alpha", point_json(m.alpha)},
          {"d", m.d},
          {"bounds", bounds},
          {"value", number(m.value)},
          {"converged", m.converged},
          {"separating_form", to_text(m.separating_form)},
          {"tags", tags}};
}

json to_json(const FiniteSupportReport& r) {
  json verdict = r.finite ? json{{"Finite", *r.finite}} : json("NotCertified");
  return {{"check", "finite-support"},
          {"d", r.d},
          {"C_est", number(r.C_est)},
          {"cardinality_bound", number(r.cardinality_bound)},
          {"hankel_rank", r.hankel_rank},
          {"ranks", r.ranks},
          {"verdict", verdict},
          {"consistent", r.consistent}};
}

json to_json(const RecoveryResult& r) {
  json atoms = json::array();
  for (const auto& a : r.atoms) {
    json p = json::array();
    for (double x : a.point) p.push_back(number(x));
    atoms.push_back({{"point", p}, {"weight", number(a.weight)}});
  }
  return {{"method", to_string(r.method)}, {"atoms", atoms}, {"residual", number(r.residual)}};
}

json to_json(const KlResult& r) {
  json out{{"check", "support-membership"}, {"verdict", r.rejected ? "Rejected" : "NotRejected"}};
  if (r.witness) {
    out["witness"] = to_text(*r.witness);
    out["witness_value"] = number(r.witness_value);
    out["witness_bound"] = number(r.witness_bound);
  }
  return out;
}

json to_json(const QlCertificate& c) {
  return {{"check", "archimedean-generators"},
          {"C_a", number(c.C_a)},
          {"C_minus_a", to_json(c.upper)},
          {"C_plus_a", to_json(c.lower)},
          {"both_psd", c.both_psd()}};
}

json to_json(const SeminormReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"triangle", c.triangle},
                      {"homogeneity", c.homogeneity},
                      {"cross_submultiplicative", c.cross_submultiplicative}});
  }
  return {{"check", "seminorm-ladder"}, {"d", r.d}, {"samples", checks}, {"pass", r.all_pass()}};
}

std::string to_csv(const std::vector<std::pair<unsigned, double>>& rows, std::string_view header) {
  std::ostringstream out;
  out << header << '\n';
  for (const auto& [i, v] : rows) out << i << ',' << format_double(v) << '\n';
  return out.str();
}

std::string to_csv(const std::vector<PowerEntry>& rows) {
  std::vector<std::pair<unsigned, double>> pairs;
  for (const auto& r : rows) pairs.emplace_back(r.index, r.value);
  return to_csv(pairs);
}

}  // namespace momcert
