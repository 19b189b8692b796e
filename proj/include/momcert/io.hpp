#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <string_view>
#include <vector>

#include "momcert/growth.hpp"
#include "momcert/linalg.hpp"
#include "momcert/moments.hpp"
#include "momcert/oracle.hpp"
#include "momcert/polynomial.hpp"
#include "momcert/support.hpp"

namespace momcert {

using nlohmann::json;

/// Canonical text: terms in graded lex order joined by " + ", each written as
/// "p/q * X1^e1 X2^e2 ..." listing nonzero powers only; "0" for zero.
std::string to_text(const Polynomial& p);

/// Accepts the canonical form and the usual shorthand: "X^2 - 1/2*X + 3",
/// "x1*x2", "0.5 X1^3". A bare X means X1.
Polynomial parse_polynomial(std::string_view text, std::size_t num_vars);

json to_json(const Polynomial& p);
Polynomial polynomial_from_json(const json& j);

json to_json(const MomentSequence& L);
MomentSequence moments_from_json(const json& j);

/// "(x:w),(x:w)" or, for several variables, "(x,y:w),...".
AtomicMeasure parse_atoms(std::string_view text);

Point parse_point(std::string_view text);

json to_json(const PsdReport& r);
json to_json(const GrowthProfile& g);
json to_json(const SupportBox& box);
json to_json(const MassEstimate& m);
json to_json(const FiniteSupportReport& r);
json to_json(const RecoveryResult& r);
json to_json(const KlResult& r);
json to_json(const QlCertificate& c);
json to_json(const SeminormReport& r);

/// "index,value" header then one row per entry.
std::string to_csv(const std::vector<std::pair<unsigned, double>>& rows,
                   std::string_view header = "index,value");
std::string to_csv(const std::vector<PowerEntry>& rows);

/// Round-trip-safe decimal for a double.
std::string format_double(double v);

}  // namespace momcert
