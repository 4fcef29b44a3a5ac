#pragma once

#include <string>

#include "json.hpp"

#include "cwlo/exact.hpp"
#include "cwlo/model.hpp"
#include "cwlo/series.hpp"
#include "cwlo/verify.hpp"

namespace cwlo {

// nlohmann::json keeps object keys sorted and prints doubles as shortest round-trip
// decimals, which is what makes CLI output byte-identical across runs.
using Json = nlohmann::json;

// Shortest round-trip decimal; "nan", "inf", "-inf" for non-finite values.
std::string format_number(double x);
// Inverse of format_number; throws UsageError on junk.
double parse_number(const std::string& s);

// Non-finite doubles become null.
Json number_json(double x);

Json to_json(const ModelParams& p);
Json to_json(const ConcentrationResult& r);
Json to_json(const QnBounds& b);
Json to_json(const MeanFieldSolution& s);
// Powers as "p/q" strings, prefactor_log as a number.
Json to_json(const ExpansionCoeffs& c);
Json to_json(const PowerLaw& law);
Json to_json(const VerifyCase& c);
Json to_json(const VerifyReport& r);

// Pretty form used by the CLI: two-space indent, trailing newline.
std::string dump(const Json& j);

}  // namespace cwlo
