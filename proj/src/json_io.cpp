#include "cwlo/json_io.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <system_error>

namespace cwlo {

std::string format_number(double x) {
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

double parse_number(const std::string& s) {
    if (s == "nan") {
        return std::numeric_limits<double>::quiet_NaN();
    }
    if (s == "inf") {
        return std::numeric_limits<double>::infinity();
    }
    if (s == "-inf") {
        return -std::numeric_limits<double>::infinity();
    }
    double x = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw UsageError("not a number: '" + s + "'");
    }
    return x;
}

Json number_json(double x) {
    if (!std::isfinite(x)) {
        return nullptr;
    }
    return x;
}

Json to_json(const ModelParams& p) {
    return {{"d", p.d()}, {"beta", p.beta()}, {"h", p.h()},
            {"regime", std::string(to_string(classify_regime(p)))}};
}

Json to_json(const ConcentrationResult& r) {
    return {{"probability", number_json(r.probability)},
            {"log_numerator", number_json(static_cast<double>(r.log_numerator))},
            {"log_denominator", number_json(static_cast<double>(r.log_denominator))},
            {"attaining", r.attaining}};
}

Json to_json(const QnBounds& b) {
    return {{"lower", number_json(b.lower)}, {"upper", number_json(b.upper)}};
}

Json to_json(const MeanFieldSolution& s) {
    Json all = Json::array();
    for (double z : s.all_solutions) {
        all.push_back(number_json(z));
    }
    return {{"z_star", number_json(s.z_star)},
            {"t_star", number_json(s.t_star)},
            {"residual", number_json(s.residual)},
            {"all_solutions", all}};
}

Json to_json(const ExpansionCoeffs& c) {
    Json powers = Json::array();
    for (const Rational& r : c.powers) {
        powers.push_back(r.str());
    }
    Json values = Json::array();
    for (double v : c.values) {
        values.push_back(number_json(v));
    }
    return {{"regime", std::string(to_string(c.regime))},
            {"kind", std::string(to_string(c.kind))},
            {"prefactor_log", number_json(static_cast<double>(c.prefactor_log))},
            {"t_star", number_json(c.t_star)},
            {"powers", powers},
            {"values", values}};
}

Json to_json(const PowerLaw& law) {
    return {{"constant", number_json(law.constant)}, {"exponent", law.exponent.str()}};
}

Json to_json(const VerifyCase& c) {
    return {{"description", c.description},
            {"expected", number_json(c.expected)},
            {"actual", number_json(c.actual)},
            {"tolerance", number_json(c.tolerance)},
            {"pass", c.pass}};
}

Json to_json(const VerifyReport& r) {
    Json cases = Json::array();
    for (const VerifyCase& c : r.cases) {
        cases.push_back(to_json(c));
    }
    // Wall time is left out on purpose so reports stay byte-identical between runs.
    return {{"suite", r.suite},
            {"pass", r.passed()},
            {"failures", r.failures()},
            {"cases", cases}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace cwlo
