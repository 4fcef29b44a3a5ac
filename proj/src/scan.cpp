#include "cwlo/scan.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "cwlo/exact.hpp"
#include "cwlo/series.hpp"

namespace cwlo {

std::string_view to_string(Quantity q) {
    switch (q) {
        case Quantity::Z: return "Z";
        case Quantity::QnPlus: return "QnPlus";
        case Quantity::Qn: return "Qn";
        case Quantity::Pn: return "Pn";
        case Quantity::Coeffs: return "coeffs";
        case Quantity::Asymptotic: return "asymptotic";
    }
    return "?";
}

std::optional<Quantity> parse_quantity(std::string_view s) {
    for (Quantity q : {Quantity::Z, Quantity::QnPlus, Quantity::Qn, Quantity::Pn, Quantity::Coeffs,
                       Quantity::Asymptotic}) {
        if (s == to_string(q)) {
            return q;
        }
    }
    return std::nullopt;
}

namespace {

bool per_parameter(Quantity q) { return q == Quantity::Coeffs || q == Quantity::Asymptotic; }

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void fill(ScanRow& row, double exact, double m0, double m1) {
    row.exact = exact;
    row.pred_m0 = m0;
    row.pred_m1 = m1;
    row.residual_m0 = exact - m0;
    row.residual_m1 = exact - m1;
}

void evaluate(ScanRow& row) {
    const ModelParams p(row.d, row.beta, row.h);
    const std::int64_t n = row.n;
    switch (row.quantity) {
        case Quantity::Z: {
            const ExpansionCoeffs e = e_coeffs(p, 1);
            const long double log_norm =
                log_partition(p, n).log_value - static_cast<long double>(n) * e.prefactor_log;
            const double nd = static_cast<double>(n);
            fill(row, static_cast<double>(std::exp(log_norm)), e.ladder_sum(nd, 0),
                 e.ladder_sum(nd, 1));
            return;
        }
        case Quantity::QnPlus: {
            const ExpansionCoeffs c = qn_plus_coeffs(p);
            fill(row, qn_plus_exact(p, n).probability, predict(c, n), kNaN);
            return;
        }
        case Quantity::Qn: {
            if (n % 2 != 0) {
                throw UsageError("Qn needs even n (use Pn for odd n)");
            }
            const ExpansionCoeffs c = qn_coeffs(p, 1);
            fill(row, qn_even_exact(p, n).probability, predict(c, n, 0), predict(c, n, 1));
            return;
        }
        case Quantity::Pn: {
            if (n % 2 == 0) {
                throw UsageError("Pn needs odd n");
            }
            const ExpansionCoeffs c = qn_coeffs(p, 1);
            // The second term is only known at the critical point.
            const double m1 = c.regime == Regime::Critical ? predict(c, n, 1) : kNaN;
            fill(row, pn_odd_exact(p, n).probability, predict(c, n, 0), m1);
            return;
        }
        case Quantity::Coeffs:
            row.detail = {{"e", to_json(e_coeffs(p, kMaxZOrder))},
                          {"gamma", to_json(gamma_coeffs(p, kMaxGammaOrder))},
                          {"H", to_json(qn_coeffs(p, kMaxGammaOrder))},
                          {"qn_plus", to_json(qn_plus_coeffs(p))}};
            fill(row, kNaN, kNaN, kNaN);
            return;
        case Quantity::Asymptotic: {
            const MeanFieldSolution s = solve_mean_field(p);
            row.detail = {{"qn_plus", to_json(qn_plus_asymptotic(p))},
                          {"qn", to_json(PowerLaw{qn_coeffs(p, 0).values[0], Rational(-1, 2)})},
                          {"z_star", number_json(s.z_star)},
                          {"t_star", number_json(s.t_star)},
                          {"regime", std::string(to_string(classify_regime(p)))}};
            fill(row, kNaN, kNaN, kNaN);
            return;
        }
    }
}

}  // namespace

void ScanGrid::validate() const {
    if (d_list.empty() || beta_list.empty() || h_list.empty() || quantities.empty()) {
        throw UsageError("scan: d, beta, h and quantity lists must be non-empty");
    }
    const bool needs_n = std::any_of(quantities.begin(), quantities.end(),
                                     [](Quantity q) { return !per_parameter(q); });
    if (needs_n && n_list.empty()) {
        throw UsageError("scan: n list must be non-empty");
    }
    if (!std::is_sorted(n_list.begin(), n_list.end())) {
        throw UsageError("scan: n list must be sorted");
    }
    if (!n_list.empty() && n_list.front() < 1) {
        throw UsageError("scan: n must be positive");
    }
    for (int d : d_list) {
        if (d < 1) {
            throw UsageError("scan: d must be positive");
        }
    }
    for (double b : beta_list) {
        if (!(b >= 0.0) || !std::isfinite(b)) {
            throw UsageError("scan: beta must be finite and >= 0");
        }
    }
    for (double h : h_list) {
        if (!std::isfinite(h)) {
            throw UsageError("scan: h must be finite");
        }
    }
    if (format == ScanFormat::Csv) {
        for (Quantity q : quantities) {
            if (per_parameter(q)) {
                throw UsageError("scan: quantity '" + std::string(to_string(q)) +
                                 "' is only available with --format json");
            }
        }
    }
}

std::vector<ScanRow> run_scan(const ScanGrid& grid) {
    grid.validate();
    std::vector<ScanRow> rows;
    for (int d : grid.d_list) {
        for (double beta : grid.beta_list) {
            for (double h : grid.h_list) {
                for (Quantity q : grid.quantities) {
                    ScanRow base;
                    base.d = d;
                    base.beta = beta;
                    base.h = h;
                    base.quantity = q;
                    if (per_parameter(q)) {
                        rows.push_back(base);
                        continue;
                    }
                    for (std::int64_t n : grid.n_list) {
                        base.n = n;
                        rows.push_back(base);
                    }
                }
            }
        }
    }
    const auto count = static_cast<std::int64_t>(rows.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < count; ++i) {
        ScanRow& row = rows[static_cast<std::size_t>(i)];
        try {
            evaluate(row);
        } catch (const std::exception& e) {
            row.error = e.what();
            row.detail = nullptr;
            fill(row, kNaN, kNaN, kNaN);
        }
    }
    return rows;
}

void write_csv(std::ostream& os, const std::vector<ScanRow>& rows) {
    os << kCsvHeader << '\n';
    for (const ScanRow& r : rows) {
        os << r.d << ',' << format_number(r.beta) << ',' << format_number(r.h) << ',' << r.n << ','
           << to_string(r.quantity) << ',' << format_number(r.exact) << ','
           << format_number(r.pred_m0) << ',' << format_number(r.pred_m1) << ','
           << format_number(r.residual_m0) << ',' << format_number(r.residual_m1) << '\n';
    }
}

Json scan_json(const std::vector<ScanRow>& rows) {
    Json out = Json::array();
    for (const ScanRow& r : rows) {
        Json j = {{"d", r.d}, {"beta", r.beta}, {"h", r.h},
                  {"quantity", std::string(to_string(r.quantity))}};
        if (per_parameter(r.quantity)) {
            if (!r.detail.is_null()) {
                j["value"] = r.detail;
            }
        } else {
            j["n"] = r.n;
            j["exact"] = number_json(r.exact);
            j["pred_M0"] = number_json(r.pred_m0);
            j["pred_M1"] = number_json(r.pred_m1);
            j["residual_M0"] = number_json(r.residual_m0);
            j["residual_M1"] = number_json(r.residual_m1);
        }
        if (!r.error.empty()) {
            j["error"] = r.error;
        }
        out.push_back(std::move(j));
    }
    return {{"columns", Json::parse("[\"d\",\"beta\",\"h\",\"n\",\"quantity\",\"exact\","
                                    "\"pred_M0\",\"pred_M1\",\"residual_M0\",\"residual_M1\"]")},
            {"rows", out}};
}

std::vector<ScanRow> read_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != kCsvHeader) {
        throw UsageError("read_csv: missing or unexpected header");
    }
    std::vector<ScanRow> rows;
    while (std::getline(is, line)) {
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            f.push_back(cell);
        }
        if (f.size() != 10) {
            throw UsageError("read_csv: expected 10 fields in '" + line + "'");
        }
        ScanRow r;
        r.d = std::stoi(f[0]);
        r.beta = parse_number(f[1]);
        r.h = parse_number(f[2]);
        r.n = std::stoll(f[3]);
        const auto q = parse_quantity(f[4]);
        if (!q) {
            throw UsageError("read_csv: unknown quantity '" + f[4] + "'");
        }
        r.quantity = *q;
        r.exact = parse_number(f[5]);
        r.pred_m0 = parse_number(f[6]);
        r.pred_m1 = parse_number(f[7]);
        r.residual_m0 = parse_number(f[8]);
        r.residual_m1 = parse_number(f[9]);
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace cwlo
