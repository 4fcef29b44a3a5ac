#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cwlo/json_io.hpp"

namespace cwlo {

enum class Quantity { Z, QnPlus, Qn, Pn, Coeffs, Asymptotic };

std::string_view to_string(Quantity q);
std::optional<Quantity> parse_quantity(std::string_view s);

enum class ScanFormat { Csv, Json };

struct ScanGrid {
    std::vector<int> d_list;
    std::vector<double> beta_list;
    std::vector<double> h_list;
    std::vector<std::int64_t> n_list;
    std::vector<Quantity> quantities;
    std::string output_path;
    ScanFormat format = ScanFormat::Csv;

    // Non-empty lists, sorted positive n, and no per-parameter quantities in CSV.
    void validate() const;
};

// Per-n quantities fill the numeric columns. For Z, exact is Z/(2^n e^{nφ(t*)}) so it
// sits on the same scale as the e-ladder. residual = exact - pred.
struct ScanRow {
    int d = 1;
    double beta = 0.0;
    double h = 0.0;
    std::int64_t n = 0;
    Quantity quantity = Quantity::Z;
    double exact = 0.0;
    double pred_m0 = 0.0;
    double pred_m1 = 0.0;
    double residual_m0 = 0.0;
    double residual_m1 = 0.0;
    // Non-empty when the point failed; the numeric columns are then nan.
    std::string error;
    // Payload of the per-parameter quantities (coeffs, asymptotic).
    Json detail;
};

inline constexpr std::string_view kCsvHeader =
    "d,beta,h,n,quantity,exact,pred_M0,pred_M1,residual_M0,residual_M1";

// Evaluates every point in parallel; rows come back in input order
// (d, beta, h, quantity, n nested from outer to inner).
std::vector<ScanRow> run_scan(const ScanGrid& grid);

void write_csv(std::ostream& os, const std::vector<ScanRow>& rows);
Json scan_json(const std::vector<ScanRow>& rows);
// Reads back what write_csv produced.
std::vector<ScanRow> read_csv(std::istream& is);

}  // namespace cwlo
