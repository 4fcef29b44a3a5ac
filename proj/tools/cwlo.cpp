// cwlo: exact values, asymptotics, scans and verification suites for Littlewood–Offord
// concentration under the Curie–Weiss model.
//
// Exit codes: 0 ok, 1 verification failure, 2 usage, 3 numeric failure, 4 IO.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cwlo/exact.hpp"
#include "cwlo/json_io.hpp"
#include "cwlo/model.hpp"
#include "cwlo/parallel.hpp"
#include "cwlo/scan.hpp"
#include "cwlo/series.hpp"
#include "cwlo/verify.hpp"

namespace {

using namespace cwlo;

enum Exit { kOk = 0, kVerifyFailed = 1, kUsage = 2, kNumeric = 3, kIo = 4 };

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ModelFlags {
    std::optional<int> d;
    std::optional<double> beta;
    std::optional<double> h;

    void add_to(CLI::App* app) {
        app->add_option("--d", d, "Dimension parameter d >= 1");
        app->add_option("--beta", beta, "Inverse temperature beta >= 0");
        app->add_option("--h", h, "External field");
    }

    ModelParams params() const {
        if (!d || !beta || !h) {
            throw UsageError("--d, --beta and --h are required");
        }
        try {
            return ModelParams(*d, *beta, *h);
        } catch (const DomainError& e) {
            throw UsageError(e.what());
        }
    }
};

std::optional<Regime> regime_flag(const std::string& s) {
    if (s.empty()) {
        return std::nullopt;
    }
    const auto r = parse_regime(s);
    if (!r) {
        throw UsageError("unknown regime '" + s + "' (HighTemp, Critical, LowTemp, Field)");
    }
    return r;
}

void emit(const Json& j) { std::cout << dump(j); }

// ---------------------------------------------------------------- subcommands

int cmd_exact(const ModelFlags& m, std::optional<std::int64_t> n, const std::string& quantity) {
    const ModelParams p = m.params();
    if (!n || *n < 1) {
        throw UsageError("--n must be a positive integer");
    }
    Json out = {{"params", to_json(p)}, {"n", *n}, {"quantity", quantity}};
    if (quantity == "qn") {
        if (*n % 2 == 0) {
            out["result"] = to_json(qn_even_exact(p, *n));
        } else {
            // Odd n: only the sandwich P_n ≤ Q_n ≤ Q_{n-1} is available.
            out["bounds"] = to_json(qn_bounds(p, *n));
        }
    } else if (quantity == "qnplus") {
        out["result"] = to_json(qn_plus_exact(p, *n));
    } else if (quantity == "pn") {
        out["result"] = to_json(pn_odd_exact(p, *n));
    } else if (quantity == "z") {
        out["log_value"] = number_json(static_cast<double>(log_partition(p, *n).log_value));
    } else {
        throw UsageError("unknown quantity '" + quantity + "' (qn, qnplus, pn, z)");
    }
    emit(out);
    return kOk;
}

int cmd_asymptotic(const ModelFlags& m, const std::string& regime) {
    const ModelParams p = m.params();
    const auto forced = regime_flag(regime);
    const ExpansionCoeffs h = qn_coeffs(p, 0, forced);
    emit({{"params", to_json(p)},
          {"regime", std::string(to_string(resolve_regime(p, forced)))},
          {"qn_plus", to_json(qn_plus_asymptotic(p, forced))},
          {"qn", to_json(PowerLaw{h.values[0], h.powers[0]})},
          {"t_star", number_json(h.t_star)}});
    return kOk;
}

int cmd_meanfield(const ModelFlags& m) {
    const ModelParams p = m.params();
    const MeanFieldSolution s = solve_mean_field(p);
    Json out = {{"params", to_json(p)}, {"solution", to_json(s)},
                {"free_energy", number_json(free_energy(p, s.z_star))}};
    if (p.beta() > 0.0) {
        out["phi_star"] = number_json(phi(p, s.t_star));
    }
    if (p.h() != 0.0) {
        out["beta_zero"] = number_json(beta_zero(p.d(), p.h()));
    }
    emit(out);
    return kOk;
}

int cmd_coeffs(const ModelFlags& m, const std::string& ladder, int order,
               const std::string& regime) {
    const ModelParams p = m.params();
    const auto forced = regime_flag(regime);
    ExpansionCoeffs c;
    if (ladder == "e") {
        c = e_coeffs(p, order, forced);
    } else if (ladder == "gamma") {
        c = gamma_coeffs(p, order, forced);
    } else if (ladder == "H") {
        c = qn_coeffs(p, order, forced);
    } else if (ladder == "qnplus") {
        c = qn_plus_coeffs(p, forced);
    } else {
        throw UsageError("unknown ladder '" + ladder + "' (e, gamma, H, qnplus)");
    }
    emit({{"params", to_json(p)}, {"ladder", ladder}, {"coeffs", to_json(c)}});
    return kOk;
}

struct ScanFlags {
    std::vector<int> d;
    std::vector<double> beta;
    std::vector<double> h;
    std::vector<std::int64_t> n;
    std::vector<std::string> quantity;
    std::string output;
    std::string format = "csv";
};

int cmd_scan(const ScanFlags& f) {
    ScanGrid grid;
    grid.d_list = f.d;
    grid.beta_list = f.beta;
    grid.h_list = f.h;
    grid.n_list = f.n;
    for (const std::string& s : f.quantity) {
        const auto q = parse_quantity(s);
        if (!q) {
            throw UsageError("unknown quantity '" + s + "' (Z, QnPlus, Qn, Pn, coeffs, asymptotic)");
        }
        grid.quantities.push_back(*q);
    }
    if (f.format == "csv") {
        grid.format = ScanFormat::Csv;
    } else if (f.format == "json") {
        grid.format = ScanFormat::Json;
    } else {
        throw UsageError("--format must be csv or json");
    }
    grid.output_path = f.output;
    grid.validate();

    // Open the sink before computing so an unwritable path fails fast.
    std::ofstream file;
    if (!grid.output_path.empty() && grid.output_path != "-") {
        file.open(grid.output_path, std::ios::out | std::ios::trunc);
        if (!file) {
            throw IoError("cannot open '" + grid.output_path + "' for writing");
        }
    }
    std::ostream& os = file.is_open() ? static_cast<std::ostream&>(file) : std::cout;

    const std::vector<ScanRow> rows = run_scan(grid);
    for (const ScanRow& r : rows) {
        if (!r.error.empty()) {
            std::cerr << "scan: d=" << r.d << " beta=" << format_number(r.beta)
                      << " h=" << format_number(r.h) << " n=" << r.n << " "
                      << to_string(r.quantity) << ": " << r.error << "\n";
        }
    }
    if (grid.format == ScanFormat::Csv) {
        write_csv(os, rows);
    } else {
        os << dump(scan_json(rows));
    }
    os.flush();
    if (!os) {
        throw IoError("write failed for '" + grid.output_path + "'");
    }
    return kOk;
}

int cmd_verify(const std::string& suite) {
    const VerifyReport r = run_suite(suite);
    emit(to_json(r));
    for (const VerifyCase& c : r.cases) {
        if (!c.pass) {
            std::cerr << "FAIL " << c.description << ": expected " << format_number(c.expected)
                      << " actual " << format_number(c.actual) << " tol "
                      << format_number(c.tolerance) << "\n";
        }
    }
    std::cerr << "suite " << r.suite << ": " << (r.cases.size() - r.failures()) << "/"
              << r.cases.size() << " passed\n";
    return r.passed() ? kOk : kVerifyFailed;
}

// ---------------------------------------------------------------- config file

// Turns a JSON config object into flag tokens. Scalars become "--key value", arrays
// "--key v1 v2 ...".
std::vector<std::string> config_tokens(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot read config '" + path + "'");
    }
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw UsageError("config '" + path + "' is not valid JSON: " + e.what());
    }
    if (!j.is_object()) {
        throw UsageError("config '" + path + "' must be a JSON object");
    }
    auto scalar = [&](const std::string& key, const Json& v) -> std::string {
        if (v.is_string()) {
            return v.get<std::string>();
        }
        if (v.is_number_integer()) {
            return std::to_string(v.get<std::int64_t>());
        }
        if (v.is_number()) {
            return format_number(v.get<double>());
        }
        throw UsageError("config key '" + key + "' has an unsupported value");
    };
    std::vector<std::string> out;
    for (const auto& [key, value] : j.items()) {
        out.push_back("--" + key);
        if (value.is_array()) {
            for (const Json& v : value) {
                out.push_back(scalar(key, v));
            }
        } else {
            out.push_back(scalar(key, value));
        }
    }
    return out;
}

std::optional<std::string> find_config(const std::vector<std::string>& args) {
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            return args[i + 1];
        }
        if (args[i].rfind("--config=", 0) == 0) {
            return args[i].substr(9);
        }
    }
    return std::nullopt;
}

int run(int argc, char** argv) {
    apply_thread_limit();

    CLI::App app{"Littlewood-Offord concentration under the Curie-Weiss model"};
    app.require_subcommand(1);
    // -h is taken by the external field, so help is long-form only.
    app.set_help_flag("--help", "Print this help message and exit");
    std::string config_path;

    ModelFlags model;
    std::optional<std::int64_t> n;
    std::string quantity = "qn";
    std::string regime;
    std::string ladder = "H";
    int order = 0;
    ScanFlags scan;
    std::string suite = "all";

    auto add_config = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON file whose keys mirror the flags");
    };

    CLI::App* exact = app.add_subcommand("exact", "Exact finite-n value");
    model.add_to(exact);
    exact->add_option("--n", n, "Number of spins");
    exact->add_option("--quantity", quantity, "qn | qnplus | pn | z");
    add_config(exact);

    CLI::App* asym = app.add_subcommand("asymptotic", "Leading asymptotics of Q_n and Q_n+");
    model.add_to(asym);
    asym->add_option("--regime", regime, "Force a regime instead of classifying");
    add_config(asym);

    CLI::App* mf = app.add_subcommand("meanfield", "Mean-field fixed point");
    model.add_to(mf);
    add_config(mf);

    CLI::App* co = app.add_subcommand("coeffs", "Expansion coefficients");
    model.add_to(co);
    co->add_option("--ladder", ladder, "e | gamma | H | qnplus");
    co->add_option("--M", order, "Highest index");
    co->add_option("--regime", regime, "Force a regime instead of classifying");
    add_config(co);

    CLI::App* sc = app.add_subcommand("scan", "Exact vs asymptotic over a parameter grid");
    sc->add_option("--d", scan.d, "List of d")->expected(1, -1);
    sc->add_option("--beta", scan.beta, "List of beta")->expected(1, -1);
    sc->add_option("--h", scan.h, "List of h")->expected(1, -1);
    sc->add_option("--n", scan.n, "Sorted list of n")->expected(1, -1);
    sc->add_option("--quantity", scan.quantity, "Z QnPlus Qn Pn coeffs asymptotic")
        ->expected(1, -1);
    sc->add_option("--output", scan.output, "Output file (default stdout)");
    sc->add_option("--format", scan.format, "csv | json");
    add_config(sc);

    CLI::App* ve = app.add_subcommand("verify", "Run a verification suite");
    ve->add_option("--suite", suite, "bruteforce | quadrature | coefficients | meanfield | "
                                     "mixture | graphs | all");
    add_config(ve);

    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        // Config entries are spliced in after the subcommand unless the same flag is on
        // the command line, so flags win and list flags replace the config list whole.
        if (const auto path = find_config(args); path && !args.empty()) {
            std::vector<std::string> from_config = config_tokens(*path);
            std::vector<std::string> merged = {args.front()};
            std::vector<std::string> user(args.begin() + 1, args.end());
            for (std::size_t i = 0; i < from_config.size();) {
                std::size_t j = i + 1;
                while (j < from_config.size() && from_config[j].rfind("--", 0) != 0) {
                    ++j;
                }
                const std::string& key = from_config[i];
                const bool overridden =
                    std::any_of(user.begin(), user.end(), [&](const std::string& u) {
                        return u == key || u.rfind(key + "=", 0) == 0;
                    });
                if (!overridden) {
                    merged.insert(merged.end(), from_config.begin() + static_cast<long>(i),
                                  from_config.begin() + static_cast<long>(j));
                }
                i = j;
            }
            merged.insert(merged.end(), user.begin(), user.end());
            args = std::move(merged);
        }
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    if (exact->parsed()) {
        return cmd_exact(model, n, quantity);
    }
    if (asym->parsed()) {
        return cmd_asymptotic(model, regime);
    }
    if (mf->parsed()) {
        return cmd_meanfield(model);
    }
    if (co->parsed()) {
        return cmd_coeffs(model, ladder, order, regime);
    }
    if (sc->parsed()) {
        return cmd_scan(scan);
    }
    return cmd_verify(suite);
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kNumeric;
    }
}
