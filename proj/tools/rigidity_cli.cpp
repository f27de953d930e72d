// Command-line surface: flat-space constants, (n, C) decision reports,
// verification suites, profile comparison runs, and threshold tables.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sobrig/io_util.hpp"
#include "sobrig/munn_perelman.hpp"
#include "sobrig/rigidity.hpp"
#include "sobrig/sharp_constants.hpp"
#include "sobrig/verification.hpp"
#include "sobrig/volume_comparison.hpp"
#include "sobrig/volume_profile.hpp"

namespace {

using namespace sobrig;

const char* kind_name(ProfileKind kind) {
    switch (kind) {
        case ProfileKind::euclidean: return "euclidean";
        case ProfileKind::ratio_family: return "ratio_family";
        case ProfileKind::tabulated: return "tabulated";
    }
    return "unknown";
}

std::string real_with_digits(double x, int digits) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

int cmd_constants(int n, std::optional<int> k) {
    const EuclideanConstants c = EuclideanConstants::for_dimension(n);
    std::cout << "n = " << c.n << "\n";
    std::cout << "K0 = " << format_real(c.K0) << "\n";
    std::cout << "c0 = " << format_real(c.c0) << "\n";
    std::cout << "omega_n = " << format_real(c.omega_n) << "\n";
    std::cout << "two_sharp = " << format_real(c.two_sharp) << "\n";
    std::cout << "window_upper = " << format_real(c.window_upper) << "\n";
    if (k) std::cout << "lambda_" << *k << " = " << format_real(sharp_constant_kth(n, *k)) << "\n";
    return 0;
}

int cmd_decide(int n, double c, const std::string& mode_name, double tol) {
    const ThresholdMode mode = mode_name == "literal" ? ThresholdMode::literal_formula
                                                      : ThresholdMode::claimed_identity;
    std::cout << serialize_report(decide(n, c, mode, tol));
    return 0;
}

int cmd_verify(const std::string& suite) {
    bool all_passed = true;
    for (const int index : suite_criteria(suite)) {
        const CriterionReport rep = run_criterion(index);
        std::printf("%s  criterion %d: %s  (%.2f s, limit %.0f s)\n",
                    rep.passed() ? "PASS" : "FAIL", rep.index, rep.title.c_str(),
                    rep.elapsed_seconds, rep.time_limit_seconds);
        for (const CheckResult& c : rep.checks)
            std::printf("  %s  %.6g vs %.6g  %s\n", c.passed ? "ok    " : "FAILED", c.measured,
                        c.threshold, c.name.c_str());
        if (!rep.within_time()) std::printf("  FAILED  time budget exceeded\n");
        all_passed = all_passed && rep.passed();
    }
    return all_passed ? 0 : 1;
}

int cmd_profile_check(const std::string& config_path, std::optional<double> c_choice,
                      const std::string& out_dir) {
    namespace fs = std::filesystem;
    const VolumeProfile prof = load_profile_config(config_path);
    const EuclideanConstants consts = EuclideanConstants::for_dimension(prof.n);
    const double C = c_choice.value_or(consts.K0);
    fs::create_directories(out_dir);

    const ProfileValidation validation = profile_validate(prof);
    if (!validation.valid) {
        std::ostringstream summary;
        summary << "profile check: " << kind_name(prof.kind) << ", n = " << prof.n << "\n";
        summary << "config: " << config_path << "\n";
        summary << "invalid profile: " << validation.violation << " (near t = "
                << format_real(validation.location) << ")\n";
        atomic_write_text((fs::path(out_dir) / "summary.txt").string(), summary.str());
        std::cout << summary.str();
        return 2;
    }

    const double tail = asymptotic_ratio(prof);
    const RigidityReport report = decide(prof.n, C);
    const double b =
        report.volume_bound ? *report.volume_bound : std::pow(consts.K0 / C, 0.25 * prof.n);
    const std::vector<double> grid = default_lambda_grid();
    const ComparisonTrace trace = comparison_trace(prof, C, grid, b);

    std::ostringstream csv;
    csv << "lambda,F,F_prime,F_second,F0,G0,odi_residual,window_ok,ineq9_value,F0_ge_G0\n";
    for (const TracePoint& pt : trace.points)
        csv << format_real(pt.lambda) << ',' << format_real(pt.F) << ','
            << format_real(pt.F_prime) << ',' << format_real(pt.F_second) << ','
            << format_real(pt.F0) << ',' << format_real(pt.G0) << ','
            << format_real(pt.odi_residual) << ',' << (pt.window_ok ? 1 : 0) << ','
            << format_real(pt.ineq9_value) << ',' << (pt.F0_ge_G0 ? 1 : 0) << "\n";

    std::optional<double> first_negative;
    int f0_below = 0;
    int window_misses = 0;
    for (const TracePoint& pt : trace.points) {
        if (pt.ineq9_value < 0.0 && !first_negative) first_negative = pt.lambda;
        if (!pt.F0_ge_G0) ++f0_below;
        if (!pt.window_ok) ++window_misses;
    }

    std::ostringstream summary;
    summary << "profile check: " << kind_name(prof.kind) << ", n = " << prof.n << "\n";
    summary << "config: " << config_path << "\n";
    summary << "C = " << format_real(C) << "  (C/K0 = " << format_real(C / consts.K0) << ")\n";
    summary << "tail volume ratio " << format_real(tail) << ", bound required by C "
            << format_real(b) << "\n";
    summary << "trace: " << trace.points.size() << " lambda points in ["
            << format_real(grid.front()) << ", " << format_real(grid.back()) << "]\n";
    if (first_negative)
        summary << "finding: sign functional turns negative at lambda = "
                << format_real(*first_negative)
                << "; no manifold with this profile supports the constant C\n";
    else
        summary << "sign functional nonnegative at every sampled lambda\n";
    if (f0_below > 0)
        summary << "F0 falls below G0 at " << f0_below << " of " << trace.points.size()
                << " points\n";
    else
        summary << "F0 stays at or above G0 across the grid\n";
    if (window_misses > 0)
        summary << "curvature point leaves the admissible window at " << window_misses << " of "
                << trace.points.size() << " points\n";
    summary << "decision: isometric = " << (report.isometric_to_euclidean ? "true" : "false")
            << ", simply_connected = "
            << (report.simply_connected ? (*report.simply_connected ? "true" : "false")
                                        : "unavailable")
            << ", homotopy level = "
            << (report.homotopy_vanishing_level ? std::to_string(*report.homotopy_vanishing_level)
                                                : "unavailable")
            << "\n";
    summary << "artifacts: report.txt, trace.csv, summary.txt in " << out_dir << "\n";

    atomic_write_text((fs::path(out_dir) / "report.txt").string(), serialize_report(report));
    atomic_write_text((fs::path(out_dir) / "trace.csv").string(), csv.str());
    atomic_write_text((fs::path(out_dir) / "summary.txt").string(), summary.str());
    std::cout << summary.str();
    return 0;
}

int cmd_munn_table(int n_max, int digits, const std::string& out_path) {
    const std::vector<MunnTableRow> rows = munn_table(n_max);
    std::ostringstream csv;
    csv << "k,n,ln_C_kk,ln_delta,ln_one_minus_alpha,ln_threshold_over_K0\n";
    for (const MunnTableRow& row : rows)
        csv << row.k << ',' << row.n << ',' << real_with_digits(row.ln_C_kk, digits) << ','
            << real_with_digits(row.ln_delta, digits) << ','
            << real_with_digits(row.ln_one_minus_alpha, digits) << ','
            << real_with_digits(row.ln_threshold_over_K0, digits) << "\n";
    atomic_write_text(out_path, csv.str());
    std::cout << "wrote " << rows.size() << " rows to " << out_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"second-order Sobolev rigidity toolkit"};
    app.require_subcommand(1);

    int constants_n = 0;
    int constants_k = 0;
    CLI::App* constants = app.add_subcommand("constants", "flat-space constants for a dimension");
    constants->add_option("--n", constants_n, "dimension, at least 5")->required();
    CLI::Option* k_opt =
        constants->add_option("--k", constants_k, "also print the k-th order sharp constant");

    int decide_n = 0;
    double decide_c = 0.0;
    std::string decide_mode = "claimed";
    double decide_tol = 1e-12;
    CLI::App* decide_cmd = app.add_subcommand("decide", "rigidity conclusions for a constant C");
    decide_cmd->add_option("--n", decide_n, "dimension, at least 5")->required();
    decide_cmd->add_option("--c", decide_c, "the constant C in the inequality")->required();
    decide_cmd->add_option("--mode", decide_mode, "k = 1 homotopy threshold route")
        ->check(CLI::IsMember({"literal", "claimed"}));
    decide_cmd->add_option("--tol", decide_tol, "relative tolerance for C = K0");

    std::string verify_suite;
    CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
    verify->add_option("--suite", verify_suite, "constants, extremal, ode, munn, or all")
        ->required()
        ->check(CLI::IsMember({"constants", "extremal", "ode", "munn", "all"}));

    std::string check_config;
    double check_c = 0.0;
    std::string check_out = ".";
    CLI::App* check = app.add_subcommand("profile-check", "analyze a configured volume profile");
    check->add_option("--config", check_config, "profile config file")->required();
    CLI::Option* c_opt = check->add_option("--c", check_c, "constant C (default: K0 for the n)");
    check->add_option("--out", check_out, "directory for report.txt, trace.csv, summary.txt");

    int table_n_max = 0;
    int table_digits = 17;
    std::string table_out;
    CLI::App* table = app.add_subcommand("munn-table", "threshold table over k and n as CSV");
    table->add_option("--n-max", table_n_max, "largest dimension, at least 5")->required();
    table->add_option("--digits", table_digits, "significant digits in the table")
        ->check(CLI::Range(1, 17));
    table->add_option("--out", table_out, "output CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (app.got_subcommand(constants))
            return cmd_constants(constants_n, k_opt->count() > 0
                                                  ? std::optional<int>(constants_k)
                                                  : std::nullopt);
        if (app.got_subcommand(decide_cmd))
            return cmd_decide(decide_n, decide_c, decide_mode, decide_tol);
        if (app.got_subcommand(verify)) return cmd_verify(verify_suite);
        if (app.got_subcommand(check))
            return cmd_profile_check(check_config,
                                     c_opt->count() > 0 ? std::optional<double>(check_c)
                                                        : std::nullopt,
                                     check_out);
        if (app.got_subcommand(table)) return cmd_munn_table(table_n_max, table_digits, table_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
