#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "arcweave.h"

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitMismatch = 1;
constexpr int kExitInput = 2;

struct Failure {
    std::string message;
};

void check(aw_status st) {
    if (st != AW_OK) throw Failure{std::string(aw_last_error())};
}

struct CString {
    char* p = nullptr;
    ~CString() { aw_string_free(p); }
    std::string str() const { return p ? std::string(p) : std::string(); }
};

struct CurveHandle {
    aw_curve* p = nullptr;
    ~CurveHandle() { aw_curve_free(p); }
};

struct RunHandle {
    aw_run* p = nullptr;
    ~RunHandle() { aw_run_free(p); }
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Failure{"IoError: cannot read '" + path + "'"};
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) throw Failure{"IoError: cannot write '" + path.string() + "'"};
}

std::string fmt_real(double x, int digits = 12) {
    if (std::isinf(x)) return x > 0 ? "+inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

struct CurveArgs {
    std::string expression;
    std::string builtin;
    std::optional<double> tau;
    std::vector<double> domain;

    void add(CLI::App* app) {
        auto* c = app->add_option("--curve", expression, "Curve expression in t");
        auto* b = app->add_option("--builtin", builtin, "Built-in curve name");
        c->excludes(b);
        app->add_option("--tau", tau, "Parameter of the ex6 family");
        app->add_option("--domain", domain, "Parameter domain for --curve: <lo> <hi>")->expected(2);
    }

    void open(CurveHandle& h) const {
        if (!builtin.empty()) {
            check(aw_curve_builtin(builtin.c_str(), tau.value_or(0.0), tau ? 1 : 0, &h.p));
            return;
        }
        if (expression.empty()) throw Failure{"InvalidArgument: one of --curve or --builtin is required"};
        std::string text = expression;
        if (domain.size() == 2) text += "\ndomain: " + fmt_real(domain[0], 17) + " " + fmt_real(domain[1], 17);
        if (aw_curve_parse(text.c_str(), &h.p) != AW_OK) {
            std::string msg = aw_last_error();
            const long pos = aw_last_parse_position();
            if (pos >= 0 && static_cast<std::size_t>(pos) <= expression.size()) {
                msg += "\n  " + expression + "\n  " + std::string(static_cast<std::size_t>(pos), ' ') + "^";
            }
            throw Failure{msg};
        }
    }
};

std::string limit_text(const aw_limit_set& l) {
    switch (l.kind) {
        case AW_LIMIT_POINT: return "POINT(" + fmt_real(l.point_re, 6) + ", " + fmt_real(l.point_im, 6) + ")";
        case AW_LIMIT_CIRCLE:
            return "CIRCLE(" + fmt_real(l.center_re, 6) + ", " + fmt_real(l.center_im, 6) + "; r=" +
                   fmt_real(l.radius, 6) + ")";
        default: return aw_limit_kind_name(l.kind);
    }
}

Json limit_json(const aw_limit_set& l) {
    Json j{{"kind", aw_limit_kind_name(l.kind)}};
    if (l.kind == AW_LIMIT_POINT) j["point"] = {l.point_re, l.point_im};
    if (l.kind == AW_LIMIT_CIRCLE) {
        j["center"] = {l.center_re, l.center_im};
        j["radius"] = l.radius;
    }
    j["residual"] = l.residual;
    return j;
}

int cmd_continue(const CurveArgs& curve, double t0, const aw_controls& controls, const std::string& out_dir,
                 const std::string& format, bool critical) {
    CurveHandle h;
    curve.open(h);
    RunHandle run;
    check(aw_continue(h.p, t0, &controls, critical ? 1 : 0, &run.p));

    CString report;
    check(aw_run_report_json(run.p, &report.p));
    if (!out_dir.empty()) {
        std::error_code ec;
        fs::create_directories(out_dir, ec);
        if (ec) throw Failure{"IoError: cannot create '" + out_dir + "': " + ec.message()};
        write_file(fs::path(out_dir) / "report.json", report.str());
        for (int side : {AW_SIDE_A, AW_SIDE_B}) {
            const std::string stem = side == AW_SIDE_A ? "trace_A" : "trace_B";
            CString csv;
            check(aw_run_trace_csv(run.p, side, &csv.p));
            if (format == "csv") write_file(fs::path(out_dir) / (stem + ".csv"), csv.str());
            if (format == "svg") {
                CString svg;
                check(aw_render_svg(csv.p, &svg.p));
                write_file(fs::path(out_dir) / (stem + ".svg"), svg.str());
            }
        }
    }
    if (format == "json") {
        std::cout << report.str();
        return kExitOk;
    }
    for (int side : {AW_SIDE_A, AW_SIDE_B}) {
        aw_endpoint e;
        check(aw_run_endpoint(run.p, side, &e));
        std::cout << "side " << (side == AW_SIDE_A ? 'A' : 'B') << ": " << aw_classification_name(e.classification)
                  << "  s_bound=" << fmt_real(e.s_bound);
        if (e.classification == AW_FINITE_OBSTRUCTION) std::cout << " (ratio " << fmt_real(e.ratio, 3) << ")";
        if (e.has_period) std::cout << "  period=" << fmt_real(e.period);
        std::cout << "  limit=" << limit_text(e.limit_set) << "  steps=" << e.steps << "\n";
    }
    return kExitOk;
}

int cmd_examples(bool seed_table, const std::string& table_path, const std::string& format, const std::string& out_dir) {
    if (seed_table) {
        CString table;
        check(aw_examples_table_json(&table.p));
        std::cout << table.str();
        return kExitOk;
    }
    Json rows = Json::array();
    bool all = true;
    Json custom;
    if (!table_path.empty()) {
        try {
            custom = Json::parse(read_file(table_path));
        } catch (const Json::exception& e) {
            throw Failure{"InvalidArgument: " + table_path + ": " + e.what()};
        }
        if (!custom.is_array()) throw Failure{"InvalidArgument: " + table_path + ": expected an array of rows"};
    }
    const std::size_t n = table_path.empty() ? aw_examples_count() : custom.size();
    if (format != "json") {
        std::printf("%-5s %-9s %-20s %-20s %-36s %s\n", "ex", "curve", "A", "B", "limit sets (A | B)", "period");
    }
    for (std::size_t k = 0; k < n; ++k) {
        CString row;
        int matched = 0;
        if (table_path.empty()) {
            check(aw_example_run(k, &row.p, &matched));
        } else {
            check(aw_example_run_case(custom[k].dump().c_str(), &row.p, &matched));
        }
        Json r = Json::parse(row.str());
        r["matched"] = matched != 0;
        all = all && matched;
        if (!out_dir.empty()) {
            const fs::path dir = fs::path(out_dir) / r["id"].get<std::string>();
            std::error_code ec;
            fs::create_directories(dir, ec);
            if (ec) throw Failure{"IoError: cannot create '" + dir.string() + "': " + ec.message()};
            write_file(dir / "result.json", r.dump(2) + "\n");
        }
        if (format != "json") {
            auto kind = [](const Json& side) {
                const Json& ls = side["limit_set"];
                std::string k = ls["kind"].get<std::string>();
                const Json& p = ls["params"];
                if (k == "POINT") k += "(" + fmt_real(p["re"].is_null() ? NAN : p["re"].get<double>(), 3) + "," +
                                       fmt_real(p["im"].is_null() ? NAN : p["im"].get<double>(), 3) + ")";
                if (k == "CIRCLE") k += "(r=" + fmt_real(p["radius"].is_null() ? NAN : p["radius"].get<double>(), 4) + ")";
                return k;
            };
            const Json& a = r["sideA"];
            const Json& b = r["sideB"];
            std::string period = "-";
            if (!a["period"].is_null()) period = fmt_real(a["period"].get<double>(), 10);
            std::printf("%-5s %-9s %-20s %-20s %-36s %s  %s\n", r["id"].get<std::string>().c_str(),
                        r["builtin"].get<std::string>().c_str(), a["classification"].get<std::string>().c_str(),
                        b["classification"].get<std::string>().c_str(), (kind(a) + " | " + kind(b)).c_str(),
                        period.c_str(), matched ? "ok" : "MISMATCH");
            for (const auto& m : r["mismatches"]) std::printf("      %s\n", m.get<std::string>().c_str());
        }
        rows.push_back(r);
    }
    if (format == "json") std::cout << rows.dump(2) << "\n";
    return all ? kExitOk : kExitMismatch;
}

int cmd_classify(const std::string& trace, const std::string& format) {
    const std::string csv = read_file(trace);
    aw_limit_set l;
    check(aw_classify_csv(csv.c_str(), &l));
    if (format == "json") {
        std::cout << limit_json(l).dump(2) << "\n";
    } else {
        std::cout << limit_text(l) << "  residual=" << fmt_real(l.residual, 3) << "\n";
    }
    return kExitOk;
}

int cmd_critical(const CurveArgs& curve, double lo, double hi, int grid, const std::string& format) {
    CurveHandle h;
    curve.open(h);
    std::size_t count = 0;
    check(aw_critical_scan(h.p, lo, hi, grid, nullptr, nullptr, 0, &count));
    std::vector<double> t(count), res(count);
    check(aw_critical_scan(h.p, lo, hi, grid, t.data(), res.data(), count, &count));
    if (format == "json") {
        Json arr = Json::array();
        for (std::size_t k = 0; k < count; ++k) arr.push_back({{"t", t[k]}, {"residual", res[k]}});
        std::cout << arr.dump(2) << "\n";
    } else if (format == "csv") {
        std::cout << "t,residual\n";
        for (std::size_t k = 0; k < count; ++k) std::cout << fmt_real(t[k], 17) << "," << fmt_real(res[k], 17) << "\n";
    } else {
        if (count == 0) std::cout << "no critical points (locally conformal on the window)\n";
        for (std::size_t k = 0; k < count; ++k) {
            std::cout << "t = " << fmt_real(t[k], 15) << "  |gamma'| = " << fmt_real(res[k], 3) << "\n";
        }
    }
    return kExitOk;
}

int cmd_length(const CurveArgs& curve, double lo, double hi, const std::vector<double>& eps,
               const std::string& format) {
    CurveHandle h;
    curve.open(h);
    std::vector<double> len(eps.size());
    aw_length_fit fit;
    check(aw_length_quadrature(h.p, lo, hi, eps.data(), eps.size(), len.data(), &fit));
    if (format == "json") {
        Json samples = Json::array();
        for (std::size_t k = 0; k < eps.size(); ++k) samples.push_back({{"eps", eps[k]}, {"length", len[k]}});
        Json j{{"samples", samples},
               {"verdict", aw_length_verdict_name(fit.verdict)},
               {"exponent", fit.exponent},
               {"increment_exponent", fit.increment_exponent},
               {"log_r2", fit.log_r2}};
        std::cout << j.dump(2) << "\n";
    } else if (format == "csv") {
        std::cout << "eps,length\n";
        for (std::size_t k = 0; k < eps.size(); ++k) std::cout << fmt_real(eps[k], 17) << "," << fmt_real(len[k], 17) << "\n";
    } else {
        for (std::size_t k = 0; k < eps.size(); ++k) {
            std::cout << "eps = " << fmt_real(eps[k], 6) << "  L = " << fmt_real(len[k], 15) << "\n";
        }
        std::cout << aw_length_verdict_name(fit.verdict) << "  exponent=" << fmt_real(fit.exponent, 6)
                  << "  increment_exponent=" << fmt_real(fit.increment_exponent, 6)
                  << "  log_r2=" << fmt_real(fit.log_r2, 6) << "\n";
    }
    return kExitOk;
}

int cmd_render(const std::string& trace, const std::string& out) {
    const std::string csv = read_file(trace);
    CString svg;
    check(aw_render_svg(csv.c_str(), &svg.p));
    if (out.empty() || out == "-") {
        std::cout << svg.str();
    } else {
        write_file(out, svg.str());
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    const char* level = std::getenv("ARCWEAVE_LOG");
    if (aw_set_log_level(level && *level ? level : "error") != AW_OK) {
        std::cerr << "ARCWEAVE_LOG: " << aw_last_error() << "\n";
        return kExitInput;
    }

    CLI::App app{"Arc-length continuation of analytic curves"};
    app.require_subcommand(1);
    const std::vector<std::string> text_formats{"text", "json", "csv"};

    aw_controls controls;
    aw_controls_default(&controls);
    CurveArgs curve;
    double t0 = 0.0;
    std::string out_dir, format = "csv";
    bool no_critical = false, no_period = false;
    auto* cont = app.add_subcommand("continue", "Continue a curve in both directions by arc length");
    curve.add(cont);
    cont->add_option("--t0", t0, "Starting parameter")->required();
    cont->add_option("--order", controls.order, "Jet order")->capture_default_str();
    cont->add_option("--step-fraction", controls.step_fraction, "Step as a fraction of the radius")->capture_default_str();
    cont->add_option("--drift-tol", controls.drift_tol, "Unit-speed tolerance")->capture_default_str();
    cont->add_option("--min-step", controls.min_step, "Smallest admissible step")->capture_default_str();
    cont->add_option("--max-step", controls.max_step, "Largest step")->capture_default_str();
    cont->add_option("--s-budget", controls.s_budget, "Arc length after which a side counts as infinite")->capture_default_str();
    cont->add_option("--max-steps", controls.max_steps, "Step budget per side")->capture_default_str();
    cont->add_option("--period-tol", controls.period_tol, "Closing tolerance for period detection")->capture_default_str();
    cont->add_option("--reanchor-every", controls.reanchor_every, "Re-derive the jet every k steps (0 = never)")->capture_default_str();
    cont->add_flag("--no-critical", no_critical, "Skip the critical-point scan");
    cont->add_flag("--no-period", no_period, "Run to the budget without closing on a period");
    cont->add_option("--out", out_dir, "Directory for report.json and traces");
    cont->add_option("--format", format, "Trace files: csv, svg, or json (report only, printed)")
        ->check(CLI::IsMember({"csv", "json", "svg"}))
        ->capture_default_str();

    bool seed_table = false;
    std::string ex_format = "text", ex_out, ex_table;
    auto* ex = app.add_subcommand("examples", "Run the built-in example suite against its expectation table");
    ex->add_flag("--seed-table", seed_table, "Print the expectation table and exit");
    ex->add_option("--format", ex_format, "text or json")->check(CLI::IsMember({"text", "json"}));
    ex->add_option("--out", ex_out, "Directory for one result file per example");
    ex->add_option("--table", ex_table, "Expectation table in the --seed-table format");

    std::string trace, cl_format = "text";
    auto* cl = app.add_subcommand("classify", "Classify the limit set of a trace tail");
    cl->add_option("--trace", trace, "Trace CSV")->required();
    cl->add_option("--format", cl_format, "text or json")->check(CLI::IsMember({"text", "json"}));

    CurveArgs cr_curve;
    double lo = 0, hi = 0;
    int grid = 2000;
    std::string cr_format = "text";
    auto* cr = app.add_subcommand("critical", "Find zeros of gamma' on a parameter window");
    cr_curve.add(cr);
    cr->add_option("--lo", lo, "Window start")->required();
    cr->add_option("--hi", hi, "Window end")->required();
    cr->add_option("--grid", grid, "Grid intervals")->capture_default_str();
    cr->add_option("--format", cr_format, "text, json or csv")->check(CLI::IsMember(text_formats));

    CurveArgs ln_curve;
    double ln_lo = 0, ln_hi = 0;
    std::vector<double> eps{1e-2, 1e-3, 1e-4, 1e-5};
    std::string ln_format = "text";
    auto* ln = app.add_subcommand("length", "Arc length over [lo + eps, hi] as eps shrinks");
    ln_curve.add(ln);
    ln->add_option("--lo", ln_lo, "Singular end of the window")->required();
    ln->add_option("--hi", ln_hi, "Other end of the window")->required();
    ln->add_option("--eps", eps, "Decreasing offsets from lo")->delimiter(',')->capture_default_str();
    ln->add_option("--format", ln_format, "text, json or csv")->check(CLI::IsMember(text_formats));

    std::string rd_trace, rd_out;
    auto* rd = app.add_subcommand("render", "Render a trace CSV as an SVG polyline");
    rd->add_option("--trace", rd_trace, "Trace CSV")->required();
    rd->add_option("--out", rd_out, "SVG path (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        if (no_period) controls.detect_period = 0;
        if (*cont) return cmd_continue(curve, t0, controls, out_dir, format, !no_critical);
        if (*ex) return cmd_examples(seed_table, ex_table, ex_format, ex_out);
        if (*cl) return cmd_classify(trace, cl_format);
        if (*cr) return cmd_critical(cr_curve, lo, hi, grid, cr_format);
        if (*ln) return cmd_length(ln_curve, ln_lo, ln_hi, eps, ln_format);
        if (*rd) return cmd_render(rd_trace, rd_out);
    } catch (const Failure& f) {
        std::cerr << "error: " << f.message << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
