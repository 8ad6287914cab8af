#include "arcweave.h"

#include <spdlog/common.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <json.hpp>
#include <string>

#include "arcweave/engine.hpp"
#include "arcweave/error.hpp"
#include "arcweave/report.hpp"
#include "arcweave/suite.hpp"
#include "log.hpp"

struct aw_curve {
    arcweave::CurveSpec spec;
};

struct aw_run {
    arcweave::RunPair runs;
    arcweave::RunReport report;
};

namespace {

using namespace arcweave;

constexpr double kPi = 3.14159265358979323846;

thread_local std::string last_error;
thread_local long last_parse_position = -1;

aw_status fail(aw_status status, const std::string& message) {
    last_error = message;
    return status;
}

// Runs `body` and maps exceptions to status codes.
template <typename F>
aw_status guarded(F&& body) {
    last_error.clear();
    last_parse_position = -1;
    try {
        body();
        return AW_OK;
    } catch (const ParseError& e) {
        last_parse_position = static_cast<long>(e.position());
        return fail(AW_E_PARSE, e.what());
    } catch (const Error& e) {
        return fail(static_cast<aw_status>(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(AW_E_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(AW_E_INTERNAL, e.what());
    }
}

void require(bool ok, const char* what) {
    if (!ok) throw Error(ErrorCode::InvalidArgument, what);
}

char* copy_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

StepControls from_c(const aw_controls& c) {
    StepControls s;
    s.order = c.order;
    s.step_fraction = c.step_fraction;
    s.drift_tol = c.drift_tol;
    s.min_step = c.min_step;
    s.s_budget = c.s_budget;
    s.max_steps = c.max_steps;
    s.max_step = c.max_step;
    s.truncation_tol = c.truncation_tol;
    s.period_tol = c.period_tol;
    s.detect_period = c.detect_period != 0;
    s.reanchor_every = c.reanchor_every;
    s.keep_jets = c.keep_jets != 0;
    return s;
}

aw_limit_set to_c(const LimitSet& l) {
    return {static_cast<int>(l.kind), l.point.real(), l.point.imag(), l.center.real(), l.center.imag(),
            l.radius, l.residual};
}

aw_endpoint to_c(const EndpointReport& e) {
    return {static_cast<int>(e.side), static_cast<int>(e.classification), e.s_bound, e.ratio,
            e.period.has_value() ? 1 : 0, e.period.value_or(0.0), to_c(e.limit_set), e.steps,
            e.max_unit_speed_err};
}

aw_sample to_c(const TraceSample& t) {
    return {t.s, t.point.real(), t.point.imag(), t.step, t.radius_est, t.unit_speed_err, t.curvature};
}

const ContinuationState& side_state(const aw_run* run, int side) {
    require(side == AW_SIDE_A || side == AW_SIDE_B, "side must be AW_SIDE_A or AW_SIDE_B");
    return side == AW_SIDE_A ? run->runs.a : run->runs.b;
}

// Window of about one turn of the parameter on each side of t0, kept off
// the ends of a finite domain.
Interval critical_window(const Interval& domain, double t0) {
    double lo = std::max(domain.lo, t0 - 2 * kPi);
    double hi = std::min(domain.hi, t0 + 2 * kPi);
    const double margin = 1e-3 * std::min(1.0, hi - lo);
    if (lo == domain.lo) lo += margin;
    if (hi == domain.hi) hi -= margin;
    return {lo, hi};
}

nlohmann::ordered_json limit_row(const LimitSet& l) { return nlohmann::ordered_json::parse(to_json(l)); }

nlohmann::ordered_json side_row(const EndpointReport& e) {
    nlohmann::ordered_json j{{"classification", to_string(e.classification)}};
    if (std::isfinite(e.s_bound)) j["s_bound"] = e.s_bound;
    j["period"] = e.period ? nlohmann::ordered_json(*e.period) : nlohmann::ordered_json(nullptr);
    j["limit_set"] = limit_row(e.limit_set);
    j["steps"] = e.steps;
    j["max_unit_speed_err"] = e.max_unit_speed_err;
    j["note"] = e.note;
    return j;
}

std::string example_row(const ExampleResult& r, int* matched) {
    nlohmann::ordered_json j{{"id", r.example.id}, {"builtin", r.example.builtin}};
    j["tau"] = r.example.tau ? nlohmann::ordered_json(*r.example.tau) : nlohmann::ordered_json(nullptr);
    j["sideA"] = side_row(r.side_a);
    j["sideB"] = side_row(r.side_b);
    j["expected_period"] =
        r.expected_period ? nlohmann::ordered_json(*r.expected_period) : nlohmann::ordered_json(nullptr);
    j["mismatches"] = r.mismatches;
    j["wall_ms"] = r.wall_ms;
    *matched = r.matched() ? 1 : 0;
    return j.dump(2);
}

}  // namespace

extern "C" {

const char* aw_version(void) { return "0.1.0"; }

const char* aw_last_error(void) { return last_error.c_str(); }

long aw_last_parse_position(void) { return last_parse_position; }

const char* aw_status_name(aw_status status) {
    if (status == AW_OK) return "Ok";
    if (status == AW_E_INTERNAL) return "Internal";
    static thread_local std::string name;
    name = std::string(to_string(static_cast<ErrorCode>(status)));
    return name.c_str();
}

const char* aw_classification_name(int c) {
    if (c < AW_INFINITE || c > AW_BUDGET_EXHAUSTED) return "?";
    return to_string(static_cast<Classification>(c)).data();
}

const char* aw_limit_kind_name(int kind) {
    if (kind < AW_LIMIT_POINT || kind > AW_LIMIT_UNKNOWN) return "?";
    return to_string(static_cast<LimitKind>(kind)).data();
}

const char* aw_length_verdict_name(int verdict) {
    if (verdict < AW_CONVERGENT || verdict > AW_DIVERGENT_LOG) return "?";
    return to_string(static_cast<LengthVerdict>(verdict)).data();
}

aw_status aw_set_log_level(const char* level) {
    return guarded([&] {
        require(level != nullptr, "level is null");
        const std::string name(level);
        spdlog::level::level_enum lv;
        if (name == "error") {
            lv = spdlog::level::err;
        } else if (name == "info") {
            lv = spdlog::level::info;
        } else if (name == "debug") {
            lv = spdlog::level::debug;
        } else {
            throw Error(ErrorCode::InvalidArgument, "log level must be error, info or debug");
        }
        logger()->set_level(lv);
    });
}

void aw_string_free(char* s) { std::free(s); }

void aw_controls_default(aw_controls* out) {
    if (!out) return;
    const StepControls d;
    *out = {d.order,      d.step_fraction,  d.drift_tol,         d.min_step,         d.s_budget,
            d.max_steps,  d.max_step,       d.truncation_tol,    d.period_tol,       d.detect_period ? 1 : 0,
            d.reanchor_every, d.keep_jets ? 1 : 0};
}

aw_status aw_curve_parse(const char* text, aw_curve** out) {
    return guarded([&] {
        require(text && out, "null argument");
        *out = new aw_curve{parse(text)};
    });
}

aw_status aw_curve_builtin(const char* name, double tau, int has_tau, aw_curve** out) {
    return guarded([&] {
        require(name && out, "null argument");
        *out = new aw_curve{builtin(name, has_tau ? std::optional<double>(tau) : std::nullopt)};
    });
}

aw_status aw_curve_domain(const aw_curve* curve, double* lo, double* hi) {
    return guarded([&] {
        require(curve && lo && hi, "null argument");
        *lo = curve->spec.domain.lo;
        *hi = curve->spec.domain.hi;
    });
}

aw_status aw_curve_eval(const aw_curve* curve, double t, double* re, double* im) {
    return guarded([&] {
        require(curve && re && im, "null argument");
        const Complex z = eval_point(curve->spec, t);
        *re = z.real();
        *im = z.imag();
    });
}

aw_status aw_curve_expression(const aw_curve* curve, char** out) {
    return guarded([&] {
        require(curve && out, "null argument");
        *out = copy_string(print(curve->spec.ast));
    });
}

void aw_curve_free(aw_curve* curve) { delete curve; }

aw_status aw_continue(const aw_curve* curve, double t0, const aw_controls* controls, int scan_critical,
                      aw_run** out) {
    return guarded([&] {
        require(curve && out, "null argument");
        StepControls c;
        if (controls) c = from_c(*controls);
        const auto start = std::chrono::steady_clock::now();
        RunPair runs = continue_both(curve->spec, t0, c);
        std::vector<CriticalPoint> critical;
        if (scan_critical) critical = critical_scan(curve->spec, critical_window(curve->spec.domain, t0), 2000);
        const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        RunReport report = make_report(curve->spec, t0, c, runs, std::move(critical), ms);
        *out = new aw_run{std::move(runs), std::move(report)};
    });
}

aw_status aw_run_endpoint(const aw_run* run, int side, aw_endpoint* out) {
    return guarded([&] {
        require(run && out, "null argument");
        require(side == AW_SIDE_A || side == AW_SIDE_B, "side must be AW_SIDE_A or AW_SIDE_B");
        *out = to_c(side == AW_SIDE_A ? run->runs.side_a : run->runs.side_b);
    });
}

aw_status aw_run_trace_size(const aw_run* run, int side, size_t* count) {
    return guarded([&] {
        require(run && count, "null argument");
        *count = side_state(run, side).trace.size();
    });
}

aw_status aw_run_trace(const aw_run* run, int side, aw_sample* buffer, size_t capacity) {
    return guarded([&] {
        require(run && (buffer || capacity == 0), "null argument");
        const auto& trace = side_state(run, side).trace;
        const size_t n = std::min(capacity, trace.size());
        for (size_t k = 0; k < n; ++k) buffer[k] = to_c(trace[k]);
    });
}

aw_status aw_run_trace_csv(const aw_run* run, int side, char** out) {
    return guarded([&] {
        require(run && out, "null argument");
        *out = copy_string(trace_csv(side_state(run, side).trace));
    });
}

aw_status aw_run_report_json(const aw_run* run, char** out) {
    return guarded([&] {
        require(run && out, "null argument");
        *out = copy_string(to_json(run->report));
    });
}

void aw_run_free(aw_run* run) { delete run; }

aw_status aw_report_normalize(const char* json, char** out) {
    return guarded([&] {
        require(json && out, "null argument");
        *out = copy_string(to_json(report_from_json(json)));
    });
}

aw_status aw_trace_count(const char* csv, size_t* count) {
    return guarded([&] {
        require(csv && count, "null argument");
        *count = parse_trace_csv(csv).size();
    });
}

aw_status aw_trace_parse(const char* csv, aw_sample* buffer, size_t capacity) {
    return guarded([&] {
        require(csv && (buffer || capacity == 0), "null argument");
        const auto trace = parse_trace_csv(csv);
        const size_t n = std::min(capacity, trace.size());
        for (size_t k = 0; k < n; ++k) buffer[k] = to_c(trace[k]);
    });
}

aw_status aw_classify_csv(const char* csv, aw_limit_set* out) {
    return guarded([&] {
        require(csv && out, "null argument");
        const auto trace = parse_trace_csv(csv);
        std::vector<Complex> points;
        std::vector<double> s;
        for (const auto& t : trace) {
            points.push_back(t.point);
            s.push_back(t.s);
        }
        *out = to_c(classify_tail(points, s));
    });
}

aw_status aw_render_svg(const char* csv, char** out) {
    return guarded([&] {
        require(csv && out, "null argument");
        *out = copy_string(render_svg(parse_trace_csv(csv)));
    });
}

aw_status aw_critical_scan(const aw_curve* curve, double lo, double hi, int grid, double* t, double* residual,
                           size_t capacity, size_t* count) {
    return guarded([&] {
        require(curve && count && ((t && residual) || capacity == 0), "null argument");
        const auto found = critical_scan(curve->spec, {lo, hi}, grid);
        *count = found.size();
        for (size_t k = 0; k < std::min(capacity, found.size()); ++k) {
            t[k] = found[k].t;
            residual[k] = found[k].residual;
        }
    });
}

aw_status aw_length_quadrature(const aw_curve* curve, double lo, double hi, const double* eps, size_t n,
                               double* lengths, aw_length_fit* fit) {
    return guarded([&] {
        require(curve && eps && fit, "null argument");
        const auto result = length_quadrature(curve->spec, {lo, hi}, std::vector<double>(eps, eps + n));
        if (lengths) {
            for (size_t k = 0; k < n; ++k) lengths[k] = result.samples[k].length;
        }
        *fit = {static_cast<int>(result.verdict), result.exponent, result.increment_exponent, result.log_r2};
    });
}

size_t aw_examples_count(void) { return example_table().size(); }

aw_status aw_examples_table_json(char** out) {
    return guarded([&] {
        require(out != nullptr, "null argument");
        *out = copy_string(example_table_json(example_table()));
    });
}

aw_status aw_example_run(size_t index, char** row, int* matched) {
    return guarded([&] {
        require(row && matched, "null argument");
        const auto table = example_table();
        require(index < table.size(), "example index out of range");
        *row = copy_string(example_row(run_example(table[index]), matched));
    });
}

aw_status aw_example_run_case(const char* case_json, char** row, int* matched) {
    return guarded([&] {
        require(case_json && row && matched, "null argument");
        *row = copy_string(example_row(run_example(example_case_from_json(case_json)), matched));
    });
}

}  // extern "C"
