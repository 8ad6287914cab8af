#include "arcweave/suite.hpp"

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <json.hpp>

#include "arcweave/error.hpp"

namespace arcweave {

namespace {

constexpr double kPi = 3.14159265358979323846;

StepControls budget(double s_budget) {
    StepControls c;
    c.s_budget = s_budget;
    return c;
}

LimitExpectation point(Complex w, double tol) { return {LimitKind::Point, w, {}, 0.0, tol}; }
LimitExpectation circle(Complex c, double r, double tol) { return {LimitKind::Circle, {}, c, r, tol}; }
LimitExpectation infinity() { return {LimitKind::Infinity}; }

void check_side(const char* side, Classification expected, const std::optional<LimitExpectation>& limit,
                const EndpointReport& got, std::vector<std::string>& out) {
    if (got.classification != expected) {
        out.push_back(fmt::format("side {}: {} instead of {}", side, to_string(got.classification),
                                  to_string(expected)));
    }
    if (!limit) return;
    const LimitSet& ls = got.limit_set;
    if (ls.kind != limit->kind) {
        out.push_back(fmt::format("side {}: limit set {} instead of {}", side, to_string(ls.kind),
                                  to_string(limit->kind)));
    } else if (ls.kind == LimitKind::Point && !(std::abs(ls.point - limit->point) <= limit->tol)) {
        out.push_back(fmt::format("side {}: limit point ({}, {}) off by more than {}", side, ls.point.real(),
                                  ls.point.imag(), limit->tol));
    } else if (ls.kind == LimitKind::Circle && !(std::abs(ls.center - limit->center) <= limit->tol &&
                                                 std::abs(ls.radius - limit->radius) <= limit->tol)) {
        out.push_back(fmt::format("side {}: circle ({}, {}) r = {} off by more than {}", side, ls.center.real(),
                                  ls.center.imag(), ls.radius, limit->tol));
    }
}

nlohmann::ordered_json limit_json(const std::optional<LimitExpectation>& l) {
    if (!l) return nullptr;
    nlohmann::ordered_json j{{"kind", to_string(l->kind)}};
    if (l->kind == LimitKind::Point) j["point"] = {l->point.real(), l->point.imag()};
    if (l->kind == LimitKind::Circle) {
        j["center"] = {l->center.real(), l->center.imag()};
        j["radius"] = l->radius;
    }
    if (l->kind == LimitKind::Point || l->kind == LimitKind::Circle) j["tol"] = l->tol;
    return j;
}

template <class E>
E enum_named(const nlohmann::json& j, std::initializer_list<E> values) {
    const auto name = j.get<std::string>();
    for (E v : values) {
        if (to_string(v) == name) return v;
    }
    throw Error(ErrorCode::InvalidArgument, fmt::format("unknown name '{}'", name));
}

Complex complex_at(const nlohmann::json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

std::optional<LimitExpectation> limit_from_json(const nlohmann::json& j) {
    if (j.is_null()) return std::nullopt;
    LimitExpectation l;
    l.kind = enum_named(j.at("kind"), {LimitKind::Point, LimitKind::Infinity, LimitKind::Circle, LimitKind::Unknown});
    if (l.kind == LimitKind::Point) l.point = complex_at(j.at("point"));
    if (l.kind == LimitKind::Circle) {
        l.center = complex_at(j.at("center"));
        l.radius = j.at("radius").get<double>();
    }
    if (j.contains("tol")) l.tol = j.at("tol").get<double>();
    return l;
}

}  // namespace

std::vector<ExampleCase> example_table() {
    using C = Classification;
    auto row = [](std::string id, std::string name, std::optional<double> tau, double t0, double s_budget,
                  C a, C b) {
        ExampleCase e;
        e.id = std::move(id);
        e.builtin = std::move(name);
        e.tau = tau;
        e.t0 = t0;
        e.controls = budget(s_budget);
        e.expect_a = a;
        e.expect_b = b;
        return e;
    };
    std::vector<ExampleCase> t;

    t.push_back(row("ex1", "line", {}, 0.0, 1e3, C::Infinite, C::Infinite));
    t.back().limit_a = t.back().limit_b = infinity();

    t.push_back(row("ex2", "circle", {}, 0.0, 25, C::Periodic, C::Periodic));
    t.back().limit_a = t.back().limit_b = circle(0.0, 1.0, 1e-6);
    t.back().period_window = Interval{0.0, 2 * kPi};

    // The spiral tightens exponentially in s; 25 is the shortest budget
    // whose tail fits inside the point tolerance.
    t.push_back(row("ex3", "spiral2", {}, kPi, 25, C::Infinite, C::Infinite));
    t.back().limit_a = t.back().limit_b = point(0.0, 1e-3);

    t.push_back(row("ex4", "expspiral", {}, -1.0, 1e3, C::FiniteObstruction, C::Infinite));
    t.back().limit_b = circle(0.0, 1.0, 1e-2);

    t.push_back(row("ex5", "inverse", {}, -1.0, 1e3, C::Infinite, C::Infinite));
    t.back().limit_a = t.back().limit_b = infinity();

    t.push_back(row("ex6", "ex6", 0.75, kPi, 60, C::Infinite, C::Infinite));

    t.push_back(row("ex7", "ex7", {}, 0.0, 1e3, C::Periodic, C::Periodic));
    t.back().period_window = Interval{0.0, 2 * kPi};
    return t;
}

std::string example_table_json(const std::vector<ExampleCase>& table) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& e : table) {
        nlohmann::ordered_json r{{"id", e.id}, {"builtin", e.builtin}};
        r["tau"] = e.tau ? nlohmann::ordered_json(*e.tau) : nlohmann::ordered_json(nullptr);
        r["t0"] = e.t0;
        r["s_budget"] = e.controls.s_budget;
        r["expect_a"] = to_string(e.expect_a);
        r["expect_b"] = to_string(e.expect_b);
        r["limit_a"] = limit_json(e.limit_a);
        r["limit_b"] = limit_json(e.limit_b);
        if (e.period_window) {
            r["period"] = {{"arc_length_over", {e.period_window->lo, e.period_window->hi}}, {"tol", e.period_tol}};
        } else {
            r["period"] = nullptr;
        }
        rows.push_back(r);
    }
    return rows.dump(2) + "\n";
}

ExampleCase example_case_from_json(std::string_view row) {
    using C = Classification;
    const std::initializer_list<C> verdicts{C::Infinite, C::FiniteObstruction, C::Periodic, C::BudgetExhausted};
    try {
        const auto j = nlohmann::json::parse(row);
        ExampleCase e;
        e.id = j.at("id").get<std::string>();
        e.builtin = j.at("builtin").get<std::string>();
        if (!j.at("tau").is_null()) e.tau = j.at("tau").get<double>();
        e.t0 = j.at("t0").get<double>();
        e.controls = budget(j.at("s_budget").get<double>());
        e.expect_a = enum_named(j.at("expect_a"), verdicts);
        e.expect_b = enum_named(j.at("expect_b"), verdicts);
        e.limit_a = limit_from_json(j.at("limit_a"));
        e.limit_b = limit_from_json(j.at("limit_b"));
        if (const auto& p = j.at("period"); !p.is_null()) {
            const auto& w = p.at("arc_length_over");
            e.period_window = Interval{w.at(0).get<double>(), w.at(1).get<double>()};
            e.period_tol = p.at("tol").get<double>();
        }
        return e;
    } catch (const nlohmann::json::exception& ex) {
        throw Error(ErrorCode::InvalidArgument, std::string("example row: ") + ex.what());
    }
}

ExampleResult run_example(const ExampleCase& ex) {
    const auto start = std::chrono::steady_clock::now();
    ExampleResult res{ex, {}, {}, {}, {}, 0.0};
    const CurveSpec spec = builtin(ex.builtin, ex.tau);
    RunPair runs = continue_both(spec, ex.t0, ex.controls);
    res.side_a = runs.side_a;
    res.side_b = runs.side_b;
    check_side("A", ex.expect_a, ex.limit_a, res.side_a, res.mismatches);
    check_side("B", ex.expect_b, ex.limit_b, res.side_b, res.mismatches);
    if (ex.period_window) {
        const double expected = arc_length(spec, ex.period_window->lo, ex.period_window->hi);
        res.expected_period = expected;
        for (const EndpointReport* side : {&res.side_a, &res.side_b}) {
            if (side->period && !(std::abs(*side->period - expected) <= ex.period_tol)) {
                res.mismatches.push_back(fmt::format("side {}: period {:.12g} instead of {:.12g}",
                                                     to_string(side->side), *side->period, expected));
            }
        }
    }
    res.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return res;
}

}  // namespace arcweave
