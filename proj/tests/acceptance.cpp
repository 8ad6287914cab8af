// Acceptance runner: `acceptance <n>` checks criterion n (1..10), `acceptance`
// checks all of them. One PASS/FAIL line per criterion.

#include <sys/wait.h>

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "arcweave/arclen.hpp"
#include "arcweave/engine.hpp"
#include "arcweave/suite.hpp"
#include "jet_properties.hpp"

using namespace arcweave;
using namespace std::complex_literals;

namespace {

constexpr double kPi = std::numbers::pi;

struct Verdict {
    bool pass;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

ExampleCase example(const std::string& id) {
    for (auto& e : example_table()) {
        if (e.id == id) return e;
    }
    throw std::runtime_error("no example " + id);
}

Verdict c1() {
    const auto start = Clock::now();
    const CurveSpec circle = builtin("circle");
    StepControls c;
    c.s_budget = 25;
    c.detect_period = false;
    ContinuationState st = init(circle, 0.0, c);
    run(st);
    double worst = 0;
    for (const auto& s : st.trace) worst = std::max(worst, std::abs(s.point - std::exp(1i * s.s)));
    const bool reached = st.trace.back().s >= 25;

    c.detect_period = true;
    ContinuationState per = init(circle, 0.0, c);
    const EndpointReport rep = run(per);
    const double secs = seconds_since(start);
    const double period = rep.period.value_or(NAN);
    const bool pass = reached && worst <= 1e-6 && std::abs(period - 2 * kPi) <= 1e-6 && secs < 1.0;
    return {pass, fmt::format("reached s = {:.3f}, max |gamma*(s) - e^(is)| = {:.3g}, period = {:.12f}, {:.3f} s",
                              st.trace.back().s, worst, period, secs)};
}

Verdict c2() {
    double worst = 0;
    std::size_t samples = 0;
    for (const char* id : {"ex1", "ex2", "ex3", "ex7"}) {
        const ExampleCase e = example(id);
        const RunPair r = continue_both(builtin(e.builtin, e.tau), e.t0, e.controls);
        for (const auto* st : {&r.a, &r.b}) {
            for (const auto& s : st->trace) {
                worst = std::max(worst, s.unit_speed_err);
                ++samples;
            }
        }
    }
    return {worst <= 1e-8, fmt::format("max unit_speed_err = {:.3g} over {} samples", worst, samples)};
}

Verdict c3() {
    const CurveSpec inv = builtin("inverse");
    const Jet d = unit_speed_jet(eval_jet(inv, -1.0, 20).jet, 0.0);
    double high = 0;
    for (int n = 2; n <= d.order(); ++n) high = std::max(high, std::abs(d[static_cast<std::size_t>(n)]));

    StepControls c;
    c.s_budget = 12;
    c.keep_jets = true;
    ContinuationState st = init(inv, -1.0, c, -1);
    run(st);
    const Complex at = evaluate_trace(st, -10.0).value;
    const bool pass = high <= 1e-10 && std::abs(at - 9.0) <= 1e-6;
    return {pass, fmt::format("max |a_n| (n >= 2) = {:.3g}, gamma*(-10) = {:.12g}{:+.3g}i", high, at.real(), at.imag())};
}

Verdict c4() {
    const Interval window{0.1, 2 * kPi - 0.1};
    const auto half = critical_scan(builtin("ex6", 0.5), window, 2000);
    const auto eight = critical_scan(builtin("ex6", 0.8), window, 2000);
    const bool one_at_pi = half.size() == 1 && std::abs(half[0].t - kPi) <= 1e-6;
    std::string found;
    for (const auto& c : half) found += fmt::format(" {:.9g}", c.t);
    const double speed = std::abs(eval_jet(builtin("ex6", 0.5), kPi, 2).jet[1]);
    return {one_at_pi && eight.empty(),
            fmt::format("tau = 0.5: {} zero(s){} (|gamma'(pi)| = {:.12g}); tau = 0.8: {} zero(s)", half.size(),
                        found, speed, eight.size())};
}

Verdict c5() {
    const std::vector<double> eps{1e-2, 1e-3, 1e-4, 1e-5};
    const LengthFit a = length_quadrature(builtin("ex6", 0.75), {0.0, kPi}, eps);
    const LengthFit b = length_quadrature(builtin("ex6", 1.5), {0.0, kPi}, eps);
    const bool pass = a.verdict == LengthVerdict::DivergentPower && std::abs(a.exponent - (-0.25)) <= 0.05 &&
                      b.verdict == LengthVerdict::Convergent;
    return {pass, fmt::format("tau = 0.75: {} slope {:.4f}; tau = 1.5: {} (increment slope {:.3f})", to_string(a.verdict),
                              a.exponent, to_string(b.verdict), b.increment_exponent)};
}

Verdict c6() {
    const CurveSpec spiral = builtin("expspiral");

    // (a) delta(y) = gamma(-y).
    double rel = 0;
    for (double y : {1.0, 2.0, 5.0}) {
        const double ad = std::abs(eval_jet(spiral, -y, 4).jet[1]);
        const double closed = std::sqrt(1 + std::pow(y, 4)) / (std::exp(y) * y * y);
        rel = std::max(rel, std::abs(ad - closed) / closed);
    }
    const bool a_ok = rel <= 1e-10;

    // (b) tail sampled uniformly in 1/x.
    std::vector<Complex> pts;
    std::vector<double> xs;
    for (int k = 0; k < 20000; ++k) {
        const double u = -50.0 - 950.0 * k / 19999.0;
        xs.push_back(1.0 / u);
        pts.push_back(eval_point(spiral, 1.0 / u));
    }
    const LimitSet ls = classify_tail(pts, xs);
    const bool b_ok = ls.kind == LimitKind::Circle && std::abs(ls.center) <= 1e-2 && std::abs(ls.radius - 1) <= 1e-2;

    // (c) curvature growth against 2 e^y / y^3 with y = -ln|p|.
    ContinuationState st = init(spiral, -1.0, {}, -1);
    const EndpointReport rep = run(st);
    const auto& tr = st.trace;
    const double top = tr.back().curvature;
    // Last resolvable decade: from the last sample at or below a tenth of the final curvature.
    std::size_t first = tr.size() - 1;
    while (first > 0 && tr[first].curvature > top / 10) --first;
    auto y_of = [](const TraceSample& s) { return -std::log(std::abs(s.point)); };
    auto stated = [&](const TraceSample& s) { return std::log(2.0) + y_of(s) - 3 * std::log(y_of(s)); };
    auto direct = [&](const TraceSample& s) { return y_of(s) - 2 * std::log(y_of(s)); };
    auto deviation = [&](auto law, std::size_t i, std::size_t j) {
        return std::abs(std::expm1(std::log(tr[j].curvature / tr[i].curvature) - (law(tr[j]) - law(tr[i]))));
    };
    double pair_dev = 0;
    for (std::size_t k = first; k + 1 < tr.size(); ++k) pair_dev = std::max(pair_dev, deviation(stated, k, k + 1));
    const double decade_dev = deviation(stated, first, tr.size() - 1);
    const double direct_dev = deviation(direct, first, tr.size() - 1);
    const bool decade_resolved = top / tr[first].curvature >= 10.0;
    const bool c_ok = rep.classification == Classification::FiniteObstruction && decade_resolved && pair_dev <= 0.1;

    return {a_ok && b_ok && c_ok,
            fmt::format("(a) max rel err {:.3g}; (b) {} center |{:.3g}| r = {:.6f}; (c) {}, {} samples over "
                        "curvature x{:.3g} up to y = {:.3f}; against 2e^y/y^3: worst successive ratio dev {:.3g}, "
                        "decade ratio dev {:.3g}; against e^y/y^2: decade ratio dev {:.3g}",
                        rel, to_string(ls.kind), std::abs(ls.center), ls.radius, to_string(rep.classification),
                        tr.size() - first, top / tr[first].curvature, y_of(tr.back()), pair_dev, decade_dev,
                        direct_dev)};
}

Verdict c7() {
    const CurveSpec ex7 = builtin("ex7");
    const double oracle = arc_length(ex7, 0.0, 2 * kPi);
    ExampleCase e = example("ex7");
    e.controls.keep_jets = true;
    ContinuationState st = init(ex7, e.t0, e.controls);
    const EndpointReport rep = run(st);
    const double period = rep.period.value_or(NAN);
    std::vector<Crossing> xs;
    if (rep.period) xs = self_intersections(st, 0.0, period);
    const bool one = xs.size() == 1 && std::abs(xs[0].point - (-5.0 / 9.0)) <= 1e-6;
    const bool pass = rep.classification == Classification::Periodic && std::abs(period - oracle) <= 1e-4 && one;
    const Complex p = xs.empty() ? Complex(NAN, NAN) : xs[0].point;
    return {pass, fmt::format("{}, period {:.10f} vs quadrature {:.10f}, {} crossing(s), first at {:.10f}{:+.2g}i",
                              to_string(rep.classification), period, oracle, xs.size(), p.real(), p.imag())};
}

Verdict c8() {
    const ExampleCase e = example("ex3");
    const CurveSpec spec = builtin(e.builtin);
    const RunPair r = continue_both(spec, e.t0, e.controls);
    bool sides = true;
    std::string detail;
    for (const EndpointReport* s : {&r.side_a, &r.side_b}) {
        const bool ok = s->classification == Classification::Infinite && s->limit_set.kind == LimitKind::Point &&
                        std::abs(s->limit_set.point) <= 1e-3;
        sides = sides && ok;
        detail += fmt::format("side {}: {} {} |mean| = {:.3g}; ", to_string(s->side), to_string(s->classification),
                              to_string(s->limit_set.kind), std::abs(s->limit_set.point));
    }
    const LengthFit fit = length_quadrature(spec, {0.0, kPi}, {1e-2, 1e-3, 1e-4, 1e-5});
    const bool log_ok = fit.verdict == LengthVerdict::DivergentLog && fit.log_r2 >= 0.99;
    return {sides && log_ok, detail + fmt::format("length {} R^2 = {:.6f}", to_string(fit.verdict), fit.log_r2)};
}

Verdict c9() {
    const auto start = Clock::now();
    const auto outcomes = props::all(1000, 20261015);
    const double secs = seconds_since(start);
    bool ok = secs < 10.0;
    std::string detail;
    for (const auto& o : outcomes) {
        ok = ok && o.ok() && o.cases >= 1000;
        detail += fmt::format("{} {:.2g}/{:.2g}; ", o.name, o.worst, o.bound);
    }
    return {ok, detail + fmt::format("{:.2f} s", secs)};
}

Verdict c10() {
    const auto start = Clock::now();
    const std::string cmd = std::string("'") + ARCWEAVE_CLI + "' examples > /dev/null";
    const int status = std::system(cmd.c_str());
    const double secs = seconds_since(start);
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return {code == 0 && secs < 60.0, fmt::format("exit {} in {:.2f} s", code, secs)};
}

const std::vector<std::function<Verdict()>> kCriteria{c1, c2, c3, c4, c5, c6, c7, c8, c9, c10};

bool check(int n) {
    Verdict v;
    try {
        v = kCriteria[static_cast<std::size_t>(n - 1)]();
    } catch (const std::exception& e) {
        v = {false, std::string("threw ") + e.what()};
    }
    fmt::print("criterion {}: {}  {}\n", n, v.pass ? "PASS" : "FAIL", v.detail);
    std::fflush(stdout);
    return v.pass;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc > 2) {
        fmt::print(stderr, "usage: acceptance [1-10]\n");
        return 2;
    }
    if (argc == 2) {
        const int n = std::atoi(argv[1]);
        if (n < 1 || n > 10) {
            fmt::print(stderr, "criterion must be 1..10\n");
            return 2;
        }
        return check(n) ? 0 : 1;
    }
    bool all = true;
    for (int n = 1; n <= 10; ++n) all = check(n) && all;
    return all ? 0 : 1;
}
