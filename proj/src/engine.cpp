#include "arcweave/engine.hpp"

#include "log.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "arcweave/arclen.hpp"
#include "arcweave/error.hpp"

namespace arcweave {

namespace {

constexpr int kTailSteps = 10;
constexpr double kTailRatio = 0.9;
constexpr int kPeriodSamples = 8;
constexpr int kReplayPeriods = 4;
constexpr int kReplayStepsPerPeriod = 64;
constexpr double kReanchorTol = 1e-8;
constexpr int kReanchorTerms = 4;

double truncation_step(const Jet& d, double tol) {
    const int order = d.order();
    const double a1 = std::abs(d[1]);
    double h = kUnbounded;
    for (int n = std::max(2, order - 1); n <= order; ++n) {
        const double an = std::abs(d[static_cast<std::size_t>(n)]);
        if (an > 0) h = std::min(h, std::pow(tol * a1 / an, 1.0 / (n - 1)));
    }
    return h;
}

double nominal_step(const Jet& d, const StepControls& c) {
    return std::min({c.step_fraction * d.radius(), truncation_step(d, c.truncation_tol), c.max_step});
}

TraceSample sample_of(const Jet& d, double s, double step) {
    return {s, d[0], step, d.radius(), std::abs(std::abs(d[1]) - 1.0), 2.0 * std::abs(d[2])};
}

bool all_finite(const Jet& d) {
    return std::all_of(d.coeffs().begin(), d.coeffs().end(),
                       [](Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

Jet with_estimate(const Jet& d) { return d.with_radius(radius_estimate(d)); }

Jet parameter_jet(const Jet& gamma, double s_center) {
    const Jet s = arclength_jet(gamma, 0.0);
    Jet t = revert(s.with_constant(0.0)) + Complex(gamma.center().real());
    return t.with_center(s_center);
}

ContinuationState seeded(const CurveSpec& spec, double t0, const Jet& delta, const StepControls& controls,
                         int direction) {
    ContinuationState st;
    st.spec = spec;
    st.t0 = t0;
    st.controls = controls;
    st.direction = direction;
    st.delta = with_estimate(delta);
    st.initial = st.delta;
    st.s_center = delta.center().real();
    st.trace.push_back(sample_of(st.delta, st.s_center, nominal_step(st.delta, controls)));
    st.drift_accum = st.trace.back().unit_speed_err;
    if (controls.keep_jets) st.jets.push_back(st.delta);
    return st;
}

// Replaces the recentered prediction `predicted` (at st.s_center) by a jet
// re-derived from the expression, if the tracked parameter is still on the
// original curve and the two agree. Otherwise parameter tracking stops.
Jet reanchor(ContinuationState& st, const Jet& predicted) {
    const Complex t = eval(*st.parameter, st.s_center);
    auto drop = [&](const std::string& why) {
        logger()->debug("parameter tracking stopped at s = {}: {}", st.s_center, why);
        st.parameter.reset();
        return predicted;
    };
    if (std::abs(t.imag()) > kReanchorTol * (1.0 + std::abs(t)) || !st.spec.domain.contains(t.real())) {
        return drop("parameter left the domain");
    }
    try {
        auto ev = eval_jet(st.spec, t.real(), st.controls.order, st.branch);
        const Jet fresh = with_estimate(unit_speed_jet(ev.jet, st.s_center));
        // Compare the two germs over one nominal step rather than coefficient
        // by coefficient: where the curvature is large a rounding-level shift
        // of t moves the derivative far more than the curve itself.
        const double r = nominal_step(predicted, st.controls);
        double mismatch = 0, rn = 1;
        for (int n = 0; n <= std::min(predicted.order(), kReanchorTerms); ++n, rn *= r) {
            mismatch = std::max(mismatch, std::abs(fresh[n] - predicted[n]) * rn);
        }
        if (mismatch > kReanchorTol * (1.0 + std::abs(predicted[0]))) {
            return drop("re-derived jet disagrees with the continuation");
        }
        st.branch = std::move(ev.branch);
        // Near a singularity of t(s) the re-derived coefficients carry
        // amplified rounding noise; keep whichever jet permits the longer step.
        if (nominal_step(fresh, st.controls) < 0.5 * nominal_step(predicted, st.controls)) {
            st.parameter = with_estimate(recenter(st.parameter->with_radius(kUnbounded), st.s_center - st.parameter->center()));
            return predicted;
        }
        st.parameter = with_estimate(parameter_jet(ev.jet, st.s_center));
        return fresh;
    } catch (const Error& e) {
        return drop(e.what());
    }
}

// Newton on g(u) = Re(conj(d(u) - p0) d'(u)) with bisection fallback inside [lo, hi].
double refine_closest(const Jet& d, Complex p0, double lo, double hi) {
    auto g = [&](double u) {
        return std::real(std::conj(eval(d, u) - p0) * eval(d, u, 1));
    };
    double glo = g(lo);
    double u = 0.5 * (lo + hi);
    for (int it = 0; it < 80; ++it) {
        const Complex v = eval(d, u) - p0;
        const Complex v1 = eval(d, u, 1);
        const Complex v2 = eval(d, u, 2);
        const double gu = std::real(std::conj(v) * v1);
        const double dg = std::norm(v1) + std::real(std::conj(v) * v2);
        if ((gu < 0) == (glo < 0)) {
            lo = u;
            glo = gu;
        } else {
            hi = u;
        }
        double next = u - gu / dg;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - u) <= 1e-16 * (1.0 + std::abs(u))) return next;
        u = next;
    }
    return u;
}

LimitSet tail_limit_set(const std::vector<TraceSample>& trace) {
    std::vector<Complex> points;
    std::vector<double> s;
    points.reserve(trace.size());
    s.reserve(trace.size());
    for (const auto& t : trace) {
        points.push_back(t.point);
        s.push_back(t.s);
    }
    try {
        return classify_tail(points, s);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::TooFewSamples) throw;
        return {};
    }
}

// The curve is closed: its limit set is its own image, sampled over several
// periods so the tail winds like an infinite continuation would.
LimitSet periodic_limit_set(const ContinuationState& st, double period) {
    StepControls c = st.controls;
    c.detect_period = false;
    c.keep_jets = false;
    c.max_step = std::min(c.max_step, period / kReplayStepsPerPeriod);
    ContinuationState replay = init(st.spec, st.t0, c, st.direction);
    const double target = kReplayPeriods * period;
    try {
        while (std::abs(replay.s_center) < target) step(replay);
    } catch (const Error& e) {
        logger()->debug("period replay stopped: {}", e.what());
    }
    return tail_limit_set(replay.trace);
}

}  // namespace

void StepControls::validate() const {
    auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidArgument, what); };
    if (order < 4) fail("order must be at least 4");
    if (!(step_fraction > 0 && step_fraction <= 0.5)) fail("step fraction must lie in (0, 0.5]");
    if (!(drift_tol > 0)) fail("drift tolerance must be positive");
    if (!(min_step > 0)) fail("min step must be positive");
    if (!(max_step > min_step)) fail("max step must exceed min step");
    if (!(s_budget > 0)) fail("s budget must be positive");
    if (max_steps <= 0) fail("max steps must be positive");
    if (!(truncation_tol > 0)) fail("truncation tolerance must be positive");
    if (!(period_tol > 0)) fail("period tolerance must be positive");
    if (reanchor_every < 0) fail("re-anchor interval must be non-negative");
}

std::string_view to_string(Side side) noexcept { return side == Side::A ? "A" : "B"; }

std::string_view to_string(Classification c) noexcept {
    switch (c) {
        case Classification::Infinite: return "INFINITE";
        case Classification::FiniteObstruction: return "FINITE_OBSTRUCTION";
        case Classification::Periodic: return "PERIODIC";
        case Classification::BudgetExhausted: return "BUDGET_EXHAUSTED";
    }
    return "BUDGET_EXHAUSTED";
}

ContinuationState init(const CurveSpec& spec, double t0, const StepControls& controls, int direction) {
    controls.validate();
    if (direction != 1 && direction != -1) {
        throw Error(ErrorCode::InvalidArgument, "direction must be +1 or -1");
    }
    if (!spec.domain.contains(t0)) {
        throw Error(ErrorCode::InvalidArgument,
                    "t0 = " + std::to_string(t0) + " lies outside the curve's domain");
    }
    auto ev = eval_jet(spec, t0, controls.order);
    ContinuationState st = seeded(spec, t0, unit_speed_jet(ev.jet, 0.0), controls, direction);
    if (controls.reanchor_every > 0) {
        st.parameter = with_estimate(parameter_jet(ev.jet, 0.0));
        st.branch = std::move(ev.branch);
    }
    return st;
}

void step(ContinuationState& st) {
    const StepControls& c = st.controls;
    double h = nominal_step(st.delta, c);
    if (st.parameter) {
        // A nearby singularity of t(s) alone (t -> infinity) must not stall
        // the continuation; give up tracking instead.
        const double ha = std::min(h, nominal_step(*st.parameter, c));
        if (ha >= 0.25 * h) {
            h = ha;
        } else {
            logger()->debug("parameter tracking stopped at s = {}: t(s) radius too small", st.s_center);
            st.parameter.reset();
        }
    }
    if (!(h >= c.min_step)) {
        throw Error(ErrorCode::ObstructionDetected,
                    "step " + std::to_string(h) + " below min step at s = " + std::to_string(st.s_center));
    }
    const Jet base = st.delta.with_radius(kUnbounded);
    for (;;) {
        const Jet next = recenter(base, st.direction * h);
        const double err = std::abs(std::abs(next[1]) - 1.0);
        if (all_finite(next) && err <= c.drift_tol) {
            st.s_center += st.direction * h;
            ++st.steps;
            if (st.parameter && st.steps % c.reanchor_every == 0) {
                st.delta = reanchor(st, with_estimate(next));
            } else {
                st.delta = with_estimate(next);
                if (st.parameter) {
                    st.parameter = with_estimate(recenter(st.parameter->with_radius(kUnbounded), st.direction * h));
                }
            }
            st.trace.push_back(sample_of(st.delta, st.s_center, h));
            st.trace.back().unit_speed_err = err;
            st.drift_accum = std::max(st.drift_accum, err);
            if (c.keep_jets) st.jets.push_back(st.delta);
            return;
        }
        h *= 0.5;
        if (h < c.min_step) {
            throw Error(ErrorCode::DriftUnrecoverable,
                        "unit-speed error " + std::to_string(err) + " at s = " + std::to_string(st.s_center));
        }
    }
}

std::optional<double> detect_period(const ContinuationState& st, const Jet& previous) {
    if (st.trace.size() < 3) return std::nullopt;
    const double tol = st.controls.period_tol;
    const Complex p0 = st.initial[0];
    const Complex v0 = st.initial[1];
    const double sp = previous.center().real();
    const double h = st.s_center - sp;
    const double dir = st.direction;

    auto g = [&](double u) { return dir * std::real(std::conj(eval(previous, u) - p0) * eval(previous, u, 1)); };
    double u_prev = sp;
    double g_prev = g(sp);
    for (int j = 1; j <= kPeriodSamples; ++j) {
        const double u = sp + h * j / kPeriodSamples;
        const double gu = g(u);
        if (g_prev <= 0 && gu > 0) {
            const double us = refine_closest(previous, p0, std::min(u_prev, u), std::max(u_prev, u));
            const double period = dir * (us - st.initial.center().real());
            if (period > 10 * tol && std::abs(eval(previous, us) - p0) <= tol &&
                std::abs(eval(previous, us, 1) - v0) <= tol) {
                const Jet there = recenter(previous.with_radius(kUnbounded), us - sp);
                const double r = std::min(1.0, 0.5 * st.initial.radius());
                const int top = std::min(there.order(), 12);
                double mismatch = 0;
                double rn = 1;
                for (int n = 0; n <= top; ++n, rn *= r) {
                    mismatch = std::max(mismatch, std::abs(there[n] - st.initial[n]) * rn);
                }
                if (mismatch <= tol * (1.0 + std::abs(p0))) return period;
            }
        }
        u_prev = u;
        g_prev = gu;
    }
    return std::nullopt;
}

EndpointReport run(ContinuationState& st) {
    const StepControls& c = st.controls;
    EndpointReport rep;
    rep.side = st.direction > 0 ? Side::B : Side::A;

    for (;;) {
        if (st.steps >= c.max_steps) {
            rep.classification = Classification::BudgetExhausted;
            rep.s_bound = st.s_center;
            rep.note = "max steps reached";
            break;
        }
        const Jet previous = st.delta;
        try {
            step(st);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::ObstructionDetected && e.code() != ErrorCode::DriftUnrecoverable) throw;
            rep.note = e.what();
            rep.classification = Classification::BudgetExhausted;
            rep.s_bound = st.s_center;
            const auto n = st.trace.size();
            if (e.code() == ErrorCode::ObstructionDetected && n > kTailSteps) {
                const auto first = n - kTailSteps;
                bool decreasing = true;
                for (auto k = first + 1; k < n; ++k) {
                    decreasing = decreasing && st.trace[k].step < st.trace[k - 1].step;
                }
                const double h_last = st.trace.back().step;
                const double rho = std::pow(h_last / st.trace[first].step, 1.0 / (kTailSteps - 1));
                rep.ratio = rho;
                if (decreasing && rho <= kTailRatio) {
                    rep.classification = Classification::FiniteObstruction;
                    rep.s_bound = st.s_center + st.direction * h_last * rho / (1.0 - rho);
                }
            }
            break;
        }
        if (c.detect_period) {
            if (auto period = detect_period(st, previous)) {
                rep.classification = Classification::Periodic;
                rep.period = period;
                rep.s_bound = st.direction * kUnbounded;
                break;
            }
        }
        if (std::abs(st.s_center) > c.s_budget) {
            rep.classification = Classification::Infinite;
            rep.s_bound = st.direction * kUnbounded;
            break;
        }
    }

    rep.steps = st.steps;
    rep.max_unit_speed_err = st.drift_accum;
    rep.limit_set = rep.classification == Classification::Periodic ? periodic_limit_set(st, *rep.period)
                                                                    : tail_limit_set(st.trace);
    logger()->info("side {}: {} after {} steps, s = {}", to_string(rep.side), to_string(rep.classification),
                 rep.steps, st.s_center);
    return rep;
}

RunPair continue_both(const CurveSpec& spec, double t0, const StepControls& controls) {
    RunPair out{init(spec, t0, controls, -1), init(spec, t0, controls, +1), {}, {}};
    out.side_a = run(out.a);
    out.side_b = run(out.b);
    return out;
}

TracePoint evaluate_trace(const ContinuationState& st, double s) {
    if (st.jets.empty()) {
        throw Error(ErrorCode::InvalidArgument, "the run did not keep its jets");
    }
    // Jet centers are monotone in s along the run.
    const auto& jets = st.jets;
    std::size_t lo = 0, hi = jets.size() - 1;
    const double dir = st.direction;
    while (hi - lo > 1) {
        const auto mid = (lo + hi) / 2;
        if (dir * (jets[mid].center().real() - s) <= 0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const Jet& best = std::abs(jets[lo].center().real() - s) <= std::abs(jets[hi].center().real() - s)
                          ? jets[lo]
                          : jets[hi];
    return {eval(best, s), eval(best, s, 1), eval(best, s, 2)};
}

std::vector<Crossing> self_intersections(const ContinuationState& st, double lo, double hi) {
    std::vector<const TraceSample*> pts;
    for (const auto& t : st.trace) {
        if (t.s >= lo && t.s < hi) pts.push_back(&t);
    }
    std::sort(pts.begin(), pts.end(), [](auto* a, auto* b) { return a->s < b->s; });

    std::vector<Crossing> out;
    const std::size_t n = pts.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const Complex a0 = pts[i]->point, a1 = pts[i + 1]->point;
        for (std::size_t j = i + 2; j + 1 < n; ++j) {
            const Complex b0 = pts[j]->point, b1 = pts[j + 1]->point;
            const Complex da = a1 - a0, db = b1 - b0, w = b0 - a0;
            const double den = std::imag(std::conj(da) * db);
            if (den == 0) continue;
            const double ta = std::imag(std::conj(w) * db) / den;
            const double tb = std::imag(std::conj(w) * da) / den;
            if (ta < 0 || ta >= 1 || tb < 0 || tb >= 1) continue;

            double u1 = pts[i]->s + ta * (pts[i + 1]->s - pts[i]->s);
            double u2 = pts[j]->s + tb * (pts[j + 1]->s - pts[j]->s);
            Complex point = a0 + ta * da;
            if (!st.jets.empty()) {
                for (int it = 0; it < 50; ++it) {
                    const TracePoint p1 = evaluate_trace(st, u1);
                    const TracePoint p2 = evaluate_trace(st, u2);
                    const Complex f = p1.value - p2.value;
                    // [Re d1  -Re d2; Im d1  -Im d2] (du1, du2) = -f
                    const double m00 = p1.derivative.real(), m01 = -p2.derivative.real();
                    const double m10 = p1.derivative.imag(), m11 = -p2.derivative.imag();
                    const double det = m00 * m11 - m01 * m10;
                    if (det == 0) break;
                    const double du1 = (-f.real() * m11 + f.imag() * m01) / det;
                    const double du2 = (-f.imag() * m00 + f.real() * m10) / det;
                    u1 += du1;
                    u2 += du2;
                    point = evaluate_trace(st, u1).value;
                    if (std::abs(du1) + std::abs(du2) < 1e-15 * (1.0 + std::abs(u1) + std::abs(u2))) break;
                }
            }
            const bool duplicate = std::any_of(out.begin(), out.end(), [&](const Crossing& c) {
                return std::abs(c.s1 - u1) < 1e-8 && std::abs(c.s2 - u2) < 1e-8;
            });
            if (!duplicate) out.push_back({u1, u2, point});
        }
    }
    return out;
}

}  // namespace arcweave
