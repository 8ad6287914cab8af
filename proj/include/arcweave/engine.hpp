#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "arcweave/curvespec.hpp"
#include "arcweave/jet.hpp"
#include "arcweave/limitset.hpp"

namespace arcweave {

struct StepControls {
    int order = 30;
    double step_fraction = 0.25;
    double drift_tol = 1e-8;
    double min_step = 1e-10;
    double s_budget = 1e3;
    std::int64_t max_steps = 1'000'000;
    /// Cap for jets whose radius is unbounded (entire germs).
    double max_step = 1.0;
    /// Steps also satisfy |a_n| h^(n-1) <= truncation_tol |a_1| for the top two
    /// coefficients, so truncated tails stay at rounding level.
    double truncation_tol = 1e-16;
    double period_tol = 1e-6;
    bool detect_period = true;
    /// Re-derive the jet from the expression every k steps while the tracked
    /// parameter t(s) stays in the curve's domain (0 = pure recentering).
    int reanchor_every = 1;
    /// Keep every recentered jet so the trace can be evaluated between samples.
    bool keep_jets = false;

    /// Throws InvalidArgument when a control is out of range.
    void validate() const;
};

struct TraceSample {
    double s;
    Complex point;
    double step;
    double radius_est;
    double unit_speed_err;
    /// |gamma*''(s)|
    double curvature;
};

struct ContinuationState {
    CurveSpec spec;
    double t0 = 0.0;
    double s_center = 0.0;
    Jet delta;
    Jet initial;
    int direction = 1;
    double drift_accum = 0.0;
    std::vector<TraceSample> trace;
    StepControls controls;
    std::vector<Jet> jets;
    /// Original parameter t(s) while it is still tracked (re-anchoring only).
    std::optional<Jet> parameter;
    BranchState branch;
    std::int64_t steps = 0;
};

enum class Side { A, B };
enum class Classification { Infinite, FiniteObstruction, Periodic, BudgetExhausted };

std::string_view to_string(Side side) noexcept;
std::string_view to_string(Classification c) noexcept;

struct EndpointReport {
    Side side = Side::B;
    Classification classification = Classification::BudgetExhausted;
    /// Endpoint estimate for FINITE_OBSTRUCTION, last reached s otherwise.
    double s_bound = 0.0;
    /// Geometric ratio of the final steps (error bar of s_bound).
    double ratio = 0.0;
    std::optional<double> period;
    LimitSet limit_set;
    std::int64_t steps = 0;
    double max_unit_speed_err = 0.0;
    /// Reason the stepping stopped, empty when it reached a verdict normally.
    std::string note;
};

/// Unit-speed jet at t0 with s = 0 there. direction -1 walks toward A.
ContinuationState init(const CurveSpec& spec, double t0, const StepControls& controls = {},
                       int direction = 1);

/// One Weierstrass step; on failure the position and trace are unchanged.
void step(ContinuationState& state);

EndpointReport run(ContinuationState& state);

/// Period of the curve if it returned to its initial point and tangent during
/// the last step, using the jet before the step (`previous`).
std::optional<double> detect_period(const ContinuationState& state, const Jet& previous);

struct RunPair {
    ContinuationState a;
    ContinuationState b;
    EndpointReport side_a;
    EndpointReport side_b;
};

/// Continues from t0 in both directions.
RunPair continue_both(const CurveSpec& spec, double t0, const StepControls& controls = {});

struct TracePoint {
    Complex value;
    Complex derivative;
    Complex second;
};

/// gamma*(s) and its derivatives from the kept jets (requires keep_jets).
TracePoint evaluate_trace(const ContinuationState& state, double s);

struct Crossing {
    double s1;
    double s2;
    Complex point;
};

/// Transversal self-crossings of the trace with s1 < s2 both in [lo, hi),
/// refined by Newton on the kept jets.
std::vector<Crossing> self_intersections(const ContinuationState& state, double lo, double hi);

struct CriticalPoint {
    double t;
    double residual;
};

struct CriticalOptions {
    double newton_tol = 1e-14;
    double imag_tol = 1e-8;
    double residual_tol = 1e-8;
    int max_iterations = 60;
};

std::vector<CriticalPoint> critical_scan(const CurveSpec& spec, Interval window, int grid,
                                         const CriticalOptions& options = {});

struct QuadratureOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-11;
    int max_depth = 60;
    /// An interval whose error stops shrinking under bisection is accepted
    /// once its relative error is below this (rounding noise in |gamma'|).
    double noise_rel_tol = 1e-6;
    long max_intervals = 200'000;
};

/// Integral of |gamma'| over [lo, hi], evaluated left to right with branch
/// state carried between nodes.
double arc_length(const CurveSpec& spec, double lo, double hi, const QuadratureOptions& options = {});

/// The t with signed arc length s measured from t0.
double parameter_at(const CurveSpec& spec, double t0, double s, const QuadratureOptions& options = {});

enum class LengthVerdict { Convergent, DivergentPower, DivergentLog };

std::string_view to_string(LengthVerdict v) noexcept;

struct LengthSample {
    double eps;
    double length;
};

struct LengthFit {
    std::vector<LengthSample> samples;
    LengthVerdict verdict = LengthVerdict::Convergent;
    /// Growth exponent: p for DivergentPower, slope of log L vs log eps otherwise.
    double exponent = 0.0;
    /// Slope of log(L(eps_{k+1}) - L(eps_k)) against log eps_k.
    double increment_exponent = 0.0;
    /// Coefficient of determination of L against log(1/eps).
    double log_r2 = 0.0;
};

/// L(eps) = integral over [window.lo + eps, window.hi] for each eps (decreasing,
/// at least four) and the fitted growth law as eps -> 0.
LengthFit length_quadrature(const CurveSpec& spec, Interval window, const std::vector<double>& eps,
                            const QuadratureOptions& options = {});

}  // namespace arcweave
