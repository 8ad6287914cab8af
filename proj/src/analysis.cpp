#include <algorithm>
#include <array>
#include <cmath>

#include "arcweave/engine.hpp"
#include "arcweave/error.hpp"

namespace arcweave {

namespace {

// Gauss-Kronrod 7-15 on [-1, 1]: abscissae in increasing order, Kronrod
// weights, and Gauss weights (zero on the Kronrod-only nodes).
constexpr std::array<double, 15> kNodes = {
    -0.991455371120812639206854697526329, -0.949107912342758524526189684047851,
    -0.864864423359769072789712788640926, -0.741531185599394439863864773280788,
    -0.586087235467691130294144845693013, -0.405845151377397166906606412076961,
    -0.207784955007898467600689403773245, 0.0,
    0.207784955007898467600689403773245,  0.405845151377397166906606412076961,
    0.586087235467691130294144845693013,  0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,  0.949107912342758524526189684047851,
    0.991455371120812639206854697526329};
constexpr std::array<double, 15> kKronrod = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
    0.204432940075298892414161999234649, 0.190350578064785409913256402421014,
    0.169004726639267902826583426598550, 0.140653259715525918745189590510238,
    0.104790010322250183839876322541518, 0.063092092629978553290700663189204,
    0.022935322010529224963732008058970};
constexpr std::array<double, 15> kGauss = {
    0.0, 0.129484966168869693270611432679082, 0.0, 0.279705391489276667901467771423780,
    0.0, 0.381830050505118944950369775488975, 0.0, 0.417959183673469387755102040816327,
    0.0, 0.381830050505118944950369775488975, 0.0, 0.279705391489276667901467771423780,
    0.0, 0.129484966168869693270611432679082, 0.0};

double speed(const CurveSpec& spec, double t, BranchState& branch) {
    auto ev = eval_jet(spec, t, 1, branch);
    branch = std::move(ev.branch);
    return std::abs(ev.jet[1]);
}

struct Quadrature {
    const CurveSpec& spec;
    const QuadratureOptions& options;
    double width;
    mutable long intervals = 0;

    // Integrates [a, b] (a < b) left to right; `branch` enters holding the
    // state near a and leaves holding the state near b.
    double integrate(double a, double b, BranchState& branch, int depth, double parent_err = kUnbounded) const {
        if (++intervals > options.max_intervals) {
            throw Error(ErrorCode::QuadratureNonconvergent,
                        "interval budget exhausted near [" + std::to_string(a) + ", " + std::to_string(b) + "]");
        }
        const double half = 0.5 * (b - a);
        const double mid = 0.5 * (a + b);
        BranchState local = branch;
        double kronrod = 0, gauss = 0;
        bool ok = true;
        try {
            for (std::size_t k = 0; k < kNodes.size(); ++k) {
                const double f = speed(spec, mid + half * kNodes[k], local);
                kronrod += kKronrod[k] * f;
                gauss += kGauss[k] * f;
            }
        } catch (const Error& e) {
            if (e.code() != ErrorCode::BranchJumpDetected) throw;
            ok = false;
        }
        kronrod *= half;
        gauss *= half;
        const double err = std::abs(kronrod - gauss);
        const bool stalled = err > 0.5 * parent_err && err <= options.noise_rel_tol * std::abs(kronrod);
        if (ok && (err <= options.rel_tol * std::abs(kronrod) || err <= options.abs_tol * (b - a) / width || stalled)) {
            branch = std::move(local);
            return kronrod;
        }
        if (depth >= options.max_depth || mid <= a || mid >= b) {
            throw Error(ErrorCode::QuadratureNonconvergent,
                        "no convergence on [" + std::to_string(a) + ", " + std::to_string(b) + "]");
        }
        const double child_err = ok ? err : kUnbounded;
        const double left = integrate(a, mid, branch, depth + 1, child_err);
        return left + integrate(mid, b, branch, depth + 1, child_err);
    }
};

struct LineFit {
    double slope;
    double intercept;
    double r2;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    const double slope = sxy / sxx;
    const double r2 = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return {slope, my - slope * mx, r2};
}

}  // namespace

std::string_view to_string(LengthVerdict v) noexcept {
    switch (v) {
        case LengthVerdict::Convergent: return "CONVERGENT";
        case LengthVerdict::DivergentPower: return "DIVERGENT_POWER";
        case LengthVerdict::DivergentLog: return "DIVERGENT_LOG";
    }
    return "CONVERGENT";
}

double arc_length(const CurveSpec& spec, double lo, double hi, const QuadratureOptions& options) {
    if (lo == hi) return 0.0;
    if (hi < lo) return -arc_length(spec, hi, lo, options);
    BranchState branch;
    const Quadrature q{spec, options, hi - lo};
    return q.integrate(lo, hi, branch, 0);
}

double parameter_at(const CurveSpec& spec, double t0, double s, const QuadratureOptions& options) {
    double t = t0;
    double length = 0.0;
    for (int it = 0; it < 200; ++it) {
        const double miss = s - length;
        if (std::abs(miss) <= 1e-14 * (1.0 + std::abs(s))) return t;
        BranchState branch;
        double next = t + miss / speed(spec, t, branch);
        // Damp the update until it stays inside the domain.
        while (!spec.domain.contains(next)) next = 0.5 * (t + next);
        length += arc_length(spec, t, next, options);
        if (next == t) return t;
        t = next;
    }
    throw Error(ErrorCode::QuadratureNonconvergent, "arc-length inversion did not converge");
}

std::vector<CriticalPoint> critical_scan(const CurveSpec& spec, Interval window, int grid,
                                         const CriticalOptions& options) {
    if (grid < 3) throw Error(ErrorCode::InvalidArgument, "grid needs at least 3 intervals");
    if (!(window.lo < window.hi) || window.lo < spec.domain.lo || window.hi > spec.domain.hi) {
        throw Error(ErrorCode::InvalidArgument, "scan window must lie inside the curve's domain");
    }
    const auto count = static_cast<std::size_t>(grid) + 1;
    std::vector<double> t(count), g(count, std::nan(""));
    std::vector<BranchState> states(count);
    BranchState branch;
    for (std::size_t k = 0; k < count; ++k) {
        t[k] = window.lo + (window.hi - window.lo) * static_cast<double>(k) / grid;
        if (!spec.domain.contains(t[k])) continue;
        try {
            g[k] = speed(spec, t[k], branch);
            states[k] = branch;
        } catch (const Error&) {
            branch.clear();
        }
    }

    std::vector<CriticalPoint> found;
    for (std::size_t k = 1; k + 1 < count; ++k) {
        if (std::isnan(g[k]) || std::isnan(g[k - 1]) || std::isnan(g[k + 1])) continue;
        const double neighbour = std::max(g[k - 1], g[k + 1]);
        if (!(g[k] <= g[k - 1] && g[k] <= g[k + 1] && g[k] < (1.0 - 1e-6) * neighbour)) continue;

        Complex z = t[k];
        bool converged = false;
        try {
            for (int it = 0; it < options.max_iterations; ++it) {
                const auto ev = eval_jet(spec, z, 2, states[k]);
                const Complex d1 = ev.jet[1];
                const Complex d2 = 2.0 * ev.jet[2];
                if (d1 == Complex{}) {
                    converged = true;
                    break;
                }
                if (d2 == Complex{}) break;
                const Complex dz = d1 / d2;
                z -= dz;
                if (std::abs(dz) <= options.newton_tol * (1.0 + std::abs(z))) {
                    converged = true;
                    break;
                }
            }
        } catch (const Error&) {
            continue;
        }
        if (!converged || std::abs(z.imag()) > options.imag_tol || !window.contains(z.real())) continue;
        BranchState local = states[k];
        double residual;
        try {
            residual = speed(spec, z.real(), local);
        } catch (const Error&) {
            continue;
        }
        if (residual > options.residual_tol) continue;
        const bool duplicate = std::any_of(found.begin(), found.end(), [&](const CriticalPoint& c) {
            return std::abs(c.t - z.real()) < 1e-7;
        });
        if (!duplicate) found.push_back({z.real(), residual});
    }
    std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.t < b.t; });
    return found;
}

LengthFit length_quadrature(const CurveSpec& spec, Interval window, const std::vector<double>& eps,
                            const QuadratureOptions& options) {
    if (eps.size() < 4) throw Error(ErrorCode::InvalidArgument, "need at least four eps values");
    for (std::size_t k = 0; k < eps.size(); ++k) {
        if (!(eps[k] > 0) || (k > 0 && !(eps[k] < eps[k - 1]))) {
            throw Error(ErrorCode::InvalidArgument, "eps values must be positive and decreasing");
        }
    }
    if (!(window.lo + eps.front() < window.hi)) {
        throw Error(ErrorCode::InvalidArgument, "largest eps leaves an empty window");
    }

    LengthFit fit;
    for (double e : eps) fit.samples.push_back({e, arc_length(spec, window.lo + e, window.hi, options)});

    std::vector<double> log_eps, log_len, log_inv, len;
    for (const auto& s : fit.samples) {
        log_eps.push_back(std::log(s.eps));
        log_len.push_back(std::log(s.length));
        log_inv.push_back(-std::log(s.eps));
        len.push_back(s.length);
    }
    const double direct = least_squares(log_eps, log_len).slope;
    fit.log_r2 = least_squares(log_inv, len).r2;

    std::vector<double> x, y;
    for (std::size_t k = 0; k + 1 < fit.samples.size(); ++k) {
        const double inc = fit.samples[k + 1].length - fit.samples[k].length;
        if (inc > 0) {
            x.push_back(log_eps[k]);
            y.push_back(std::log(inc));
        }
    }
    if (x.size() < 2) {
        // Increments vanish at rounding level: the length has converged.
        fit.increment_exponent = kUnbounded;
        fit.verdict = LengthVerdict::Convergent;
        fit.exponent = direct;
        return fit;
    }
    const double p = least_squares(x, y).slope;
    fit.increment_exponent = p;
    if (p > 0.1) {
        fit.verdict = LengthVerdict::Convergent;
        fit.exponent = direct;
    } else if (p < -0.1) {
        fit.verdict = LengthVerdict::DivergentPower;
        fit.exponent = p;
    } else {
        fit.verdict = LengthVerdict::DivergentLog;
        fit.exponent = p;
    }
    return fit;
}

}  // namespace arcweave
