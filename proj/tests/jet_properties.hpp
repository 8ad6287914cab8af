#pragma once

// Randomized checks of the jet algebra invariants, shared by the unit tests
// and the acceptance runner.

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "arcweave/arclen.hpp"
#include "arcweave/jet.hpp"

namespace arcweave::props {

struct Outcome {
    std::string name;
    int cases = 0;
    double worst = 0.0;
    double bound = 0.0;

    bool ok() const { return cases > 0 && worst <= bound; }
};

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

    /// Uniform in the annulus lo <= |z| <= hi.
    Complex annulus(double lo, double hi) { return std::polar(uniform(lo, hi), uniform(-M_PI, M_PI)); }

    Complex disc(double r) { return std::polar(r * std::sqrt(uniform(0, 1)), uniform(-M_PI, M_PI)); }

    /// Coefficients |a_n| <= 1 for n >= 1, centered at a random real point.
    Jet jet(int order, Complex a0) {
        std::vector<Complex> c(static_cast<std::size_t>(order) + 1);
        c[0] = a0;
        for (int n = 1; n <= order; ++n) c[static_cast<std::size_t>(n)] = disc(1.0);
        return Jet(uniform(-3, 3), std::move(c));
    }

private:
    std::mt19937_64 rng_;
};

inline double coeff_gap(const Jet& a, const Jet& b, int upto) {
    double worst = 0;
    for (int n = 0; n <= upto; ++n) {
        worst = std::max(worst, std::abs(a[static_cast<std::size_t>(n)] - b[static_cast<std::size_t>(n)]));
    }
    return worst;
}

inline double max_coeff(const Jet& a) {
    double m = 0;
    for (Complex c : a.coeffs()) m = std::max(m, std::abs(c));
    return m;
}

/// (ab)c = a(bc) and ab = ba, error relative to 1 + |coefficient|.
inline Outcome mul_algebra(int cases, std::uint64_t seed) {
    Gen g(seed);
    Outcome out{"mul commutative and associative", cases, 0.0, 1e-12};
    for (int k = 0; k < cases; ++k) {
        const Jet a = g.jet(30, g.disc(1.0));
        const Jet b = g.jet(30, g.disc(1.0)).with_center(a.center());
        const Jet c = g.jet(30, g.disc(1.0)).with_center(a.center());
        const Jet ab = a * b, ba = b * a;
        const Jet l = ab * c, r = a * (b * c);
        for (int n = 0; n <= 30; ++n) {
            const auto i = static_cast<std::size_t>(n);
            out.worst = std::max(out.worst, std::abs(ab[i] - ba[i]) / (1 + std::abs(ab[i])));
            out.worst = std::max(out.worst, std::abs(l[i] - r[i]) / (1 + std::abs(l[i])));
        }
    }
    return out;
}

/// Largest |a_n - b_n| r^n for n <= upto, relative to the largest |a_n| r^n.
inline double scaled_gap(const Jet& a, const Jet& b, int upto, double r) {
    double gap = 0, scale = 0, rn = 1;
    for (int n = 0; n <= upto; ++n, rn *= r) {
        const auto i = static_cast<std::size_t>(n);
        gap = std::max(gap, std::abs(a[i] - b[i]) * rn);
        scale = std::max(scale, std::abs(a[i]) * rn);
    }
    return gap / scale;
}

/// Length scale on which no coefficient outgrows the leading one:
/// min over n of (|c_lead| / |c_n|)^(1 / (n - lead)), capped at 1.
inline double scale_of(const Jet& a) {
    int lead = 0;
    while (lead < a.order() && a[static_cast<std::size_t>(lead)] == Complex{}) ++lead;
    const double top = std::abs(a[static_cast<std::size_t>(lead)]);
    double r = 1.0;
    for (int n = lead + 1; n <= a.order(); ++n) {
        const double cn = std::abs(a[static_cast<std::size_t>(n)]);
        if (cn > 0) r = std::min(r, std::pow(top / cn, 1.0 / (n - lead)));
    }
    return r;
}

/// sqrt(a)^2 = a for |a0| >= 0.1, coefficients weighted by the scale of sqrt(a).
inline Outcome sqrt_square(int cases, std::uint64_t seed) {
    Gen g(seed);
    Outcome out{"sqrt squared", cases, 0.0, 1e-10};
    for (int k = 0; k < cases; ++k) {
        const Jet a = g.jet(30, g.annulus(0.1, 10.0));
        const Jet r = sqrt(a);
        out.worst = std::max(out.worst, scaled_gap(a, r * r, 30, scale_of(r)));
    }
    return out;
}

/// compose(a, revert(a)) = identity for |a1| in [0.1, 10], |a_n| <= 1, N = 20,
/// coefficient n weighted by r^(n-1) with r the scale of revert(a).
inline Outcome compose_revert(int cases, std::uint64_t seed) {
    Gen g(seed);
    Outcome out{"compose(a, revert(a)) = identity", cases, 0.0, 1e-8};
    for (int k = 0; k < cases; ++k) {
        std::vector<Complex> c(21);
        c[1] = g.annulus(0.1, 10.0);
        for (int n = 2; n <= 20; ++n) c[static_cast<std::size_t>(n)] = g.disc(1.0);
        const Jet a(0.0, std::move(c));
        const Jet b = revert(a);
        const Jet id = compose(a, b);
        const double r = scale_of(b);
        double rn = 1.0 / r;
        for (int n = 0; n <= 20; ++n, rn *= r) {
            const Complex want = n == 1 ? 1.0 : 0.0;
            out.worst = std::max(out.worst, std::abs(id[static_cast<std::size_t>(n)] - want) * rn);
        }
    }
    return out;
}

/// recenter(recenter(a, h), -h) = a, compared on the disc of radius |h|.
inline Outcome recenter_inverse(int cases, std::uint64_t seed) {
    Gen g(seed);
    Outcome out{"recenter inverse", cases, 0.0, 1e-10};
    for (int k = 0; k < cases; ++k) {
        const Jet a = g.jet(30, g.disc(1.0));
        const Complex h = g.disc(0.5);
        const Jet back = recenter(recenter(a, h), -h);
        out.worst = std::max(out.worst, scaled_gap(a, back, 30, std::max(std::abs(h), 1e-3)));
    }
    return out;
}

/// conj_reflect(conj_reflect(a)) == a exactly.
inline Outcome reflect_involution(int cases, std::uint64_t seed) {
    Gen g(seed);
    Outcome out{"conj_reflect involution", cases, 0.0, 0.0};
    for (int k = 0; k < cases; ++k) {
        const Jet a = g.jet(30, g.disc(1.0));
        const Jet b = conj_reflect(conj_reflect(a));
        out.worst = std::max(out.worst, coeff_gap(a, b, 30));
        if (b.center() != a.center()) out.worst = kUnbounded;
    }
    return out;
}

/// Real-symmetric jets built as |gamma'|^2 of random curves take real values
/// on the real axis: |Im| <= 1e-10 (1 + |value|).
inline Outcome real_symmetric_eval(int cases, std::uint64_t seed) {
    Gen g(seed);
    Outcome out{"real-symmetric jets are real on the axis", cases, 0.0, 1e-10};
    for (int k = 0; k < cases; ++k) {
        const Jet gamma = g.jet(30, g.disc(1.0));
        if (std::abs(gamma[1]) < 0.1) {
            --k;
            continue;
        }
        const Jet q = speed_squared(gamma);
        const double r = std::min(1.0, 0.5 * radius_estimate(q));
        const double x = q.center().real() + g.uniform(-r, r);
        const Complex v = eval(q, x);
        out.worst = std::max(out.worst, std::abs(v.imag()) / (1 + std::abs(v)));
    }
    return out;
}

/// radius_estimate of 1/(1 - w/p) at order 32 is within 20% of |p|, for
/// |p| in [0.5, 5] in every direction.
inline Outcome pole_radius(int cases, std::uint64_t seed) {
    Gen g(seed);
    Outcome out{"radius of a simple pole", cases, 0.0, 0.2};
    for (int k = 0; k < cases; ++k) {
        const Complex p = g.annulus(0.5, 5.0);
        std::vector<Complex> c(33);
        Complex pn = 1.0;
        for (auto& x : c) {
            x = 1.0 / pn;
            pn *= p;
        }
        const double est = radius_estimate(Jet(g.uniform(-3, 3), std::move(c)));
        out.worst = std::max(out.worst, std::abs(est - std::abs(p)) / std::abs(p));
    }
    return out;
}

inline std::vector<Outcome> all(int cases, std::uint64_t seed) {
    return {mul_algebra(cases, seed),          sqrt_square(cases, seed + 1),
            compose_revert(cases, seed + 2),   recenter_inverse(cases, seed + 3),
            reflect_involution(cases, seed + 4), real_symmetric_eval(cases, seed + 5),
            pole_radius(cases, seed + 6)};
}

}  // namespace arcweave::props
