#include <doctest.h>

#include <cmath>
#include <numbers>

#include "arcweave/arclen.hpp"
#include "arcweave/curvespec.hpp"
#include "support.hpp"

using namespace arcweave;
using namespace std::complex_literals;

namespace {

Jet curve_jet(std::string_view expr, Complex center, int order) { return eval_jet(parse(expr), center, order).jet; }

}  // namespace

TEST_CASE("speed squared") {
    const Jet circle = speed_squared(curve_jet("exp(i*t)", 0.0, 10));
    CHECK(test::near(circle[0], 1.0, 1e-15));
    for (int n = 1; n < circle.order(); ++n) CHECK(std::abs(circle[static_cast<std::size_t>(n)]) <= 1e-15);

    CHECK(test::near(speed_squared(Jet(0.0, {0.0, 3.0 + 4i}))[0], 25.0, 1e-13));

    const Jet q = speed_squared(Jet(0.0, {0.0, 1.0, 0.5i, 0.0, 0.0}));
    CHECK(test::near(q[0], 1.0, 1e-15));
    CHECK(test::near(q[1], 0.0, 1e-15));
    CHECK(test::near(q[2], 1.0, 1e-15));
    CHECK(is_real_symmetric(q));

    CHECK_ERROR(speed_squared(Jet(1i, {0.0, 1.0})), NonRealCenter);
}

TEST_CASE("arc length jet") {
    const Jet s = arclength_jet(curve_jet("exp(i*t)", 0.0, 10), 0.0);
    CHECK(test::near(s[1], 1.0, 1e-15));
    for (std::size_t n = 2; n <= 10; ++n) CHECK(std::abs(s[n]) <= 1e-14);

    const Jet lin = arclength_jet(Jet(0.0, {0.0, 3.0 + 4i}), 2.0);
    CHECK(test::near(lin[0], 2.0, 0.0));
    CHECK(test::near(lin[1], 5.0, 1e-14));

    // Integral of sqrt(1 + t^2): t^(2k+1) binom(1/2, k) / (2k + 1).
    const Jet p = arclength_jet(Jet(0.0, {0.0, 1.0, 0.5i, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}), 0.0);
    double binom = 1.0;
    for (int k = 0; 2 * k + 1 <= std::min(p.order(), 11); ++k) {
        CHECK(test::near(p[static_cast<std::size_t>(2 * k + 1)], binom / (2 * k + 1), 1e-14));
        if (2 * k + 2 <= p.order()) CHECK(std::abs(p[static_cast<std::size_t>(2 * k + 2)]) <= 1e-14);
        binom *= (0.5 - k) / (k + 1.0);
    }
}

TEST_CASE("unit speed jet") {
    const Jet circle = unit_speed_jet(curve_jet("exp(i*t)", 0.0, 12), 0.0);
    Complex term = 1.0;
    for (int n = 0; n <= 12; ++n) {
        CHECK(test::near(circle[static_cast<std::size_t>(n)], term, 1e-14));
        term *= 1i / double(n + 1);
    }

    const Jet line = unit_speed_jet(Jet(0.0, {0.0, 3.0 + 4i}), 0.0);
    CHECK(test::near(line[1], (3.0 + 4i) / 5.0, 1e-15));

    const Jet inv = unit_speed_jet(curve_jet("1/t", -1.0, 20), 0.0);
    CHECK(test::near(inv[0], -1.0, 1e-15));
    CHECK(test::near(inv[1], -1.0, 1e-14));
    for (std::size_t n = 2; n <= 20; ++n) CHECK(std::abs(inv[n]) <= 1e-10);

    CHECK_ERROR(unit_speed_jet(curve_jet("t^2", 0.0, 8), 0.0), ZeroDerivative);
}

TEST_CASE("unit speed jet reconstructs the curve") {
    // gamma(t) = t + i t^2 / 2 has s(t) = (t sqrt(1 + t^2) + asinh t) / 2.
    const Jet d = unit_speed_jet(Jet(0.0, {0.0, 1.0, 0.5i, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0,
                                          0, 0, 0, 0, 0, 0, 0, 0, 0, 0}),
                                 0.0);
    for (double t : {-0.3, 0.1, 0.3}) {
        const double s = (t * std::sqrt(1 + t * t) + std::asinh(t)) / 2;
        CHECK(test::near(eval(d, s), Complex(t, t * t / 2), 1e-12));
        CHECK(std::abs(std::abs(eval(d, s, 1)) - 1.0) <= 1e-11);
    }

    const CurveSpec spiral = builtin("spiral2");
    const Jet g = eval_jet(spiral, 2.0, 30).jet;
    const Jet u = unit_speed_jet(g, 7.0);
    CHECK(u.center() == Complex(7.0));
    const double r = 0.25 * std::min(1.0, radius_estimate(u));
    for (double h : {-r, -r / 2, r / 2, r}) CHECK(std::abs(std::abs(eval(u, 7.0 + h, 1)) - 1.0) <= 1e-9);

    // Translating the curve translates the unit-speed jet and nothing else.
    const Jet shifted = unit_speed_jet(g + Complex(2.0 - 1i), 7.0);
    CHECK(test::near(shifted[0], u[0] + Complex(2.0 - 1i), 1e-14));
    for (std::size_t n = 1; n <= 30; ++n) CHECK(test::near(shifted[n], u[n], 1e-12 * (1 + std::abs(u[n]))));
}

TEST_CASE("ex6 at tau = 1/2 is regular on the unit circle at t = pi") {
    const Jet g = eval_jet(builtin("ex6", 0.5), std::numbers::pi, 6).jet;
    CHECK(std::abs(std::abs(g[1]) - 3.0 / (2.0 * std::sqrt(2.0))) <= 1e-13);
}
