#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "arcweave/limitset.hpp"
#include "support.hpp"

using namespace arcweave;
using namespace std::complex_literals;

namespace {

struct Samples {
    std::vector<Complex> points;
    std::vector<double> s;
};

template <class F>
Samples sample(F&& f, double lo, double hi, int n) {
    Samples out;
    for (int k = 0; k < n; ++k) {
        const double s = lo + (hi - lo) * k / (n - 1);
        out.s.push_back(s);
        out.points.push_back(f(s));
    }
    return out;
}

Samples mapped(Samples in, Complex alpha, Complex beta) {
    for (auto& p : in.points) p = alpha * p + beta;
    return in;
}

}  // namespace

TEST_CASE("circle fit") {
    std::vector<Complex> exact;
    for (int k = 0; k < 100; ++k) exact.push_back(std::polar(1.0, 2 * std::numbers::pi * k / 100));
    const CircleFit f = circle_fit(exact);
    CHECK(std::abs(f.center) <= 1e-12);
    CHECK(std::abs(f.radius - 1.0) <= 1e-12);
    CHECK(f.rms <= 1e-12);

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> noise(-1e-3, 1e-3);
    std::vector<Complex> noisy;
    double sum_sq = 0;
    for (int k = 0; k < 400; ++k) {
        const double e = noise(rng);
        sum_sq += e * e;
        noisy.push_back(std::polar(1.0 + e, 2 * std::numbers::pi * k / 400));
    }
    const double noise_rms = std::sqrt(sum_sq / 400);
    const CircleFit g = circle_fit(noisy);
    CHECK(std::abs(g.radius - 1.0) <= 1e-3);
    CHECK(std::abs(g.center) <= 1e-3);
    CHECK(g.rms >= 0.5 * noise_rms);
    CHECK(g.rms <= 2.0 * noise_rms);

    CHECK_ERROR(circle_fit(std::vector<Complex>{0.0, 1.0 + 1i, 2.0 + 2i}), DegenerateConfiguration);
    CHECK_ERROR(circle_fit(std::vector<Complex>{0.0, 1.0}), DegenerateConfiguration);
}

TEST_CASE("winding angle") {
    std::vector<Complex> turns;
    for (int k = 0; k <= 300; ++k) turns.push_back(std::polar(2.0, 6 * std::numbers::pi * k / 300) + 1.0);
    CHECK(winding_angle(turns, 1.0) == doctest::Approx(6 * std::numbers::pi));
}

TEST_CASE("tail classification") {
    SUBCASE("circle") {
        const Samples c = sample([](double s) { return std::exp(1i * s); }, 0, 40, 2000);
        const LimitSet ls = classify_tail(c.points, c.s);
        CHECK(ls.kind == LimitKind::Circle);
        CHECK(std::abs(ls.center) <= 1e-10);
        CHECK(std::abs(ls.radius - 1.0) <= 1e-10);
        CHECK(ls.residual <= 1e-10);
    }
    SUBCASE("spiral into a point") {
        const Samples p = sample([](double s) { return 0.5 - 1i + std::exp(-s + 1i * 3.0 * s); }, 0, 30, 1000);
        const LimitSet ls = classify_tail(p.points, p.s);
        CHECK(ls.kind == LimitKind::Point);
        CHECK(test::near(ls.point, 0.5 - 1i, 1e-9));
    }
    SUBCASE("slowly converging spiral is never a circle") {
        const Samples p = sample([](double s) { return std::exp(1i * s) / (1 + s); }, 0, 60, 3000);
        CHECK(classify_tail(p.points, p.s).kind != LimitKind::Circle);
    }
    SUBCASE("escape to infinity") {
        const Samples l = sample([](double s) { return Complex(s, 1.0); }, 0, 1000, 500);
        CHECK(classify_tail(l.points, l.s).kind == LimitKind::Infinity);
    }
    SUBCASE("short arc is unknown") {
        const Samples a = sample([](double s) { return std::exp(1i * s); }, 0, 3, 500);
        CHECK(classify_tail(a.points, a.s).kind == LimitKind::Unknown);
    }
    SUBCASE("descending arc positions") {
        const Samples c = sample([](double s) { return std::exp(1i * s); }, 0, -40, 2000);
        CHECK(classify_tail(c.points, c.s).kind == LimitKind::Circle);
    }
    SUBCASE("input validation") {
        const Samples few = sample([](double s) { return Complex(s); }, 0, 1, 10);
        CHECK_ERROR(classify_tail(few.points, few.s), TooFewSamples);
        Samples bad = sample([](double s) { return Complex(s); }, 0, 1, 60);
        bad.s[30] = bad.s[29];
        CHECK_ERROR(classify_tail(bad.points, bad.s), InvalidArgument);
        CHECK_ERROR(classify_tail(bad.points, std::span<const double>(bad.s).first(59)), InvalidArgument);
    }
}

TEST_CASE("exponential spiral tail winds onto the unit circle") {
    // gamma(x) = e^x e^(i/x) sampled for x in (-0.02, -0.001), uniformly in 1/x.
    Samples t;
    const int n = 20000;
    for (int k = 0; k < n; ++k) {
        const double u = -50.0 - 950.0 * k / (n - 1);
        const double x = 1.0 / u;
        t.s.push_back(x);
        t.points.push_back(std::exp(x) * std::exp(1i * u));
    }
    const LimitSet ls = classify_tail(t.points, t.s);
    REQUIRE(ls.kind == LimitKind::Circle);
    CHECK(std::abs(ls.center) <= 1e-2);
    CHECK(std::abs(ls.radius - 1.0) <= 1e-2);
}

TEST_CASE("classification commutes with similarity maps") {
    const Complex alpha = std::polar(2.5, 0.7), beta = 3.0 - 2i;
    const Samples c = sample([](double s) { return 0.25 + std::exp(1i * s); }, 0, 40, 2000);
    const LimitSet base = classify_tail(c.points, c.s);
    const LimitSet moved = classify_tail(mapped(c, alpha, beta).points, c.s);
    REQUIRE(base.kind == LimitKind::Circle);
    REQUIRE(moved.kind == LimitKind::Circle);
    CHECK(test::near(moved.center, alpha * base.center + beta, 1e-9));
    CHECK(moved.radius == doctest::Approx(std::abs(alpha) * base.radius).epsilon(1e-10));

    const Samples p = sample([](double s) { return std::exp(-s + 2i * s); }, 0, 40, 1000);
    const LimitSet pb = classify_tail(p.points, p.s);
    const LimitSet pm = classify_tail(mapped(p, alpha, beta).points, p.s);
    REQUIRE(pb.kind == LimitKind::Point);
    REQUIRE(pm.kind == LimitKind::Point);
    CHECK(test::near(pm.point, alpha * pb.point + beta, 1e-9));
}
