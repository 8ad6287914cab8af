#include "arcweave/arclen.hpp"

#include <algorithm>
#include <cmath>

#include "arcweave/error.hpp"

namespace arcweave {

namespace {

void require_regular(const Jet& gamma) {
    const Complex c = gamma.center();
    if (std::abs(c.imag()) > kRealCenterTol * (1.0 + std::abs(c))) {
        throw Error(ErrorCode::NonRealCenter, "arc length is anchored on the real axis");
    }
    if (gamma.order() < 1) throw Error(ErrorCode::InvalidArgument, "jet order must be >= 1");
    // a1 is negligible when the quadratic term dominates it on the scale r
    // where a2 still dominates the higher terms (capped at 1).
    const double a1 = std::abs(gamma[1]);
    const double a2 = gamma.order() >= 2 ? std::abs(gamma[2]) : 0.0;
    double r = 1.0;
    for (int n = 3; n <= gamma.order(); ++n) {
        const double an = std::abs(gamma[static_cast<std::size_t>(n)]);
        if (an > 0) r = std::min(r, std::pow(a2 / an, 1.0 / (n - 2)));
    }
    if (a1 == 0.0 || a1 <= kZeroDerivativeTol * a2 * r) {
        throw Error(ErrorCode::ZeroDerivative,
                    "gamma'(" + std::to_string(c.real()) + ") vanishes; the curve is not locally analytic there");
    }
}

}  // namespace

Jet speed_squared(const Jet& gamma) {
    require_regular(gamma);
    const Jet d = derivative(gamma.with_center(Complex(gamma.center().real(), 0.0)));
    Jet q = d * conj_reflect(d);
    // The product is real-symmetric in exact arithmetic; drop the rounding.
    std::vector<Complex> c(q.coeffs().begin(), q.coeffs().end());
    for (auto& z : c) z = z.real();
    return Jet(q.center(), std::move(c), q.radius(), q.truncated());
}

Jet arclength_jet(const Jet& gamma, double s0) {
    const Jet q = speed_squared(gamma);
    const Jet speed = sqrt(q, BranchSeed{std::abs(gamma[1])});
    // sqrt of a real-symmetric jet with a positive seed is real-symmetric too.
    std::vector<Complex> c(speed.coeffs().begin(), speed.coeffs().end());
    for (auto& z : c) z = z.real();
    return antiderivative(Jet(speed.center(), std::move(c), speed.radius()), s0);
}

Jet unit_speed_jet(const Jet& gamma, double s0) {
    const Jet s = arclength_jet(gamma, s0);
    const Jet inverse = revert(s.with_constant(0.0));
    const Jet delta = compose(gamma.with_center(s.center()), inverse);
    return delta.with_center(s0);
}

}  // namespace arcweave
