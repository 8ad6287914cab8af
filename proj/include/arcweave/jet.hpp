#pragma once

#include <complex>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace arcweave {

using Complex = std::complex<double>;

/// Radius value meaning "no finite singularity detected".
inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

/// Required value of a multivalued function at the jet center.
struct BranchSeed {
    Complex value;
};

/// Truncated Taylor series sum_{n<=N} a_n (z - center)^n.
///
/// Coefficients are stored in the local coordinate w = z - center. The
/// radius is a heuristic convergence radius carried along by the algebra
/// (kUnbounded when no singularity is known); it is not a certified bound.
class Jet {
public:
    /// The zero jet of order 0 at the origin.
    Jet() : center_(0.0), coeffs_(1), radius_(kUnbounded), truncated_(false) {}
    Jet(Complex center, std::vector<Complex> coeffs, double radius = kUnbounded,
        bool truncated = false);

    static Jet constant(Complex center, Complex value, int order);
    /// The jet of z itself: [center, 1, 0, ...].
    static Jet variable(Complex center, int order);
    /// The jet of w = z - center: [0, 1, 0, ...].
    static Jet identity(Complex center, int order);

    int order() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    Complex center() const noexcept { return center_; }
    std::span<const Complex> coeffs() const noexcept { return coeffs_; }
    Complex operator[](std::size_t n) const { return coeffs_[n]; }
    double radius() const noexcept { return radius_; }
    /// Set when an antiderivative dropped a coefficient above the order cap.
    bool truncated() const noexcept { return truncated_; }

    Jet with_center(Complex center) const;
    Jet with_radius(double radius) const;
    Jet with_constant(Complex a0) const;
    /// Drop coefficients above `order` (order <= this->order()).
    Jet truncate(int order) const;

    Jet operator-() const;
    Jet& operator+=(const Jet& other);
    Jet& operator-=(const Jet& other);
    Jet& operator*=(const Jet& other);
    Jet& operator/=(const Jet& other);
    Jet& operator*=(Complex scalar);
    Jet& operator+=(Complex scalar);

private:
    Complex center_;
    std::vector<Complex> coeffs_;
    double radius_;
    bool truncated_;
};

Jet operator+(Jet a, const Jet& b);
Jet operator-(Jet a, const Jet& b);
Jet operator*(Jet a, const Jet& b);
Jet operator/(Jet a, const Jet& b);
Jet operator*(Jet a, Complex scalar);
Jet operator*(Complex scalar, Jet a);
Jet operator+(Jet a, Complex scalar);

// Elementary functions composed with a jet. The multivalued ones take an
// optional seed selecting the branch at the center; without it the principal
// branch of a_0 is used. The seed must be consistent with a_0.
Jet exp(const Jet& a);
Jet log(const Jet& a, std::optional<BranchSeed> seed = std::nullopt);
Jet sqrt(const Jet& a, std::optional<BranchSeed> seed = std::nullopt);
Jet pow(const Jet& a, Complex alpha, std::optional<BranchSeed> seed = std::nullopt);
Jet sin(const Jet& a);
Jet cos(const Jet& a);

/// Termwise derivative; the order drops by one.
Jet derivative(const Jet& a);
/// Termwise primitive with constant term c0. The order rises by one unless
/// `order_cap` is given, in which case coefficients above the cap are dropped
/// and the result is flagged truncated.
Jet antiderivative(const Jet& a, Complex c0, std::optional<int> order_cap = std::nullopt);

/// Taylor coefficients of outer(inner(z)); requires inner.a0 == 0 (inner maps
/// its local coordinate to outer's local coordinate). Result is centered at
/// inner.center().
Jet compose(const Jet& outer, const Jet& inner);

/// Series reversion: the jet b (centered at 0) with compose(a, b) = identity.
/// Requires a.a0 == 0 and a.a1 != 0.
Jet revert(const Jet& a);

/// Taylor shift to center + h. Requires |h| < safety * radius.
Jet recenter(const Jet& a, Complex h, double safety = 0.9);

/// Schwarz reflection z -> conj(a(conj z)) for a jet at a real center.
Jet conj_reflect(const Jet& a, double center_tol = 1e-12);

/// True when conj_reflect(a) == a coefficientwise within `tol` (relative to
/// the largest coefficient magnitude).
bool is_real_symmetric(const Jet& a, double tol = 1e-12);

struct Evaluation {
    Complex value;
    bool outside_radius;
};

/// Horner evaluation of the k-th derivative at z.
Complex eval(const Jet& a, Complex z, int derivative_order = 0);
Evaluation eval_checked(const Jet& a, Complex z, int derivative_order = 0);

struct RadiusOptions {
    double floor = 1e-14;
    /// Coefficients whose contribution on the estimated disc falls below this
    /// fraction of the largest one are treated as rounding noise.
    double noise_fraction = 1e-13;
    /// Upper-half radius exceeding lower-half radius by this factor marks
    /// super-geometric decay (entire-like germ).
    double growth_ratio = 1.1;
};

/// Cauchy-Hadamard style estimate from a log-slope fit over the top half of
/// the significant coefficients; kUnbounded for super-geometric decay.
double radius_estimate(const Jet& a, const RadiusOptions& options = {});

}  // namespace arcweave
