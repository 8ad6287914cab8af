#include "arcweave/jet.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "arcweave/error.hpp"

namespace arcweave {

namespace {

constexpr double kSeedTolerance = 1e-6;

void require_compatible(const Jet& a, const Jet& b) {
    if (a.center() != b.center()) {
        throw Error(ErrorCode::CenterMismatch, "jets are expanded at different centers");
    }
    if (a.order() != b.order()) {
        throw Error(ErrorCode::OrderMismatch,
                    "orders " + std::to_string(a.order()) + " and " + std::to_string(b.order()));
    }
}

// Distance from the center to the zero of the linear part of a, used to
// shrink the radius of quotients and branched functions.
double zero_distance(const Jet& a) {
    if (a.order() < 1 || a[1] == Complex{}) return kUnbounded;
    return std::abs(a[0]) / std::abs(a[1]);
}

void require_nonzero_constant(const Jet& a, const char* what) {
    if (a[0] == Complex{}) {
        throw Error(ErrorCode::BranchAtSingularity,
                    std::string(what) + " of a jet with zero constant term");
    }
}

void require_seed_close(Complex seed, Complex expected, const char* what) {
    if (std::abs(seed - expected) > kSeedTolerance * std::max(1.0, std::abs(expected))) {
        throw Error(ErrorCode::SeedInconsistent, std::string(what) + " seed does not match a0");
    }
}

// Least squares slope of y against x.
double fit_slope(std::span<const double> x, std::span<const double> y) {
    const auto n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

}  // namespace

Jet::Jet(Complex center, std::vector<Complex> coeffs, double radius, bool truncated)
    : center_(center), coeffs_(std::move(coeffs)), radius_(radius), truncated_(truncated) {
    if (coeffs_.empty()) {
        throw Error(ErrorCode::InvalidArgument, "a jet needs at least one coefficient");
    }
    if (!(radius_ > 0)) {
        throw Error(ErrorCode::InvalidArgument, "jet radius must be positive");
    }
}

Jet Jet::constant(Complex center, Complex value, int order) {
    std::vector<Complex> c(static_cast<std::size_t>(order) + 1);
    c[0] = value;
    return Jet(center, std::move(c));
}

Jet Jet::variable(Complex center, int order) {
    std::vector<Complex> c(static_cast<std::size_t>(order) + 1);
    c[0] = center;
    if (order >= 1) c[1] = 1.0;
    return Jet(center, std::move(c));
}

Jet Jet::identity(Complex center, int order) {
    std::vector<Complex> c(static_cast<std::size_t>(order) + 1);
    if (order >= 1) c[1] = 1.0;
    return Jet(center, std::move(c));
}

Jet Jet::with_center(Complex center) const {
    Jet out = *this;
    out.center_ = center;
    return out;
}

Jet Jet::with_radius(double radius) const { return Jet(center_, coeffs_, radius, truncated_); }

Jet Jet::with_constant(Complex a0) const {
    Jet out = *this;
    out.coeffs_[0] = a0;
    return out;
}

Jet Jet::truncate(int order) const {
    if (order < 0 || order > this->order()) {
        throw Error(ErrorCode::InvalidArgument, "truncation order out of range");
    }
    return Jet(center_, {coeffs_.begin(), coeffs_.begin() + order + 1}, radius_, truncated_);
}

Jet Jet::operator-() const {
    Jet out = *this;
    for (auto& c : out.coeffs_) c = -c;
    return out;
}

Jet& Jet::operator+=(const Jet& other) {
    require_compatible(*this, other);
    for (std::size_t n = 0; n < coeffs_.size(); ++n) coeffs_[n] += other.coeffs_[n];
    radius_ = std::min(radius_, other.radius_);
    truncated_ = truncated_ || other.truncated_;
    return *this;
}

Jet& Jet::operator-=(const Jet& other) {
    require_compatible(*this, other);
    for (std::size_t n = 0; n < coeffs_.size(); ++n) coeffs_[n] -= other.coeffs_[n];
    radius_ = std::min(radius_, other.radius_);
    truncated_ = truncated_ || other.truncated_;
    return *this;
}

Jet& Jet::operator*=(const Jet& other) {
    require_compatible(*this, other);
    const auto size = coeffs_.size();
    std::vector<Complex> out(size);
    for (std::size_t n = 0; n < size; ++n) {
        Complex acc{};
        for (std::size_t k = 0; k <= n; ++k) acc += coeffs_[k] * other.coeffs_[n - k];
        out[n] = acc;
    }
    coeffs_ = std::move(out);
    radius_ = std::min(radius_, other.radius_);
    truncated_ = truncated_ || other.truncated_;
    return *this;
}

Jet& Jet::operator/=(const Jet& other) {
    require_compatible(*this, other);
    const Complex b0 = other.coeffs_[0];
    if (b0 == Complex{}) {
        throw Error(ErrorCode::DivisionBySingular, "divisor vanishes at the center");
    }
    const auto size = coeffs_.size();
    std::vector<Complex> q(size);
    for (std::size_t n = 0; n < size; ++n) {
        Complex acc = coeffs_[n];
        for (std::size_t k = 1; k <= n; ++k) acc -= other.coeffs_[k] * q[n - k];
        q[n] = acc / b0;
    }
    coeffs_ = std::move(q);
    radius_ = std::min({radius_, other.radius_, zero_distance(other)});
    truncated_ = truncated_ || other.truncated_;
    return *this;
}

Jet& Jet::operator*=(Complex scalar) {
    for (auto& c : coeffs_) c *= scalar;
    return *this;
}

Jet& Jet::operator+=(Complex scalar) {
    coeffs_[0] += scalar;
    return *this;
}

Jet operator+(Jet a, const Jet& b) { return a += b; }
Jet operator-(Jet a, const Jet& b) { return a -= b; }
Jet operator*(Jet a, const Jet& b) { return a *= b; }
Jet operator/(Jet a, const Jet& b) { return a /= b; }
Jet operator*(Jet a, Complex scalar) { return a *= scalar; }
Jet operator*(Complex scalar, Jet a) { return a *= scalar; }
Jet operator+(Jet a, Complex scalar) { return a += scalar; }

Jet exp(const Jet& a) {
    // b' = a' b
    const auto c = a.coeffs();
    const auto size = c.size();
    std::vector<Complex> b(size);
    b[0] = std::exp(c[0]);
    for (std::size_t n = 1; n < size; ++n) {
        Complex acc{};
        for (std::size_t k = 1; k <= n; ++k) acc += static_cast<double>(k) * c[k] * b[n - k];
        b[n] = acc / static_cast<double>(n);
    }
    return Jet(a.center(), std::move(b), a.radius(), a.truncated());
}

Jet log(const Jet& a, std::optional<BranchSeed> seed) {
    require_nonzero_constant(a, "log");
    const auto c = a.coeffs();
    const auto size = c.size();
    std::vector<Complex> b(size);
    const Complex principal = std::log(c[0]);
    if (seed) {
        // Any representative principal + 2 pi i k is acceptable.
        const double turns = (seed->value.imag() - principal.imag()) / (2 * std::numbers::pi);
        const Complex nearest = principal + Complex(0, 2 * std::numbers::pi * std::round(turns));
        require_seed_close(seed->value, nearest, "log");
        b[0] = seed->value;
    } else {
        b[0] = principal;
    }
    // a b' = a'
    for (std::size_t n = 1; n < size; ++n) {
        Complex acc = static_cast<double>(n) * c[n];
        for (std::size_t k = 1; k < n; ++k) acc -= static_cast<double>(k) * b[k] * c[n - k];
        b[n] = acc / (static_cast<double>(n) * c[0]);
    }
    return Jet(a.center(), std::move(b), std::min(a.radius(), zero_distance(a)), a.truncated());
}

Jet sqrt(const Jet& a, std::optional<BranchSeed> seed) {
    require_nonzero_constant(a, "sqrt");
    const auto c = a.coeffs();
    const auto size = c.size();
    std::vector<Complex> b(size);
    if (seed) {
        const Complex root = seed->value;
        if (std::abs(root * root - c[0]) > kSeedTolerance * std::abs(c[0])) {
            throw Error(ErrorCode::SeedInconsistent, "sqrt seed squared differs from a0");
        }
        b[0] = root;
    } else {
        b[0] = std::sqrt(c[0]);
    }
    // b * b = a
    for (std::size_t n = 1; n < size; ++n) {
        Complex acc = c[n];
        for (std::size_t k = 1; k < n; ++k) acc -= b[k] * b[n - k];
        b[n] = acc / (2.0 * b[0]);
    }
    return Jet(a.center(), std::move(b), std::min(a.radius(), zero_distance(a)), a.truncated());
}

Jet pow(const Jet& a, Complex alpha, std::optional<BranchSeed> seed) {
    require_nonzero_constant(a, "pow");
    const auto c = a.coeffs();
    const auto size = c.size();
    std::vector<Complex> b(size);
    const Complex log_a0 = std::log(c[0]);
    if (seed) {
        // The seed must equal exp(alpha (Log a0 + 2 pi i k)) for some integer k.
        double best = std::numeric_limits<double>::infinity();
        for (int k = -16; k <= 16; ++k) {
            const Complex candidate =
                std::exp(alpha * (log_a0 + Complex(0, 2 * std::numbers::pi * k)));
            best = std::min(best, std::abs(candidate - seed->value));
        }
        if (best > kSeedTolerance * std::max(1.0, std::abs(seed->value))) {
            throw Error(ErrorCode::SeedInconsistent, "pow seed is not a branch value of a0^alpha");
        }
        b[0] = seed->value;
    } else {
        b[0] = std::exp(alpha * log_a0);
    }
    // a b' = alpha a' b
    for (std::size_t n = 1; n < size; ++n) {
        Complex acc{};
        for (std::size_t k = 1; k <= n; ++k) {
            acc += (alpha * static_cast<double>(k) - static_cast<double>(n - k)) * c[k] * b[n - k];
        }
        b[n] = acc / (static_cast<double>(n) * c[0]);
    }
    return Jet(a.center(), std::move(b), std::min(a.radius(), zero_distance(a)), a.truncated());
}

namespace {

// s' = c a', c' = -s a'
std::pair<std::vector<Complex>, std::vector<Complex>> sin_cos_series(std::span<const Complex> a) {
    const auto size = a.size();
    std::vector<Complex> s(size), c(size);
    s[0] = std::sin(a[0]);
    c[0] = std::cos(a[0]);
    for (std::size_t n = 1; n < size; ++n) {
        Complex as{}, ac{};
        for (std::size_t k = 1; k <= n; ++k) {
            const Complex w = static_cast<double>(k) * a[k];
            as += w * c[n - k];
            ac -= w * s[n - k];
        }
        s[n] = as / static_cast<double>(n);
        c[n] = ac / static_cast<double>(n);
    }
    return {std::move(s), std::move(c)};
}

}  // namespace

Jet sin(const Jet& a) {
    return Jet(a.center(), sin_cos_series(a.coeffs()).first, a.radius(), a.truncated());
}

Jet cos(const Jet& a) {
    return Jet(a.center(), sin_cos_series(a.coeffs()).second, a.radius(), a.truncated());
}

Jet derivative(const Jet& a) {
    const int order = a.order();
    if (order == 0) return Jet::constant(a.center(), 0.0, 0);
    std::vector<Complex> d(static_cast<std::size_t>(order));
    for (int n = 1; n <= order; ++n) d[n - 1] = static_cast<double>(n) * a[n];
    return Jet(a.center(), std::move(d), a.radius(), a.truncated());
}

Jet antiderivative(const Jet& a, Complex c0, std::optional<int> order_cap) {
    const int raised = a.order() + 1;
    const int order = order_cap ? std::min(*order_cap, raised) : raised;
    std::vector<Complex> p(static_cast<std::size_t>(order) + 1);
    p[0] = c0;
    for (int n = 1; n <= order; ++n) p[n] = a[n - 1] / static_cast<double>(n);
    return Jet(a.center(), std::move(p), a.radius(), a.truncated() || order < raised);
}

Jet compose(const Jet& outer, const Jet& inner) {
    if (outer.order() != inner.order()) {
        throw Error(ErrorCode::OrderMismatch, "compose needs equal orders");
    }
    if (inner[0] != Complex{}) {
        throw Error(ErrorCode::InnerNotCentered, "inner jet must vanish at its center");
    }
    // Horner on jets: (((o_N) w + o_{N-1}) w + ...) with w = inner.
    const int order = outer.order();
    const auto c = inner.coeffs();
    std::vector<Complex> acc(static_cast<std::size_t>(order) + 1);
    std::vector<Complex> next(acc.size());
    acc[0] = outer[order];
    for (int k = order - 1; k >= 0; --k) {
        // next = acc * inner + outer_k, where inner has no constant term so
        // acc * inner only touches orders >= 1.
        std::fill(next.begin(), next.end(), Complex{});
        for (int n = 1; n <= order; ++n) {
            Complex sum{};
            for (int j = 1; j <= n; ++j) sum += c[j] * acc[n - j];
            next[n] = sum;
        }
        next[0] = outer[k];
        std::swap(acc, next);
    }
    // The outer disc maps back through inner roughly with scale |inner_1|.
    double radius = inner.radius();
    if (std::isfinite(outer.radius()) && inner.order() >= 1 && inner[1] != Complex{}) {
        radius = std::min(radius, outer.radius() / std::abs(inner[1]));
    }
    return Jet(inner.center(), std::move(acc), radius, outer.truncated() || inner.truncated());
}

Jet revert(const Jet& a) {
    if (a[0] != Complex{}) {
        throw Error(ErrorCode::InnerNotCentered, "reversion needs a0 == 0");
    }
    if (a.order() < 1 || a[1] == Complex{}) {
        throw Error(ErrorCode::NotLocallyInvertible, "linear coefficient vanishes");
    }
    const int order = a.order();
    const auto size = static_cast<std::size_t>(order) + 1;
    // powers[k][n] = [w^n] b(w)^k, filled one order at a time. [b^k]_n only
    // involves b_1..b_{n-k+1}, so b_n enters order n through b^1 alone.
    std::vector<std::vector<Complex>> powers(size, std::vector<Complex>(size));
    std::vector<Complex> b(size);
    const Complex a1 = a[1];
    for (int n = 1; n <= order; ++n) {
        Complex rest{};
        for (int k = 2; k <= n; ++k) {
            Complex p{};
            for (int j = 1; j <= n - k + 1; ++j) p += b[j] * powers[k - 1][n - j];
            powers[k][n] = p;
            rest += a[k] * p;
        }
        b[n] = n == 1 ? 1.0 / a1 : -rest / a1;
        powers[1][n] = b[n];
    }
    // Inverse disc: image of a's disc, to first order scaled by |a_1|.
    const double radius = std::isfinite(a.radius()) ? a.radius() * std::abs(a1) : kUnbounded;
    return Jet(Complex{}, std::move(b), radius, a.truncated());
}

Jet recenter(const Jet& a, Complex h, double safety) {
    if (std::abs(h) >= safety * a.radius()) {
        throw Error(ErrorCode::StepExceedsRadius,
                    "shift " + std::to_string(std::abs(h)) + " exceeds " + std::to_string(safety) +
                        " of radius " + std::to_string(a.radius()));
    }
    std::vector<Complex> b(a.coeffs().begin(), a.coeffs().end());
    const int order = a.order();
    // Repeated synthetic division by (w - h).
    for (int k = 0; k < order; ++k) {
        for (int j = order - 1; j >= k; --j) b[j] += h * b[j + 1];
    }
    const double radius = std::isfinite(a.radius()) ? a.radius() - std::abs(h) : kUnbounded;
    return Jet(a.center() + h, std::move(b), radius, a.truncated());
}

Jet conj_reflect(const Jet& a, double center_tol) {
    const Complex c = a.center();
    if (std::abs(c.imag()) > center_tol * (1.0 + std::abs(c))) {
        throw Error(ErrorCode::NonRealCenter, "reflection needs a real center");
    }
    std::vector<Complex> b(a.coeffs().begin(), a.coeffs().end());
    for (auto& z : b) z = std::conj(z);
    return Jet(Complex(c.real(), 0.0), std::move(b), a.radius(), a.truncated());
}

bool is_real_symmetric(const Jet& a, double tol) {
    double scale = 0;
    for (auto z : a.coeffs()) scale = std::max(scale, std::abs(z));
    for (auto z : a.coeffs()) {
        if (std::abs(z.imag()) > tol * std::max(scale, 1e-300)) return false;
    }
    return true;
}

Complex eval(const Jet& a, Complex z, int derivative_order) {
    const int order = a.order();
    const int k = derivative_order;
    if (k > order) return {};
    const Complex w = z - a.center();
    // sum_{n>=k} n!/(n-k)! a_n w^{n-k}
    Complex acc{};
    for (int n = order; n >= k; --n) {
        double falling = 1.0;
        for (int j = 0; j < k; ++j) falling *= static_cast<double>(n - j);
        acc = acc * w + falling * a[n];
    }
    return acc;
}

Evaluation eval_checked(const Jet& a, Complex z, int derivative_order) {
    return {eval(a, z, derivative_order), std::abs(z - a.center()) >= a.radius()};
}

double radius_estimate(const Jet& a, const RadiusOptions& options) {
    const int order = a.order();
    if (order < 2) return kUnbounded;

    std::vector<int> nonzero;
    std::vector<double> logs(static_cast<std::size_t>(order) + 1, -std::numeric_limits<double>::infinity());
    for (int n = 0; n <= order; ++n) {
        const double m = std::abs(a[n]);
        if (m > 0 && std::isfinite(m)) logs[n] = std::log(m);
    }

    const int top_start = std::max(1, (order + 1) / 2);
    auto fit = [&](const std::vector<int>& idx) -> double {
        std::vector<double> x, y;
        for (int n : idx) {
            x.push_back(n);
            y.push_back(logs[n]);
        }
        return std::exp(-fit_slope(x, y));
    };
    // Ratio-test fallback on the two highest significant coefficients.
    auto ratio = [&](const std::vector<int>& idx) -> double {
        const int hi = idx[idx.size() - 1];
        const int lo = idx[idx.size() - 2];
        return std::exp((logs[lo] - logs[hi]) / (hi - lo));
    };
    auto significant = [&](double radius) {
        // Drop coefficients that are rounding noise relative to the function
        // scale on the estimated disc.
        const double log_r = std::log(radius);
        double log_scale = -std::numeric_limits<double>::infinity();
        for (int n = 0; n <= order; ++n) log_scale = std::max(log_scale, logs[n] + n * log_r);
        const double cutoff = log_scale + std::log(options.noise_fraction);
        std::vector<int> out;
        for (int n = 1; n <= order; ++n) {
            if (std::isfinite(logs[n]) && logs[n] + n * log_r >= cutoff) out.push_back(n);
        }
        return out;
    };
    auto estimate = [&](const std::vector<int>& all) -> double {
        std::vector<int> top;
        for (int n : all) {
            if (n >= top_start) top.push_back(n);
        }
        if (top.size() >= 4) return fit(top);
        if (all.size() >= 2 && all.back() >= top_start) return ratio(all);
        return kUnbounded;  // looks polynomial at this order
    };

    std::vector<int> all;
    for (int n = 1; n <= order; ++n) {
        if (std::isfinite(logs[n])) all.push_back(n);
    }
    double radius = estimate(all);
    for (int pass = 0; pass < 3 && std::isfinite(radius); ++pass) {
        auto kept = significant(radius);
        if (kept == all) break;
        all = std::move(kept);
        radius = estimate(all);
    }
    if (!std::isfinite(radius)) return kUnbounded;

    std::vector<int> top;
    for (int n : all) {
        if (n >= top_start) top.push_back(n);
    }
    if (top.size() >= 8) {
        const auto half = top.size() / 2;
        const std::vector<int> lower(top.begin(), top.begin() + static_cast<std::ptrdiff_t>(half));
        const std::vector<int> upper(top.begin() + static_cast<std::ptrdiff_t>(half), top.end());
        if (fit(upper) > options.growth_ratio * fit(lower)) return kUnbounded;
    }
    return std::max(radius, options.floor);
}

}  // namespace arcweave
