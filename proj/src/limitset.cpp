#include "arcweave/limitset.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "arcweave/error.hpp"

namespace arcweave {

std::string_view to_string(LimitKind kind) noexcept {
    switch (kind) {
        case LimitKind::Point: return "POINT";
        case LimitKind::Infinity: return "INFINITY";
        case LimitKind::Circle: return "CIRCLE";
        case LimitKind::Unknown: return "UNKNOWN";
    }
    return "UNKNOWN";
}

CircleFit circle_fit(std::span<const Complex> points) {
    const auto n = points.size();
    if (n < 3) throw Error(ErrorCode::DegenerateConfiguration, "a circle needs three points");

    // Work in centered, unit-scaled coordinates so the fit is scale invariant.
    Complex mean{};
    for (auto p : points) mean += p;
    mean /= static_cast<double>(n);
    double scale = 0;
    for (auto p : points) scale = std::max(scale, std::abs(p - mean));
    if (scale == 0) throw Error(ErrorCode::DegenerateConfiguration, "all points coincide");

    // |q|^2 = 2 Re(conj(c) q) + rho, rho = r^2 - |c|^2
    Eigen::MatrixXd design(n, 3);
    Eigen::VectorXd rhs(n);
    for (std::size_t k = 0; k < n; ++k) {
        const Complex q = (points[k] - mean) / scale;
        const auto row = static_cast<Eigen::Index>(k);
        design(row, 0) = 2 * q.real();
        design(row, 1) = 2 * q.imag();
        design(row, 2) = 1.0;
        rhs(row) = std::norm(q);
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (sv(2) <= 1e-10 * sv(0)) {
        throw Error(ErrorCode::DegenerateConfiguration, "points are collinear");
    }
    const Eigen::Vector3d sol = svd.solve(rhs);
    const Complex c(sol(0), sol(1));
    const double r2 = sol(2) + std::norm(c);
    if (!(r2 > 0)) throw Error(ErrorCode::DegenerateConfiguration, "no real circle fits");

    CircleFit fit{mean + scale * c, scale * std::sqrt(r2), 0.0};
    double ss = 0;
    for (auto p : points) {
        const double d = std::abs(p - fit.center) - fit.radius;
        ss += d * d;
    }
    fit.rms = std::sqrt(ss / static_cast<double>(n));
    return fit;
}

double winding_angle(std::span<const Complex> points, Complex center) {
    double total = 0;
    for (std::size_t k = 1; k < points.size(); ++k) {
        total += std::arg((points[k] - center) / (points[k - 1] - center));
    }
    return total;
}

LimitSet classify_tail(std::span<const Complex> points, std::span<const double> arc_positions,
                       const TailOptions& options) {
    const auto n = points.size();
    if (n != arc_positions.size()) {
        throw Error(ErrorCode::InvalidArgument, "points and arc positions differ in length");
    }
    if (n < options.min_samples) {
        throw Error(ErrorCode::TooFewSamples,
                    std::to_string(n) + " samples, need " + std::to_string(options.min_samples));
    }
    const bool up = arc_positions[1] > arc_positions[0];
    for (std::size_t k = 1; k < n; ++k) {
        if ((arc_positions[k] > arc_positions[k - 1]) != up || arc_positions[k] == arc_positions[k - 1]) {
            throw Error(ErrorCode::InvalidArgument, "arc positions are not strictly monotone");
        }
    }

    const double scale = 1.0 + std::abs(points.front());
    const auto quartile = points.subspan(n - n / 4);

    double min_abs = std::numeric_limits<double>::infinity();
    for (auto p : quartile) min_abs = std::min(min_abs, std::abs(p));
    if (min_abs > options.growth_factor * scale &&
        std::abs(quartile.back()) > std::abs(quartile.front())) {
        return {LimitKind::Infinity, {}, {}, 0.0, 0.0};
    }

    double lo_x = quartile.front().real(), hi_x = lo_x;
    double lo_y = quartile.front().imag(), hi_y = lo_y;
    Complex mean{};
    for (auto p : quartile) {
        lo_x = std::min(lo_x, p.real());
        hi_x = std::max(hi_x, p.real());
        lo_y = std::min(lo_y, p.imag());
        hi_y = std::max(hi_y, p.imag());
        mean += p;
    }
    mean /= static_cast<double>(quartile.size());
    const double diameter = std::hypot(hi_x - lo_x, hi_y - lo_y);
    if (diameter < options.point_tol * scale) {
        return {LimitKind::Point, mean, {}, 0.0, diameter};
    }

    const auto half = points.subspan(n - n / 2);
    try {
        const CircleFit fit = circle_fit(half);
        if (fit.rms <= options.circle_tol * fit.radius &&
            std::abs(winding_angle(half, fit.center)) > 2 * std::numbers::pi) {
            return {LimitKind::Circle, {}, fit.center, fit.radius, fit.rms};
        }
        return {LimitKind::Unknown, {}, {}, 0.0, fit.rms};
    } catch (const Error& e) {
        if (e.code() != ErrorCode::DegenerateConfiguration) throw;
        return {LimitKind::Unknown, {}, {}, 0.0, diameter};
    }
}

}  // namespace arcweave
