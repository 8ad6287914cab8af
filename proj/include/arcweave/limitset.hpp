#pragma once

#include <cstddef>
#include <span>
#include <string_view>

#include "arcweave/jet.hpp"

namespace arcweave {

enum class LimitKind { Point, Infinity, Circle, Unknown };

std::string_view to_string(LimitKind kind) noexcept;

/// Accumulation set of gamma*(s) at one end, estimated from a finite tail.
/// `point` is set for Point, `center`/`radius` for Circle.
struct LimitSet {
    LimitKind kind = LimitKind::Unknown;
    Complex point{};
    Complex center{};
    double radius = 0.0;
    double residual = 0.0;
};

struct CircleFit {
    Complex center;
    double radius;
    double rms;
};

struct TailOptions {
    /// Infinity when the last quartile stays beyond growth_factor * (1 + |p_0|).
    double growth_factor = 1e2;
    double point_tol = 1e-4;
    double circle_tol = 1e-2;
    std::size_t min_samples = 50;
};

/// Algebraic (Kasa) least-squares circle through the points.
CircleFit circle_fit(std::span<const Complex> points);

/// Total change of arg(p - center) along the sequence, unwrapped.
double winding_angle(std::span<const Complex> points, Complex center);

/// Decision cascade: infinity, point, circle, unknown. `arc_positions` must be
/// strictly monotone toward the endpoint.
LimitSet classify_tail(std::span<const Complex> points, std::span<const double> arc_positions,
                       const TailOptions& options = {});

}  // namespace arcweave
