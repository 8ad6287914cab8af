#pragma once

#include "arcweave/jet.hpp"

namespace arcweave {

/// |Im center| <= kRealCenterTol * (1 + |center|) counts as a real center.
inline constexpr double kRealCenterTol = 1e-12;
/// |a1| <= kZeroDerivativeTol * |a2| r counts as a critical point, where r <= 1
/// is the largest scale on which |a2| r^2 bounds every higher term.
inline constexpr double kZeroDerivativeTol = 1e-7;

/// Q(z) = gamma'(z) * conj(gamma'(conj z)), real-symmetric, Q(center) = |gamma'|^2.
Jet speed_squared(const Jet& gamma);

/// s(z) = s0 + integral of the branch of sqrt(Q) that is positive on the real axis.
Jet arclength_jet(const Jet& gamma, double s0);

/// delta = gamma o s^{-1}, expanded at s0; |delta'(s0)| = 1.
Jet unit_speed_jet(const Jet& gamma, double s0);

}  // namespace arcweave
