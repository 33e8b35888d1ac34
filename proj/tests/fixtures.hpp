#pragma once

#include "plmode/report.hpp"

#include <cmath>
#include <numbers>

namespace fixtures {

using namespace plmode;

inline const MapFamily& bcnf3() {
    static const MapFamily f = builtin_family("bcnf3");
    return f;
}

inline const Slice& bcnf3_slice() {
    static const Slice s(bcnf3(), bcnf3().point());
    return s;
}

/// The F[2,2,5]-shrinking point at (tauR, deltaL) = (-2, 0.2).
inline const ShrinkPoint& bcnf3_point() {
    static const ShrinkPoint sp = solve_shrinking_point(bcnf3_slice(), RotSpec::make(2, 2, 5), {-1.9, 0.22});
    return sp;
}

inline const ShrinkPoint& ns2_point() {
    static const ShrinkPoint sp = builtin_shrinking_point("ns2");
    return sp;
}

inline const ShrinkPoint& gs2_point() {
    static const ShrinkPoint sp = builtin_shrinking_point("gs2");
    return sp;
}

inline double rel(double x, double ref) { return std::fabs(x - ref) / std::max(1.0, std::fabs(ref)); }

/// tauR and deltaL of the F[2,2,5]-shrinking point as functions of deltaR.
inline Eigen::Vector2d bcnf3_closed_form(double dR) {
    return {-(dR * dR + dR + 2) / (dR + 2), (dR + 2) / (dR * (dR * dR + 2 * dR + 2))};
}

inline double gs2_curve(const Eigen::Vector2d& xi) {
    return std::exp(5 * xi(1)) * std::sin(4 * xi(0)) - std::exp(4 * xi(1)) * std::sin(5 * xi(0)) + std::sin(xi(0));
}

}  // namespace fixtures
