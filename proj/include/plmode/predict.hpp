#pragma once

// Leading-order description of the mode-locking regions near a shrinking
// point: the curve r = Gamma(theta)/k in polar local coordinates and the
// predicted locations of nearby shrinking points and period-doubling
// boundaries.

#include "plmode/shrink.hpp"

#include <optional>
#include <string>
#include <vector>

namespace plmode {

/// (ln cos - ln sin)/(cos - sin), extended with period pi/2; sqrt(2) at pi/4.
double Gamma(double theta);

Eigen::Vector2d polar_to_local(const ShrinkPoint& sp, double r, double theta);

struct Polar {
    double r = 0;
    double theta = 0;  // in [0, 2 pi)
};

Polar local_to_polar(const ShrinkPoint& sp, const Eigen::Vector2d& eta_nu);

struct AngleRange {
    double lo = 0;
    double hi = 0;
};

/// Open quadrant holding theta+-_chi: (3pi/2, 2pi) or (pi/2, pi).
AngleRange quadrant(const ShrinkPoint& sp, Side side);

/// Curve r = Gamma(theta)/k, uniformly sampled in theta over the quadrant
/// with 1e-3 clipped from each end.
std::vector<Eigen::Vector2d> predicted_curve(const ShrinkPoint& sp, Side side, int k, int samples);

enum class PredictionKind { ShrinkingPointSequence, PeriodDoublingBoundary, Degenerate };

const char* prediction_kind_name(PredictionKind k);

struct PredictedPoint {
    int k = 0;
    double r = 0;
    Eigen::Vector2d eta_nu = Eigen::Vector2d::Zero();
    Eigen::Vector2d xi = Eigen::Vector2d::Zero();  // linearised through J
};

struct PredictionRecord {
    Side side = Side::Plus;
    int chi = 0;
    double kappa = 0;
    std::optional<double> theta;
    PredictionKind kind = PredictionKind::Degenerate;
    std::vector<PredictedPoint> points;
};

PredictionRecord predicted_points(const ShrinkPoint& sp, Side side, int chi, const std::vector<int>& k_list);

/// Neighbour-kappa consistency for a confirmed G[k,chi]-shrinking point with
/// kappa_chi > 0: kappa_{chi-1} > 0 when a < 0, kappa_{chi+1} > 0 when a > 0.
struct NeighbourKappaCheck {
    bool applicable = false;  // false when kappa_chi <= 0 or nothing was confirmed
    bool pass = true;
    int neighbour_chi = 0;
    double neighbour_kappa = 0;
    std::string message;
};

NeighbourKappaCheck neighbour_kappa_check(const ShrinkPoint& sp, Side side, int chi, bool confirmed);

/// xi* + J^{-1} (eta, nu).
Eigen::Vector2d linear_xi(const ShrinkPoint& sp, const Eigen::Vector2d& eta_nu);

}  // namespace plmode
