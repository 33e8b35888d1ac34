#include "plmode/predict.hpp"

#include <cmath>
#include <numbers>

namespace plmode {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = std::numbers::pi / 2;

void require_asymptotics(const ShrinkPoint& sp) {
    if (!sp.asymptotics_valid())
        throw ShrinkError(ShrinkError::Kind::Invalid, "sigma >= 1: asymptotic predictions are unavailable");
}
}  // namespace

double Gamma(double theta) {
    double phi = std::fmod(theta, kHalfPi);
    if (phi < 0) phi += kHalfPi;
    if (phi < 1e-12 || kHalfPi - phi < 1e-12)
        throw std::domain_error("Gamma is singular at multiples of pi/2");
    const double c = std::cos(phi), s = std::sin(phi);
    if (std::fabs(c - s) < 1e-6) {
        const double x = phi - kPi / 4, x2 = x * x;
        return std::numbers::sqrt2 * (1 + 5 * x2 / 6 + 287 * x2 * x2 / 360);
    }
    return (std::log(c) - std::log(s)) / (c - s);
}

Eigen::Vector2d polar_to_local(const ShrinkPoint& sp, double r, double theta) {
    const double se = std::fabs(sp.c * sp.t_d() / sp.a);
    const double sn = std::fabs(sp.c * sp.t_lm1d() / sp.a);
    return {se * r * std::cos(theta), sn * r * std::sin(theta)};
}

Polar local_to_polar(const ShrinkPoint& sp, const Eigen::Vector2d& en) {
    const double se = std::fabs(sp.c * sp.t_d() / sp.a);
    const double sn = std::fabs(sp.c * sp.t_lm1d() / sp.a);
    const double x = en(0) / se, y = en(1) / sn;
    double th = std::atan2(y, x);
    if (th < 0) th += 2 * kPi;
    return {std::hypot(x, y), th};
}

AngleRange quadrant(const ShrinkPoint& sp, Side side) {
    const bool fourth = (side == Side::Plus) == (sp.a < 0);
    return fourth ? AngleRange{3 * kHalfPi, 2 * kPi} : AngleRange{kHalfPi, kPi};
}

std::vector<Eigen::Vector2d> predicted_curve(const ShrinkPoint& sp, Side side, int k, int samples) {
    require_asymptotics(sp);
    if (k < 2) throw std::invalid_argument("predicted_curve needs k >= 2");
    if (samples < 2) throw std::invalid_argument("predicted_curve needs at least two samples");
    const AngleRange q = quadrant(sp, side);
    const double lo = q.lo + 1e-3, hi = q.hi - 1e-3;
    std::vector<Eigen::Vector2d> out;
    out.reserve(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i) {
        const double th = lo + (hi - lo) * i / (samples - 1);
        out.push_back(polar_to_local(sp, Gamma(th) / k, th));
    }
    return out;
}

const char* prediction_kind_name(PredictionKind k) {
    switch (k) {
        case PredictionKind::ShrinkingPointSequence: return "shrinking_points";
        case PredictionKind::PeriodDoublingBoundary: return "period_doubling";
        case PredictionKind::Degenerate: return "degenerate";
    }
    return "?";
}

Eigen::Vector2d linear_xi(const ShrinkPoint& sp, const Eigen::Vector2d& eta_nu) {
    return sp.xi + sp.J.partialPivLu().solve(eta_nu);
}

PredictionRecord predicted_points(const ShrinkPoint& sp, Side side, int chi, const std::vector<int>& k_list) {
    require_asymptotics(sp);
    PredictionRecord rec;
    rec.side = side;
    rec.chi = chi;
    rec.kappa = kappa(sp, side, chi);
    if (std::fabs(rec.kappa) <= kKappaDegenerate) {
        rec.kind = PredictionKind::Degenerate;
        return rec;
    }
    rec.kind = rec.kappa > 0 ? PredictionKind::ShrinkingPointSequence : PredictionKind::PeriodDoublingBoundary;
    rec.theta = theta(sp, side, chi);
    for (int k : k_list) {
        PredictedPoint p;
        p.k = k;
        p.r = Gamma(*rec.theta) / k;
        p.eta_nu = polar_to_local(sp, p.r, *rec.theta);
        p.xi = linear_xi(sp, p.eta_nu);
        rec.points.push_back(p);
    }
    return rec;
}

NeighbourKappaCheck neighbour_kappa_check(const ShrinkPoint& sp, Side side, int chi, bool confirmed) {
    NeighbourKappaCheck out;
    out.neighbour_chi = sp.a < 0 ? chi - 1 : chi + 1;
    out.neighbour_kappa = kappa(sp, side, out.neighbour_chi);
    const std::string name = std::string("kappa") + side_char(side) + "_";
    if (!confirmed || kappa(sp, side, chi) <= 0) {
        out.message = "not applicable";
        return out;
    }
    out.applicable = true;
    out.pass = out.neighbour_kappa > 0;
    out.message = name + std::to_string(out.neighbour_chi) + " = " + std::to_string(out.neighbour_kappa) +
                  (out.pass ? " > 0" : " <= 0: theory check failed");
    return out;
}

}  // namespace plmode
