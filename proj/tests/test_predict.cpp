#include "doctest.h"
#include "fixtures.hpp"

#include <random>

using namespace plmode;

TEST_CASE("predict: Gamma") {
    const double pi = std::numbers::pi;
    CHECK(Gamma(pi / 4) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(Gamma(pi / 4 + pi / 2) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(std::fabs(Gamma(pi / 6) - 1.5007322952304008) < 1e-9);  // 40-digit reference evaluation
    CHECK(std::fabs(Gamma(pi / 6 + 3 * pi / 2) - Gamma(pi / 6)) < 1e-12);
    CHECK_THROWS(Gamma(0.0));
    CHECK_THROWS(Gamma(pi / 2));
    CHECK_THROWS(Gamma(3 * pi / 2));

    auto exact = [](double th) { return (std::log(std::cos(th)) - std::log(std::sin(th))) / (std::cos(th) - std::sin(th)); };
    for (double off = 1e-3; off >= 1e-8; off /= 10) {
        CHECK(std::fabs(Gamma(pi / 4 + off) - exact(pi / 4 + off)) < 1e-8);
        CHECK(std::fabs(Gamma(pi / 4 - off) - exact(pi / 4 - off)) < 1e-8);
    }
    for (int i = 1; i < 1000; ++i) {
        const double th = i * (pi / 2) / 1000;
        if (i == 500) continue;
        CHECK(Gamma(th) > std::sqrt(2.0));
    }
}

TEST_CASE("predict: polar coordinates") {
    const ShrinkPoint& sp = fixtures::bcnf3_point();
    CHECK(polar_to_local(sp, 0, 1.0).norm() == 0.0);
    const Polar p = local_to_polar(sp, polar_to_local(sp, 0.7, std::numbers::pi));
    CHECK(std::fabs(p.r - 0.7) < 1e-12);
    CHECK(std::fabs(p.theta - std::numbers::pi) < 1e-12);
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(0.01, 2 * std::numbers::pi - 0.01), rr(0.01, 1);
    for (int t = 0; t < 200; ++t) {
        const double th = u(rng);
        if (std::fabs(std::cos(th)) < 1e-3) continue;
        const Eigen::Vector2d en = polar_to_local(sp, rr(rng), th);
        CHECK(std::tan(th) == doctest::Approx(sp.t_d() * en(1) / (sp.t_lm1d() * en(0))).epsilon(1e-9));
    }
}

TEST_CASE("predict: curves") {
    const ShrinkPoint& sp = fixtures::bcnf3_point();
    REQUIRE(sp.a < 0);
    const auto c10 = predicted_curve(sp, Side::Plus, 10, 50);
    const auto c20 = predicted_curve(sp, Side::Plus, 20, 50);
    REQUIRE(c10.size() == 50);
    for (std::size_t i = 0; i < c10.size(); ++i) {
        CHECK(c10[i](0) > 0);
        CHECK(c10[i](1) < 0);
        CHECK((c20[i] - 0.5 * c10[i]).norm() < 1e-15);
    }
    CHECK_THROWS(predicted_curve(sp, Side::Plus, 1, 10));
}

TEST_CASE("predict: classification") {
    const ShrinkPoint& sp = fixtures::bcnf3_point();
    PredictionRecord r = predicted_points(sp, Side::Plus, 0, {10, 20});
    CHECK(r.kind == PredictionKind::PeriodDoublingBoundary);
    CHECK(r.kappa < 0);
    REQUIRE(r.theta);
    REQUIRE(r.points.size() == 2);
    CHECK((r.points[1].eta_nu - 0.5 * r.points[0].eta_nu).norm() < 1e-15);
    CHECK((linear_xi(sp, {0, 0}) - sp.xi).norm() == 0.0);
    r = predicted_points(sp, Side::Minus, 1, {10});
    CHECK(r.kind == PredictionKind::ShrinkingPointSequence);
    CHECK(std::string(prediction_kind_name(r.kind)) == "shrinking_points");
    for (int chi = -3; chi <= 3; ++chi)
        for (Side s : {Side::Plus, Side::Minus}) {
            const PredictionRecord q = predicted_points(sp, s, chi, {5});
            if (q.kind == PredictionKind::Degenerate) continue;
            CHECK((q.kind == PredictionKind::ShrinkingPointSequence) == (q.kappa > 0));
            const AngleRange qr = quadrant(sp, s);
            CHECK(*q.theta > qr.lo);
            CHECK(*q.theta < qr.hi);
        }
}

TEST_CASE("predict: kappa sign change along the shrinking-point curve") {
    const MapFamily& fam = fixtures::bcnf3();
    auto k2 = [&](double dR) {
        const Slice sl(fam, fam.point({{"deltaR", dR}}));
        const ShrinkPoint sp =
            solve_shrinking_point(sl, RotSpec::make(2, 2, 5), fixtures::bcnf3_closed_form(dR) + Eigen::Vector2d(0.02, 0.01));
        return kappa(sp, Side::Minus, 2);
    };
    CHECK(k2(1.4) > 0);
    CHECK(k2(1.5) < 0);
}
