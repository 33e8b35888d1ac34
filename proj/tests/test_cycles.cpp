#include "doctest.h"
#include "fixtures.hpp"

#include <random>

using namespace plmode;
using linalg::Mat;
using linalg::Vec;

namespace {

PwlMap random_map(std::mt19937_64& rng, int n, double scale) {
    std::normal_distribution<double> g(0, scale);
    PwlMap f;
    f.AL = Mat(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) f.AL(i, j) = g(rng);
    f.AR = f.AL;
    for (int i = 0; i < n; ++i) f.AR(i, 0) += g(rng);
    f.B = Vec(n);
    for (int i = 0; i < n; ++i) f.B(i) = g(rng);
    f.mu = 1;
    return f;
}

Word random_word(std::mt19937_64& rng, int len) {
    std::vector<Symbol> s(static_cast<std::size_t>(len));
    for (auto& c : s) c = (rng() & 1u) ? Symbol::R : Symbol::L;
    return Word(s);
}

}  // namespace

TEST_CASE("cycles: compose") {
    std::mt19937_64 rng(21);
    const PwlMap f = random_map(rng, 3, 1.0);
    Composition c = compose(f, Word::parse("L"));
    CHECK(c.M == f.AL);
    CHECK(c.P.isIdentity());
    c = compose(f, Word::parse("LR"));
    CHECK((c.M - f.AR * f.AL).norm() == 0.0);
    CHECK((c.P - (Mat::Identity(3, 3) + f.AR)).norm() == 0.0);
    for (int t = 0; t < 50; ++t) {
        const Word w = random_word(rng, 2 + static_cast<int>(rng() % 9));
        const double d0 = compose(f, w).M.determinant();
        for (long long i = 0; i < static_cast<long long>(w.size()); ++i)
            CHECK(std::fabs(compose(f, shift(w, i)).M.determinant() - d0) < 1e-9 * std::max(1.0, std::fabs(d0)));
    }
}

TEST_CASE("cycles: F[2,2,5] at the shrinking point and below it") {
    const ShrinkPoint& sp = fixtures::bcnf3_point();
    const Word S0 = flip(sp.S, 0);
    const CycleResult c = solve_cycle(sp.map, S0);
    const long long ld = sp.ld();
    for (int i = 0; i < 5; ++i) {
        if (i == 0 || i == sp.idx(ld)) CHECK(std::fabs(c.s[static_cast<std::size_t>(i)]) < 1e-10);
        else CHECK(std::fabs(c.s[static_cast<std::size_t>(i)]) > 1e-8);
    }
    CHECK(c.admissible);
    CHECK(c.s[static_cast<std::size_t>(sp.idx(sp.spec.d))] < 0);

    const CycleResult lower = solve_cycle(fixtures::bcnf3_slice().at({-2, 0.1}), sp.S);
    CHECK(lower.admissible);
    CHECK(lower.stability == Stability::Stable);
    CHECK(lower.closure_residual < 1e-9);
    CHECK(lower.formula_discrepancy >= 0);
    CHECK(lower.formula_discrepancy < 1e-8);
}

TEST_CASE("cycles: fixed point and singular cycles") {
    PwlMap f;
    f.AL = Mat::Identity(2, 2) * 0.5;
    f.AR = f.AL;
    f.AR(1, 0) = 0.2;
    f.B = Eigen::Vector2d(1, 0.5);
    f.mu = 1;
    const CycleResult c = solve_cycle(f, Word::parse("R"));
    const Vec expect = (Mat::Identity(2, 2) - f.AR).inverse() * f.B;
    CHECK((c.points[0] - expect).norm() < 1e-14);
    CHECK(c.admissible);
    CHECK(c.stability == Stability::Stable);
    CHECK_FALSE(solve_cycle(f, Word::parse("L")).admissible);

    PwlMap g = f;
    g.AR = Mat::Identity(2, 2);
    CHECK_THROWS_AS(solve_cycle(g, Word::parse("R")), SingularCycleError);
}

TEST_CASE("cycles: varrho") {
    PwlMap z;
    z.AL = Mat::Zero(3, 3);
    z.AR = z.AL;
    z.B = Vec::Zero(3);
    CHECK(varrho(z) == linalg::RowVec::Unit(3, 0));

    const PwlMap& f = fixtures::bcnf3_point().map;
    const auto I = Mat::Identity(3, 3);
    CHECK((varrho(f) - (linalg::adj(I - f.AR)).row(0)).norm() < 1e-12);

    std::mt19937_64 rng(22);
    for (int t = 0; t < 200; ++t) {
        const PwlMap g = random_map(rng, 2 + t % 4, 1.0);
        const auto n = g.dim();
        const linalg::RowVec r = linalg::adj(Mat::Identity(n, n) - g.AR).row(0);
        CHECK((varrho(g) - r).norm() < 1e-10 * std::max(1.0, r.norm()));
    }
}

TEST_CASE("cycles: switching values satisfy the determinant formula") {
    std::mt19937_64 rng(23);
    int checked = 0;
    for (int t = 0; t < 300; ++t) {
        const PwlMap f = random_map(rng, 2 + t % 3, 0.7);
        const Word w = random_word(rng, 1 + static_cast<int>(rng() % 8));
        CycleResult c;
        try {
            c = solve_cycle(f, w);
        } catch (const SingularCycleError&) {
            continue;
        }
        const double rb = varrho(f).dot(f.B) * f.mu;
        const double dI = c.det_I_minus_M;
        const double smax = std::max(1e-300, Eigen::Map<const Vec>(c.s.data(), static_cast<Eigen::Index>(c.s.size()))
                                                 .cwiseAbs()
                                                 .maxCoeff());
        for (long long i = 0; i < static_cast<long long>(w.size()); ++i) {
            const double lhs = dI * c.s[static_cast<std::size_t>(i)];
            const double rhs = compose(f, shift(w, i)).P.determinant() * rb;
            CHECK(std::fabs(lhs - rhs) < 1e-8 * std::max({1.0, std::fabs(rhs), std::fabs(dI) * smax}));
        }
        ++checked;
    }
    CHECK(checked > 200);
}

TEST_CASE("cycles: a zero switching value makes the flipped word an equivalent cycle") {
    // On eta = 0 (nu = 0) near a shrinking point the S^{0-bar}-cycle has
    // s_0 = 0 (s_{ld} = 0); flipping that symbol gives the same points.
    for (const ShrinkPoint* sp : {&fixtures::bcnf3_point(), &fixtures::ns2_point(), &fixtures::gs2_point()}) {
        const Slice sl(builtin_family(sp->family), sp->param, sp->slice);
        const Word S0 = flip(sp->S, 0);
        int compared = 0;
        for (const Eigen::Vector2d en : {Eigen::Vector2d(0, 2e-3), Eigen::Vector2d(0, -2e-3), Eigen::Vector2d(2e-3, 0),
                                         Eigen::Vector2d(-2e-3, 0)}) {
            const PwlMap f = sl.at(invert_local_coords(sl, *sp, en));
            const CycleResult base = solve_cycle(f, S0);
            for (int j = 0; j < sp->n(); ++j) {
                if (std::fabs(base.s[static_cast<std::size_t>(j)]) >= 1e-10) continue;
                const CycleResult other = solve_cycle(f, flip(S0, j));
                for (std::size_t i = 0; i < base.points.size(); ++i)
                    CHECK((other.points[i] - base.points[i]).norm() < 1e-8 * (1 + base.points[i].norm()));
                ++compared;
            }
        }
        CHECK(compared == 4);
    }
}

TEST_CASE("cycles: polygon of fixed points at a shrinking point") {
    for (const ShrinkPoint* sp : {&fixtures::bcnf3_point(), &fixtures::ns2_point(), &fixtures::gs2_point()}) {
        const int n = sp->n();
        for (int j = 0; j < n; ++j) {
            const Vec& a = sp->y[static_cast<std::size_t>(j)];
            const Vec& b = sp->y[static_cast<std::size_t>(sp->idx(j + sp->spec.d))];
            for (double th : {0.25, 0.5, 0.75}) {
                const Vec z = a + th * (b - a);
                const Vec fz = iterate_word(sp->map, z, shift(sp->S, j));
                CHECK((fz - z).norm() < 1e-8 * (1 + z.norm()));
            }
        }
    }
}
