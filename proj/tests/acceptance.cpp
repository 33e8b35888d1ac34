// Acceptance suite: one PASS/FAIL line per criterion.

#include "fixtures.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>

using namespace plmode;
using linalg::Mat;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

template <class F>
double bisect(F f, double a, double b) {
    double fa = f(a);
    for (int i = 0; i < 60; ++i) {
        const double m = 0.5 * (a + b), fm = f(m);
        if (std::signbit(fm) == std::signbit(fa)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

ShrinkPoint bcnf3_on_curve(double dR) {
    const MapFamily& fam = fixtures::bcnf3();
    const Slice sl(fam, fam.point({{"deltaR", dR}}));
    const Eigen::Vector2d cf = fixtures::bcnf3_closed_form(dR);
    return solve_shrinking_point(sl, RotSpec::make(2, 2, 5), cf + Eigen::Vector2d(0.02 * cf(0), 0.05 * cf(1)));
}

Outcome shrink_solve() {
    const MapFamily& fam = fixtures::bcnf3();
    const Slice sl(fam, fam.point({{"tauL", 0}, {"sigmaL", -1}, {"sigmaR", 0}, {"deltaR", 2}, {"mu", 1}}));
    const auto t0 = Clock::now();
    const ShrinkPoint sp = solve_shrinking_point(sl, RotSpec::make(2, 2, 5), {-1.9, 0.22});
    const double secs = seconds_since(t0);
    const Eigen::Vector2d en = local_coords(sp.map, sp.spec);
    const double err = std::max(std::fabs(sp.xi(0) + 2), std::fabs(sp.xi(1) - 0.2));
    const double res = en.cwiseAbs().maxCoeff();
    return {err < 1e-9 && res < 1e-12 && secs < 1.0,
            fmt("xi* = (%.17g, %.17g), |xi*-(-2,0.2)| = %.2e, max(|eta|,|nu|) = %.2e, %.3f s", sp.xi(0), sp.xi(1), err,
                res, secs)};
}

Outcome kappa_table() {
    const ShrinkPoint& sp = fixtures::bcnf3_point();
    struct Row {
        Side side;
        int chi;
        double value;
    };
    const Row rows[] = {{Side::Plus, -2, 236.0 / 33}, {Side::Plus, -1, 38.0 / 55},  {Side::Plus, 0, -5.0 / 11},
                        {Side::Plus, 1, 26.0 / 33},   {Side::Minus, -1, 494.0 / 55}, {Side::Minus, 0, 43.0 / 55},
                        {Side::Minus, 1, 10.0 / 33},  {Side::Minus, 2, -32.0 / 165}};
    double worst = 0;
    for (const Row& r : rows) worst = std::max(worst, std::fabs(kappa(sp, r.side, r.chi) / r.value - 1));
    return {worst < 1e-9, fmt("8 values, max relative error %.2e", worst)};
}

Outcome shrink_curve() {
    double worst = 0;
    for (double dR : {0.8, 1.0, 2.0}) {
        const ShrinkPoint sp = bcnf3_on_curve(dR);
        worst = std::max(worst, (sp.xi - fixtures::bcnf3_closed_form(dR)).cwiseAbs().maxCoeff());
    }
    return {worst < 1e-9, fmt("deltaR in {0.8, 1, 2}, max deviation from closed forms %.2e", worst)};
}

Outcome sign_changes() {
    const double r1 = bisect([](double d) { return kappa(bcnf3_on_curve(d), Side::Minus, 2); }, 1.3, 1.6);
    const double r2 = bisect(
        [](double d) {
            const ShrinkPoint sp = bcnf3_on_curve(d);
            return theta(sp, Side::Plus, 0) - theta(sp, Side::Plus, -1);
        },
        0.8, 0.95);
    const bool ok = std::fabs(r1 - 1.4597) <= 0.005 && std::fabs(r2 - 0.8665) <= 0.005;
    return {ok, fmt("kappa-_2 = 0 at deltaR = %.6f, theta+_0 = theta+_-1 at deltaR = %.6f", r1, r2)};
}

Outcome identity_suite() {
    bool ok = true;
    std::ostringstream detail;
    for (const ShrinkPoint* sp : {&fixtures::bcnf3_point(), &fixtures::ns2_point(), &fixtures::gs2_point()}) {
        const IdentityReport rep = verify_identities(*sp);
        double worst = 0;
        for (const auto& c : rep.checks) worst = std::max(worst, c.residual);
        const bool signs = sp->t_d() < 0 && sp->t_lm1d() < 0 && sp->t_lp1d() > 0 && sp->t_md() > 0;
        const bool fam_ok = rep.all_pass() && worst < 1e-8 && signs && sp->a * sp->b < 0;
        ok = ok && fam_ok;
        detail << sp->family << " F[" << sp->spec.str() << "]: " << rep.checks.size() << " identities, max residual "
               << fmt("%.1e", worst) << (signs ? ", t signs ok" : ", t signs WRONG") << fmt(", ab = %.3g; ", sp->a * sp->b);
    }
    return {ok, detail.str()};
}

Outcome gs2_curve() {
    const MapFamily fam = builtin_family("gs2");
    const Slice sl(fam, fam.point());
    const double xi2 = 0.2569817196380581;
    double worst = 0;
    int solved = 0;
    for (double xi1 : {1.0585724737881539, -1.0585724737881539, 5.2246128333914328, -5.2246128333914328}) {
        const ShrinkPoint sp = solve_shrinking_point(sl, RotSpec::make(8, 2, 13), {xi1 + 0.005, xi2 - 0.005});
        worst = std::max(worst, std::fabs(fixtures::gs2_curve(sp.xi)));
        ++solved;
    }
    return {worst < 1e-8, fmt("%d F[8,2,13] points, max curve residual %.2e", solved, worst)};
}

Outcome symbolic_suite() {
    std::ostringstream log;
    const auto t0 = Clock::now();
    const VerifySummary s = run_symbolic_suite(log);
    const double secs = seconds_since(t0);
    return {s.failed == 0 && secs < 30, fmt("%d checks passed, %d failed, %.2f s", s.passed, s.failed, secs)};
}

// Largest distance from the traced det(P_{G+[k,0]}) = 0 arc to the curve
// r = Gamma(theta)/k, in local coordinates, over a window of theta inside
// the quadrant.
double trace_distance(const ShrinkPoint& sp, const Slice& sl, int k, double lo, double hi) {
    const AngleRange q = quadrant(sp, Side::Plus);
    const Word T = build_nearby(sp.spec, NearbySpec::make(sp.spec, Side::Plus, k, 0));
    const double mid = 0.5 * (lo + hi);
    const Eigen::Vector2d start = invert_local_coords(sl, sp, polar_to_local(sp, Gamma(mid) / k, mid));
    std::vector<Eigen::Vector2d> curve;
    const int samples = 20000;
    for (int i = 0; i <= samples; ++i) {
        const double th = q.lo + 1e-4 + (q.hi - q.lo - 2e-4) * i / samples;
        curve.push_back(polar_to_local(sp, Gamma(th) / k, th));
    }
    double worst = 0;
    for (int dir : {1, -1}) {
        TraceOptions o;
        o.direction = dir;
        o.h0 = 1e-3 / k;
        o.h_max = 2e-2 / k;
        o.h_min = 1e-9;
        o.stop = [&](const Eigen::Vector2d& z) {
            const double th = local_to_polar(sp, local_coords(sl, sp.spec, z)).theta;
            return th < lo || th > hi;
        };
        const BoundaryTrace tr = trace_boundary(sl, T, 0, start, o);
        // the last vertex is past the window edge
        for (std::size_t i = 0; i + 1 < tr.points.size(); ++i) {
            const Eigen::Vector2d p = local_coords(sl, sp.spec, tr.points[i].xi);
            double best = 1e300;
            for (std::size_t j = 0; j + 1 < curve.size(); ++j) {
                const Eigen::Vector2d a = curve[j], b = curve[j + 1];
                const double t = std::clamp((p - a).dot(b - a) / (b - a).squaredNorm(), 0.0, 1.0);
                best = std::min(best, (a + t * (b - a) - p).norm());
            }
            worst = std::max(worst, best);
        }
    }
    return worst;
}

Outcome trace_convergence() {
    const ShrinkPoint& sp = fixtures::bcnf3_point();
    const AngleRange q = quadrant(sp, Side::Plus);
    const double lo = q.lo + 0.35, hi = q.hi - 0.35;
    std::vector<double> d;
    for (int k : {10, 20, 40}) d.push_back(trace_distance(sp, fixtures::bcnf3_slice(), k, lo, hi));
    const double r1 = d[1] / d[0], r2 = d[2] / d[1];
    const bool ok = r1 >= 0.15 && r1 <= 0.4 && r2 >= 0.15 && r2 <= 0.4;
    return {ok, fmt("theta in [%.4f, %.4f]; distances %.3e, %.3e, %.3e; ratios %.3f, %.3f", lo, hi, d[0], d[1], d[2], r1,
                    r2)};
}

Outcome nearby_points() {
    const ShrinkPoint& sp = fixtures::bcnf3_point();
    std::vector<double> dist, logm;
    const std::vector<int> ks{10, 20, 40};
    bool ok = true;
    for (int k : ks) {
        const NearbyResult r = find_nearby_shrink(fixtures::bcnf3_slice(), sp, Side::Plus, -1, k);
        if (!r.found) return {false, fmt("G+[%d,-1] not found: ", k) + r.reason};
        ok = ok && r.sgn_a_match && r.detJtilde > 0;
        dist.push_back(r.seed_distance);
        logm.push_back(std::log(r.max_other_multiplier));
    }
    const double r1 = dist[1] / dist[0], r2 = dist[2] / dist[1];
    ok = ok && r1 >= 0.15 && r1 <= 0.4 && r2 >= 0.15 && r2 <= 0.4;
    // least-squares slope of log(max other multiplier) against k
    double kb = 0, lb = 0;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        kb += ks[i] / 3.0;
        lb += logm[i] / 3.0;
    }
    double num = 0, den = 0;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        num += (ks[i] - kb) * (logm[i] - lb);
        den += (ks[i] - kb) * (ks[i] - kb);
    }
    const double slope = num / den, ref = std::log(sp.sigma);
    ok = ok && std::fabs(slope - ref) <= 0.3 * std::fabs(ref);
    return {ok, fmt("distance ratios %.3f, %.3f; sgn(a~) = sgn(a) and det(J~) > 0 at all; slope of log max multiplier "
                    "%.4f per k vs ln(sigma) = %.4f (n ln(sigma) = %.4f)",
                    r1, r2, slope, ref, sp.n() * ref)};
}

Outcome grid_smoke() {
    ScanOptions opt;
    opt.n_max = 50;
    opt.threads = 4;
    const auto t0 = Clock::now();
    const ScanGrid g = grid_scan(fixtures::bcnf3_slice(), {-3, -1, 0, 0.4}, 128, 32, opt);
    const double secs = seconds_since(t0);
    const auto& lo = g.nearest(-2, 0.1);
    const auto& hi = g.nearest(-2, 0.3);
    const bool cells = lo.spec == RotSpec::make(2, 2, 5) && hi.spec == RotSpec::make(3, 2, 5);
    const int row = 16;
    int rises = 0, filled = 0;
    double prev = 2;
    for (int i = 0; i < g.nx; ++i) {
        const ScanCell& c = g.at(i, row);
        if (!c.spec) continue;
        ++filled;
        if (c.rotnum > prev) ++rises;
        prev = c.rotnum;
    }
    const bool ok = secs < 120 && cells && rises == 0 && filled > 0;
    return {ok, fmt("%.1f s (%u hardware threads), (-2,0.1) -> (%s), (-2,0.3) -> (%s), row %d: %d cells, %d increases", secs,
                    std::thread::hardware_concurrency(), lo.spec ? lo.spec->str().c_str() : "none",
                    hi.spec ? hi.spec->str().c_str() : "none", row, filled, rises)};
}

Outcome expansions() {
    const ShrinkPoint& sp = fixtures::bcnf3_point();
    const Slice& sl = fixtures::bcnf3_slice();
    auto at = [&](double eta, double nu) {
        const PwlMap f = sl.at(invert_local_coords(sl, sp, {eta, nu}));
        const Mat M = compose(f, sp.S).M;
        return std::pair{(Mat::Identity(3, 3) - M).determinant(), linalg::eig_pair_near(M, 1.0).value.real()};
    };
    const double h = 1e-4;
    const auto [dpe, lpe] = at(h, 0);
    const auto [dme, lme] = at(-h, 0);
    const auto [dpn, lpn] = at(0, h);
    const auto [dmn, lmn] = at(0, -h);
    const double e1 = std::max(std::fabs((dpe - dme) / (2 * h) - sp.a / sp.t_d()),
                               std::fabs((dpn - dmn) / (2 * h) - sp.a / sp.t_lm1d()));
    const double e2 = std::max(std::fabs((lpe - lme) / (2 * h) + sp.a / (sp.c * sp.t_d())),
                               std::fabs((lpn - lmn) / (2 * h) + sp.a / (sp.c * sp.t_lm1d())));

    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> ball(-1e-2, 1e-2), hd(-2, 2);
    double slow = 0;
    for (int t = 0; t < 20; ++t) {
        const PwlMap f = sl.at(invert_local_coords(sl, sp, {ball(rng), ball(rng)}));
        for (long long j : {0LL, sp.ld()}) {
            const SlowManifold m = slow_manifold(f, sp, j);
            const double hh = hd(rng);
            const auto lhs = iterate_word(f, m.phi + hh * m.zeta, shift(sp.S, j));
            slow = std::max(slow, (lhs - (m.phi + (hh * m.lambda + m.gamma) * m.zeta)).norm());
        }
    }
    return {e1 < 2e-6 && e2 < 2e-6 && slow < 1e-9,
            fmt("det(I-M_S) slope error %.2e, lambda slope error %.2e, slow-manifold residual %.2e", e1, e2, slow)};
}

}  // namespace

int main() {
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"shrinking-point solve", shrink_solve},
        {"kappa table", kappa_table},
        {"shrinking-point curve", shrink_curve},
        {"sign-change sweep", sign_changes},
        {"identity suite", identity_suite},
        {"grazing-sliding curve", gs2_curve},
        {"symbolic suite", symbolic_suite},
        {"boundary convergence", trace_convergence},
        {"nearby shrinking points", nearby_points},
        {"grid scan", grid_smoke},
        {"expansion checks", expansions},
    };
    int failed = 0, index = 0;
    for (const auto& [name, run] : criteria) {
        ++index;
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << " [" << index << "] " << name << ": " << o.detail << std::endl;
    }
    std::cout << (index - failed) << "/" << index << " criteria passed" << std::endl;
    return failed == 0 ? 0 : 1;
}
