#include "plmode/scan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

namespace plmode {

using linalg::Mat;
using linalg::Vec;

TieBreak parse_tie_break(std::string_view s) {
    if (s == "highest-period") return TieBreak::HighestPeriod;
    if (s == "lowest-period") return TieBreak::LowestPeriod;
    if (s == "largest-margin") return TieBreak::LargestMargin;
    throw std::invalid_argument("unknown tie-break '" + std::string(s) + "'");
}

const char* tie_break_name(TieBreak t) {
    switch (t) {
        case TieBreak::HighestPeriod: return "highest-period";
        case TieBreak::LowestPeriod: return "lowest-period";
        case TieBreak::LargestMargin: return "largest-margin";
    }
    return "?";
}

const ScanCell& ScanGrid::nearest(double x, double y) const {
    auto index = [](double v, double a, double b, int n) {
        const double u = (v - a) / (b - a) * (n - 1);
        return std::clamp(static_cast<int>(std::lround(u)), 0, n - 1);
    };
    return at(index(x, window.x0, window.x1, nx), index(y, window.y0, window.y1, ny));
}

namespace {

struct Candidate {
    int ell = 0, m = 0, n = 0;
    double margin = 0;
};

bool better(const Candidate& c, const Candidate& best, TieBreak tb) {
    if (best.n == 0) return true;
    switch (tb) {
        case TieBreak::HighestPeriod:
            if (c.n != best.n) return c.n > best.n;
            break;
        case TieBreak::LowestPeriod:
            if (c.n != best.n) return c.n < best.n;
            break;
        case TieBreak::LargestMargin:
            break;
    }
    // The same cyclic word can arise from two values of m; their margins agree up to rounding.
    if (std::fabs(c.margin - best.margin) > 1e-9) return c.margin > best.margin;
    if (c.m != best.m) return c.m < best.m;
    return c.ell < best.ell;
}

// Per-dimension kernel; N = Eigen::Dynamic handles dimensions above 4.
template <int N>
struct Kernel {
    using M = Eigen::Matrix<double, N, N>;
    using V = Eigen::Matrix<double, N, 1>;

    M AL, AR, I;
    V Bmu;
    double log_det_L = 0, log_det_R = 0;

    explicit Kernel(const PwlMap& f) : AL(f.AL), AR(f.AR), Bmu(f.B * f.mu) {
        const auto dim = f.AL.rows();
        I = M::Identity(dim, dim);
        log_det_L = std::log(std::fabs(AL.determinant()));
        log_det_R = std::log(std::fabs(AR.determinant()));
    }

    void run(int n_max, TieBreak tb, Candidate& best, long long& tested, long long& failures) const {
        std::vector<int> r;
        std::vector<unsigned char> left;
        const auto dim = AL.rows();
        for (int n = 2; n <= n_max; ++n) {
            r.resize(static_cast<std::size_t>(n));
            left.resize(static_cast<std::size_t>(n));
            for (int m = 1; m < n; ++m) {
                if (std::gcd(m, n) != 1) continue;
                for (int i = 0; i < n; ++i) r[static_cast<std::size_t>(i)] = (i * m) % n;
                for (int ell = 1; ell < n; ++ell) {
                    // det M_S = det(A_L)^ell det(A_R)^(n-ell) bounds the product of the multipliers
                    const double ld = ell * log_det_L + (n - ell) * log_det_R;
                    if (ld >= 0) continue;
                    ++tested;
                    for (int i = 0; i < n; ++i) left[static_cast<std::size_t>(i)] = r[static_cast<std::size_t>(i)] < ell;
                    M Mc = I;
                    V v = V::Zero(dim);
                    for (int i = 0; i < n; ++i) {
                        const M& A = left[static_cast<std::size_t>(i)] ? AL : AR;
                        Mc = (A * Mc).eval();
                        v = (A * v + Bmu).eval();
                    }
                    const M IM = I - Mc;
                    const double dt = IM.determinant();
                    if (!(std::fabs(dt) > 1e-12)) {
                        ++failures;
                        continue;
                    }
                    V x = IM.partialPivLu().solve(v);
                    bool ok = true;
                    for (int i = 0; i < n && ok; ++i) {
                        const double s = x(0);
                        const bool L = left[static_cast<std::size_t>(i)];
                        ok = L ? s <= kAdmissibilityTol : s >= -kAdmissibilityTol;
                        x = ((L ? AL : AR) * x + Bmu).eval();
                    }
                    if (!ok) continue;
                    Eigen::EigenSolver<M> es(Mc, false);
                    if (es.info() != Eigen::Success) {
                        ++failures;
                        continue;
                    }
                    const double rho = es.eigenvalues().cwiseAbs().maxCoeff();
                    if (!(rho < 1 - kStabilityTol)) continue;
                    Candidate c{ell, m, n, 1 - rho};
                    if (better(c, best, tb)) best = c;
                }
            }
        }
    }
};

Candidate run_kernel(const PwlMap& f, int n_max, TieBreak tb, long long& tested, long long& failures) {
    Candidate best;
    switch (f.dim()) {
        case 1: Kernel<1>(f).run(n_max, tb, best, tested, failures); break;
        case 2: Kernel<2>(f).run(n_max, tb, best, tested, failures); break;
        case 3: Kernel<3>(f).run(n_max, tb, best, tested, failures); break;
        case 4: Kernel<4>(f).run(n_max, tb, best, tested, failures); break;
        default: Kernel<Eigen::Dynamic>(f).run(n_max, tb, best, tested, failures); break;
    }
    return best;
}

ScanCell to_cell(const Candidate& c, double x, double y) {
    ScanCell cell;
    cell.x = x;
    cell.y = y;
    if (c.n) {
        cell.spec = RotSpec::make(c.ell, c.m, c.n);
        cell.rotnum = static_cast<double>(c.m) / c.n;
        cell.margin = c.margin;
    }
    return cell;
}

}  // namespace

std::optional<ScanCell> best_cycle(const PwlMap& f, int n_max, TieBreak tb) {
    long long tested = 0, failures = 0;
    const Candidate c = run_kernel(f, n_max, tb, tested, failures);
    if (!c.n) return std::nullopt;
    return to_cell(c, 0, 0);
}

ScanGrid grid_scan(const Slice& slice, const Window& window, int nx, int ny, const ScanOptions& opt) {
    if (nx < 2 || ny < 2) throw std::invalid_argument("grid needs at least 2x2 nodes");
    if (opt.n_max < 2 || opt.n_max > 200) throw std::invalid_argument("n_max must lie in [2, 200]");
    ScanGrid g;
    g.window = window;
    g.nx = nx;
    g.ny = ny;
    g.n_max = opt.n_max;
    g.cells.resize(static_cast<std::size_t>(nx) * ny);

    std::vector<long long> tested(static_cast<std::size_t>(ny)), failures(static_cast<std::size_t>(ny));
    std::atomic<int> next_row{0};
    auto worker = [&]() {
        for (int j; (j = next_row.fetch_add(1)) < ny;) {
            const double y = window.y0 + (window.y1 - window.y0) * j / (ny - 1);
            for (int i = 0; i < nx; ++i) {
                const double x = window.x0 + (window.x1 - window.x0) * i / (nx - 1);
                auto& t = tested[static_cast<std::size_t>(j)];
                auto& fl = failures[static_cast<std::size_t>(j)];
                Candidate c;
                try {
                    c = run_kernel(slice.at({x, y}), opt.n_max, opt.tie_break, t, fl);
                } catch (const std::exception&) {
                    ++fl;
                }
                g.cells[static_cast<std::size_t>(j) * nx + i] = to_cell(c, x, y);
            }
        }
    };
    int threads = opt.threads > 0 ? opt.threads : static_cast<int>(std::thread::hardware_concurrency());
    threads = std::clamp(threads, 1, ny);
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    g.words_tested = std::accumulate(tested.begin(), tested.end(), 0LL);
    g.solver_failures = std::accumulate(failures.begin(), failures.end(), 0LL);
    return g;
}

const char* trace_event_name(TraceEventKind k) {
    switch (k) {
        case TraceEventKind::LeftWindow: return "left_window";
        case TraceEventKind::ShrinkingPoint: return "shrinking_point";
        case TraceEventKind::PeriodDoubling: return "period_doubling";
        case TraceEventKind::Closed: return "closed";
        case TraceEventKind::StepUnderflow: return "step_underflow";
        case TraceEventKind::CorrectorFailure: return "corrector_failure";
        case TraceEventKind::MaxSteps: return "max_steps";
        case TraceEventKind::Stopped: return "stopped";
    }
    return "?";
}

namespace {

class BoundaryFunction {
public:
    BoundaryFunction(const Slice& slice, const Word& w, int i) : slice_(slice), word_(w), shifted_(shift(w, i)) {}

    double g(const Eigen::Vector2d& xi) const {
        const Mat P = compose(slice_.at(xi), shifted_).P;
        double scale = 1;
        for (Eigen::Index j = 0; j < P.cols(); ++j) scale *= P.col(j).norm();
        return linalg::det(P) / scale;
    }

    Eigen::Vector2d grad(const Eigen::Vector2d& xi) const {
        Eigen::Vector2d out;
        for (int k = 0; k < 2; ++k) {
            const double h = 1e-7 * (1 + std::fabs(xi(k)));
            Eigen::Vector2d p = xi, m = xi;
            p(k) += h;
            m(k) -= h;
            out(k) = (g(p) - g(m)) / (2 * h);
        }
        return out;
    }

    TracePoint point(const Eigen::Vector2d& xi) const {
        const PwlMap f = slice_.at(xi);
        const Composition c = compose(f, word_);
        TracePoint tp;
        tp.xi = xi;
        tp.detP = g(xi);
        tp.detImM = linalg::det(Mat::Identity(f.dim(), f.dim()) - c.M);
        const auto ev = linalg::eigs(c.M);
        auto it = std::min_element(ev.begin(), ev.end(), [](linalg::Complex a, linalg::Complex b) {
            return std::abs(a + 1.0) < std::abs(b + 1.0);
        });
        tp.nearest_minus1 = it->real();
        return tp;
    }

    // Newton on {g = 0, t.(z - p) = 0}; empty on failure.
    std::optional<Eigen::Vector2d> correct(const Eigen::Vector2d& p, const Eigen::Vector2d& t, int* iters) const {
        Eigen::Vector2d z = p;
        for (int it = 0; it < 12; ++it) {
            const double gv = g(z);
            if (!std::isfinite(gv)) return std::nullopt;
            const Eigen::Vector2d gr = grad(z);
            Eigen::Matrix2d A;
            A.row(0) = gr.transpose();
            A.row(1) = t.transpose();
            if (std::fabs(A.determinant()) < 1e-300) return std::nullopt;
            const Eigen::Vector2d rhs(-gv, -t.dot(z - p));
            const Eigen::Vector2d dz = A.partialPivLu().solve(rhs);
            z += dz;
            if (dz.norm() < 1e-13 * (1 + z.norm()) && std::fabs(g(z)) < 1e-11) {
                if (iters) *iters = it + 1;
                return z;
            }
        }
        return std::nullopt;
    }

    Eigen::Vector2d tangent(const Eigen::Vector2d& xi) const {
        const Eigen::Vector2d gr = grad(xi);
        return Eigen::Vector2d(-gr(1), gr(0)).normalized();
    }

private:
    const Slice& slice_;
    Word word_;
    Word shifted_;
};

}  // namespace

Eigen::Vector2d correct_onto_boundary(const Slice& slice, const Word& w, int i, const Eigen::Vector2d& xi) {
    BoundaryFunction bf(slice, w, i);
    const Eigen::Vector2d gr = bf.grad(xi);
    if (!(gr.norm() > 0)) throw TraceError("det(P) has a vanishing gradient at the start point");
    // constrain motion to the gradient direction
    const Eigen::Vector2d t(-gr(1), gr(0));
    auto z = bf.correct(xi, t.normalized(), nullptr);
    if (!z) throw TraceError("corrector failed to reach det(P) = 0 from the start point");
    return *z;
}

BoundaryTrace trace_boundary(const Slice& slice, const Word& w, int i, const Eigen::Vector2d& start,
                             const TraceOptions& opt) {
    BoundaryFunction bf(slice, w, i);
    BoundaryTrace tr;
    tr.word = w;
    tr.index = static_cast<int>(mod(i, static_cast<long long>(w.size())));

    Eigen::Vector2d z = correct_onto_boundary(slice, w, i, start);
    tr.points.push_back(bf.point(z));
    Eigen::Vector2d t = bf.tangent(z) * (opt.direction >= 0 ? 1.0 : -1.0);
    double h = std::clamp(opt.h0, opt.h_min, opt.h_max);
    double travelled = 0;

    auto finish = [&](TraceEventKind k, const Eigen::Vector2d& at) {
        tr.events.push_back({k, static_cast<int>(tr.points.size()) - 1, at});
    };

    for (int step = 0;; ++step) {
        if (step >= opt.max_steps) {
            finish(TraceEventKind::MaxSteps, z);
            break;
        }
        std::optional<Eigen::Vector2d> next;
        Eigen::Vector2d tn;
        int iters = 0;
        while (true) {
            next = bf.correct(z + h * t, t, &iters);
            if (next) {
                tn = bf.tangent(*next);
                if (tn.dot(t) < 0) tn = -tn;
                if (tn.dot(t) > 0.98 && (*next - z).norm() < 2 * h) break;
            }
            h *= 0.5;
            if (h < opt.h_min) break;
        }
        if (h < opt.h_min) {
            finish(TraceEventKind::StepUnderflow, z);
            break;
        }
        const TracePoint prev = tr.points.back();
        TracePoint cur = bf.point(*next);
        travelled += (*next - z).norm();
        z = *next;
        t = tn;
        tr.points.push_back(cur);

        if (std::signbit(prev.detImM) != std::signbit(cur.detImM)) {
            // bisect along the chord, projecting back onto the curve
            Eigen::Vector2d a = prev.xi, b = cur.xi;
            double fa = prev.detImM;
            for (int it = 0; it < 50; ++it) {
                const Eigen::Vector2d mid = bf.correct(0.5 * (a + b), (b - a).normalized(), nullptr).value_or(0.5 * (a + b));
                const double fm = bf.point(mid).detImM;
                if (std::signbit(fm) == std::signbit(fa)) {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            finish(TraceEventKind::ShrinkingPoint, 0.5 * (a + b));
        }
        if (std::signbit(prev.nearest_minus1 + 1) != std::signbit(cur.nearest_minus1 + 1) &&
            std::fabs(prev.nearest_minus1 + 1) < 0.5 && std::fabs(cur.nearest_minus1 + 1) < 0.5)
            finish(TraceEventKind::PeriodDoubling, cur.xi);

        if (opt.window && !opt.window->contains(z)) {
            finish(TraceEventKind::LeftWindow, z);
            break;
        }
        if (opt.stop && opt.stop(z)) {
            finish(TraceEventKind::Stopped, z);
            break;
        }
        if (opt.detect_closure && travelled > 4 * opt.h_max && (z - tr.points.front().xi).norm() < 1.5 * h) {
            // last vertex: the curve's crossing of the normal line through the start
            const Eigen::Vector2d s0 = tr.points.front().xi;
            if (auto w = bf.correct(s0, t, nullptr)) {
                z = *w;
                tr.points.push_back(bf.point(z));
            }
            finish(TraceEventKind::Closed, z);
            break;
        }
        if (iters <= 3) h = std::min(1.5 * h, opt.h_max);
    }
    return tr;
}

NearbyResult find_nearby_shrink(const Slice& slice, const ShrinkPoint& sp, Side side, int chi, int k,
                                const ShrinkOptions& opt) {
    NearbyResult res;
    res.nb = NearbySpec::make(sp.spec, side, k, chi);
    if (!sp.asymptotics_valid()) {
        res.reason = "sigma >= 1";
        return res;
    }
    const double kap = kappa(sp, side, chi);
    if (!(kap > kKappaDegenerate)) {
        res.reason = "kappa is not positive";
        return res;
    }
    const double th = theta(sp, side, chi);
    res.seed_eta_nu = polar_to_local(sp, Gamma(th) / k, th);
    res.seed_xi = linear_xi(sp, res.seed_eta_nu);
    ShrinkPoint tp;
    try {
        build_nearby(sp.spec, res.nb);
        tp = solve_shrinking_point(slice, res.nb.rot(), res.seed_xi, opt);
    } catch (const ShrinkError& e) {
        res.reason = e.what();
        return res;
    } catch (const SingularCycleError& e) {
        res.reason = e.what();
        return res;
    }
    res.found = true;
    res.eta_nu = local_coords(slice, sp.spec, tp.xi);
    res.seed_distance = (res.eta_nu - res.seed_eta_nu).norm();
    res.sgn_a_match = std::signbit(tp.a) == std::signbit(sp.a);
    const Eigen::Matrix2d Jl = local_jacobian(slice, sp.spec, tp.xi);
    res.detJtilde = tp.J.determinant() / Jl.determinant();
    res.max_other_multiplier = tp.sigma;
    res.point = std::move(tp);
    return res;
}

}  // namespace plmode
