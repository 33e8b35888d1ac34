#include "plmode/shrink.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace plmode {

using linalg::Mat;
using linalg::RowVec;
using linalg::Vec;

namespace {

Mat M_of(const PwlMap& f, const Word& w) { return compose(f, w).M; }

double rel_diff(const Vec& x, const Vec& y) {
    const double s = std::max({x.norm(), y.norm(), 1e-300});
    return (x - y).norm() / s;
}

double rel_diff(double x, double y) {
    const double s = std::max({std::fabs(x), std::fabs(y), 1e-300});
    return std::fabs(x - y) / s;
}

bool is_finite(const Eigen::Vector2d& v) { return std::isfinite(v(0)) && std::isfinite(v(1)); }

}  // namespace

const EigIndexPair& ShrinkPoint::pair(long long j) const {
    const int r = idx(j);
    for (const auto& p : eig)
        if (p.j == r) return p;
    throw ShrinkError(ShrinkError::Kind::Invalid,
                      "eigenvector pairs exist only for j in {0, (l-1)d, ld, -d}; got " + std::to_string(j));
}

Eigen::Vector2d local_coords(const PwlMap& f, const RotSpec& spec) {
    const Word S0 = flip(build_rotational(spec), 0);
    const int N = f.dim();
    const Composition c = compose(f, S0);
    const Mat IM = Mat::Identity(N, N) - c.M;
    if (linalg::relative_det(IM) < 1e-12)
        throw SingularCycleError("I - M is singular for the S^{0-bar} word " + S0.str());
    const Vec rhs = c.P * f.B * f.mu;
    auto lu = IM.partialPivLu();
    Vec x = lu.solve(rhs);
    x += lu.solve(rhs - IM * x);
    const double eta = x(0);
    const long long ld = mod(static_cast<long long>(spec.ell) * spec.d, spec.n);
    for (long long i = 0; i < ld; ++i) x = f.A(S0[i]) * x + f.B * f.mu;
    return {eta, x(0)};
}

Eigen::Vector2d local_coords(const Slice& slice, const RotSpec& spec, const Eigen::Vector2d& xi) {
    return local_coords(slice.at(xi), spec);
}

Eigen::Matrix2d local_jacobian(const Slice& slice, const RotSpec& spec, const Eigen::Vector2d& xi) {
    Eigen::Matrix2d J;
    for (int k = 0; k < 2; ++k) {
        const double h = 1e-6 * (1.0 + std::fabs(xi(k)));
        Eigen::Vector2d p = xi, m = xi;
        p(k) += h;
        m(k) -= h;
        J.col(k) = (local_coords(slice, spec, p) - local_coords(slice, spec, m)) / (2 * h);
    }
    return J;
}

ShrinkPoint solve_shrinking_point(const Slice& slice, const RotSpec& spec, const Eigen::Vector2d& guess,
                                  const ShrinkOptions& opt) {
    using K = ShrinkError::Kind;
    if (spec.ell < 2 || spec.ell > spec.n - 2)
        throw ShrinkError(K::Invalid, "shrinking points need 2 <= l <= n-2");

    Eigen::Vector2d xi = guess;
    Eigen::Vector2d F;
    try {
        F = local_coords(slice, spec, xi);
    } catch (const SingularCycleError& e) {
        throw ShrinkError(K::Singular, std::string("at the initial guess: ") + e.what());
    }
    int it = 0;
    while (F.cwiseAbs().maxCoeff() >= opt.tol) {
        if (it >= opt.max_iterations)
            throw ShrinkError(K::NoConvergence, "Newton did not converge in " + std::to_string(it) +
                                                    " iterations; residual " +
                                                    std::to_string(F.cwiseAbs().maxCoeff()));
        ++it;
        Eigen::Matrix2d J;
        try {
            J = local_jacobian(slice, spec, xi);
        } catch (const SingularCycleError& e) {
            throw ShrinkError(K::Singular, e.what());
        }
        if (std::fabs(J.determinant()) < 1e-14 * std::max(1.0, J.cwiseAbs().maxCoeff()))
            throw ShrinkError(K::NoConvergence, "Jacobian of (eta, nu) is singular");
        const Eigen::Vector2d dx = -J.partialPivLu().solve(F);
        double step = 1.0;
        bool accepted = false;
        for (int half = 0; half < 30; ++half, step *= 0.5) {
            const Eigen::Vector2d trial = xi + step * dx;
            Eigen::Vector2d Ft;
            try {
                Ft = local_coords(slice, spec, trial);
            } catch (const SingularCycleError&) {
                continue;
            }
            if (!is_finite(Ft)) continue;
            if (Ft.cwiseAbs().maxCoeff() < F.cwiseAbs().maxCoeff() || half == 29) {
                xi = trial;
                F = Ft;
                accepted = true;
                break;
            }
        }
        if (!accepted) throw ShrinkError(K::NoConvergence, "line search failed");
        if (dx.norm() < 1e-16 * (1 + xi.norm()) && F.cwiseAbs().maxCoeff() >= opt.tol)
            throw ShrinkError(K::NoConvergence, "Newton stagnated at residual " +
                                                    std::to_string(F.cwiseAbs().maxCoeff()));
    }

    ShrinkPoint sp;
    sp.family = slice.family().name;
    sp.slice = slice.names();
    sp.param = slice.point(xi);
    sp.xi = xi;
    sp.spec = spec;
    sp.S = build_rotational(spec);
    sp.map = slice.at(xi);
    sp.iterations = it;
    sp.residual = F.cwiseAbs().maxCoeff();

    const PwlMap& f = sp.map;
    const int N = f.dim();
    const int n = spec.n;
    const long long d = spec.d, ld = sp.ld();
    if (std::fabs((varrho(f) * f.B)(0)) < 1e-12)
        throw ShrinkError(K::Degenerate, "varrho^T B vanishes");

    const Word S0 = flip(sp.S, 0);
    const Word Sld = flip(sp.S, ld);
    CycleResult cyc;
    try {
        cyc = solve_cycle(f, S0, {false, false});
    } catch (const SingularCycleError& e) {
        throw ShrinkError(K::Singular, e.what());
    }
    sp.y = cyc.points;
    sp.t = cyc.s;
    for (int i = 0; i < n; ++i) {
        const double ti = std::fabs(sp.t[static_cast<std::size_t>(i)]);
        if (i == sp.idx(0) || i == sp.idx(ld)) {
            if (ti > 1e-11)
                throw ShrinkError(K::NoConvergence, "t_" + std::to_string(i) + " is not zero");
        } else if (ti <= 1e-8) {
            throw ShrinkError(K::Degenerate, "t_" + std::to_string(i) + " = " +
                                                 std::to_string(sp.t[static_cast<std::size_t>(i)]) +
                                                 " is too close to the switching manifold");
        }
    }
    if (!cyc.admissible)
        throw ShrinkError(K::Inadmissible, "the S^{0-bar}-cycle is not admissible (index " +
                                               std::to_string(cyc.violations.front()) + ")");
    if (!(sp.t_d() < 0 && sp.t_lm1d() < 0 && sp.t_lp1d() > 0 && sp.t_md() > 0))
        throw ShrinkError(K::Inadmissible, "switching values violate the sign pattern");

    const Mat I = Mat::Identity(N, N);
    sp.a = linalg::det(I - M_of(f, S0));
    sp.b = linalg::det(I - M_of(f, Sld));
    if (linalg::relative_det(I - M_of(f, Sld)) < 1e-12)
        throw ShrinkError(K::Degenerate, "I - M for the S^{ld-bar} word is singular");

    const long long js[4] = {0, ld - d, ld, -d};
    try {
        for (int k = 0; k < 4; ++k) {
            const int j = sp.idx(js[k]);
            const linalg::EigPair p = linalg::unit_eig_pair(M_of(f, shift(sp.S, j)));
            sp.eig[static_cast<std::size_t>(k)] = {j, p.u, p.v};
        }
        const Mat MS = M_of(f, sp.S);
        const linalg::RankOneAdjugate r1 = linalg::adj_rank_deficient(I - MS);
        sp.c = r1.c;
        sp.c_eigen = r1.c_eigen;
        sp.sigma = linalg::max_other_modulus(linalg::eigs(MS));
    } catch (const linalg::LinalgError& e) {
        throw ShrinkError(K::Degenerate, e.what());
    }
    sp.J = local_jacobian(slice, spec, xi);

    sp.psi1_coeff = -sp.t_d() / (sp.t_lm1d() * sp.t_lp1d());
    sp.psi2_coeff = -sp.t_lm1d() / (sp.t_d() * sp.t_md());
    if (sp.a < 0) {
        sp.psi1_ell = spec.ell;
        sp.psi2_ell = spec.ell + 1;
    } else {
        sp.psi1_ell = spec.ell - 1;
        sp.psi2_ell = spec.ell;
    }
    return sp;
}

Eigen::Vector2d invert_local_coords(const Slice& slice, const ShrinkPoint& sp, const Eigen::Vector2d& target) {
    const auto lu = sp.J.partialPivLu();
    Eigen::Vector2d xi = sp.xi + lu.solve(target);
    const double tol = 1e-15 + 1e-12 * target.cwiseAbs().maxCoeff();
    Eigen::Matrix2d J = sp.J;
    for (int it = 0; it < 60; ++it) {
        const Eigen::Vector2d F = local_coords(slice, sp.spec, xi) - target;
        if (F.cwiseAbs().maxCoeff() < tol) return xi;
        if (it == 5) J = local_jacobian(slice, sp.spec, xi);
        xi -= J.partialPivLu().solve(F);
    }
    throw ShrinkError(ShrinkError::Kind::NoConvergence, "could not invert local coordinates");
}

bool IdentityReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const IdentityCheck& c) { return c.pass; });
}

IdentityReport verify_identities(const ShrinkPoint& sp) {
    IdentityReport rep;
    auto add = [&](std::string name, double r) {
        rep.checks.push_back({std::move(name), r, std::isfinite(r) && r < kIdentityTol});
    };
    const PwlMap& f = sp.map;
    const long long d = sp.spec.d, ld = sp.ld();
    const Partitions p = partitions(sp.spec);
    const Mat MX = M_of(f, p.X), MY = M_of(f, p.Y);
    const Mat MX0 = M_of(f, flip(p.X, 0)), MY0 = M_of(f, flip(p.Y, 0));
    const Mat MXh = M_of(f, p.Xhat), MYh = M_of(f, p.Yhat);
    const Mat MXc = M_of(f, p.Xcheck), MYc = M_of(f, p.Ycheck);
    const auto& P0 = sp.pair(0);
    const auto& Pl1 = sp.pair(ld - d);
    const auto& Pl = sp.pair(ld);
    const auto& Pm = sp.pair(-d);
    const double td = sp.t_d(), tl1 = sp.t_lm1d(), tlp = sp.t_lp1d(), tm = sp.t_md();

    const double inv_c = 1.0 / sp.c;
    add("u0.v-d/a + uld.v(l-1)d/b = 1/c",
        rel_diff(P0.u.dot(Pm.v) / sp.a + Pl.u.dot(Pl1.v) / sp.b, inv_c));
    add("u(l-1)d.vld/a + u-d.v0/b = 1/c",
        rel_diff(Pl1.u.dot(Pl.v) / sp.a + Pm.u.dot(P0.v) / sp.b, inv_c));
    add("a/b = -td t(l-1)d/(t-d t(l+1)d)", rel_diff(sp.a / sp.b, -td * tl1 / (tm * tlp)));
    add("c adjugate = c eigenvalues", rel_diff(sp.c, sp.c_eigen));

    auto vrel = [&](const char* name, const Vec& lhs, const Vec& rhs) { add(name, rel_diff(lhs, rhs)); };
    auto urel = [&](const char* name, const RowVec& lhs, const RowVec& rhs) {
        add(name, rel_diff(Vec(lhs.transpose()), Vec(rhs.transpose())));
    };
    vrel("vld = (td/t(l+1)d) MX v0", Pl.v, (td / tlp) * MX * P0.v);
    urel("uld = (t(l+1)d/td) u0 MY", Pl.u, (tlp / td) * P0.u * MY);
    vrel("v0 = (t(l+1)d/td) MY vld", P0.v, (tlp / td) * MY * Pl.v);
    urel("u0 = (td/t(l+1)d) uld MX", P0.u, (td / tlp) * Pl.u * MX);
    vrel("v(l-1)d = (t-d/t(l-1)d) MX0 v-d", Pl1.v, (tm / tl1) * MX0 * Pm.v);
    urel("u(l-1)d = (t(l-1)d/t-d) u-d MY0", Pl1.u, (tl1 / tm) * Pm.u * MY0);
    vrel("v-d = (t(l-1)d/t-d) MY0 v(l-1)d", Pm.v, (tl1 / tm) * MY0 * Pl1.v);
    urel("u-d = (t-d/t(l-1)d) u(l-1)d MX0", Pm.u, (tm / tl1) * Pl1.u * MX0);
    vrel("v-d = -(td/t-d) MXhat v0", Pm.v, -(td / tm) * MXh * P0.v);
    urel("u-d = -(t-d/td) u0 MYhat", Pm.u, -(tm / td) * P0.u * MYh);
    vrel("v0 = -(t-d/td) MYhat v-d", P0.v, -(tm / td) * MYh * Pm.v);
    urel("u0 = -(td/t-d) u-d MXhat", P0.u, -(td / tm) * Pm.u * MXh);
    vrel("v(l-1)d = -(t(l+1)d/t(l-1)d) MXcheck vld", Pl1.v, -(tlp / tl1) * MXc * Pl.v);
    urel("u(l-1)d = -(t(l-1)d/t(l+1)d) uld MYcheck", Pl1.u, -(tl1 / tlp) * Pl.u * MYc);
    vrel("vld = -(t(l-1)d/t(l+1)d) MYcheck v(l-1)d", Pl.v, -(tl1 / tlp) * MYc * Pl1.v);
    urel("uld = -(t(l+1)d/t(l-1)d) u(l-1)d MXcheck", Pl.u, -(tlp / tl1) * Pl1.u * MXc);

    for (const auto& pr : sp.eig) {
        const long long j = pr.j;
        const Vec vj = (sp.y[static_cast<std::size_t>(sp.idx(j + d))] - sp.y[static_cast<std::size_t>(sp.idx(j))]) /
                       (sp.tt(j + d) - sp.tt(j));
        vrel(("v" + std::to_string(j) + " = (y_(j+d) - y_j)/(t_(j+d) - t_j)").c_str(), pr.v, vj);
        const Mat IMj = Mat::Identity(f.dim(), f.dim()) - M_of(f, shift(sp.S, j));
        urel(("u" + std::to_string(j) + " = e1 adj(I - M_S(j))/c").c_str(), pr.u,
             linalg::adj(IMj).row(0) / sp.c);
    }
    return rep;
}

SlowManifold slow_manifold(const PwlMap& f, const ShrinkPoint& sp, long long j) {
    const int N = f.dim();
    const Word Sj = shift(sp.S, j);
    const Composition c = compose(f, Sj);
    const linalg::EigPair ep = linalg::eig_pair_near(c.M, 1.0);
    SlowManifold sm;
    sm.j = sp.idx(j);
    sm.lambda = ep.value.real();
    sm.zeta = ep.v;
    sm.omega = ep.u;
    const Mat I = Mat::Identity(N, N);
    Mat E = I;
    E(0, 0) = 0.0;
    Mat K = (I - c.M) * E;
    K.col(0) += sm.zeta;
    if (linalg::relative_det(K) < 1e-13) throw linalg::LinalgError("bordered slow-manifold system is singular");
    const Vec rhs = c.P * f.B * f.mu;
    auto lu = K.partialPivLu();
    Vec sol = lu.solve(rhs);
    sol += lu.solve(rhs - K * sol);
    sm.gamma = sol(0);
    sm.phi = sol;
    sm.phi(0) = 0.0;

    const Mat IM = I - c.M;
    if (linalg::relative_det(IM) > 1e-8) {
        const Vec x = IM.partialPivLu().solve(rhs);
        const Vec phi2 = x - sm.zeta * x(0);
        sm.phi_crosscheck = (phi2 - sm.phi).norm() / std::max(1.0, sm.phi.norm());
        sm.gamma_crosscheck = std::fabs((1 - sm.lambda) * x(0) - sm.gamma) / std::max(1.0, std::fabs(sm.gamma));
    }
    return sm;
}

double kappa(const ShrinkPoint& sp, Side side, int chi) {
    const PwlMap& f = sp.map;
    const long long d = sp.spec.d, ld = sp.ld();
    if (side == Side::Plus) {
        if (chi <= -1) {
            const Mat M = M_of(f, shift(flip(sp.S, 0), ld));
            return (sp.pair(ld).u * linalg::matrix_power(M, -chi - 1) * sp.pair(ld - d).v)(0);
        }
        const Mat M = M_of(f, flip(sp.S, ld));
        return (sp.pair(0).u * linalg::matrix_power(M, chi) * sp.pair(-d).v)(0);
    }
    if (chi <= 0) {
        const Mat M = M_of(f, flip(sp.S, 0));
        return (sp.pair(-d).u * linalg::matrix_power(M, -chi) * sp.pair(0).v)(0);
    }
    const Mat M = M_of(f, shift(flip(sp.S, ld), ld));
    return (sp.pair(ld - d).u * linalg::matrix_power(M, chi - 1) * sp.pair(ld).v)(0);
}

double theta(const ShrinkPoint& sp, Side side, int chi) {
    const double k = kappa(sp, side, chi);
    if (std::fabs(k) <= kKappaDegenerate)
        throw ShrinkError(ShrinkError::Kind::Degenerate,
                          std::string("kappa") + side_char(side) + "_" + std::to_string(chi) + " vanishes");
    const double ak = std::fabs(k);
    double arg;
    if (side == Side::Plus)
        arg = chi <= -1 ? sp.t_lp1d() / (sp.t_lm1d() * ak) : sp.t_d() / (sp.t_md() * ak);
    else
        arg = chi <= 0 ? sp.t_d() * ak / sp.t_md() : sp.t_lp1d() * ak / sp.t_lm1d();
    const double base = std::atan(arg);
    // (3pi/2, 2pi) for the plus side when a < 0, (pi/2, pi) otherwise; swapped when a > 0
    const bool fourth = (side == Side::Plus) == (sp.a < 0);
    return (fourth ? 2 * std::numbers::pi : std::numbers::pi) + base;
}

}  // namespace plmode
