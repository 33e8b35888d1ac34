#include "plmode/cycles.hpp"

#include <algorithm>
#include <cmath>

namespace plmode {

using linalg::Mat;
using linalg::Vec;

Composition compose(const PwlMap& f, const Word& w) {
    const int n = f.dim();
    Composition c{Mat::Identity(n, n), Mat::Zero(n, n)};
    for (Symbol s : w.symbols()) {
        const Mat& A = f.A(s);
        c.M = A * c.M;
        c.P = A * c.P;
        c.P.diagonal().array() += 1.0;
    }
    return c;
}

const char* stability_name(Stability s) {
    switch (s) {
        case Stability::Stable: return "stable";
        case Stability::Marginal: return "marginal";
        case Stability::Unstable: return "unstable";
    }
    return "?";
}

linalg::RowVec varrho(const PwlMap& f) {
    const int n = f.dim();
    return linalg::adj(Mat::Identity(n, n) - f.AL).row(0);
}

CycleResult solve_cycle(const PwlMap& f, const Word& w, const CycleOptions& opt) {
    const int N = f.dim();
    const auto n = static_cast<int>(w.size());
    const Composition comp = compose(f, w);
    const Mat IM = Mat::Identity(N, N) - comp.M;
    if (linalg::relative_det(IM) < 1e-10)
        throw SingularCycleError("I - M_S is singular for word " + w.str());

    CycleResult r;
    r.word = w;
    r.det_I_minus_M = linalg::det(IM);
    const Vec rhs = comp.P * f.B * f.mu;
    auto lu = IM.partialPivLu();
    Vec x = lu.solve(rhs);
    x += lu.solve(rhs - IM * x);

    r.points.reserve(static_cast<std::size_t>(n));
    r.s.reserve(static_cast<std::size_t>(n));
    double scale = 0;
    for (int i = 0; i < n; ++i) {
        r.points.push_back(x);
        r.s.push_back(x(0));
        scale = std::max(scale, x.norm());
        x = f.A(w[i]) * x + f.B * f.mu;
    }
    r.closure_residual = (x - r.points[0]).norm() / std::max(scale, 1e-300);

    r.admissible = true;
    for (int i = 0; i < n; ++i) {
        const double s = r.s[static_cast<std::size_t>(i)];
        if (std::fabs(s) < kAdmissibilityTol) r.boundary_indices.push_back(i);
        const bool ok = w[i] == Symbol::L ? s <= kAdmissibilityTol : s >= -kAdmissibilityTol;
        if (!ok) {
            r.admissible = false;
            r.violations.push_back(i);
        }
    }

    if (opt.check_formula) {
        const double num0 = (varrho(f) * f.B)(0) * f.mu;
        double smax = 0, worst = 0;
        for (double s : r.s) smax = std::max(smax, std::fabs(s));
        for (int i = 0; i < n; ++i) {
            const Composition ci = compose(f, shift(w, i));
            const double si = linalg::det(ci.P) * num0 / r.det_I_minus_M;
            worst = std::max(worst, std::fabs(si - r.s[static_cast<std::size_t>(i)]));
        }
        r.formula_discrepancy = smax > 0 ? worst / smax : worst;
    }

    if (opt.compute_multipliers) {
        r.multipliers = linalg::eigs(comp.M);
        for (const auto& z : r.multipliers) r.max_modulus = std::max(r.max_modulus, std::abs(z));
        if (r.max_modulus < 1 - kStabilityTol) r.stability = Stability::Stable;
        else if (r.max_modulus <= 1 + kStabilityTol) r.stability = Stability::Marginal;
        else r.stability = Stability::Unstable;
    }
    return r;
}

}  // namespace plmode
