#pragma once

// Shrinking points of rotational mode-locking regions and the local data
// used by the asymptotic theory: the S^{0-bar}-cycle y_i with switching
// values t_i, the determinants a, b, the adjugate scale c, the eigenvector
// pairs (u_j, v_j), the coordinate Jacobian J and the slow manifolds.

#include "plmode/cycles.hpp"
#include "plmode/maps.hpp"
#include "plmode/symbolic.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace plmode {

class ShrinkError : public std::runtime_error {
public:
    enum class Kind { NoConvergence, Degenerate, Inadmissible, Singular, Invalid };

    ShrinkError(Kind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

struct EigIndexPair {
    int j = 0;
    linalg::RowVec u;
    linalg::Vec v;
};

struct ShrinkPoint {
    std::string family;
    std::array<std::string, 2> slice;
    ParamPoint param;
    Eigen::Vector2d xi = Eigen::Vector2d::Zero();
    RotSpec spec;
    Word S;
    PwlMap map;

    std::vector<linalg::Vec> y;
    std::vector<double> t;
    double a = 0, b = 0;
    double c = 0, c_eigen = 0;
    double sigma = 0;
    std::array<EigIndexPair, 4> eig;  // j = 0, (l-1)d, ld, -d
    Eigen::Matrix2d J = Eigen::Matrix2d::Zero();
    double psi1_coeff = 0;  // Psi_1 boundary: eta = psi1_coeff * nu^2
    double psi2_coeff = 0;  // Psi_2 boundary: nu = psi2_coeff * eta^2
    int psi1_ell = 0;       // F[psi1_ell, m, n] is stable in Psi_1 (Table of stability cases)
    int psi2_ell = 0;
    int iterations = 0;
    double residual = 0;

    int n() const { return spec.n; }
    int idx(long long j) const { return static_cast<int>(mod(j, spec.n)); }
    long long ld() const { return static_cast<long long>(spec.ell) * spec.d; }
    double tt(long long j) const { return t[static_cast<std::size_t>(idx(j))]; }
    double t_d() const { return tt(spec.d); }
    double t_lm1d() const { return tt(ld() - spec.d); }
    double t_lp1d() const { return tt(ld() + spec.d); }
    double t_md() const { return tt(-spec.d); }

    /// Pair for j in {0, (l-1)d, ld, -d} (any representative mod n).
    const EigIndexPair& pair(long long j) const;

    bool asymptotics_valid() const { return sigma < 1.0; }
};

struct ShrinkOptions {
    int max_iterations = 50;
    double tol = 1e-12;
};

/// (eta, nu) = (s_0, s_{ld}) of the S^{0-bar}-cycle.
Eigen::Vector2d local_coords(const PwlMap& f, const RotSpec& spec);
Eigen::Vector2d local_coords(const Slice& slice, const RotSpec& spec, const Eigen::Vector2d& xi);

/// d(eta, nu)/d(xi1, xi2) by central differences with step 1e-6 (1 + |xi|).
Eigen::Matrix2d local_jacobian(const Slice& slice, const RotSpec& spec, const Eigen::Vector2d& xi);

ShrinkPoint solve_shrinking_point(const Slice& slice, const RotSpec& spec, const Eigen::Vector2d& guess,
                                  const ShrinkOptions& opt = {});

/// Parameter point whose local coordinates equal target; Newton from the
/// linearisation at sp.
Eigen::Vector2d invert_local_coords(const Slice& slice, const ShrinkPoint& sp, const Eigen::Vector2d& target);

struct IdentityCheck {
    std::string name;
    double residual = 0;
    bool pass = false;
};

struct IdentityReport {
    std::vector<IdentityCheck> checks;
    bool all_pass() const;
};

inline constexpr double kIdentityTol = 1e-8;

IdentityReport verify_identities(const ShrinkPoint& sp);

struct SlowManifold {
    int j = 0;
    linalg::Vec phi;
    double gamma = 0;
    double lambda = 0;
    linalg::Vec zeta;
    linalg::RowVec omega;
    // Differences to the closed forms through the S-cycle; empty when
    // I - M_S is singular.
    std::optional<double> phi_crosscheck;
    std::optional<double> gamma_crosscheck;
};

SlowManifold slow_manifold(const PwlMap& f, const ShrinkPoint& sp, long long j);

double kappa(const ShrinkPoint& sp, Side side, int chi);

/// Angle of the nearby structure, placed in its quadrant by sign(a) and side.
double theta(const ShrinkPoint& sp, Side side, int chi);

inline constexpr double kKappaDegenerate = 1e-10;

}  // namespace plmode
