#pragma once

// S-cycles: periodic orbits obtained by applying the half-maps in the order
// of a word S, their switching values s_i = e1^T x_i, admissibility and
// stability.

#include "plmode/linalg.hpp"
#include "plmode/maps.hpp"
#include "plmode/symbolic.hpp"

#include <vector>

namespace plmode {

class SingularCycleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr double kAdmissibilityTol = 1e-9;
inline constexpr double kStabilityTol = 1e-9;

/// M_S = A_{S_{n-1}} ... A_{S_0},  P_S = I + A_{S_{n-1}} + ... + A_{S_{n-1}} ... A_{S_1}.
struct Composition {
    linalg::Mat M;
    linalg::Mat P;
};

Composition compose(const PwlMap& f, const Word& w);

enum class Stability { Stable, Marginal, Unstable };

const char* stability_name(Stability s);

struct CycleResult {
    Word word;
    std::vector<linalg::Vec> points;
    std::vector<double> s;
    bool admissible = false;
    std::vector<int> boundary_indices;  // |s_i| < tol
    std::vector<int> violations;        // wrong side by more than tol
    std::vector<linalg::Complex> multipliers;
    double max_modulus = 0;
    Stability stability = Stability::Unstable;
    double det_I_minus_M = 0;
    double closure_residual = 0;
    // Largest |s_i - det(P_{S^(i)}) varrho^T B mu / det(I - M_S)| relative to max|s_j|;
    // negative when the check was skipped.
    double formula_discrepancy = -1;
};

struct CycleOptions {
    bool check_formula = true;
    bool compute_multipliers = true;
};

/// Requires det(I - M_S) bounded away from 0 (relative 1e-10).
CycleResult solve_cycle(const PwlMap& f, const Word& w, const CycleOptions& opt = {});

/// varrho^T = e1^T adj(I - A_L).
linalg::RowVec varrho(const PwlMap& f);

}  // namespace plmode
