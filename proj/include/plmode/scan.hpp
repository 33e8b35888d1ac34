#pragma once

// Parameter-plane work: grid scans for stable admissible rotational cycles,
// continuation of border-collision boundaries det(P) = 0, and Newton
// confirmation of the nearby G+-[k,chi]-shrinking points.

#include "plmode/predict.hpp"
#include "plmode/shrink.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace plmode {

struct Window {
    double x0 = 0, x1 = 0;  // first slice parameter
    double y0 = 0, y1 = 0;  // second slice parameter

    bool contains(const Eigen::Vector2d& p) const {
        return p(0) >= std::min(x0, x1) && p(0) <= std::max(x0, x1) && p(1) >= std::min(y0, y1) &&
               p(1) <= std::max(y0, y1);
    }
};

enum class TieBreak { HighestPeriod, LowestPeriod, LargestMargin };

TieBreak parse_tie_break(std::string_view s);
const char* tie_break_name(TieBreak t);

struct ScanCell {
    double x = 0, y = 0;
    std::optional<RotSpec> spec;
    double rotnum = 0;
    double margin = 0;  // 1 - largest multiplier modulus
};

struct ScanGrid {
    Window window;
    int nx = 0, ny = 0;
    int n_max = 0;
    std::vector<ScanCell> cells;  // row-major: cells[j * nx + i]
    long long words_tested = 0;
    long long solver_failures = 0;

    const ScanCell& at(int i, int j) const { return cells[static_cast<std::size_t>(j) * nx + i]; }
    /// Cell whose grid node is nearest to (x, y).
    const ScanCell& nearest(double x, double y) const;
};

struct ScanOptions {
    int n_max = 50;
    TieBreak tie_break = TieBreak::HighestPeriod;
    int threads = 0;  // 0: hardware concurrency
};

/// Grid nodes include the window corners; nx, ny >= 2.
ScanGrid grid_scan(const Slice& slice, const Window& window, int nx, int ny, const ScanOptions& opt = {});

/// Best stable admissible rotational cycle at one parameter point.
std::optional<ScanCell> best_cycle(const PwlMap& f, int n_max, TieBreak tie_break);

class TraceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct TracePoint {
    Eigen::Vector2d xi;
    double detP = 0;    // det(P_{w^(i)}) divided by the product of its column norms
    double detImM = 0;  // det(I - M_w)
    double nearest_minus1 = 0;  // real part of the multiplier nearest -1
};

enum class TraceEventKind { LeftWindow, ShrinkingPoint, PeriodDoubling, Closed, StepUnderflow, CorrectorFailure, MaxSteps, Stopped };

const char* trace_event_name(TraceEventKind k);

struct TraceEvent {
    TraceEventKind kind;
    int step = 0;
    Eigen::Vector2d xi;
};

struct BoundaryTrace {
    Word word;
    int index = 0;
    std::vector<TracePoint> points;
    std::vector<TraceEvent> events;
};

struct TraceOptions {
    std::optional<Window> window;
    double h0 = 1e-3;
    double h_min = 1e-6;
    double h_max = 1e-2;
    int max_steps = 5000;
    int direction = 1;  // +1 or -1 along the initial tangent
    bool detect_closure = false;
    /// Extra stopping rule; the trace ends once it returns true.
    std::function<bool(const Eigen::Vector2d&)> stop;
};

/// Pseudo-arclength continuation of det(P_{w^(i)}) = 0 from a point near the
/// curve.  Throws TraceError when the start point cannot be corrected.
BoundaryTrace trace_boundary(const Slice& slice, const Word& w, int i, const Eigen::Vector2d& start,
                             const TraceOptions& opt = {});

/// Newton projection of xi onto det(P_{w^(i)}) = 0.
Eigen::Vector2d correct_onto_boundary(const Slice& slice, const Word& w, int i, const Eigen::Vector2d& xi);

struct NearbyResult {
    NearbySpec nb;
    bool found = false;
    std::string reason;
    Eigen::Vector2d seed_eta_nu = Eigen::Vector2d::Zero();
    Eigen::Vector2d seed_xi = Eigen::Vector2d::Zero();
    std::optional<ShrinkPoint> point;
    Eigen::Vector2d eta_nu = Eigen::Vector2d::Zero();  // solution in the parent's local coordinates
    double seed_distance = 0;                           // |eta_nu - seed_eta_nu|
    bool sgn_a_match = false;
    double detJtilde = 0;
    double max_other_multiplier = 0;
};

NearbyResult find_nearby_shrink(const Slice& slice, const ShrinkPoint& sp, Side side, int chi, int k,
                                const ShrinkOptions& opt = {});

}  // namespace plmode
