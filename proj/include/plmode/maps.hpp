#pragma once

// Piecewise-linear continuous maps
//   f(x) = A_L x + B mu  if e1^T x <= 0,
//          A_R x + B mu  if e1^T x >= 0,
// whose matrix entries are expressions in named parameters.

#include "plmode/expr.hpp"
#include "plmode/linalg.hpp"
#include "plmode/symbolic.hpp"

#include <array>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace plmode {

class MapError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using ParamValues = std::map<std::string, double, std::less<>>;

struct ParamPoint {
    ParamValues xi;
    double mu = 1.0;
};

/// Numeric half-maps at one parameter point.
struct PwlMap {
    linalg::Mat AL;
    linalg::Mat AR;
    linalg::Vec B;
    double mu = 1.0;

    int dim() const { return static_cast<int>(AL.rows()); }
    const linalg::Mat& A(Symbol s) const { return s == Symbol::L ? AL : AR; }
};

class MapFamily {
public:
    std::string name;
    int dim = 0;
    std::vector<std::string> params;
    std::array<std::string, 2> slice;
    double mu = 1.0;
    ParamValues defaults;
    std::vector<expr::Expr> AL, AR, B;  // row-major, N*N, N*N, N entries

    /// Parse the sectioned key = value config format (see README).
    static MapFamily from_config(std::string_view text);

    /// Defaults overlaid with the given bindings; mu from bindings["mu"] if present.
    ParamPoint point(const ParamValues& overrides = {}) const;

    /// Numeric matrices; checks that A_R - A_L vanishes outside column 1.
    PwlMap evaluate(const ParamPoint& p) const;
};

/// "bcnf3", "ns2", "gs2", or "file:PATH".
MapFamily load_family(std::string_view selector);

MapFamily builtin_family(std::string_view name);

std::vector<std::string> builtin_family_names();

/// Config text of a built-in family, as accepted by MapFamily::from_config.
std::string_view builtin_family_config(std::string_view name);

linalg::Vec step(const PwlMap& f, const linalg::Vec& x);

/// Apply the half-maps in the order of w, regardless of the sign of e1^T x.
linalg::Vec iterate_word(const PwlMap& f, linalg::Vec x, const Word& w);

/// Map from a 2D parameter slice to numeric half-maps.
class Slice {
public:
    Slice(MapFamily family, ParamPoint base, std::array<std::string, 2> names);
    Slice(MapFamily family, ParamPoint base);

    PwlMap at(const Eigen::Vector2d& xi) const;
    ParamPoint point(const Eigen::Vector2d& xi) const;
    Eigen::Vector2d coords(const ParamPoint& p) const;

    const MapFamily& family() const { return family_; }
    const ParamPoint& base() const { return base_; }
    const std::array<std::string, 2>& names() const { return names_; }

private:
    MapFamily family_;
    ParamPoint base_;
    std::array<std::string, 2> names_;
};

}  // namespace plmode
