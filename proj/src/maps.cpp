#include "plmode/maps.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace plmode {

namespace {

constexpr std::string_view kBcnf3 = R"(# three-dimensional border-collision normal form
[family]
name = bcnf3
dimension = 3
params = tauL, sigmaL, deltaL, tauR, sigmaR, deltaR
slice = tauR, deltaL
mu = 1

[matrices]
AL = tauL, 1, 0, -sigmaL, 0, 1, deltaL, 0, 0
AR = tauR, 1, 0, -sigmaR, 0, 1, deltaR, 0, 0
B = 1, 0, 0

[defaults]
tauL = 0
sigmaL = -1
sigmaR = 0
deltaR = 2
tauR = -2
deltaL = 0.2
)";

constexpr std::string_view kNs2 = R"(# nonsmooth Neimark-Sacker-like family
[family]
name = ns2
dimension = 2
params = rL, omegaL, omegaR, sR
slice = omegaR, sR
mu = 1

[matrices]
AL = 2*rL*cos(2*pi*omegaL), 1, -rL^2, 0
AR = (2/sR)*cos(2*pi*omegaR), 1, -1/sR^2, 0
B = 1, 0

[defaults]
rL = 0.3
omegaL = 0.09
omegaR = 0.29304484781765799
sR = 0.62927710288963579
)";

constexpr std::string_view kGs2 = R"(# grazing-sliding return map
[family]
name = gs2
dimension = 2
params = xi1, xi2
slice = xi1, xi2
mu = -1

[matrices]
AL = 2*exp(xi2)*cos(xi1), 1, -exp(2*xi2), 0
AR = exp(xi2)*cos(xi1), 1, 0, 0
B = 1, 0

[defaults]
xi1 = 1.0585724737881539
xi2 = 0.2569817196380581
)";

std::string trim(std::string_view s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_top_level(std::string_view s) {
    std::vector<std::string> out;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '(') ++depth;
        else if (s[i] == ')') --depth;
        else if (s[i] == ',' && depth == 0) {
            out.push_back(trim(s.substr(start, i - start)));
            start = i + 1;
        }
    }
    out.push_back(trim(s.substr(start)));
    return out;
}

expr::Env make_env(const ParamValues& xi) {
    expr::Env env(xi.begin(), xi.end());
    env["pi"] = std::numbers::pi;
    return env;
}

}  // namespace

MapFamily MapFamily::from_config(std::string_view text) {
    MapFamily f;
    std::string section;
    std::istringstream in{std::string(text)};
    std::string raw;
    int lineno = 0;
    bool have_slice = false;
    std::vector<std::pair<std::string, std::string>> default_lines;
    std::string al, ar, b;
    auto fail = [&](const std::string& msg) {
        throw MapError("config line " + std::to_string(lineno) + ": " + msg);
    };
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = trim(raw.substr(0, raw.find('#')));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail("unterminated section header");
            section = trim(std::string_view(line).substr(1, line.size() - 2));
            if (section != "family" && section != "matrices" && section != "defaults")
                fail("unknown section [" + section + "]");
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) fail("expected key = value");
        std::string key = trim(std::string_view(line).substr(0, eq));
        std::string value = trim(std::string_view(line).substr(eq + 1));
        if (section == "family") {
            if (key == "name") f.name = value;
            else if (key == "dimension") {
                try {
                    f.dim = std::stoi(value);
                } catch (const std::exception&) {
                    fail("dimension must be an integer");
                }
            } else if (key == "params") f.params = split_top_level(value);
            else if (key == "slice") {
                auto s = split_top_level(value);
                if (s.size() != 2) fail("slice needs exactly two parameter names");
                f.slice = {s[0], s[1]};
                have_slice = true;
            } else if (key == "mu") {
                try {
                    f.mu = expr::Expr::parse(value).eval(make_env({}));
                } catch (const std::exception& e) {
                    fail(std::string("mu: ") + e.what());
                }
            } else fail("unknown key '" + key + "' in [family]");
        } else if (section == "matrices") {
            if (key == "AL") al = value;
            else if (key == "AR") ar = value;
            else if (key == "B") b = value;
            else fail("unknown key '" + key + "' in [matrices]");
        } else if (section == "defaults") {
            default_lines.emplace_back(key, value);
        } else {
            fail("key outside of any section");
        }
    }
    if (f.name.empty()) throw MapError("config: missing family name");
    if (f.dim < 1 || f.dim > 8) throw MapError("config: dimension must be in 1..8");
    if (f.params.empty()) throw MapError("config: missing params");
    if (!have_slice) throw MapError("config: missing slice");
    if (f.mu == 0) throw MapError("config: mu must be nonzero");
    for (const auto& s : f.slice)
        if (std::find(f.params.begin(), f.params.end(), s) == f.params.end())
            throw MapError("config: slice parameter '" + s + "' is not declared");

    auto parse_list = [&](const std::string& src, std::size_t count, const char* what) {
        if (src.empty()) throw MapError(std::string("config: missing ") + what);
        auto items = split_top_level(src);
        if (items.size() != count)
            throw MapError(std::string("config: ") + what + " needs " + std::to_string(count) +
                           " entries, got " + std::to_string(items.size()));
        std::vector<expr::Expr> out;
        for (const auto& it : items) {
            expr::Expr e = expr::Expr::parse(it);
            for (const auto& id : e.identifiers())
                if (id != "pi" && std::find(f.params.begin(), f.params.end(), id) == f.params.end())
                    throw MapError(std::string("config: ") + what + " uses undeclared parameter '" + id + "'");
            out.push_back(std::move(e));
        }
        return out;
    };
    const auto n = static_cast<std::size_t>(f.dim);
    f.AL = parse_list(al, n * n, "AL");
    f.AR = parse_list(ar, n * n, "AR");
    f.B = parse_list(b, n, "B");
    for (const auto& [key, value] : default_lines) {
        if (std::find(f.params.begin(), f.params.end(), key) == f.params.end())
            throw MapError("config: default for undeclared parameter '" + key + "'");
        f.defaults[key] = expr::Expr::parse(value).eval(make_env({}));
    }
    return f;
}

ParamPoint MapFamily::point(const ParamValues& overrides) const {
    ParamPoint p;
    p.xi = defaults;
    p.mu = mu;
    for (const auto& [k, v] : overrides) {
        if (k == "mu") {
            p.mu = v;
            continue;
        }
        if (std::find(params.begin(), params.end(), k) == params.end())
            throw MapError("family " + name + " has no parameter '" + k + "'");
        p.xi[k] = v;
    }
    return p;
}

PwlMap MapFamily::evaluate(const ParamPoint& p) const {
    for (const auto& name_ : params)
        if (!p.xi.count(name_)) throw MapError("parameter '" + name_ + "' is unbound");
    const expr::Env env = make_env(p.xi);
    const int n = dim;
    PwlMap m;
    m.AL.resize(n, n);
    m.AR.resize(n, n);
    m.B.resize(n);
    m.mu = p.mu;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            m.AL(i, j) = AL[static_cast<std::size_t>(i * n + j)].eval(env);
            m.AR(i, j) = AR[static_cast<std::size_t>(i * n + j)].eval(env);
            if (j > 0) {
                const double scale = 1.0 + std::max(std::fabs(m.AL(i, j)), std::fabs(m.AR(i, j)));
                if (std::fabs(m.AR(i, j) - m.AL(i, j)) > 1e-12 * scale)
                    throw MapError("continuity violated: A_L and A_R differ in cell (" +
                                   std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
            }
        }
        m.B(i) = B[static_cast<std::size_t>(i)].eval(env);
    }
    return m;
}

std::vector<std::string> builtin_family_names() { return {"bcnf3", "ns2", "gs2"}; }

std::string_view builtin_family_config(std::string_view name) {
    if (name == "bcnf3") return kBcnf3;
    if (name == "ns2") return kNs2;
    if (name == "gs2") return kGs2;
    throw MapError("unknown built-in family '" + std::string(name) + "'");
}

MapFamily builtin_family(std::string_view name) {
    return MapFamily::from_config(builtin_family_config(name));
}

MapFamily load_family(std::string_view selector) {
    if (selector.substr(0, 5) == "file:") {
        std::string path(selector.substr(5));
        std::ifstream in(path);
        if (!in) throw MapError("cannot open family config '" + path + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        return MapFamily::from_config(ss.str());
    }
    return builtin_family(selector);
}

linalg::Vec step(const PwlMap& f, const linalg::Vec& x) {
    return (x(0) < 0 ? f.AL : f.AR) * x + f.B * f.mu;
}

linalg::Vec iterate_word(const PwlMap& f, linalg::Vec x, const Word& w) {
    for (Symbol s : w.symbols()) x = f.A(s) * x + f.B * f.mu;
    return x;
}

Slice::Slice(MapFamily family, ParamPoint base, std::array<std::string, 2> names)
    : family_(std::move(family)), base_(std::move(base)), names_(std::move(names)) {
    for (const auto& n : names_)
        if (std::find(family_.params.begin(), family_.params.end(), n) == family_.params.end())
            throw MapError("family " + family_.name + " has no parameter '" + n + "'");
}

Slice::Slice(MapFamily family, ParamPoint base)
    : Slice(family, std::move(base), family.slice) {}

ParamPoint Slice::point(const Eigen::Vector2d& xi) const {
    ParamPoint p = base_;
    p.xi[names_[0]] = xi(0);
    p.xi[names_[1]] = xi(1);
    return p;
}

PwlMap Slice::at(const Eigen::Vector2d& xi) const { return family_.evaluate(point(xi)); }

Eigen::Vector2d Slice::coords(const ParamPoint& p) const {
    auto get = [&](const std::string& n) {
        auto it = p.xi.find(n);
        if (it == p.xi.end()) throw MapError("parameter '" + n + "' is unbound");
        return it->second;
    };
    return {get(names_[0]), get(names_[1])};
}

}  // namespace plmode
