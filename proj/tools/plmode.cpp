// plmode: mode-locking regions and shrinking points of piecewise-linear maps.

#include "CLI11.hpp"
#include "plmode/report.hpp"

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

using namespace plmode;

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

double number(const std::string& text) {
    std::optional<expr::Expr> e;
    try {
        e = expr::Expr::parse(text);
    } catch (const expr::ParseError& err) {
        throw UsageError("bad number '" + text + "': " + err.what());
    }
    try {
        return e->eval({{"pi", std::numbers::pi}});
    } catch (const expr::EvalError& err) {
        throw std::runtime_error("cannot evaluate '" + text + "': " + err.what());
    }
}

std::vector<double> numbers(const std::string& text, std::size_t count, const char* what) {
    std::vector<double> out;
    for (const auto& part : split(text, ',')) out.push_back(number(part));
    if (count && out.size() != count)
        throw UsageError(std::string(what) + " needs " + std::to_string(count) + " comma-separated values");
    return out;
}

std::vector<int> integers(const std::string& text, const char* what) {
    std::vector<int> out;
    for (const auto& part : split(text, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoi(part, &used));
            if (used != part.size()) throw std::invalid_argument(part);
        } catch (const std::exception&) {
            throw UsageError(std::string(what) + ": '" + part + "' is not an integer");
        }
    }
    return out;
}

struct Options {
    std::string config;
    std::string family = "bcnf3";
    std::string fixed;
    std::string slice;
    std::string spec;
    std::string guess;
    std::string csv;
    std::string format = "pretty";
    int threads = 0;
    unsigned long long seed = 1;
    bool verbose = false;

    // scan
    std::string window;
    std::string resolution = "128,32";
    int n_max = 50;
    std::string tie_break = "highest-period";

    // shrink, predict, nearby
    int chi_max = 2;
    std::string k_list = "5,10,20,40";
    std::string side = "+";
    std::string chi_list;

    // trace, verify cycle
    std::string word;
    int index = 0;
    std::string start;
    std::string at;
    int direction = 1;
    double h0 = 1e-3, h_min = 1e-6, h_max = 1e-2;
    int max_steps = 5000;
    bool closure = false;
};

// Fill options not given on the command line from a TOML file. Keys are option
// names, either at top level or under a table named after the subcommand.
void apply_config(CLI::App& sub, const std::string& path) {
    std::vector<CLI::ConfigItem> items;
    try {
        items = CLI::ConfigTOML().from_file(path);
    } catch (const CLI::Error& e) {
        throw UsageError("config file '" + path + "': " + e.what());
    }
    for (const auto& item : items) {
        if (item.name == "++" || item.name == "--") continue;  // section markers
        if (!item.parents.empty() && item.parents != std::vector<std::string>{sub.get_name()}) continue;
        CLI::Option* opt = nullptr;
        try {
            opt = sub.get_option("--" + item.name);
        } catch (const CLI::OptionNotFound&) {
            throw UsageError("config file '" + path + "': unknown option '" + item.fullname() + "'");
        }
        if (opt->count() > 0 || item.name == "config") continue;
        try {
            opt->add_result(item.inputs);
            opt->run_callback();
        } catch (const CLI::Error& e) {
            throw UsageError("config file '" + path + "': " + item.name + ": " + e.what());
        }
    }
}

struct Context {
    MapFamily family;
    ParamPoint base;
    std::array<std::string, 2> names;
    std::vector<std::string> config;  // echoed into CSV headers

    Slice slice() const { return Slice(family, base, names); }
};

RotSpec default_spec(const std::string& family) {
    if (family == "bcnf3") return RotSpec::make(2, 2, 5);
    if (family == "ns2") return RotSpec::make(2, 1, 4);
    if (family == "gs2") return RotSpec::make(8, 2, 13);
    throw UsageError("--spec is required for family '" + family + "'");
}

Context make_context(const Options& o, const CLI::App& app) {
    Context c{load_family(o.family), {}, {}, {}};
    ParamValues fixed;
    if (!o.fixed.empty())
        for (const auto& item : split(o.fixed, ',')) {
            const auto eq = item.find('=');
            if (eq == std::string::npos) throw UsageError("--fixed expects name=value pairs, got '" + item + "'");
            fixed[item.substr(0, eq)] = number(item.substr(eq + 1));
        }
    c.base = c.family.point(fixed);
    c.names = c.family.slice;
    if (!o.slice.empty()) {
        const auto s = split(o.slice, ',');
        if (s.size() != 2) throw UsageError("--slice needs two parameter names");
        c.names = {s[0], s[1]};
    }
    std::istringstream cfg(app.config_to_str(true, false));
    for (std::string line; std::getline(cfg, line);)
        if (!line.empty()) c.config.push_back(line);
    return c;
}

// Output sink: the --csv path or standard output.
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw std::runtime_error("cannot write '" + path + "'");
        }
    }
    std::ostream& get() { return file_ ? *file_ : std::cout; }
    bool to_file() const { return file_ != nullptr; }

private:
    std::unique_ptr<std::ofstream> file_;
};

bool want_csv(const Options& o) { return !o.csv.empty() || o.format == "csv"; }

ShrinkPoint solve_point(const Options& o, const Context& c) {
    const RotSpec spec = o.spec.empty() ? default_spec(c.family.name) : RotSpec::parse(o.spec);
    const Slice sl = c.slice();
    Eigen::Vector2d guess = sl.coords(c.base);
    if (!o.guess.empty()) {
        const auto g = numbers(o.guess, 2, "--guess");
        guess = {g[0], g[1]};
    }
    return solve_shrinking_point(sl, spec, guess);
}

int run_scan(const Options& o, const Context& c) {
    Window w;
    if (o.window.empty()) {
        if (c.family.name != "bcnf3") throw UsageError("--window is required for family '" + c.family.name + "'");
        w = {-3, -1, 0, 0.4};
    } else {
        const auto v = numbers(o.window, 4, "--window");
        w = {v[0], v[1], v[2], v[3]};
    }
    const auto res = integers(o.resolution, "--resolution");
    if (res.size() != 2 || res[0] < 2 || res[1] < 2) throw UsageError("--resolution needs nx,ny with both >= 2");
    if (o.n_max < 1 || o.n_max > 200) throw UsageError("--n-max must be in 1..200");
    ScanOptions so;
    so.n_max = o.n_max;
    so.tie_break = parse_tie_break(o.tie_break);
    so.threads = o.threads;
    const ScanGrid g = grid_scan(c.slice(), w, res[0], res[1], so);
    Sink sink(o.csv);
    if (want_csv(o)) write_scan_csv(sink.get(), g, c.config);
    if (!want_csv(o) || sink.to_file()) {
        std::map<int, int> periods;
        int empty = 0;
        for (const auto& cell : g.cells)
            if (cell.spec) ++periods[cell.spec->n];
            else ++empty;
        std::cout << "cells " << g.cells.size() << ", empty " << empty << ", words tested " << g.words_tested
                  << ", solver failures " << g.solver_failures << "\nperiod  cells\n";
        for (auto [n, count] : periods) std::cout << std::setw(6) << n << "  " << count << '\n';
    }
    return 0;
}

int run_shrink(const Options& o, const Context& c) {
    const ShrinkPoint sp = solve_point(o, c);
    Sink sink(o.csv);
    if (want_csv(o)) write_shrink_csv(sink.get(), sp, c.config);
    if (!want_csv(o) || sink.to_file()) {
        if (o.verbose) print_matrices(std::cout, sp.map);
        print_shrink_point(std::cout, sp);
        std::cout << "\nkappa table\n";
        print_kappa_table(std::cout, sp, o.chi_max);
        std::cout << "\nidentities\n";
        const IdentityReport rep = verify_identities(sp);
        print_identity_report(std::cout, rep);
        if (!sp.asymptotics_valid()) std::cout << "note: sigma >= 1, asymptotic predictions are disabled\n";
        if (!rep.all_pass()) return 1;
    }
    return 0;
}

std::vector<int> chi_range(const Options& o, Side side) {
    if (!o.chi_list.empty()) return integers(o.chi_list, "--chi");
    std::vector<int> out;
    const int lo = side == Side::Plus ? -o.chi_max : -o.chi_max + 1;
    const int hi = side == Side::Plus ? o.chi_max - 1 : o.chi_max;
    for (int chi = lo; chi <= hi; ++chi) out.push_back(chi);
    return out;
}

std::vector<Side> sides(const Options& o) {
    if (o.side == "+") return {Side::Plus};
    if (o.side == "-") return {Side::Minus};
    if (o.side == "both") return {Side::Plus, Side::Minus};
    throw UsageError("--side must be +, - or both");
}

int run_predict(const Options& o, const Context& c) {
    const ShrinkPoint sp = solve_point(o, c);
    if (!sp.asymptotics_valid()) throw ShrinkError(ShrinkError::Kind::Invalid, "sigma >= 1: no asymptotic predictions");
    const auto ks = integers(o.k_list, "--k");
    std::vector<PredictionRecord> recs;
    for (Side side : {Side::Plus, Side::Minus})
        for (int chi : chi_range(o, side)) recs.push_back(predicted_points(sp, side, chi, ks));
    Sink sink(o.csv);
    if (want_csv(o)) write_predict_csv(sink.get(), recs, c.config);
    if (!want_csv(o) || sink.to_file()) {
        for (const auto& r : recs) {
            std::cout << side_char(r.side) << " chi " << std::setw(3) << r.chi << "  kappa " << std::setw(24)
                      << num(r.kappa) << "  " << prediction_kind_name(r.kind);
            if (r.theta) std::cout << "  theta " << num(*r.theta);
            std::cout << '\n';
            for (const auto& p : r.points)
                std::cout << "    k " << std::setw(4) << p.k << "  (eta, nu) = (" << num(p.eta_nu(0)) << ", "
                          << num(p.eta_nu(1)) << ")  xi = (" << num(p.xi(0)) << ", " << num(p.xi(1)) << ")\n";
        }
    }
    return 0;
}

int run_nearby(const Options& o, const Context& c) {
    const ShrinkPoint sp = solve_point(o, c);
    const auto ks = integers(o.k_list, "--k");
    std::vector<NearbyResult> rows;
    std::vector<NeighbourKappaCheck> checks;
    for (Side side : sides(o))
        for (int chi : chi_range(o, side)) {
            const NearbyResult* at_largest = nullptr;
            const std::size_t first = rows.size();
            for (int k : ks) {
                if (std::abs(chi) >= k) continue;
                rows.push_back(find_nearby_shrink(c.slice(), sp, side, chi, k));
            }
            for (std::size_t i = first; i < rows.size(); ++i)
                if (!at_largest || rows[i].nb.k > at_largest->nb.k) at_largest = &rows[i];
            if (at_largest) {
                NeighbourKappaCheck chk = neighbour_kappa_check(sp, side, chi, at_largest->found);
                if (chk.applicable) {
                    chk.message = std::string(1, side_char(side)) + " chi " + std::to_string(chi) + " k " +
                                  std::to_string(at_largest->nb.k) + ": " + chk.message;
                    checks.push_back(chk);
                }
            }
        }
    Sink sink(o.csv);
    if (want_csv(o)) write_nearby_csv(sink.get(), rows, c.config);
    if (!want_csv(o) || sink.to_file()) {
        for (const auto& r : rows) {
            std::cout << side_char(r.nb.side) << " chi " << std::setw(3) << r.nb.chi << " k " << std::setw(4) << r.nb.k
                      << "  ";
            if (r.found)
                std::cout << "found xi = (" << num(r.point->xi(0)) << ", " << num(r.point->xi(1))
                          << "), seed distance " << num(r.seed_distance) << ", sgn(a~) " << (r.sgn_a_match ? "=" : "!=")
                          << " sgn(a), det(J~) " << num(r.detJtilde) << ", max other multiplier "
                          << num(r.max_other_multiplier) << '\n';
            else std::cout << "not found: " << r.reason << '\n';
        }
        for (const auto& chk : checks) std::cout << "neighbour kappa check " << chk.message << '\n';
    }
    for (const auto& chk : checks)
        if (!chk.pass) {
            std::cerr << "theory check failed: " << chk.message << '\n';
            return 1;
        }
    return 0;
}

Word word_option(const Options& o) {
    if (!o.word.empty()) return Word::parse(o.word);
    if (!o.spec.empty()) return build_rotational(RotSpec::parse(o.spec));
    throw UsageError("give the word with --word or --spec");
}

int run_trace(const Options& o, const Context& c) {
    const Word w = word_option(o);
    if (o.start.empty()) throw UsageError("--start is required");
    const auto s = numbers(o.start, 2, "--start");
    TraceOptions to;
    if (!o.window.empty()) {
        const auto v = numbers(o.window, 4, "--window");
        to.window = Window{v[0], v[1], v[2], v[3]};
    }
    to.h0 = o.h0;
    to.h_min = o.h_min;
    to.h_max = o.h_max;
    to.max_steps = o.max_steps;
    to.direction = o.direction;
    to.detect_closure = o.closure;
    const BoundaryTrace tr = trace_boundary(c.slice(), w, o.index, {s[0], s[1]}, to);
    Sink sink(o.csv);
    if (want_csv(o)) write_trace_csv(sink.get(), tr, c.config);
    if (!want_csv(o) || sink.to_file()) {
        std::cout << "word " << w.str() << " shift " << tr.index << ": " << tr.points.size() << " points\n";
        for (const auto& e : tr.events)
            std::cout << "  " << trace_event_name(e.kind) << " at step " << e.step << ", (" << num(e.xi(0)) << ", "
                      << num(e.xi(1)) << ")\n";
    }
    return 0;
}

int run_verify(const Options&) {
    const VerifySummary s = run_verify_suite(std::cout);
    std::cout << "passed " << s.passed << ", failed " << s.failed << '\n';
    return s.failed == 0 ? 0 : 1;
}

int run_verify_cycle(const Options& o, const Context& c) {
    const Word w = word_option(o);
    Eigen::Vector2d xi = c.slice().coords(c.base);
    if (!o.at.empty()) {
        const auto v = numbers(o.at, 2, "--at");
        xi = {v[0], v[1]};
    }
    const PwlMap f = c.slice().at(xi);
    const CycleResult r = solve_cycle(f, w);
    Sink sink(o.csv);
    if (want_csv(o)) write_cycle_csv(sink.get(), r, c.config);
    if (!want_csv(o) || sink.to_file()) {
        if (o.verbose) print_matrices(std::cout, f);
        print_cycle(std::cout, r);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mode-locking regions and shrinking points of piecewise-linear continuous maps.\n"
                 "Expressions in values follow the usual precedence; unary minus binds looser than '^' (-2^2 = -4)."};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* s) {
        s->add_option("--config", o.config, "TOML file of option values; command-line flags take precedence");
        s->add_option("--family", o.family, "bcnf3, ns2, gs2 or file:PATH")->capture_default_str();
        s->add_option("--fixed", o.fixed, "Parameter bindings name=value,... (mu=... sets mu)");
        s->add_option("--slice", o.slice, "Two slice parameters name1,name2");
        s->add_option("--csv", o.csv, "Write CSV to this path");
        s->add_option("--format", o.format, "Standard output format")
            ->check(CLI::IsMember({"csv", "pretty"}))
            ->capture_default_str();
        s->add_option("--threads", o.threads, "Worker threads for scans (0: all cores)");
        s->add_option("--seed", o.seed, "Random seed")->capture_default_str();
        s->add_flag("--verbose", o.verbose, "Echo matrices");
    };
    auto shrink_opts = [&](CLI::App* s) {
        s->add_option("--spec", o.spec, "Rotational word l,m,n");
        s->add_option("--guess", o.guess, "Newton start v1,v2 in the slice");
        s->add_option("--chi-max", o.chi_max, "Range of chi")->capture_default_str();
    };

    auto* scan = app.add_subcommand("scan", "Grid scan for stable admissible rotational cycles");
    common(scan);
    scan->add_option("--window", o.window, "x0,x1,y0,y1");
    scan->add_option("--resolution", o.resolution, "nx,ny")->capture_default_str();
    scan->add_option("--n-max", o.n_max, "Largest period")->capture_default_str();
    scan->add_option("--tie-break", o.tie_break, "highest-period, lowest-period or largest-margin")
        ->check(CLI::IsMember({"highest-period", "lowest-period", "largest-margin"}))
        ->capture_default_str();

    auto* shrink = app.add_subcommand("shrink", "Solve for a shrinking point and report its local data");
    common(shrink);
    shrink_opts(shrink);

    auto* predict = app.add_subcommand("predict", "Leading-order predictions near a shrinking point");
    common(predict);
    shrink_opts(predict);
    predict->add_option("--k", o.k_list, "Comma-separated k values")->capture_default_str();
    predict->add_option("--chi", o.chi_list, "Comma-separated chi values (default: from --chi-max)");

    auto* nearby = app.add_subcommand("nearby", "Newton confirmation of nearby shrinking points");
    common(nearby);
    shrink_opts(nearby);
    nearby->add_option("--k", o.k_list, "Comma-separated k values")->capture_default_str();
    nearby->add_option("--side", o.side, "+, - or both")->capture_default_str();
    nearby->add_option("--chi", o.chi_list, "Comma-separated chi values (default: from --chi-max)");

    auto* trace = app.add_subcommand("trace", "Continue a border-collision boundary det(P) = 0");
    common(trace);
    trace->add_option("--word", o.word, "Word such as LRRLR");
    trace->add_option("--spec", o.spec, "Rotational word l,m,n (when --word is absent)");
    trace->add_option("--index", o.index, "Shift index i of det(P_{w^(i)})")->capture_default_str();
    trace->add_option("--start", o.start, "Start point v1,v2 near the boundary");
    trace->add_option("--window", o.window, "Stop on leaving x0,x1,y0,y1");
    trace->add_option("--direction", o.direction, "+1 or -1")->check(CLI::IsMember({-1, 1}))->capture_default_str();
    trace->add_option("--h0", o.h0, "Initial step")->capture_default_str();
    trace->add_option("--h-min", o.h_min, "Smallest step")->capture_default_str();
    trace->add_option("--h-max", o.h_max, "Largest step")->capture_default_str();
    trace->add_option("--max-steps", o.max_steps, "Step limit")->capture_default_str();
    trace->add_flag("--closure", o.closure, "Stop when the curve returns to its start");

    auto* verify = app.add_subcommand("verify", "Run the identity suite");
    verify->require_subcommand(0, 1);
    auto* vcycle = verify->add_subcommand("cycle", "Solve one S-cycle and print it");
    common(vcycle);
    vcycle->add_option("--word", o.word, "Word such as LRRLR");
    vcycle->add_option("--spec", o.spec, "Rotational word l,m,n (when --word is absent)");
    vcycle->add_option("--at", o.at, "Slice point v1,v2 (default: family defaults)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::Error& e) {
        app.exit(e);
        std::cerr << app.help();
        return 2;
    }

    try {
        if (*verify && !*vcycle) return run_verify(o);
        CLI::App* sub = *vcycle ? vcycle : app.get_subcommands().front();
        if (!o.config.empty()) apply_config(*sub, o.config);
        const Context c = make_context(o, *sub);
        if (sub == scan) return run_scan(o, c);
        if (sub == shrink) return run_shrink(o, c);
        if (sub == predict) return run_predict(o, c);
        if (sub == nearby) return run_nearby(o, c);
        if (sub == trace) return run_trace(o, c);
        return run_verify_cycle(o, c);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n' << app.help();
        return 2;
    } catch (const std::invalid_argument& e) {
        // malformed words and specs
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
