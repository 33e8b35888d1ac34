#include "plmode/report.hpp"

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <numeric>
#include <ostream>

namespace plmode {

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_csv_header(std::ostream& os, const std::string& schema, const std::vector<std::string>& config,
                      const std::vector<std::string>& columns) {
    os << "# schema: " << schema << '\n';
    for (const auto& line : config) os << "# " << line << '\n';
    for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
    os << '\n';
}

void write_scan_csv(std::ostream& os, const ScanGrid& g, const std::vector<std::string>& config) {
    write_csv_header(os, kSchemaScan, config, {"x", "y", "ell", "m", "n", "period", "rotnum", "margin"});
    for (const auto& c : g.cells) {
        os << num(c.x) << ',' << num(c.y);
        if (c.spec)
            os << ',' << c.spec->ell << ',' << c.spec->m << ',' << c.spec->n << ',' << c.spec->n << ','
               << num(c.rotnum) << ',' << num(c.margin);
        else
            os << ",,,,,,";
        os << '\n';
    }
}

void write_trace_csv(std::ostream& os, const BoundaryTrace& tr, const std::vector<std::string>& config) {
    std::vector<std::string> cfg = config;
    cfg.push_back("word: " + tr.word.str() + " shift " + std::to_string(tr.index));
    for (const auto& e : tr.events)
        cfg.push_back(std::string("event: ") + trace_event_name(e.kind) + " step " + std::to_string(e.step) +
                      " at " + num(e.xi(0)) + "," + num(e.xi(1)));
    write_csv_header(os, kSchemaTrace, cfg, {"step", "x", "y", "detP", "detImM", "nearest_multiplier_to_minus1"});
    for (std::size_t i = 0; i < tr.points.size(); ++i) {
        const auto& p = tr.points[i];
        os << i << ',' << num(p.xi(0)) << ',' << num(p.xi(1)) << ',' << num(p.detP) << ',' << num(p.detImM) << ','
           << num(p.nearest_minus1) << '\n';
    }
}

void write_predict_csv(std::ostream& os, const std::vector<PredictionRecord>& recs,
                       const std::vector<std::string>& config) {
    write_csv_header(os, kSchemaPredict, config,
                     {"side", "chi", "kappa", "kind", "theta", "k", "eta", "nu", "xi1", "xi2"});
    for (const auto& r : recs) {
        const std::string head = std::string(1, side_char(r.side)) + "," + std::to_string(r.chi) + "," +
                                 num(r.kappa) + "," + prediction_kind_name(r.kind) + "," +
                                 (r.theta ? num(*r.theta) : std::string());
        if (r.points.empty()) {
            os << head << ",,,,,\n";
            continue;
        }
        for (const auto& p : r.points)
            os << head << ',' << p.k << ',' << num(p.eta_nu(0)) << ',' << num(p.eta_nu(1)) << ',' << num(p.xi(0))
               << ',' << num(p.xi(1)) << '\n';
    }
}

void write_nearby_csv(std::ostream& os, const std::vector<NearbyResult>& rows, const std::vector<std::string>& config) {
    write_csv_header(os, kSchemaNearby, config,
                     {"side", "chi", "k", "found", "xi1", "xi2", "eta", "nu", "sgn_a_match", "detJtilde",
                      "max_other_multiplier"});
    for (const auto& r : rows) {
        os << side_char(r.nb.side) << ',' << r.nb.chi << ',' << r.nb.k << ',' << (r.found ? 1 : 0);
        if (r.found)
            os << ',' << num(r.point->xi(0)) << ',' << num(r.point->xi(1)) << ',' << num(r.eta_nu(0)) << ','
               << num(r.eta_nu(1)) << ',' << (r.sgn_a_match ? 1 : 0) << ',' << num(r.detJtilde) << ','
               << num(r.max_other_multiplier);
        else
            os << ",,,,,,,";
        os << '\n';
    }
}

void write_shrink_csv(std::ostream& os, const ShrinkPoint& sp, const std::vector<std::string>& config) {
    write_csv_header(os, kSchemaShrink, config, {"quantity", "value"});
    auto row = [&](const std::string& k, double v) { os << k << ',' << num(v) << '\n'; };
    row(sp.slice[0], sp.xi(0));
    row(sp.slice[1], sp.xi(1));
    row("a", sp.a);
    row("b", sp.b);
    row("c", sp.c);
    row("sigma", sp.sigma);
    row("J11", sp.J(0, 0));
    row("J12", sp.J(0, 1));
    row("J21", sp.J(1, 0));
    row("J22", sp.J(1, 1));
    row("psi1_coeff", sp.psi1_coeff);
    row("psi2_coeff", sp.psi2_coeff);
    for (int i = 0; i < sp.n(); ++i) row("t" + std::to_string(i), sp.t[static_cast<std::size_t>(i)]);
}

void write_cycle_csv(std::ostream& os, const CycleResult& c, const std::vector<std::string>& config) {
    std::vector<std::string> cols{"i", "symbol", "s"};
    const auto N = c.points.empty() ? 0 : c.points.front().size();
    for (Eigen::Index k = 0; k < N; ++k) cols.push_back("x" + std::to_string(k + 1));
    write_csv_header(os, kSchemaCycle, config, cols);
    for (std::size_t i = 0; i < c.points.size(); ++i) {
        os << i << ',' << (c.word[static_cast<long long>(i)] == Symbol::L ? 'L' : 'R') << ',' << num(c.s[i]);
        for (Eigen::Index k = 0; k < N; ++k) os << ',' << num(c.points[i](k));
        os << '\n';
    }
}

namespace {
void print_mat(std::ostream& os, const char* name, const linalg::Mat& m) {
    os << name << " =\n";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        os << "   ";
        for (Eigen::Index j = 0; j < m.cols(); ++j) os << ' ' << std::setw(24) << num(m(i, j));
        os << '\n';
    }
}
void print_vec(std::ostream& os, const std::string& name, const Eigen::VectorXd& v) {
    os << "  " << std::left << std::setw(10) << name << std::right;
    for (Eigen::Index i = 0; i < v.size(); ++i) os << ' ' << std::setw(24) << num(v(i));
    os << '\n';
}
}  // namespace

void print_matrices(std::ostream& os, const PwlMap& f) {
    print_mat(os, "A_L", f.AL);
    print_mat(os, "A_R", f.AR);
    print_mat(os, "B", f.B);
    os << "mu = " << num(f.mu) << '\n';
}

void print_cycle(std::ostream& os, const CycleResult& c) {
    os << "word            " << c.word.str() << '\n';
    os << "admissible      " << (c.admissible ? "yes" : "no") << '\n';
    os << "stability       " << stability_name(c.stability) << " (max |multiplier| " << num(c.max_modulus) << ")\n";
    os << "det(I - M)      " << num(c.det_I_minus_M) << '\n';
    os << "closure         " << num(c.closure_residual) << '\n';
    if (c.formula_discrepancy >= 0) os << "s formula check " << num(c.formula_discrepancy) << '\n';
    os << "multipliers\n";
    for (const auto& z : c.multipliers) os << "  " << num(z.real()) << (z.imag() < 0 ? " - " : " + ") << num(std::fabs(z.imag())) << "i\n";
    os << "points (i, symbol, s, x)\n";
    for (std::size_t i = 0; i < c.points.size(); ++i) {
        os << "  " << std::setw(4) << i << ' ' << (c.word[static_cast<long long>(i)] == Symbol::L ? 'L' : 'R') << ' '
           << std::setw(24) << num(c.s[i]);
        for (Eigen::Index k = 0; k < c.points[i].size(); ++k) os << ' ' << std::setw(24) << num(c.points[i](k));
        os << '\n';
    }
}

void print_shrink_point(std::ostream& os, const ShrinkPoint& sp) {
    os << "family     " << sp.family << '\n';
    os << "spec       F[" << sp.spec.ell << ',' << sp.spec.m << ',' << sp.spec.n << "] = " << sp.S.str()
       << "  (d = " << sp.spec.d << ")\n";
    os << sp.slice[0] << " = " << num(sp.xi(0)) << '\n';
    os << sp.slice[1] << " = " << num(sp.xi(1)) << '\n';
    os << "newton     " << sp.iterations << " iterations, residual " << num(sp.residual) << '\n';
    os << "a          " << num(sp.a) << '\n';
    os << "b          " << num(sp.b) << '\n';
    os << "c          " << num(sp.c) << "  (eigenvalue product " << num(sp.c_eigen) << ")\n";
    os << "sigma      " << num(sp.sigma) << '\n';
    os << "det J      " << num(sp.J.determinant()) << '\n';
    os << "J          [" << num(sp.J(0, 0)) << ", " << num(sp.J(0, 1)) << "; " << num(sp.J(1, 0)) << ", "
       << num(sp.J(1, 1)) << "]\n";
    os << "psi1       eta = " << num(sp.psi1_coeff) << " nu^2, F[" << sp.psi1_ell << "] stable\n";
    os << "psi2       nu = " << num(sp.psi2_coeff) << " eta^2, F[" << sp.psi2_ell << "] stable\n";
    os << "t\n";
    for (int i = 0; i < sp.n(); ++i) os << "  " << std::setw(4) << i << ' ' << num(sp.t[static_cast<std::size_t>(i)]) << '\n';
    os << "eigenvectors\n";
    for (const auto& p : sp.eig) {
        print_vec(os, "u" + std::to_string(p.j), p.u.transpose());
        print_vec(os, "v" + std::to_string(p.j), p.v);
    }
}

void print_identity_report(std::ostream& os, const IdentityReport& rep) {
    for (const auto& c : rep.checks)
        os << (c.pass ? "  ok    " : "  FAIL  ") << std::setw(24) << num(c.residual) << "  " << c.name << '\n';
}

void print_kappa_table(std::ostream& os, const ShrinkPoint& sp, int chi_max) {
    os << "side  chi  kappa                     theta\n";
    for (Side side : {Side::Plus, Side::Minus}) {
        const int lo = side == Side::Plus ? -chi_max : -chi_max + 1;
        const int hi = side == Side::Plus ? chi_max - 1 : chi_max;
        for (int chi = lo; chi <= hi; ++chi) {
            const double k = kappa(sp, side, chi);
            os << "  " << side_char(side) << "  " << std::setw(4) << chi << "  " << std::setw(24) << num(k) << "  ";
            if (std::fabs(k) > kKappaDegenerate) os << num(theta(sp, side, chi));
            else os << "degenerate";
            os << '\n';
        }
    }
}

ShrinkPoint builtin_shrinking_point(const std::string& family) {
    const MapFamily fam = builtin_family(family);
    const Slice slice(fam, fam.point());
    RotSpec spec;
    if (family == "bcnf3") spec = RotSpec::make(2, 2, 5);
    else if (family == "ns2") spec = RotSpec::make(2, 1, 4);
    else if (family == "gs2") spec = RotSpec::make(8, 2, 13);
    else throw MapError("no reference shrinking point for family '" + family + "'");
    return solve_shrinking_point(slice, spec, slice.coords(fam.point()));
}

namespace {

auto checker(VerifySummary& sum, std::ostream& log) {
    return [&sum, &log](bool ok, const std::string& name) {
        if (ok) ++sum.passed;
        else {
            ++sum.failed;
            sum.failures.push_back(name);
            log << "FAIL " << name << '\n';
        }
    };
}

}  // namespace

VerifySummary run_symbolic_suite(std::ostream& log) {
    VerifySummary sum;
    auto check = checker(sum, log);

    check(build_rotational(RotSpec::make(3, 5, 7)).str() == "LRRLRRL", "F[3,5,7] = LRRLRRL");
    check(build_rotational(RotSpec::make(4, 5, 7)).str() == "LRLLRRL", "F[4,5,7] = LRLLRRL");
    check(flip(build_rotational(RotSpec::make(3, 5, 7)), -3).str() == "LRRLLRL", "F[3,5,7] flipped at -d");
    check(shift(build_rotational(RotSpec::make(4, 5, 7)), 3).str() == "LRRLLRL", "F[4,5,7] shifted by 3");
    {
        const RotSpec b = RotSpec::make(3, 5, 7);
        const NearbySpec gp = NearbySpec::make(b, Side::Plus, 3, 0), gm = NearbySpec::make(b, Side::Minus, 3, 0);
        check(gp.rot() == RotSpec::make(11, 18, 25) && build_nearby(b, gp).str() == "LRRLRRLLRRLRRLLRRLRRLLRRL",
              "G+[3,0] of F[3,5,7]");
        check(gm.rot() == RotSpec::make(10, 17, 24) && build_nearby(b, gm).str() == "LRRLRRLRRLLRRLRRLLRRLRRL",
              "G-[3,0] of F[3,5,7]");
        const Partitions p = partitions(b);
        check(p.Xhat.str() == "LRRL" && p.Yhat.str() == "RRL" && p.Xcheck.str() == "RLRR" && p.Ycheck.str() == "LLR",
              "partitions of F[3,5,7]");
        const EllPm e = ell_pm(b);
        const FareyRoots fr = farey_roots(5, 7);
        check(e.plus == 2 && e.minus == 1 && fr.left == Fraction{2, 3} && fr.right == Fraction{3, 4},
              "Farey roots and l+- of F[3,5,7]");
    }

    int specs = 0;
    for (int n = 2; n <= 30; ++n)
        for (int m = 1; m < n; ++m) {
            if (std::gcd(m, n) != 1) continue;
            for (int ell = 1; ell < n; ++ell) {
                const RotSpec sp = RotSpec::make(ell, m, n);
                const Word S = build_rotational(sp);
                const long long d = sp.d, ld = static_cast<long long>(ell) * d;
                const std::string tag = "F[" + sp.str() + "]";
                bool ok = S.count(Symbol::L) == ell;
                for (int j = 0; j < ell && ok; ++j) ok = S[j * d] == Symbol::L;
                ok = ok && shift(flip(flip(S, 0), ld), d) == S;
                if (ell != 1) {
                    const Word Fm = build_rotational(RotSpec{ell - 1, m, n, sp.d});
                    ok = ok && flip(S, ld - d) == Fm && flip(S, 0) == shift(Fm, -d);
                }
                if (ell != n - 1) {
                    const Word Fp = build_rotational(RotSpec{ell + 1, m, n, sp.d});
                    ok = ok && flip(S, ld) == Fp && flip(S, -d) == shift(Fp, d);
                }
                const Partitions p = partitions(sp);
                const Word X0 = flip(p.X, 0), Y0 = flip(p.Y, 0);
                ok = ok && p.X + p.Y == S && p.Xhat + p.Yhat == S;
                ok = ok && shift(S, ld) == p.Y + p.X && shift(S, ld) == p.Xcheck + p.Ycheck;
                ok = ok && shift(S, -d) == X0 + Y0 && shift(S, -d) == p.Yhat + p.Xhat;
                ok = ok && shift(S, ld - d) == Y0 + X0 && shift(S, ld - d) == p.Ycheck + p.Xcheck;
                ok = ok && p.X + p.Xcheck == p.Xhat + X0 && p.Y + p.Xhat == p.Xcheck + Y0;
                ok = ok && p.Yhat + p.X == X0 + p.Ycheck && p.Ycheck + p.Y == Y0 + p.Yhat;
                const EllPm e = ell_pm(sp);
                ok = ok && e.plus == p.Xhat.count(Symbol::L) && e.minus == p.Yhat.count(Symbol::L) &&
                     e.plus + e.minus == ell;
                const FareyRoots fr = farey_roots(m, n);
                ok = ok && fr.right.num * fr.left.den - fr.left.num * fr.right.den == 1 && fr.left.den == sp.d;
                check(ok, "word identities " + tag);
                ++specs;
            }
        }
    log << "word identities checked for " << specs << " rotational words\n";

    int nearby = 0;
    for (int n = 2; n <= 15; ++n)
        for (int m = 1; m < n; ++m) {
            if (std::gcd(m, n) != 1) continue;
            for (int ell = 1; ell < n; ++ell) {
                const RotSpec sp = RotSpec::make(ell, m, n);
                for (int k = 1; k <= 8; ++k)
                    for (int chi = -std::min(k - 1, 3); chi <= std::min(k - 1, 3); ++chi)
                        for (Side side : {Side::Plus, Side::Minus}) {
                            bool ok = true;
                            try {
                                const NearbySpec nb = NearbySpec::make(sp, side, k, chi);
                                ok = nearby_by_concatenation(sp, nb) == build_rotational(nb.rot());
                                const long long lhs = mod(static_cast<long long>(nb.ell_tilde) * nb.d_k, nb.n_k);
                                const long long rhs = mod(mod(static_cast<long long>(ell) * sp.d, n) +
                                                              (side == Side::Plus ? 1 : -1) * chi * n,
                                                          nb.n_k);
                                ok = ok && lhs == rhs;
                                ok = ok && (side == Side::Plus ? nb.d_k == n : mod(-nb.d_k, nb.n_k) == n);
                            } catch (const SymbolicError&) {
                                // ell_tilde outside [1, n_k - 1]: no such word
                            }
                            check(ok, "nearby word " + std::string(1, side_char(side)) + "[" + std::to_string(k) +
                                          "," + std::to_string(chi) + "] of F[" + sp.str() + "]");
                            ++nearby;
                        }
            }
        }
    log << "nearby words checked: " << nearby << '\n';

    return sum;
}

VerifySummary run_verify_suite(std::ostream& log) {
    VerifySummary sum = run_symbolic_suite(log);
    auto check = checker(sum, log);

    for (const std::string fam : {"bcnf3", "ns2", "gs2"}) {
        try {
            const ShrinkPoint sp = builtin_shrinking_point(fam);
            const IdentityReport rep = verify_identities(sp);
            for (const auto& c : rep.checks) check(c.pass, fam + ": " + c.name);
            check(sp.a * sp.b < 0, fam + ": a b < 0");
            log << fam << " shrinking point: " << rep.checks.size() << " identities\n";
        } catch (const std::exception& e) {
            check(false, fam + ": shrinking point solve failed: " + e.what());
        }
    }

    try {
        const ShrinkPoint sp = builtin_shrinking_point("bcnf3");
        const std::pair<int, double> plus[] = {{-2, 236.0 / 33}, {-1, 38.0 / 55}, {0, -5.0 / 11}, {1, 26.0 / 33}};
        const std::pair<int, double> minus[] = {{-1, 494.0 / 55}, {0, 43.0 / 55}, {1, 10.0 / 33}, {2, -32.0 / 165}};
        for (auto [chi, v] : plus)
            check(std::fabs(kappa(sp, Side::Plus, chi) / v - 1) < 1e-9, "bcnf3 kappa+_" + std::to_string(chi));
        for (auto [chi, v] : minus)
            check(std::fabs(kappa(sp, Side::Minus, chi) / v - 1) < 1e-9, "bcnf3 kappa-_" + std::to_string(chi));
    } catch (const std::exception& e) {
        check(false, std::string("bcnf3 kappa table: ") + e.what());
    }
    return sum;
}

}  // namespace plmode
