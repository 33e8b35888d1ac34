#include "plmode/symbolic.hpp"

#include <charconv>
#include <numeric>

namespace plmode {

long long mod(long long a, long long n) {
    long long r = a % n;
    return r < 0 ? r + n : r;
}

int inverse_mod(int m, int n) {
    long long r0 = n, r1 = mod(m, n), t0 = 0, t1 = 1;
    while (r1 != 0) {
        long long q = r0 / r1;
        long long r2 = r0 - q * r1;
        r0 = r1;
        r1 = r2;
        long long t2 = t0 - q * t1;
        t0 = t1;
        t1 = t2;
    }
    if (r0 != 1) throw SymbolicError("no inverse of " + std::to_string(m) + " mod " + std::to_string(n));
    return static_cast<int>(mod(t0, n));
}

Word Word::parse(std::string_view text) {
    std::vector<Symbol> s;
    s.reserve(text.size());
    for (char c : text) {
        if (c == 'L') s.push_back(Symbol::L);
        else if (c == 'R') s.push_back(Symbol::R);
        else throw SymbolicError("word contains '" + std::string(1, c) + "'; expected L or R");
    }
    if (s.empty()) throw SymbolicError("empty word");
    return Word(std::move(s));
}

std::string Word::str() const {
    std::string out;
    out.reserve(s_.size());
    for (Symbol c : s_) out += c == Symbol::L ? 'L' : 'R';
    return out;
}

int Word::count(Symbol c) const {
    int k = 0;
    for (Symbol x : s_) k += x == c;
    return k;
}

Word Word::segment(long long start, std::size_t len) const {
    std::vector<Symbol> s(len);
    for (std::size_t i = 0; i < len; ++i) s[i] = (*this)[start + static_cast<long long>(i)];
    return Word(std::move(s));
}

Word Word::operator+(const Word& rhs) const {
    std::vector<Symbol> s = s_;
    s.insert(s.end(), rhs.s_.begin(), rhs.s_.end());
    return Word(std::move(s));
}

Word Word::repeat(int times) const {
    if (times < 0) throw SymbolicError("negative repeat count");
    std::vector<Symbol> s;
    s.reserve(s_.size() * static_cast<std::size_t>(times));
    for (int t = 0; t < times; ++t) s.insert(s.end(), s_.begin(), s_.end());
    return Word(std::move(s));
}

bool Word::is_primitive() const {
    const std::size_t n = s_.size();
    for (std::size_t p = 1; p < n; ++p) {
        if (n % p) continue;
        bool periodic = true;
        for (std::size_t i = p; i < n && periodic; ++i) periodic = s_[i] == s_[i - p];
        if (periodic) return false;
    }
    return true;
}

Word shift(const Word& w, long long j) { return w.segment(j, w.size()); }

Word flip(const Word& w, long long j) {
    std::vector<Symbol> s = w.symbols();
    auto& c = s[static_cast<std::size_t>(mod(j, static_cast<long long>(s.size())))];
    c = c == Symbol::L ? Symbol::R : Symbol::L;
    return Word(std::move(s));
}

RotSpec RotSpec::make(int ell, int m, int n) {
    if (n < 2) throw SymbolicError("period n must be at least 2");
    if (ell < 1 || ell > n - 1) throw SymbolicError("ell must lie in [1, n-1]");
    if (m < 1 || m > n - 1) throw SymbolicError("m must lie in [1, n-1]");
    if (std::gcd(m, n) != 1) throw SymbolicError("gcd(m, n) must be 1");
    return RotSpec{ell, m, n, inverse_mod(m, n)};
}

RotSpec RotSpec::parse(std::string_view text) {
    int v[3];
    std::size_t pos = 0;
    for (int i = 0; i < 3; ++i) {
        std::size_t end = text.find(',', pos);
        if ((i < 2) != (end != std::string_view::npos))
            throw SymbolicError("spec must be ell,m,n");
        auto tok = text.substr(pos, end == std::string_view::npos ? text.size() - pos : end - pos);
        auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v[i]);
        if (ec != std::errc() || p != tok.data() + tok.size())
            throw SymbolicError("spec must be ell,m,n");
        pos = end + 1;
    }
    return make(v[0], v[1], v[2]);
}

std::string RotSpec::str() const {
    return std::to_string(ell) + "," + std::to_string(m) + "," + std::to_string(n);
}

Word build_rotational(const RotSpec& sp) {
    std::vector<Symbol> s(static_cast<std::size_t>(sp.n));
    for (int i = 0; i < sp.n; ++i)
        s[static_cast<std::size_t>(i)] =
            (static_cast<long long>(i) * sp.m) % sp.n < sp.ell ? Symbol::L : Symbol::R;
    return Word(std::move(s));
}

Partitions partitions(const RotSpec& sp) {
    const Word S = build_rotational(sp);
    const long long n = sp.n, d = sp.d, ell = sp.ell;
    const auto lx = static_cast<std::size_t>(mod(ell * d, n));
    const auto lxh = static_cast<std::size_t>(mod(-d, n));
    Partitions p;
    p.X = S.segment(0, lx);
    p.Y = S.segment(static_cast<long long>(lx), static_cast<std::size_t>(n) - lx);
    p.Xhat = S.segment(0, lxh);
    p.Yhat = S.segment(static_cast<long long>(lxh), static_cast<std::size_t>(n) - lxh);
    p.Xcheck = S.segment(ell * d, lxh);
    p.Ycheck = S.segment((ell - 1) * d, static_cast<std::size_t>(d));
    return p;
}

FareyRoots farey_roots(int m, int n) {
    if (!(0 < m && m < n) || std::gcd(m, n) != 1)
        throw SymbolicError("farey_roots needs an irreducible fraction in (0, 1)");
    const int d = inverse_mod(m, n);
    const int nm = d;
    const int mm = static_cast<int>((static_cast<long long>(m) * d - 1) / n);
    return {{mm, nm}, {m - mm, n - nm}};
}

EllPm ell_pm(const RotSpec& sp) {
    const FareyRoots fr = farey_roots(sp.m, sp.n);
    const long long np = fr.right.den, nm = fr.left.den;
    EllPm e;
    e.plus = static_cast<int>((sp.ell * np + sp.n - 1) / sp.n);
    e.minus = static_cast<int>((sp.ell * nm) / sp.n);
    return e;
}

char side_char(Side s) { return s == Side::Plus ? '+' : '-'; }

NearbySpec NearbySpec::make(const RotSpec& base, Side side, int k, int chi) {
    if (k < 1) throw SymbolicError("k must be positive");
    if (chi <= -k || chi >= k) throw SymbolicError("chi must satisfy |chi| < k");
    const FareyRoots fr = farey_roots(base.m, base.n);
    const EllPm e = ell_pm(base);
    NearbySpec nb;
    nb.side = side;
    nb.k = k;
    nb.chi = chi;
    const Fraction& root = side == Side::Plus ? fr.right : fr.left;
    nb.ell_k = k * base.ell + (side == Side::Plus ? e.plus : e.minus);
    nb.m_k = k * base.m + root.num;
    nb.n_k = k * base.n + root.den;
    nb.d_k = inverse_mod(nb.m_k, nb.n_k);
    nb.ell_tilde = nb.ell_k + chi;
    if (nb.ell_tilde < 1 || nb.ell_tilde > nb.n_k - 1)
        throw SymbolicError("nearby word has ell out of range");
    return nb;
}

Word nearby_by_concatenation(const RotSpec& base, const NearbySpec& nb) {
    const Word S = build_rotational(base);
    const Partitions p = partitions(base);
    const Word S0 = flip(S, 0);
    const Word Sld = flip(S, static_cast<long long>(base.ell) * base.d);
    const int k = nb.k, chi = nb.chi;
    if (nb.side == Side::Plus) {
        if (chi < 0) return S.repeat(k + chi) + p.Xhat + S0.repeat(-chi);
        return Sld.repeat(chi) + S.repeat(k - chi) + p.Xhat;
    }
    if (chi <= 0) return S + S0.repeat(-chi) + p.Yhat + S.repeat(k + chi - 1);
    return Sld + p.Yhat + S.repeat(k - chi) + Sld.repeat(chi - 1);
}

Word build_nearby(const RotSpec& base, const NearbySpec& nb) {
    Word w = nearby_by_concatenation(base, nb);
    if (w != build_rotational(nb.rot()))
        throw std::logic_error("nearby word concatenation disagrees with rotational construction");
    return w;
}

}  // namespace plmode
