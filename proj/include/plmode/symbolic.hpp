#pragma once

// Symbol sequences over {L, R}: rotational words F[l,m,n], cyclic shifts and
// flips, the X/Y partitions, Farey roots and the nearby words G+-[k,chi].

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace plmode {

enum class Symbol : std::uint8_t { L = 0, R = 1 };

class SymbolicError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Reduce a into [0, n).
long long mod(long long a, long long n);

/// Multiplicative inverse of m modulo n; throws if gcd(m, n) != 1.
int inverse_mod(int m, int n);

class Word {
public:
    Word() = default;
    explicit Word(std::vector<Symbol> symbols) : s_(std::move(symbols)) {}

    /// Parse "LRRL"; throws SymbolicError on any other character or if empty.
    static Word parse(std::string_view text);

    std::size_t size() const { return s_.size(); }
    bool empty() const { return s_.empty(); }

    /// Cyclic access: any integer index is reduced mod size().
    Symbol operator[](long long i) const { return s_[static_cast<std::size_t>(mod(i, size()))]; }

    const std::vector<Symbol>& symbols() const { return s_; }
    std::string str() const;
    int count(Symbol c) const;

    /// Cyclic segment of length len starting at start.
    Word segment(long long start, std::size_t len) const;

    Word operator+(const Word& rhs) const;
    Word repeat(int times) const;

    /// False when the word is a proper power of a shorter word.
    bool is_primitive() const;

    friend bool operator==(const Word&, const Word&) = default;
    friend auto operator<=>(const Word&, const Word&) = default;

private:
    std::vector<Symbol> s_;
};

/// S^{(j)}: S^{(j)}_i = S_{(i+j) mod n}.
Word shift(const Word& w, long long j);

/// S^{j-bar}: toggle the symbol at j mod n.
Word flip(const Word& w, long long j);

struct RotSpec {
    int ell = 0;
    int m = 0;
    int n = 0;
    int d = 0;

    /// Validates 1 <= ell, m <= n-1 and gcd(m, n) = 1; fills in d.
    static RotSpec make(int ell, int m, int n);

    /// Parse "l,m,n".
    static RotSpec parse(std::string_view text);

    std::string str() const;
    friend bool operator==(const RotSpec&, const RotSpec&) = default;
};

Word build_rotational(const RotSpec& spec);

struct Partitions {
    Word X, Y, Xhat, Yhat, Xcheck, Ycheck;
};

Partitions partitions(const RotSpec& spec);

struct Fraction {
    int num = 0;
    int den = 1;
    friend bool operator==(const Fraction&, const Fraction&) = default;
};

struct FareyRoots {
    Fraction left;   // m-/n-
    Fraction right;  // m+/n+
};

FareyRoots farey_roots(int m, int n);

struct EllPm {
    int minus = 0;
    int plus = 0;
};

EllPm ell_pm(const RotSpec& spec);

enum class Side { Plus, Minus };

char side_char(Side s);

struct NearbySpec {
    Side side = Side::Plus;
    int k = 1;
    int chi = 0;
    int ell_k = 0;
    int m_k = 0;
    int n_k = 0;
    int d_k = 0;
    int ell_tilde = 0;

    /// Requires k >= 1 and |chi| < k.
    static NearbySpec make(const RotSpec& base, Side side, int k, int chi);

    RotSpec rot() const { return RotSpec{ell_tilde, m_k, n_k, d_k}; }
};

/// G+-[k,chi] assembled from S, S^{0-bar}, S^{ld-bar}, X-hat and Y-hat.
Word nearby_by_concatenation(const RotSpec& base, const NearbySpec& nb);

/// G+-[k,chi] via the concatenation formula, checked against
/// build_rotational(nb.rot()); throws std::logic_error on mismatch.
Word build_nearby(const RotSpec& base, const NearbySpec& nb);

}  // namespace plmode
