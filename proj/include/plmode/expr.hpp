#pragma once

// Scalar arithmetic expressions over named real parameters.  Used for the
// matrix entries of user-defined map families.
//
// Grammar (unary minus binds looser than '^', so -2^2 == -4):
//   expr   := term (('+'|'-') term)*
//   term   := unary (('*'|'/') unary)*
//   unary  := '-' unary | power
//   power  := base ('^' unary)?          right associative
//   base   := number | ident | func '(' expr ')' | '(' expr ')'
//   func   := sin | cos | tan | exp | ln | sqrt | abs

#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>

namespace plmode::expr {

using Env = std::map<std::string, double, std::less<>>;

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t offset, std::string expected);

    std::size_t offset() const noexcept { return offset_; }
    const std::string& expected() const noexcept { return expected_; }

private:
    std::size_t offset_;
    std::string expected_;
};

/// Unbound identifiers and domain violations (ln of a non-positive value,
/// sqrt of a negative value, division by zero, non-finite results).
class EvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Func { Sin, Cos, Tan, Exp, Ln, Sqrt, Abs };

struct Node;

/// Immutable expression tree.  Copies share structure; safe to use from
/// several threads at once.
class Expr {
public:
    Expr();  // the literal 0

    static Expr parse(std::string_view source);
    static Expr number(double value);
    static Expr identifier(std::string name);
    static Expr negate(Expr operand);
    static Expr binary(char op, Expr lhs, Expr rhs);
    static Expr call(Func f, Expr arg);

    double eval(const Env& env) const;

    /// Fully parenthesised text; parse(print()) evaluates bit-identically.
    std::string print() const;

    std::set<std::string> identifiers() const;

    bool structurally_equal(const Expr& other) const;

private:
    explicit Expr(std::shared_ptr<const Node> root) : root_(std::move(root)) {}

    std::shared_ptr<const Node> root_;

    friend struct Node;
    friend class Parser;
};

std::string_view func_name(Func f);

}  // namespace plmode::expr
