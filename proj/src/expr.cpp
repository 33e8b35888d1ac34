#include "plmode/expr.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <variant>
#include <vector>

namespace plmode::expr {

struct Number { double value; };
struct Ident { std::string name; };
struct Neg { std::shared_ptr<const Node> operand; };
struct Binary { char op; std::shared_ptr<const Node> lhs, rhs; };
struct Call { Func f; std::shared_ptr<const Node> arg; };

struct Node {
    std::variant<Number, Ident, Neg, Binary, Call> v;
};

namespace {

constexpr Func kFuncs[] = {Func::Sin, Func::Cos, Func::Tan, Func::Exp,
                           Func::Ln, Func::Sqrt, Func::Abs};

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

double checked(double r, const char* what) {
    if (!std::isfinite(r)) throw EvalError(std::string("non-finite result in ") + what);
    return r;
}

double eval_node(const Node& n, const Env& env);

double apply(Func f, double x) {
    switch (f) {
        case Func::Sin: return checked(std::sin(x), "sin");
        case Func::Cos: return checked(std::cos(x), "cos");
        case Func::Tan: return checked(std::tan(x), "tan");
        case Func::Exp: return checked(std::exp(x), "exp");
        case Func::Ln:
            if (!(x > 0)) throw EvalError("ln of non-positive value " + fmt(x));
            return std::log(x);
        case Func::Sqrt:
            if (x < 0) throw EvalError("sqrt of negative value " + fmt(x));
            return std::sqrt(x);
        case Func::Abs: return std::fabs(x);
    }
    throw EvalError("unknown function");
}

double eval_node(const Node& n, const Env& env) {
    return std::visit(
        [&](const auto& a) -> double {
            using T = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<T, Number>) {
                return a.value;
            } else if constexpr (std::is_same_v<T, Ident>) {
                auto it = env.find(a.name);
                if (it == env.end()) throw EvalError("unbound identifier '" + a.name + "'");
                return it->second;
            } else if constexpr (std::is_same_v<T, Neg>) {
                return -eval_node(*a.operand, env);
            } else if constexpr (std::is_same_v<T, Binary>) {
                double l = eval_node(*a.lhs, env);
                double r = eval_node(*a.rhs, env);
                switch (a.op) {
                    case '+': return checked(l + r, "addition");
                    case '-': return checked(l - r, "subtraction");
                    case '*': return checked(l * r, "multiplication");
                    case '/':
                        if (r == 0) throw EvalError("division by zero");
                        return checked(l / r, "division");
                    default: {
                        double p = std::pow(l, r);
                        if (std::isnan(p))
                            throw EvalError("power " + fmt(l) + "^" + fmt(r) + " is undefined");
                        return checked(p, "power");
                    }
                }
            } else {
                return apply(a.f, eval_node(*a.arg, env));
            }
        },
        n.v);
}

void print_node(const Node& n, std::string& out) {
    std::visit(
        [&](const auto& a) {
            using T = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<T, Number>) {
                if (std::signbit(a.value)) {
                    out += "(-" + fmt(-a.value) + ")";
                } else {
                    out += fmt(a.value);
                }
            } else if constexpr (std::is_same_v<T, Ident>) {
                out += a.name;
            } else if constexpr (std::is_same_v<T, Neg>) {
                out += "(-";
                print_node(*a.operand, out);
                out += ")";
            } else if constexpr (std::is_same_v<T, Binary>) {
                out += "(";
                print_node(*a.lhs, out);
                out += a.op;
                print_node(*a.rhs, out);
                out += ")";
            } else {
                out += func_name(a.f);
                out += "(";
                print_node(*a.arg, out);
                out += ")";
            }
        },
        n.v);
}

void collect(const Node& n, std::set<std::string>& out) {
    std::visit(
        [&](const auto& a) {
            using T = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<T, Ident>) {
                out.insert(a.name);
            } else if constexpr (std::is_same_v<T, Neg>) {
                collect(*a.operand, out);
            } else if constexpr (std::is_same_v<T, Binary>) {
                collect(*a.lhs, out);
                collect(*a.rhs, out);
            } else if constexpr (std::is_same_v<T, Call>) {
                collect(*a.arg, out);
            }
        },
        n.v);
}

bool equal(const Node& x, const Node& y) {
    if (x.v.index() != y.v.index()) return false;
    return std::visit(
        [&](const auto& a) -> bool {
            using T = std::decay_t<decltype(a)>;
            const auto& b = std::get<T>(y.v);
            if constexpr (std::is_same_v<T, Number>) {
                return a.value == b.value && std::signbit(a.value) == std::signbit(b.value);
            } else if constexpr (std::is_same_v<T, Ident>) {
                return a.name == b.name;
            } else if constexpr (std::is_same_v<T, Neg>) {
                return equal(*a.operand, *b.operand);
            } else if constexpr (std::is_same_v<T, Binary>) {
                return a.op == b.op && equal(*a.lhs, *b.lhs) && equal(*a.rhs, *b.rhs);
            } else {
                return a.f == b.f && equal(*a.arg, *b.arg);
            }
        },
        x.v);
}

bool is_ident_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

}  // namespace

class Parser {
public:
    explicit Parser(std::string_view s) : s_(s) {}

    Expr run() {
        auto e = expr();
        skip();
        if (pos_ != s_.size()) throw ParseError(pos_, "operator or end of input");
        return e;
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;

    void skip() {
        while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\n' ||
                                    s_[pos_] == '\r'))
            ++pos_;
    }
    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Expr expr() {
        Expr lhs = term();
        for (;;) {
            if (accept('+')) lhs = Expr::binary('+', lhs, term());
            else if (accept('-')) lhs = Expr::binary('-', lhs, term());
            else return lhs;
        }
    }
    Expr term() {
        Expr lhs = unary();
        for (;;) {
            if (accept('*')) lhs = Expr::binary('*', lhs, unary());
            else if (accept('/')) lhs = Expr::binary('/', lhs, unary());
            else return lhs;
        }
    }
    Expr unary() {
        if (accept('-')) return Expr::negate(unary());
        return power();
    }
    Expr power() {
        Expr b = base();
        if (accept('^')) return Expr::binary('^', b, unary());
        return b;
    }
    Expr base() {
        skip();
        if (pos_ >= s_.size()) throw ParseError(pos_, "number, identifier, function or '('");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = expr();
            if (!accept(')')) throw ParseError(pos_, "')'");
            return e;
        }
        if (is_digit(c) || c == '.') return number();
        if (is_ident_start(c)) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && is_ident_char(s_[pos_])) ++pos_;
            std::string name(s_.substr(start, pos_ - start));
            for (Func f : kFuncs) {
                if (name == func_name(f)) {
                    if (!accept('(')) throw ParseError(pos_, "'(' after " + name);
                    Expr arg = expr();
                    if (!accept(')')) throw ParseError(pos_, "')'");
                    return Expr::call(f, arg);
                }
            }
            return Expr::identifier(std::move(name));
        }
        throw ParseError(pos_, "number, identifier, function or '('");
    }
    Expr number() {
        std::size_t start = pos_;
        bool digits = false;
        while (pos_ < s_.size() && is_digit(s_[pos_])) ++pos_, digits = true;
        if (pos_ < s_.size() && s_[pos_] == '.') {
            ++pos_;
            while (pos_ < s_.size() && is_digit(s_[pos_])) ++pos_, digits = true;
        }
        if (!digits) throw ParseError(start, "digit");
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            std::size_t save = pos_;
            ++pos_;
            if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
            if (pos_ >= s_.size() || !is_digit(s_[pos_])) throw ParseError(pos_, "exponent digits");
            while (pos_ < s_.size() && is_digit(s_[pos_])) ++pos_;
            (void)save;
        }
        double v = 0;
        auto text = s_.substr(start, pos_ - start);
        auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc() || p != text.data() + text.size())
            throw ParseError(start, "representable number");
        return Expr::number(v);
    }
};

ParseError::ParseError(std::size_t offset, std::string expected)
    : std::runtime_error("parse error at byte " + std::to_string(offset) + ": expected " + expected),
      offset_(offset),
      expected_(std::move(expected)) {}

std::string_view func_name(Func f) {
    switch (f) {
        case Func::Sin: return "sin";
        case Func::Cos: return "cos";
        case Func::Tan: return "tan";
        case Func::Exp: return "exp";
        case Func::Ln: return "ln";
        case Func::Sqrt: return "sqrt";
        case Func::Abs: return "abs";
    }
    return "?";
}

Expr::Expr() : Expr(number(0.0)) {}

Expr Expr::parse(std::string_view source) { return Parser(source).run(); }

Expr Expr::number(double value) {
    return Expr(std::make_shared<const Node>(Node{Number{value}}));
}
Expr Expr::identifier(std::string name) {
    return Expr(std::make_shared<const Node>(Node{Ident{std::move(name)}}));
}
Expr Expr::negate(Expr operand) {
    return Expr(std::make_shared<const Node>(Node{Neg{operand.root_}}));
}
Expr Expr::binary(char op, Expr lhs, Expr rhs) {
    if (op != '+' && op != '-' && op != '*' && op != '/' && op != '^')
        throw std::invalid_argument(std::string("unknown operator ") + op);
    return Expr(std::make_shared<const Node>(Node{Binary{op, lhs.root_, rhs.root_}}));
}
Expr Expr::call(Func f, Expr arg) {
    return Expr(std::make_shared<const Node>(Node{Call{f, arg.root_}}));
}

double Expr::eval(const Env& env) const { return eval_node(*root_, env); }

std::string Expr::print() const {
    std::string out;
    print_node(*root_, out);
    return out;
}

std::set<std::string> Expr::identifiers() const {
    std::set<std::string> out;
    collect(*root_, out);
    return out;
}

bool Expr::structurally_equal(const Expr& other) const { return equal(*root_, *other.root_); }

}  // namespace plmode::expr
