#include "linefield/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "linefield/errors.hpp"

namespace linefield {

struct Expr::Node {
    Kind kind;
    double value = 0.0;   // Num
    char name = 0;        // Var
    int exponent = 0;     // Pow
    std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

NodePtr make_num(double v) {
    auto n = std::make_shared<Expr::Node>();
    n->kind = Expr::Kind::Num;
    n->value = v;
    return n;
}

bool node_is_num(const NodePtr& n, double* v = nullptr) {
    if (n->kind != Expr::Kind::Num) return false;
    if (v) *v = n->value;
    return true;
}

}  // namespace

Expr Expr::num(double v) { return Expr(make_num(v)); }

Expr Expr::pi() { return num(std::numbers::pi); }

Expr Expr::var(char name) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Var;
    n->name = name;
    return Expr(n);
}

Expr Expr::apply(Kind unary, const Expr& e) {
    if (unary == Kind::Neg) return -e;
    auto n = std::make_shared<Node>();
    n->kind = unary;
    n->a = e.node_;
    return Expr(n);
}

Expr operator+(const Expr& a, const Expr& b) {
    double va, vb;
    const bool ca = node_is_num(a.node_, &va), cb = node_is_num(b.node_, &vb);
    if (ca && cb) return Expr::num(va + vb);
    if (ca && va == 0.0) return b;
    if (cb && vb == 0.0) return a;
    auto n = std::make_shared<Expr::Node>();
    n->kind = Expr::Kind::Add;
    n->a = a.node_;
    n->b = b.node_;
    return Expr(n);
}

Expr operator-(const Expr& a, const Expr& b) {
    double va, vb;
    const bool ca = node_is_num(a.node_, &va), cb = node_is_num(b.node_, &vb);
    if (ca && cb) return Expr::num(va - vb);
    if (cb && vb == 0.0) return a;
    if (ca && va == 0.0) return -b;
    auto n = std::make_shared<Expr::Node>();
    n->kind = Expr::Kind::Sub;
    n->a = a.node_;
    n->b = b.node_;
    return Expr(n);
}

Expr operator*(const Expr& a, const Expr& b) {
    double va, vb;
    const bool ca = node_is_num(a.node_, &va), cb = node_is_num(b.node_, &vb);
    if (ca && cb) return Expr::num(va * vb);
    if (ca && va == 0.0) return Expr::num(0.0);
    if (cb && vb == 0.0) return Expr::num(0.0);
    if (ca && va == 1.0) return b;
    if (cb && vb == 1.0) return a;
    auto n = std::make_shared<Expr::Node>();
    n->kind = Expr::Kind::Mul;
    n->a = a.node_;
    n->b = b.node_;
    return Expr(n);
}

Expr operator/(const Expr& a, const Expr& b) {
    double va, vb;
    const bool ca = node_is_num(a.node_, &va), cb = node_is_num(b.node_, &vb);
    if (cb && vb != 0.0 && ca) return Expr::num(va / vb);
    if (cb && vb == 1.0) return a;
    if (ca && va == 0.0 && !(cb && vb == 0.0)) return Expr::num(0.0);
    auto n = std::make_shared<Expr::Node>();
    n->kind = Expr::Kind::Div;
    n->a = a.node_;
    n->b = b.node_;
    return Expr(n);
}

Expr Expr::operator-() const {
    double v;
    if (node_is_num(node_, &v)) return num(-v);
    if (node_->kind == Kind::Neg) return Expr(node_->a);
    auto n = std::make_shared<Node>();
    n->kind = Kind::Neg;
    n->a = node_;
    return Expr(n);
}

Expr Expr::pow(int e) const {
    if (e == 0) return num(1.0);
    if (e == 1) return *this;
    double v;
    if (node_is_num(node_, &v) && !(v == 0.0 && e < 0)) return num(std::pow(v, e));
    auto n = std::make_shared<Node>();
    n->kind = Kind::Pow;
    n->exponent = e;
    n->a = node_;
    return Expr(n);
}

Expr::Kind Expr::kind() const { return node_->kind; }

bool Expr::is_constant(double* value) const { return node_is_num(node_, value); }

// ---------------------------------------------------------------------------
// Evaluation

namespace {

std::string node_str(const NodePtr& n);

double eval_node(const NodePtr& n, double x, double y) {
    switch (n->kind) {
        case Expr::Kind::Num: return n->value;
        case Expr::Kind::Var: return n->name == 'x' ? x : y;
        case Expr::Kind::Neg: return -eval_node(n->a, x, y);
        case Expr::Kind::Sin: return std::sin(eval_node(n->a, x, y));
        case Expr::Kind::Cos: return std::cos(eval_node(n->a, x, y));
        case Expr::Kind::Tan: {
            const double t = std::tan(eval_node(n->a, x, y));
            if (!std::isfinite(t))
                throw EvalError("tan undefined in " + node_str(n));
            return t;
        }
        case Expr::Kind::Exp: {
            const double t = std::exp(eval_node(n->a, x, y));
            if (!std::isfinite(t))
                throw EvalError("exp overflow in " + node_str(n));
            return t;
        }
        case Expr::Kind::Sqrt: {
            const double v = eval_node(n->a, x, y);
            if (v < 0.0)
                throw EvalError("sqrt of negative value in " + node_str(n));
            return std::sqrt(v);
        }
        case Expr::Kind::Atan: return std::atan(eval_node(n->a, x, y));
        case Expr::Kind::Add: return eval_node(n->a, x, y) + eval_node(n->b, x, y);
        case Expr::Kind::Sub: return eval_node(n->a, x, y) - eval_node(n->b, x, y);
        case Expr::Kind::Mul: {
            const double t = eval_node(n->a, x, y) * eval_node(n->b, x, y);
            if (!std::isfinite(t))
                throw EvalError("non-finite product in " + node_str(n));
            return t;
        }
        case Expr::Kind::Div: {
            const double denom = eval_node(n->b, x, y);
            if (denom == 0.0)
                throw EvalError("division by zero in " + node_str(n));
            const double t = eval_node(n->a, x, y) / denom;
            if (!std::isfinite(t))
                throw EvalError("non-finite quotient in " + node_str(n));
            return t;
        }
        case Expr::Kind::Pow: {
            const double base = eval_node(n->a, x, y);
            if (base == 0.0 && n->exponent < 0)
                throw EvalError("zero raised to negative power in " + node_str(n));
            // Exact integer power by repeated multiplication.
            double acc = 1.0;
            double b = n->exponent < 0 ? 1.0 / base : base;
            int e = n->exponent < 0 ? -n->exponent : n->exponent;
            while (e > 0) {
                if (e & 1) acc *= b;
                b *= b;
                e >>= 1;
            }
            if (!std::isfinite(acc))
                throw EvalError("non-finite power in " + node_str(n));
            return acc;
        }
    }
    throw EvalError("corrupt expression node");
}

}  // namespace

double Expr::eval(double x, double y) const { return eval_node(node_, x, y); }

// ---------------------------------------------------------------------------
// Differentiation

Expr Expr::diff(char v) const {
    switch (node_->kind) {
        case Kind::Num: return num(0.0);
        case Kind::Var: return num(node_->name == v ? 1.0 : 0.0);
        case Kind::Neg: return -Expr(node_->a).diff(v);
        case Kind::Sin:
            return apply(Kind::Cos, Expr(node_->a)) * Expr(node_->a).diff(v);
        case Kind::Cos:
            return -(apply(Kind::Sin, Expr(node_->a)) * Expr(node_->a).diff(v));
        case Kind::Tan: {
            Expr t = apply(Kind::Tan, Expr(node_->a));
            return (num(1.0) + t.pow(2)) * Expr(node_->a).diff(v);
        }
        case Kind::Exp:
            return apply(Kind::Exp, Expr(node_->a)) * Expr(node_->a).diff(v);
        case Kind::Sqrt:
            return Expr(node_->a).diff(v) /
                   (num(2.0) * apply(Kind::Sqrt, Expr(node_->a)));
        case Kind::Atan:
            return Expr(node_->a).diff(v) / (num(1.0) + Expr(node_->a).pow(2));
        case Kind::Add: return Expr(node_->a).diff(v) + Expr(node_->b).diff(v);
        case Kind::Sub: return Expr(node_->a).diff(v) - Expr(node_->b).diff(v);
        case Kind::Mul:
            return Expr(node_->a).diff(v) * Expr(node_->b) +
                   Expr(node_->a) * Expr(node_->b).diff(v);
        case Kind::Div:
            return (Expr(node_->a).diff(v) * Expr(node_->b) -
                    Expr(node_->a) * Expr(node_->b).diff(v)) /
                   Expr(node_->b).pow(2);
        case Kind::Pow:
            if (node_->exponent == 0) return num(0.0);
            return num(double(node_->exponent)) * Expr(node_->a).pow(node_->exponent - 1) *
                   Expr(node_->a).diff(v);
    }
    throw EvalError("corrupt expression node");
}

// ---------------------------------------------------------------------------
// Printing

namespace {

// Lower binds looser. Matches the parse grammar.
int precedence(Expr::Kind k) {
    switch (k) {
        case Expr::Kind::Add:
        case Expr::Kind::Sub: return 1;
        case Expr::Kind::Mul:
        case Expr::Kind::Div: return 2;
        case Expr::Kind::Neg: return 3;
        case Expr::Kind::Pow: return 4;
        default: return 5;  // atoms
    }
}

std::string num_str(double v) {
    if (v < 0.0 || (v == 0.0 && std::signbit(v))) return "-" + num_str(-v);
    std::array<char, 40> buf;
    auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    (void)ec;
    return std::string(buf.data(), p);
}

void print_node(const NodePtr& n, std::ostringstream& out) {
    const auto paren = [&](const NodePtr& c, int min_prec) {
        if (precedence(c->kind) < min_prec) {
            out << '(';
            print_node(c, out);
            out << ')';
        } else {
            print_node(c, out);
        }
    };
    switch (n->kind) {
        case Expr::Kind::Num: out << num_str(n->value); return;
        case Expr::Kind::Var: out << n->name; return;
        case Expr::Kind::Neg:
            out << '-';
            paren(n->a, 4);
            return;
        case Expr::Kind::Sin: out << "sin("; print_node(n->a, out); out << ')'; return;
        case Expr::Kind::Cos: out << "cos("; print_node(n->a, out); out << ')'; return;
        case Expr::Kind::Tan: out << "tan("; print_node(n->a, out); out << ')'; return;
        case Expr::Kind::Exp: out << "exp("; print_node(n->a, out); out << ')'; return;
        case Expr::Kind::Sqrt: out << "sqrt("; print_node(n->a, out); out << ')'; return;
        case Expr::Kind::Atan: out << "atan("; print_node(n->a, out); out << ')'; return;
        case Expr::Kind::Add:
            paren(n->a, 1);
            out << " + ";
            paren(n->b, 2);
            return;
        case Expr::Kind::Sub:
            paren(n->a, 1);
            out << " - ";
            paren(n->b, 2);
            return;
        case Expr::Kind::Mul:
            paren(n->a, 2);
            out << "*";
            paren(n->b, 3);
            return;
        case Expr::Kind::Div:
            paren(n->a, 2);
            out << "/";
            paren(n->b, 3);
            return;
        case Expr::Kind::Pow:
            paren(n->a, 5);
            out << '^' << n->exponent;
            return;
    }
}

std::string node_str(const NodePtr& n) {
    std::ostringstream out;
    print_node(n, out);
    return out.str();
}

}  // namespace

std::string Expr::str() const { return node_str(node_); }

// ---------------------------------------------------------------------------
// Parsing: recursive descent over a byte cursor.

namespace {

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Expr run() {
        Expr e = expression();
        skip_ws();
        if (pos_ != text_.size())
            fail("end of input, '+', '-', '*', '/', or '^'");
        return e;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& expected) {
        throw ParseError(pos_, "syntax error at offset " + std::to_string(pos_) +
                                   ": expected " + expected);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    Expr expression() {
        Expr e = term();
        for (;;) {
            if (eat('+')) e = e + term();
            else if (eat('-')) e = e - term();
            else return e;
        }
    }

    Expr term() {
        Expr e = factor();
        for (;;) {
            if (eat('*')) e = e * factor();
            else if (eat('/')) e = e / factor();
            else return e;
        }
    }

    Expr factor() {
        if (eat('-')) return -factor();
        Expr base = atom();
        if (eat('^')) return base.pow(integer());
        return base;
    }

    int integer() {
        skip_ws();
        const std::size_t start = pos_;
        if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) ++pos_;
        std::size_t digits = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ == digits) {
            pos_ = start;
            fail("integer exponent");
        }
        int value = 0;
        auto res = std::from_chars(text_.data() + start, text_.data() + pos_, value);
        if (res.ec != std::errc{}) {
            pos_ = start;
            fail("integer exponent in range");
        }
        return value;
    }

    Expr atom() {
        skip_ws();
        if (pos_ >= text_.size())
            fail("number, 'pi', 'x', 'y', function, or '('");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = expression();
            if (!eat(')')) fail("')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
        fail("number, 'pi', 'x', 'y', function, or '('");
    }

    Expr number() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
            ++pos_;
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t save = pos_++;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            } else {
                pos_ = save;  // bare 'e' belongs to the next token, not this literal
            }
        }
        double value = 0.0;
        auto res = std::from_chars(text_.data() + start, text_.data() + pos_, value);
        if (res.ec != std::errc{} || res.ptr != text_.data() + pos_) {
            pos_ = start;
            fail("numeric literal");
        }
        return Expr::num(value);
    }

    Expr identifier() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        const std::string_view name = text_.substr(start, pos_ - start);
        if (name == "x") return Expr::var('x');
        if (name == "y") return Expr::var('y');
        if (name == "pi") return Expr::pi();
        Expr::Kind k;
        if (name == "sin") k = Expr::Kind::Sin;
        else if (name == "cos") k = Expr::Kind::Cos;
        else if (name == "tan") k = Expr::Kind::Tan;
        else if (name == "exp") k = Expr::Kind::Exp;
        else if (name == "sqrt") k = Expr::Kind::Sqrt;
        else if (name == "atan") k = Expr::Kind::Atan;
        else {
            pos_ = start;
            throw ParseError(start, "unknown identifier '" + std::string(name) +
                                        "' at offset " + std::to_string(start));
        }
        if (!eat('(')) fail("'(' after function name");
        Expr arg = expression();
        if (!eat(')')) fail("')'");
        return Expr::apply(k, arg);
    }
};

}  // namespace

Expr Expr::parse(std::string_view text) { return Parser(text).run(); }

}  // namespace linefield
