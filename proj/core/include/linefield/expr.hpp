#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace linefield {

// A parsed scalar expression in the variables x and y.
//
// Grammar:  expr   := term (("+"|"-") term)*
//           term   := factor (("*"|"/") factor)*
//           factor := atom ["^" integer] | "-" factor
//           atom   := number | "pi" | "x" | "y" | func "(" expr ")" | "(" expr ")"
//           func   := sin | cos | tan | exp | sqrt | atan
//
// Trees are immutable after construction; every operation is pure, so Expr
// values can be shared freely across threads. Differentiation is exact and
// closed over the grammar (the derivative of an Expr is an Expr). The only
// simplification performed is constant folding of arithmetic nodes.
class Expr {
public:
    enum class Kind {
        Num, Var,                                  // leaves
        Neg, Sin, Cos, Tan, Exp, Sqrt, Atan,       // unary
        Add, Sub, Mul, Div,                        // binary
        Pow                                        // integer exponent
    };

    Expr() : Expr(num(0.0)) {}

    static Expr num(double v);
    static Expr pi();
    static Expr var(char name);  // 'x' or 'y'

    // Parses `text`; throws ParseError (with byte offset) on malformed input
    // or unknown identifiers.
    static Expr parse(std::string_view text);

    static Expr apply(Kind unary, const Expr& e);

    friend Expr operator+(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a, const Expr& b);
    friend Expr operator*(const Expr& a, const Expr& b);
    friend Expr operator/(const Expr& a, const Expr& b);
    Expr operator-() const;
    Expr pow(int n) const;

    // Exact recursive evaluation. Throws EvalError (naming the offending
    // subexpression) when the point is outside the domain of definition.
    double eval(double x, double y) const;

    // Exact symbolic partial derivative with respect to 'x' or 'y'.
    Expr diff(char var) const;

    // Prints a string that parses back to an expression with identical
    // evaluations (doubles are emitted in shortest round-trip form).
    std::string str() const;

    Kind kind() const;
    bool is_constant(double* value = nullptr) const;

    struct Node;  // definition private to the implementation file

private:
    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

}  // namespace linefield
