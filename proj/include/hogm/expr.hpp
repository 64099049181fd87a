#ifndef HOGM_EXPR_HPP
#define HOGM_EXPR_HPP

#include <compare>
#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "hogm/rational.hpp"

namespace hogm {

// A typed variable handle. level is the derivative order for Q/V, the momentum
// level for P, and unused (0) for Lambda. Ordering is (kind, index, level).
enum class VarKind : std::uint8_t { Q, P, V, Lambda };

struct VarRef {
    VarKind kind = VarKind::Q;
    int index = 1;  // degree of freedom or constraint index, >= 1
    int level = 0;  // >= 0

    friend auto operator<=>(const VarRef&, const VarRef&) = default;
};

// Surface syntax of the variable: q3_2, p1_0, v2_1, lam2.
std::string var_name(const VarRef& v);

VarRef qvar(int index, int level);
VarRef pvar(int index, int level);
VarRef vvar(int index, int level);
VarRef lamvar(int index);

// Numeric leaf: exact rational when possible, double otherwise. The double
// value is kept in both modes so evaluation never needs to branch.
class Number {
public:
    Number() : exact_(true), rat_(0), flt_(0.0) {}
    static Number of(const Rational& r) {
        Number n;
        n.exact_ = true;
        n.rat_ = r;
        n.flt_ = r.to_double();
        return n;
    }
    static Number of(double d) {
        Number n;
        n.exact_ = false;
        n.rat_ = Rational(0);
        n.flt_ = d;
        return n;
    }

    bool exact() const { return exact_; }
    const Rational& rat() const { return rat_; }
    double value() const { return flt_; }
    bool is_zero() const { return exact_ ? rat_.is_zero() : flt_ == 0.0; }
    bool is_one() const { return exact_ ? rat_.is_one() : flt_ == 1.0; }

    Number operator+(const Number& o) const;
    Number operator*(const Number& o) const;
    Number negated() const;
    Number pow(int e) const;

private:
    bool exact_;
    Rational rat_;
    double flt_;
};

int number_cmp(const Number& a, const Number& b);
bool number_identical(const Number& a, const Number& b);

enum class ExprKind : std::uint8_t { Constant, Variable, Sum, Product, Power, Negate, Call };
enum class Func : std::uint8_t { Sin, Cos, Exp, Ln, Sqrt };

const char* func_name(Func f);

class Expr;
struct ExprNode;
using ExprNodePtr = std::shared_ptr<const ExprNode>;

// Immutable expression tree with structural sharing. Copying an Expr is a
// shared_ptr copy; all operations on expressions are pure.
class Expr {
public:
    Expr();  // the constant 0

    static Expr constant(const Rational& r);
    static Expr constant(long long n);
    static Expr constant(double d);
    static Expr constant(const Number& n);
    static Expr variable(const VarRef& v);
    static Expr sum(std::vector<Expr> terms);
    static Expr product(std::vector<Expr> factors);
    static Expr pow(Expr base, int exponent);
    static Expr negate(Expr e);
    static Expr call(Func f, Expr arg);

    ExprKind kind() const;
    const Number& number() const;      // Constant only
    const VarRef& var() const;         // Variable only
    const std::vector<Expr>& args() const;  // Sum/Product; singleton for Power/Negate/Call
    int exponent() const;              // Power only
    Func func() const;                 // Call only

    bool is_zero() const;              // literal constant 0
    bool is_one() const;
    bool is_constant() const { return kind() == ExprKind::Constant; }

    const ExprNode* node() const { return node_.get(); }

private:
    explicit Expr(ExprNodePtr n) : node_(std::move(n)) {}
    ExprNodePtr node_;
    friend struct ExprNode;
};

// Total structural order: kind rank first, then contents. Used for canonical
// term/factor ordering and as map key everywhere.
int expr_cmp(const Expr& a, const Expr& b);
bool expr_equal(const Expr& a, const Expr& b);

struct ExprLess {
    bool operator()(const Expr& a, const Expr& b) const { return expr_cmp(a, b) < 0; }
};

std::set<VarRef> free_variables(const Expr& e);
bool contains_var(const Expr& e, const VarRef& v);

// Deterministic, re-parseable surface form.
std::string format(const Expr& e);

// Shortest representation that parses back to the same double, capped at 17
// significant digits. Used for expression output and file formats alike.
std::string format_double_shortest(double d);

// Light builders: fold literal 0/1 and constants, otherwise build the node.
// Heavy normalization is simplify()'s job (calculus.hpp).
Expr add(const Expr& a, const Expr& b);
Expr sub(const Expr& a, const Expr& b);
Expr mul(const Expr& a, const Expr& b);
Expr neg(const Expr& a);

}  // namespace hogm

#endif
