#include "hogm/expr.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hogm {

std::string var_name(const VarRef& v) {
    switch (v.kind) {
        case VarKind::Q: return "q" + std::to_string(v.index) + "_" + std::to_string(v.level);
        case VarKind::P: return "p" + std::to_string(v.index) + "_" + std::to_string(v.level);
        case VarKind::V: return "v" + std::to_string(v.index) + "_" + std::to_string(v.level);
        case VarKind::Lambda: return "lam" + std::to_string(v.index);
    }
    return "?";
}

VarRef qvar(int index, int level) { return VarRef{VarKind::Q, index, level}; }
VarRef pvar(int index, int level) { return VarRef{VarKind::P, index, level}; }
VarRef vvar(int index, int level) { return VarRef{VarKind::V, index, level}; }
VarRef lamvar(int index) { return VarRef{VarKind::Lambda, index, 0}; }

Number Number::operator+(const Number& o) const {
    if (exact_ && o.exact_) {
        if (auto r = rat_add(rat_, o.rat_)) return Number::of(*r);
    }
    return Number::of(flt_ + o.flt_);
}

Number Number::operator*(const Number& o) const {
    if (exact_ && o.exact_) {
        if (auto r = rat_mul(rat_, o.rat_)) return Number::of(*r);
    }
    return Number::of(flt_ * o.flt_);
}

Number Number::negated() const {
    if (exact_) {
        if (auto r = rat_neg(rat_)) return Number::of(*r);
    }
    return Number::of(-flt_);
}

Number Number::pow(int e) const {
    if (exact_) {
        if (auto r = rat_pow(rat_, e)) return Number::of(*r);
    }
    return Number::of(std::pow(flt_, e));
}

int number_cmp(const Number& a, const Number& b) {
    // exact constants order before floats of equal value, so the order is total
    if (a.exact() && b.exact()) return rat_cmp(a.rat(), b.rat());
    double x = a.value(), y = b.value();
    if (x < y) return -1;
    if (x > y) return 1;
    if (a.exact() != b.exact()) return a.exact() ? -1 : 1;
    return 0;
}

bool number_identical(const Number& a, const Number& b) {
    if (a.exact() != b.exact()) return false;
    if (a.exact()) return a.rat() == b.rat();
    return a.value() == b.value();
}

const char* func_name(Func f) {
    switch (f) {
        case Func::Sin: return "sin";
        case Func::Cos: return "cos";
        case Func::Exp: return "exp";
        case Func::Ln: return "ln";
        case Func::Sqrt: return "sqrt";
    }
    return "?";
}

struct ExprNode {
    ExprKind kind;
    Number num;               // Constant
    VarRef var;               // Variable
    int exponent = 0;         // Power
    Func fn = Func::Sin;      // Call
    std::vector<Expr> kids;

    static Expr make(ExprNode n) { return Expr(std::make_shared<const ExprNode>(std::move(n))); }
};

Expr::Expr() : node_(nullptr) { *this = constant(0LL); }

Expr Expr::constant(const Rational& r) { return constant(Number::of(r)); }
Expr Expr::constant(long long n) { return constant(Number::of(Rational(n))); }
Expr Expr::constant(double d) { return constant(Number::of(d)); }

Expr Expr::constant(const Number& n) {
    ExprNode node;
    node.kind = ExprKind::Constant;
    node.num = n;
    return ExprNode::make(std::move(node));
}

Expr Expr::variable(const VarRef& v) {
    ExprNode node;
    node.kind = ExprKind::Variable;
    node.var = v;
    return ExprNode::make(std::move(node));
}

Expr Expr::sum(std::vector<Expr> terms) {
    if (terms.empty()) return constant(0LL);
    if (terms.size() == 1) return terms.front();
    ExprNode node;
    node.kind = ExprKind::Sum;
    node.kids = std::move(terms);
    return ExprNode::make(std::move(node));
}

Expr Expr::product(std::vector<Expr> factors) {
    if (factors.empty()) return constant(1LL);
    if (factors.size() == 1) return factors.front();
    ExprNode node;
    node.kind = ExprKind::Product;
    node.kids = std::move(factors);
    return ExprNode::make(std::move(node));
}

Expr Expr::pow(Expr base, int exponent) {
    ExprNode node;
    node.kind = ExprKind::Power;
    node.exponent = exponent;
    node.kids.push_back(std::move(base));
    return ExprNode::make(std::move(node));
}

Expr Expr::negate(Expr e) {
    ExprNode node;
    node.kind = ExprKind::Negate;
    node.kids.push_back(std::move(e));
    return ExprNode::make(std::move(node));
}

Expr Expr::call(Func f, Expr arg) {
    ExprNode node;
    node.kind = ExprKind::Call;
    node.fn = f;
    node.kids.push_back(std::move(arg));
    return ExprNode::make(std::move(node));
}

ExprKind Expr::kind() const { return node_->kind; }
const Number& Expr::number() const { return node_->num; }
const VarRef& Expr::var() const { return node_->var; }
const std::vector<Expr>& Expr::args() const { return node_->kids; }
int Expr::exponent() const { return node_->exponent; }
Func Expr::func() const { return node_->fn; }

bool Expr::is_zero() const { return kind() == ExprKind::Constant && number().is_zero(); }
bool Expr::is_one() const { return kind() == ExprKind::Constant && number().is_one(); }

namespace {

int kind_rank(ExprKind k) {
    switch (k) {
        case ExprKind::Constant: return 0;
        case ExprKind::Variable: return 1;
        case ExprKind::Call: return 2;
        case ExprKind::Power: return 3;
        case ExprKind::Negate: return 4;
        case ExprKind::Product: return 5;
        case ExprKind::Sum: return 6;
    }
    return 7;
}

}  // namespace

int expr_cmp(const Expr& a, const Expr& b) {
    if (a.node() == b.node()) return 0;
    int ra = kind_rank(a.kind()), rb = kind_rank(b.kind());
    if (ra != rb) return ra < rb ? -1 : 1;
    switch (a.kind()) {
        case ExprKind::Constant: {
            int c = number_cmp(a.number(), b.number());
            if (c != 0) return c;
            // distinguish exact vs float of equal value
            if (a.number().exact() != b.number().exact()) return a.number().exact() ? -1 : 1;
            return 0;
        }
        case ExprKind::Variable: {
            if (a.var() == b.var()) return 0;
            return a.var() < b.var() ? -1 : 1;
        }
        case ExprKind::Call: {
            if (a.func() != b.func()) return a.func() < b.func() ? -1 : 1;
            return expr_cmp(a.args()[0], b.args()[0]);
        }
        case ExprKind::Power: {
            int c = expr_cmp(a.args()[0], b.args()[0]);
            if (c != 0) return c;
            if (a.exponent() != b.exponent()) return a.exponent() < b.exponent() ? -1 : 1;
            return 0;
        }
        case ExprKind::Negate:
            return expr_cmp(a.args()[0], b.args()[0]);
        case ExprKind::Product:
        case ExprKind::Sum: {
            const auto& xs = a.args();
            const auto& ys = b.args();
            size_t m = std::min(xs.size(), ys.size());
            for (size_t i = 0; i < m; ++i) {
                int c = expr_cmp(xs[i], ys[i]);
                if (c != 0) return c;
            }
            if (xs.size() != ys.size()) return xs.size() < ys.size() ? -1 : 1;
            return 0;
        }
    }
    return 0;
}

bool expr_equal(const Expr& a, const Expr& b) { return expr_cmp(a, b) == 0; }

namespace {

void collect_vars(const Expr& e, std::set<VarRef>& out) {
    switch (e.kind()) {
        case ExprKind::Constant: return;
        case ExprKind::Variable: out.insert(e.var()); return;
        default:
            for (const auto& k : e.args()) collect_vars(k, out);
    }
}

}  // namespace

std::set<VarRef> free_variables(const Expr& e) {
    std::set<VarRef> out;
    collect_vars(e, out);
    return out;
}

bool contains_var(const Expr& e, const VarRef& v) {
    switch (e.kind()) {
        case ExprKind::Constant: return false;
        case ExprKind::Variable: return e.var() == v;
        default:
            for (const auto& k : e.args())
                if (contains_var(k, v)) return true;
            return false;
    }
}

// ---------------------------------------------------------------------------
// Formatting. Re-parseable under the grammar; floats use shortest round-trip
// representation capped at 17 significant digits.

std::string format_double_shortest(double d) {
    for (int prec = 1; prec <= 17; ++prec) {
        std::ostringstream os;
        os.precision(prec);
        os << d;
        std::string s = os.str();
        if (std::stod(s) == d) return s;
    }
    std::ostringstream os;
    os.precision(17);
    os << d;
    return os.str();
}

namespace {

// precedence: 0 sum, 1 product, 2 unary minus, 3 power, 4 atom
constexpr int kPrecSum = 0, kPrecProduct = 1, kPrecNeg = 2, kPrecPower = 3, kPrecAtom = 4;

int precedence(const Expr& e) {
    switch (e.kind()) {
        case ExprKind::Sum: return kPrecSum;
        case ExprKind::Product: return kPrecProduct;
        case ExprKind::Negate: return kPrecNeg;
        case ExprKind::Power: return kPrecPower;
        case ExprKind::Constant: {
            const Number& n = e.number();
            bool negative = n.exact() ? n.rat().num < 0 : n.value() < 0;
            if (negative) return kPrecNeg;
            if (n.exact() && !n.rat().is_integer()) return kPrecProduct;  // prints as n/d
            return kPrecAtom;
        }
        default: return kPrecAtom;
    }
}

void write(const Expr& e, std::ostream& os, int parent_prec);

void write_wrapped(const Expr& e, std::ostream& os, int parent_prec) {
    if (precedence(e) < parent_prec) {
        os << '(';
        write(e, os, kPrecSum);
        os << ')';
    } else {
        write(e, os, parent_prec);
    }
}

// true if the term should be emitted after '-' with its sign stripped
bool starts_negative(const Expr& e) {
    switch (e.kind()) {
        case ExprKind::Negate: return true;
        case ExprKind::Constant:
            return e.number().exact() ? e.number().rat().num < 0 : e.number().value() < 0;
        case ExprKind::Product:
            return !e.args().empty() && starts_negative(e.args().front());
        default: return false;
    }
}

Expr strip_sign(const Expr& e) {
    switch (e.kind()) {
        case ExprKind::Negate: return e.args()[0];
        case ExprKind::Constant: return Expr::constant(e.number().negated());
        case ExprKind::Product: {
            std::vector<Expr> fs = e.args();
            fs.front() = strip_sign(fs.front());
            if (fs.front().is_one() && fs.size() > 1) fs.erase(fs.begin());
            return Expr::product(std::move(fs));
        }
        default: return e;
    }
}

void write(const Expr& e, std::ostream& os, int parent_prec) {
    switch (e.kind()) {
        case ExprKind::Constant: {
            const Number& n = e.number();
            if (n.exact()) os << n.rat().to_string();
            else os << format_double_shortest(n.value());
            return;
        }
        case ExprKind::Variable:
            os << var_name(e.var());
            return;
        case ExprKind::Call:
            os << func_name(e.func()) << '(';
            write(e.args()[0], os, kPrecSum);
            os << ')';
            return;
        case ExprKind::Negate:
            os << '-';
            write_wrapped(e.args()[0], os, kPrecNeg + 1);
            return;
        case ExprKind::Power: {
            const Expr& base = e.args()[0];
            if (precedence(base) < kPrecAtom) {
                os << '(';
                write(base, os, kPrecSum);
                os << ')';
            } else {
                write(base, os, kPrecAtom);
            }
            os << '^' << e.exponent();
            return;
        }
        case ExprKind::Product: {
            const auto& fs = e.args();
            std::size_t start = 0;
            // a leading -1 coefficient prints as a bare sign
            if (fs.size() >= 2 && fs[0].kind() == ExprKind::Constant) {
                const Number& c = fs[0].number();
                bool minus_one = c.exact() ? (c.rat().num == -1 && c.rat().den == 1)
                                           : c.value() == -1.0;
                if (minus_one) {
                    os << '-';
                    start = 1;
                }
            }
            bool first = true;
            for (std::size_t i = start; i < fs.size(); ++i) {
                if (!first) os << '*';
                write_wrapped(fs[i], os, kPrecProduct + (first ? 0 : 1));
                first = false;
            }
            return;
        }
        case ExprKind::Sum: {
            bool first = true;
            for (const auto& t : e.args()) {
                if (first) {
                    write_wrapped(t, os, kPrecSum + 1);
                    first = false;
                    continue;
                }
                if (starts_negative(t)) {
                    os << " - ";
                    write_wrapped(strip_sign(t), os, kPrecSum + 1);
                } else {
                    os << " + ";
                    write_wrapped(t, os, kPrecSum + 1);
                }
            }
            return;
        }
    }
    (void)parent_prec;
}

}  // namespace

std::string format(const Expr& e) {
    std::ostringstream os;
    write(e, os, kPrecSum);
    return os.str();
}

Expr add(const Expr& a, const Expr& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.is_constant() && b.is_constant()) return Expr::constant(a.number() + b.number());
    return Expr::sum({a, b});
}

Expr sub(const Expr& a, const Expr& b) { return add(a, neg(b)); }

Expr mul(const Expr& a, const Expr& b) {
    if (a.is_zero() || b.is_zero()) return Expr::constant(0LL);
    if (a.is_one()) return b;
    if (b.is_one()) return a;
    if (a.is_constant() && b.is_constant()) return Expr::constant(a.number() * b.number());
    return Expr::product({a, b});
}

Expr neg(const Expr& a) {
    if (a.is_constant()) return Expr::constant(a.number().negated());
    return Expr::negate(a);
}

}  // namespace hogm
