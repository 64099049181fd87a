#include "hogm/calculus.hpp"

#include <cmath>
#include <vector>

namespace hogm {

namespace {

Expr simplify_rec(const Expr& e);

std::optional<long long> exact_isqrt(long long v) {
    if (v < 0) return std::nullopt;
    auto r = static_cast<long long>(std::llround(std::sqrt(static_cast<double>(v))));
    for (long long c = std::max<long long>(0, r - 2); c <= r + 2; ++c)
        if (c * c == v) return c;
    return std::nullopt;
}

Expr simplify_power(const Expr& base, int expo);

// (coefficient, core) of a canonical term; core is 1 for pure constants
std::pair<Number, Expr> split_term(const Expr& t) {
    if (t.kind() == ExprKind::Constant) return {t.number(), Expr::constant(1LL)};
    if (t.kind() == ExprKind::Product) {
        const auto& fs = t.args();
        if (!fs.empty() && fs.front().kind() == ExprKind::Constant) {
            std::vector<Expr> rest(fs.begin() + 1, fs.end());
            return {fs.front().number(), Expr::product(std::move(rest))};
        }
    }
    return {Number::of(Rational(1)), t};
}

Expr rebuild_term(const Number& coeff, const Expr& core) {
    if (core.is_one()) return Expr::constant(coeff);
    if (coeff.is_one()) return core;
    std::vector<Expr> fs{Expr::constant(coeff)};
    if (core.kind() == ExprKind::Product) {
        for (const auto& f : core.args()) fs.push_back(f);
    } else {
        fs.push_back(core);
    }
    return Expr::product(std::move(fs));
}

Expr simplify_sum(const std::vector<Expr>& terms) {
    std::map<Expr, Number, ExprLess> buckets;
    std::vector<Expr> flat;
    for (const auto& t : terms) {
        if (t.kind() == ExprKind::Sum) {
            for (const auto& s : t.args()) flat.push_back(s);
        } else {
            flat.push_back(t);
        }
    }
    for (const auto& t : flat) {
        auto [coeff, core] = split_term(t);
        auto it = buckets.find(core);
        if (it == buckets.end()) buckets.emplace(core, coeff);
        else it->second = it->second + coeff;
    }
    std::vector<Expr> out;
    for (const auto& [core, coeff] : buckets) {
        if (coeff.is_zero()) continue;
        out.push_back(rebuild_term(coeff, core));
    }
    if (out.empty()) return Expr::constant(0LL);
    return Expr::sum(std::move(out));
}

Expr simplify_product(const std::vector<Expr>& factors) {
    Number coeff = Number::of(Rational(1));
    std::map<Expr, long long, ExprLess> powers;
    std::vector<Expr> flat;
    for (const auto& f : factors) {
        if (f.kind() == ExprKind::Product) {
            for (const auto& g : f.args()) flat.push_back(g);
        } else {
            flat.push_back(f);
        }
    }
    for (const auto& f : flat) {
        if (f.kind() == ExprKind::Constant) {
            coeff = coeff * f.number();
            continue;
        }
        if (f.kind() == ExprKind::Power) {
            powers[f.args()[0]] += f.exponent();
        } else {
            powers[f] += 1;
        }
    }
    if (coeff.is_zero()) return Expr::constant(0LL);
    std::vector<Expr> out;
    for (const auto& [base, expo] : powers) {
        if (expo == 0) continue;
        Expr p = simplify_power(base, static_cast<int>(expo));
        if (p.kind() == ExprKind::Constant) {
            coeff = coeff * p.number();
            continue;
        }
        out.push_back(p);
    }
    if (coeff.is_zero()) return Expr::constant(0LL);
    // constant * (single sum): distribute, so like terms across sums cancel
    if (out.size() == 1 && out.front().kind() == ExprKind::Sum && !coeff.is_one()) {
        const Expr c = Expr::constant(coeff);
        std::vector<Expr> distributed;
        distributed.reserve(out.front().args().size());
        for (const auto& t : out.front().args()) distributed.push_back(simplify_product({c, t}));
        return simplify_sum(distributed);
    }
    if (out.empty()) return Expr::constant(coeff);
    if (!coeff.is_one()) out.insert(out.begin(), Expr::constant(coeff));
    if (out.size() == 1) return out.front();
    return Expr::product(std::move(out));
}

Expr simplify_power(const Expr& base, int expo) {
    if (expo == 1) return base;
    if (base.kind() == ExprKind::Power)
        return simplify_power(base.args()[0], base.exponent() * expo);
    if (base.kind() == ExprKind::Product) {
        std::vector<Expr> fs;
        fs.reserve(base.args().size());
        for (const auto& f : base.args()) fs.push_back(simplify_power(f, expo));
        return simplify_product(fs);
    }
    if (base.kind() == ExprKind::Constant) {
        if (expo == 0) return Expr::constant(1LL);
        if (base.number().is_zero() && expo < 0) return Expr::pow(base, expo);  // 1/0: eval-time concern
        return Expr::constant(base.number().pow(expo));
    }
    if (expo == 0) return Expr::constant(1LL);
    return Expr::pow(base, expo);
}

Expr simplify_call(Func f, const Expr& arg) {
    if (arg.kind() == ExprKind::Constant) {
        const Number& n = arg.number();
        if (n.exact()) {
            const Rational& r = n.rat();
            switch (f) {
                case Func::Sin:
                    if (r.is_zero()) return Expr::constant(0LL);
                    break;
                case Func::Cos:
                    if (r.is_zero()) return Expr::constant(1LL);
                    break;
                case Func::Exp:
                    if (r.is_zero()) return Expr::constant(1LL);
                    break;
                case Func::Ln:
                    if (r.is_one()) return Expr::constant(0LL);
                    break;
                case Func::Sqrt: {
                    if (r.num >= 0) {
                        auto sn = exact_isqrt(r.num);
                        auto sd = exact_isqrt(r.den);
                        if (sn && sd) return Expr::constant(Rational(*sn, *sd));
                    }
                    break;
                }
            }
        } else {
            double x = n.value();
            switch (f) {
                case Func::Sin: return Expr::constant(std::sin(x));
                case Func::Cos: return Expr::constant(std::cos(x));
                case Func::Exp: return Expr::constant(std::exp(x));
                case Func::Ln:
                    if (x > 0) return Expr::constant(std::log(x));
                    break;
                case Func::Sqrt:
                    if (x >= 0) return Expr::constant(std::sqrt(x));
                    break;
            }
        }
    }
    return Expr::call(f, arg);
}

Expr simplify_rec(const Expr& e) {
    switch (e.kind()) {
        case ExprKind::Constant:
        case ExprKind::Variable:
            return e;
        case ExprKind::Negate:
            return simplify_product({Expr::constant(-1LL), simplify_rec(e.args()[0])});
        case ExprKind::Sum: {
            std::vector<Expr> kids;
            kids.reserve(e.args().size());
            for (const auto& k : e.args()) kids.push_back(simplify_rec(k));
            return simplify_sum(kids);
        }
        case ExprKind::Product: {
            std::vector<Expr> kids;
            kids.reserve(e.args().size());
            for (const auto& k : e.args()) kids.push_back(simplify_rec(k));
            return simplify_product(kids);
        }
        case ExprKind::Power:
            return simplify_power(simplify_rec(e.args()[0]), e.exponent());
        case ExprKind::Call:
            return simplify_call(e.func(), simplify_rec(e.args()[0]));
    }
    return e;
}

Expr lpow(const Expr& b, int e) {
    if (e == 0) return Expr::constant(1LL);
    if (e == 1) return b;
    return Expr::pow(b, e);
}

Expr diff_rec(const Expr& e, const VarRef& v) {
    switch (e.kind()) {
        case ExprKind::Constant:
            return Expr::constant(0LL);
        case ExprKind::Variable:
            return Expr::constant(e.var() == v ? 1LL : 0LL);
        case ExprKind::Negate:
            return neg(diff_rec(e.args()[0], v));
        case ExprKind::Sum: {
            std::vector<Expr> parts;
            for (const auto& t : e.args()) {
                Expr d = diff_rec(t, v);
                if (!d.is_zero()) parts.push_back(d);
            }
            return Expr::sum(std::move(parts));
        }
        case ExprKind::Product: {
            const auto& fs = e.args();
            std::vector<Expr> parts;
            for (std::size_t i = 0; i < fs.size(); ++i) {
                Expr d = diff_rec(fs[i], v);
                if (d.is_zero()) continue;
                Expr acc = d;
                for (std::size_t j = 0; j < fs.size(); ++j) {
                    if (j == i) continue;
                    acc = mul(acc, fs[j]);
                }
                parts.push_back(acc);
            }
            return Expr::sum(std::move(parts));
        }
        case ExprKind::Power: {
            const Expr& b = e.args()[0];
            Expr db = diff_rec(b, v);
            if (db.is_zero()) return Expr::constant(0LL);
            Expr factor = mul(Expr::constant(static_cast<long long>(e.exponent())),
                              lpow(b, e.exponent() - 1));
            return mul(factor, db);
        }
        case ExprKind::Call: {
            const Expr& u = e.args()[0];
            Expr du = diff_rec(u, v);
            if (du.is_zero()) return Expr::constant(0LL);
            Expr outer;
            switch (e.func()) {
                case Func::Sin: outer = Expr::call(Func::Cos, u); break;
                case Func::Cos: outer = neg(Expr::call(Func::Sin, u)); break;
                case Func::Exp: outer = Expr::call(Func::Exp, u); break;
                case Func::Ln: outer = lpow(u, -1); break;
                case Func::Sqrt:
                    outer = mul(Expr::constant(Rational(1, 2)), lpow(Expr::call(Func::Sqrt, u), -1));
                    break;
            }
            return mul(outer, du);
        }
    }
    return Expr::constant(0LL);
}

Expr subst_rec(const Expr& e, const std::map<VarRef, Expr, std::less<VarRef>>& bindings) {
    switch (e.kind()) {
        case ExprKind::Constant:
            return e;
        case ExprKind::Variable: {
            auto it = bindings.find(e.var());
            return it != bindings.end() ? it->second : e;
        }
        case ExprKind::Negate:
            return Expr::negate(subst_rec(e.args()[0], bindings));
        case ExprKind::Power:
            return Expr::pow(subst_rec(e.args()[0], bindings), e.exponent());
        case ExprKind::Call:
            return Expr::call(e.func(), subst_rec(e.args()[0], bindings));
        case ExprKind::Sum: {
            std::vector<Expr> kids;
            kids.reserve(e.args().size());
            for (const auto& k : e.args()) kids.push_back(subst_rec(k, bindings));
            return Expr::sum(std::move(kids));
        }
        case ExprKind::Product: {
            std::vector<Expr> kids;
            kids.reserve(e.args().size());
            for (const auto& k : e.args()) kids.push_back(subst_rec(k, bindings));
            return Expr::product(std::move(kids));
        }
    }
    return e;
}

double powi(double b, int e) {
    if (e < 0) return 1.0 / powi(b, -e);
    double acc = 1.0;
    while (e > 0) {
        if (e & 1) acc *= b;
        e >>= 1;
        if (e) b *= b;
    }
    return acc;
}

}  // namespace

Expr simplify(const Expr& e) { return simplify_rec(e); }

Expr differentiate(const Expr& e, const VarRef& v) { return simplify_rec(diff_rec(e, v)); }

Expr substitute(const Expr& e, const std::map<VarRef, Expr, std::less<VarRef>>& bindings) {
    return simplify_rec(subst_rec(e, bindings));
}

double evaluate(const Expr& e, const Assignment& a) {
    switch (e.kind()) {
        case ExprKind::Constant:
            return e.number().value();
        case ExprKind::Variable: {
            auto it = a.find(e.var());
            if (it == a.end()) throw UnboundVariableError(e.var());
            return it->second;
        }
        case ExprKind::Negate:
            return -evaluate(e.args()[0], a);
        case ExprKind::Sum: {
            double s = 0.0;
            for (const auto& t : e.args()) s += evaluate(t, a);
            return s;
        }
        case ExprKind::Product: {
            double p = 1.0;
            for (const auto& f : e.args()) p *= evaluate(f, a);
            return p;
        }
        case ExprKind::Power:
            return powi(evaluate(e.args()[0], a), e.exponent());
        case ExprKind::Call: {
            double u = evaluate(e.args()[0], a);
            switch (e.func()) {
                case Func::Sin: return std::sin(u);
                case Func::Cos: return std::cos(u);
                case Func::Exp: return std::exp(u);
                case Func::Ln:
                    if (u <= 0.0) throw DomainError("ln of non-positive value");
                    return std::log(u);
                case Func::Sqrt:
                    if (u < 0.0) throw DomainError("sqrt of negative value");
                    return std::sqrt(u);
            }
        }
    }
    throw EvalError("unreachable expression kind");
}

std::optional<Rational> try_evaluate_rational(const Expr& e, const RationalAssignment& a) {
    switch (e.kind()) {
        case ExprKind::Constant:
            if (!e.number().exact()) return std::nullopt;
            return e.number().rat();
        case ExprKind::Variable: {
            auto it = a.find(e.var());
            if (it == a.end()) return std::nullopt;
            return it->second;
        }
        case ExprKind::Negate: {
            auto u = try_evaluate_rational(e.args()[0], a);
            if (!u) return std::nullopt;
            return rat_neg(*u);
        }
        case ExprKind::Sum: {
            Rational s(0);
            for (const auto& t : e.args()) {
                auto u = try_evaluate_rational(t, a);
                if (!u) return std::nullopt;
                auto r = rat_add(s, *u);
                if (!r) return std::nullopt;
                s = *r;
            }
            return s;
        }
        case ExprKind::Product: {
            Rational p(1);
            for (const auto& f : e.args()) {
                auto u = try_evaluate_rational(f, a);
                if (!u) return std::nullopt;
                auto r = rat_mul(p, *u);
                if (!r) return std::nullopt;
                p = *r;
            }
            return p;
        }
        case ExprKind::Power: {
            auto b = try_evaluate_rational(e.args()[0], a);
            if (!b) return std::nullopt;
            return rat_pow(*b, e.exponent());
        }
        case ExprKind::Call:
            return std::nullopt;
    }
    return std::nullopt;
}

EquivalenceResult equivalent_report(const Expr& e1, const Expr& e2) {
    Expr diff = simplify(sub(e1, e2));
    if (diff.is_zero()) return {true, true, "symbolic zero"};

    std::set<VarRef> vars = free_variables(e1);
    for (const auto& v : free_variables(e2)) vars.insert(v);

    UniformRng rng(kEquivalenceSeed);
    for (int s = 0; s < kEquivalenceSamples; ++s) {
        Assignment a;
        for (const auto& v : vars) a[v] = rng.uniform(-2.0, 2.0);
        try {
            double d = evaluate(e1, a) - evaluate(e2, a);
            if (std::abs(d) >= kEquivalenceTol) {
                return {false, true,
                        "difference " + std::to_string(d) + " at sample " + std::to_string(s)};
            }
        } catch (const EvalError& err) {
            return {false, false, std::string("inconclusive: ") + err.what()};
        }
    }
    return {true, true, "agrees at " + std::to_string(kEquivalenceSamples) + " random samples"};
}

bool equivalent(const Expr& e1, const Expr& e2) { return equivalent_report(e1, e2).equivalent; }

}  // namespace hogm
