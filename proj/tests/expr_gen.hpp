#ifndef HOGM_TESTS_EXPR_GEN_HPP
#define HOGM_TESTS_EXPR_GEN_HPP

#include <cmath>
#include <string>

#include "hogm/calculus.hpp"
#include "hogm/parse.hpp"

namespace hogm::testgen {

// Random expression over {q1_0, q2_0, q1_1} with rational constants; shapes
// chosen so central differences stay well-conditioned on [-2,2]. ln and sqrt
// are wrapped as f(1 + g^2) to stay inside their domains.
inline Expr gen_expr(UniformRng& rng, int depth) {
    double pick = rng.uniform(0.0, 1.0);
    if (depth <= 0 || pick < 0.28) {
        double which = rng.uniform(0.0, 3.0);
        if (which < 1.0)
            return Expr::constant(Rational(static_cast<long long>(rng.uniform(-4.0, 5.0))));
        if (which < 2.0)
            return Expr::variable(qvar(1 + (static_cast<int>(rng.uniform(0.0, 2.0)) % 2), 0));
        return Expr::variable(qvar(1, 1));
    }
    if (pick < 0.50) return Expr::sum({gen_expr(rng, depth - 1), gen_expr(rng, depth - 1)});
    if (pick < 0.70) return Expr::product({gen_expr(rng, depth - 1), gen_expr(rng, depth - 1)});
    if (pick < 0.80)
        return Expr::pow(gen_expr(rng, depth - 1), 1 + static_cast<int>(rng.uniform(0.0, 3.0)));
    double f = rng.uniform(0.0, 5.0);
    Expr arg = gen_expr(rng, depth - 1);
    if (f < 1.0) return Expr::call(Func::Sin, arg);
    if (f < 2.0) return Expr::call(Func::Cos, arg);
    if (f < 3.0) return Expr::call(Func::Exp, mul(Expr::constant(Rational(1, 4)), arg));
    Expr safe = add(Expr::constant(1LL), Expr::pow(arg, 2));
    return f < 4.0 ? Expr::call(Func::Ln, safe) : Expr::call(Func::Sqrt, safe);
}

struct PropertyRunStats {
    int checked = 0;
    int attempts = 0;
    std::string first_failure;  // empty when everything held
};

// Runs the symbolic-kernel property suite on `target` generated expressions:
// derivative vs central finite difference (h = 1e-6, rel. err 1e-6), simplify
// idempotence, parse/format round trip.
inline PropertyRunStats run_kernel_properties(int target) {
    PropertyRunStats stats;
    UniformRng rng(kEquivalenceSeed);
    const double h = 1e-6;
    while (stats.checked < target && stats.attempts < 4 * target) {
        ++stats.attempts;
        Expr e = gen_expr(rng, 3);

        Expr canon = simplify(e);
        if (!expr_equal(canon, simplify(canon))) {
            stats.first_failure = "simplify not idempotent on " + format(e);
            return stats;
        }
        if (!expr_equal(simplify(parse(format(canon))), canon)) {
            stats.first_failure = "round trip broke on " + format(canon);
            return stats;
        }

        std::set<VarRef> vars = free_variables(e);
        if (vars.empty()) {
            ++stats.checked;
            continue;
        }
        VarRef v = *vars.begin();
        Assignment a;
        for (const auto& w : vars) a[w] = rng.uniform(-2.0, 2.0);
        double exact, plus, minus;
        try {
            exact = evaluate(differentiate(e, v), a);
            Assignment ap = a, am = a;
            ap[v] += h;
            am[v] -= h;
            plus = evaluate(e, ap);
            minus = evaluate(e, am);
        } catch (const EvalError&) {
            continue;
        }
        if (!std::isfinite(plus) || !std::isfinite(minus) || std::abs(plus) > 1e3 ||
            std::abs(minus) > 1e3)
            continue;
        double fd = (plus - minus) / (2.0 * h);
        if (std::abs(fd - exact) > 1e-6 * (1.0 + std::abs(exact))) {
            stats.first_failure = "finite difference mismatch on " + format(e) + " wrt " +
                                  var_name(v) + ": fd=" + std::to_string(fd) +
                                  " exact=" + std::to_string(exact);
            return stats;
        }
        ++stats.checked;
    }
    return stats;
}

}  // namespace hogm::testgen

#endif
