#include "hogm/lagrangian.hpp"

#include <cmath>
#include <stdexcept>

namespace hogm {

LagrangianSystem::LagrangianSystem(int n_, int k_, Expr L_) : n(n_), k(k_), L(std::move(L_)) {
    if (n < 1 || k < 1) throw std::invalid_argument("LagrangianSystem needs n, k >= 1");
    for (const auto& v : free_variables(L)) {
        if (v.kind != VarKind::Q)
            throw std::invalid_argument("Lagrangian may only contain q-variables; found " +
                                        var_name(v));
        if (v.index > n)
            throw std::invalid_argument("Lagrangian variable " + var_name(v) + " exceeds dof count " +
                                        std::to_string(n));
        if (v.level > k)
            throw std::invalid_argument("Lagrangian variable " + var_name(v) + ": level " +
                                        std::to_string(v.level) + " exceeds order " +
                                        std::to_string(k));
    }
}

MomentaTable jacobi_ostrogradsky_momenta(const LagrangianSystem& sys) {
    MomentaTable table;
    table.n = sys.n;
    table.k = sys.k;
    table.p_hat.assign(sys.n, std::vector<Expr>(sys.k, Expr::constant(0LL)));
    for (int i = 1; i <= sys.n; ++i) {
        for (int r = 1; r <= sys.k; ++r) {
            // p_hat^(r-1)_i = sum_{j=0}^{k-r} (-1)^j d_T^j (dL/dq_(r+j))
            std::vector<Expr> parts;
            for (int j = 0; j <= sys.k - r; ++j) {
                Expr dL = differentiate(sys.L, qvar(i, r + j));
                Expr term = iterated_dT(dL, j, sys.k);
                parts.push_back(j % 2 == 0 ? term : neg(term));
            }
            table.p_hat[i - 1][r - 1] = simplify(Expr::sum(std::move(parts)));
        }
    }
    return table;
}

MomentaTable poincare_cartan_coefficients(const LagrangianSystem& sys) {
    return jacobi_ostrogradsky_momenta(sys);
}

std::vector<Expr> euler_lagrange(const LagrangianSystem& sys) {
    std::vector<Expr> out;
    out.reserve(sys.n);
    for (int i = 1; i <= sys.n; ++i) {
        std::vector<Expr> parts;
        for (int j = 0; j <= sys.k; ++j) {
            Expr dL = differentiate(sys.L, qvar(i, j));
            Expr term = iterated_dT(dL, j, sys.k);
            parts.push_back(j % 2 == 0 ? term : neg(term));
        }
        out.push_back(simplify(Expr::sum(std::move(parts))));
    }
    return out;
}

StatePoint CoordinateMap::apply(const StatePoint& x) const {
    require_chart(x, source, "CoordinateMap::apply");
    Assignment a = chart_assignment(x);
    std::vector<double> vals;
    vals.reserve(components.size());
    for (const auto& c : components) vals.push_back(evaluate(c, a));
    return StatePoint(target, std::move(vals));
}

CoordinateMap legendre_ostrogradsky(const LagrangianSystem& sys) {
    MomentaTable momenta = jacobi_ostrogradsky_momenta(sys);
    CoordinateMap map;
    map.source = jetq_chart(sys.n, 2 * sys.k - 1);
    map.target = cotjet_chart(sys.n, sys.k);
    for (int j = 0; j < sys.k; ++j)
        for (int i = 1; i <= sys.n; ++i) map.components.push_back(Expr::variable(qvar(i, j)));
    for (int r = 0; r < sys.k; ++r)
        for (int i = 1; i <= sys.n; ++i) map.components.push_back(momenta.at(i, r));
    return map;
}

ExprMatrix highest_hessian(const LagrangianSystem& sys) {
    ExprMatrix h(sys.n, std::vector<Expr>(sys.n, Expr::constant(0LL)));
    for (int i = 1; i <= sys.n; ++i)
        for (int j = i; j <= sys.n; ++j) {
            Expr e = differentiate(differentiate(sys.L, qvar(i, sys.k)), qvar(j, sys.k));
            h[i - 1][j - 1] = e;
            h[j - 1][i - 1] = e;
        }
    return h;
}

RegularityVerdict is_regular_at(const LagrangianSystem& sys, const StatePoint& point, double tol) {
    require_chart(point, jetq_chart(sys.n, sys.k), "is_regular_at");
    Assignment a = chart_assignment(point);
    ExprMatrix h = highest_hessian(sys);
    std::vector<double> m(static_cast<std::size_t>(sys.n) * sys.n);
    for (int i = 0; i < sys.n; ++i)
        for (int j = 0; j < sys.n; ++j) m[i * sys.n + j] = evaluate(h[i][j], a);
    RegularityVerdict v;
    v.det = lu_det(m, sys.n);
    v.regular = std::abs(lu_det_row_scaled(m, sys.n)) > tol;
    return v;
}

Expr lagrangian_energy(const LagrangianSystem& sys) {
    MomentaTable momenta = jacobi_ostrogradsky_momenta(sys);
    std::vector<Expr> parts;
    for (int r = 1; r <= sys.k; ++r)
        for (int i = 1; i <= sys.n; ++i)
            parts.push_back(mul(Expr::variable(qvar(i, r)), momenta.at(i, r - 1)));
    parts.push_back(neg(sys.L));
    return simplify(Expr::sum(std::move(parts)));
}

ConstrainedSystem extend_with_constraints(const LagrangianSystem& sys,
                                          const std::vector<Expr>& constraints) {
    const int m = static_cast<int>(constraints.size());
    for (const auto& phi : constraints) {
        for (const auto& v : free_variables(phi)) {
            if (v.kind != VarKind::Q)
                throw std::invalid_argument("constraint may only contain q-variables; found " +
                                            var_name(v));
            if (v.index > sys.n || v.level > sys.k)
                throw std::invalid_argument("constraint variable " + var_name(v) +
                                            " outside JetQ(k) of the base system");
        }
    }
    if (m == 0) return ConstrainedSystem{sys, sys.n, 0};

    // extended Lagrangian L + lambda_a Phi^a with the multiplier represented as
    // configuration dof n+a (level 0), so d_T sees its time derivatives
    std::vector<Expr> parts{sys.L};
    for (int a = 1; a <= m; ++a)
        parts.push_back(mul(Expr::variable(qvar(sys.n + a, 0)), constraints[a - 1]));
    Expr extended = simplify(Expr::sum(std::move(parts)));
    return ConstrainedSystem{LagrangianSystem(sys.n + m, sys.k, extended), sys.n, m};
}

}  // namespace hogm
