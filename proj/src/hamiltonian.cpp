#include "hogm/hamiltonian.hpp"

#include <cmath>

namespace hogm {

namespace {

bool contains_level(const Expr& e, VarKind kind, int level) {
    for (const auto& v : free_variables(e))
        if (v.kind == kind && v.level == level) return true;
    return false;
}

std::map<VarRef, Expr, std::less<VarRef>> zero_bindings(VarKind kind, int n, int level) {
    std::map<VarRef, Expr, std::less<VarRef>> b;
    for (int i = 1; i <= n; ++i) b[VarRef{kind, i, level}] = Expr::constant(0LL);
    return b;
}

}  // namespace

HamiltonianSystem::HamiltonianSystem(int n_, int k_, Expr H_) : n(n_), k(k_), H(std::move(H_)) {
    if (n < 1 || k < 1) throw std::invalid_argument("HamiltonianSystem needs n, k >= 1");
    for (const auto& v : free_variables(H)) {
        if (v.kind != VarKind::Q && v.kind != VarKind::P)
            throw std::invalid_argument("Hamiltonian may only contain q/p variables; found " +
                                        var_name(v));
        if (v.index > n)
            throw std::invalid_argument("Hamiltonian variable " + var_name(v) +
                                        " exceeds dof count " + std::to_string(n));
        if (v.level > k - 1)
            throw std::invalid_argument("Hamiltonian variable " + var_name(v) + ": level " +
                                        std::to_string(v.level) + " exceeds k-1 = " +
                                        std::to_string(k - 1));
    }
}

std::vector<double> LegendreInverse::solve_top(const StatePoint& cotjet_point) const {
    Assignment a = chart_assignment(cotjet_point);
    const int n = static_cast<int>(mode == Mode::Symbolic ? q_top.size() : dL_top.size());
    if (mode == Mode::Symbolic) {
        std::vector<double> out(n);
        for (int i = 0; i < n; ++i) out[i] = evaluate(q_top[i], a);
        return out;
    }
    // Newton on F(x) = dL/dq_(k)(q, x) - p^(k-1)
    const int k = cotjet_point.chart.order;
    std::vector<double> x(n, 0.0);
    std::vector<double> target(n);
    for (int i = 1; i <= n; ++i) target[i - 1] = a.at(pvar(i, k - 1));
    for (int iter = 0; iter < max_iterations; ++iter) {
        Assignment jet = a;  // q-levels <= k-1 are shared names in both charts
        for (int i = 1; i <= n; ++i) jet[qvar(i, k)] = x[i - 1];
        std::vector<double> f(n);
        double norm = 0.0;
        for (int i = 0; i < n; ++i) {
            f[i] = evaluate(dL_top[i], jet) - target[i];
            norm = std::max(norm, std::abs(f[i]));
        }
        if (norm < tol) return x;
        std::vector<double> jac(static_cast<std::size_t>(n) * n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) jac[i * n + j] = evaluate(hessian[i][j], jet);
        std::vector<double> step;
        if (!lu_solve(jac, f, n, step))
            throw InversionFailedError("Newton iteration hit a singular Hessian");
        for (int i = 0; i < n; ++i) x[i] -= step[i];
    }
    throw InversionFailedError("Newton did not converge in " + std::to_string(max_iterations) +
                               " iterations");
}

CoordinateMap fiber_derivative(const HamiltonianSystem& hsys) {
    CoordinateMap map;
    map.source = cotjet_chart(hsys.n, hsys.k);
    map.target = tanjet_chart(hsys.n, hsys.k);
    for (int j = 0; j < hsys.k; ++j)
        for (int i = 1; i <= hsys.n; ++i) map.components.push_back(Expr::variable(qvar(i, j)));
    for (int j = 0; j < hsys.k; ++j)
        for (int i = 1; i <= hsys.n; ++i)
            map.components.push_back(differentiate(hsys.H, pvar(i, j)));
    return map;
}

KthOrderReport is_kth_order(const HamiltonianSystem& hsys) {
    KthOrderReport report;
    for (int j = 0; j + 1 <= hsys.k - 1; ++j) {
        for (int i = 1; i <= hsys.n; ++i) {
            Expr lhs = differentiate(hsys.H, pvar(i, j));
            EquivalenceResult r = equivalent_report(lhs, Expr::variable(qvar(i, j + 1)));
            KthOrderIdentity id;
            id.dof = i;
            id.level = j;
            id.holds = r.equivalent;
            id.detail = "dH/dp^(" + std::to_string(j) + ")_" + std::to_string(i) + " = " +
                        format(lhs) + (r.equivalent ? "" : "  (expected " +
                        var_name(qvar(i, j + 1)) + "; " + r.diagnostic + ")");
            report.identities.push_back(std::move(id));
            report.is_kth_order = report.is_kth_order && r.equivalent;
        }
    }
    return report;
}

CoordinateMap reduced_fiber_derivative(const HamiltonianSystem& hsys) {
    KthOrderReport report = is_kth_order(hsys);
    if (!report.is_kth_order) {
        for (const auto& id : report.identities)
            if (!id.holds) throw NotKthOrderError(id.detail);
        throw NotKthOrderError("not a kth-order Hamiltonian");
    }
    CoordinateMap map;
    map.source = cotjet_chart(hsys.n, hsys.k);
    map.target = jetq_chart(hsys.n, hsys.k);
    for (int j = 0; j < hsys.k; ++j)
        for (int i = 1; i <= hsys.n; ++i) map.components.push_back(Expr::variable(qvar(i, j)));
    for (int i = 1; i <= hsys.n; ++i)
        map.components.push_back(differentiate(hsys.H, pvar(i, hsys.k - 1)));
    return map;
}

namespace {

ExprMatrix top_momentum_hessian(const HamiltonianSystem& hsys) {
    ExprMatrix h(hsys.n, std::vector<Expr>(hsys.n, Expr::constant(0LL)));
    for (int i = 1; i <= hsys.n; ++i)
        for (int j = i; j <= hsys.n; ++j) {
            Expr e = differentiate(differentiate(hsys.H, pvar(i, hsys.k - 1)), pvar(j, hsys.k - 1));
            h[i - 1][j - 1] = e;
            h[j - 1][i - 1] = e;
        }
    return h;
}

}  // namespace

RegularityVerdict is_regular_hamiltonian_at(const HamiltonianSystem& hsys, const StatePoint& point,
                                            double tol) {
    KthOrderReport report = is_kth_order(hsys);
    if (!report.is_kth_order) throw NotKthOrderError("regularity is defined for kth-order Hamiltonians");
    require_chart(point, cotjet_chart(hsys.n, hsys.k), "is_regular_hamiltonian_at");
    Assignment a = chart_assignment(point);
    ExprMatrix h = top_momentum_hessian(hsys);
    std::vector<double> m(static_cast<std::size_t>(hsys.n) * hsys.n);
    for (int i = 0; i < hsys.n; ++i)
        for (int j = 0; j < hsys.n; ++j) m[i * hsys.n + j] = evaluate(h[i][j], a);
    RegularityVerdict v;
    v.det = lu_det(m, hsys.n);
    v.regular = std::abs(lu_det_row_scaled(m, hsys.n)) > tol;
    return v;
}

std::vector<Expr> hamilton_vector_field(const HamiltonianSystem& hsys) {
    std::vector<Expr> out;
    out.reserve(static_cast<std::size_t>(2 * hsys.k * hsys.n));
    for (int j = 0; j < hsys.k; ++j)
        for (int i = 1; i <= hsys.n; ++i) out.push_back(differentiate(hsys.H, pvar(i, j)));
    for (int j = 0; j < hsys.k; ++j)
        for (int i = 1; i <= hsys.n; ++i)
            out.push_back(simplify(neg(differentiate(hsys.H, qvar(i, j)))));
    return out;
}

CanonicalHamiltonian canonical_hamiltonian(const LagrangianSystem& lsys) {
    const int n = lsys.n, k = lsys.k;
    ExprMatrix hess = highest_hessian(lsys);

    Expr det = sym_det(hess);
    if (equivalent(det, Expr::constant(0LL)))
        throw SingularLagrangianError("Hessian determinant is symbolically zero: det = " +
                                      format(det));

    std::vector<Expr> dL_top(n, Expr::constant(0LL));
    for (int i = 1; i <= n; ++i) dL_top[i - 1] = differentiate(lsys.L, qvar(i, k));

    bool affine = true;
    for (const auto& row : hess)
        for (const auto& e : row)
            if (contains_level(e, VarKind::Q, k)) affine = false;

    CanonicalHamiltonian out;
    if (affine) {
        // solve W q~ = p^(k-1) - dL/dq_(k)|_{q_(k)=0} symbolically
        auto zeros = zero_bindings(VarKind::Q, n, k);
        std::vector<Expr> rhs(n, Expr::constant(0LL));
        for (int i = 1; i <= n; ++i)
            rhs[i - 1] =
                sub(Expr::variable(pvar(i, k - 1)), substitute(dL_top[i - 1], zeros));
        auto solved = sym_linear_solve(hess, rhs);
        if (!solved)
            throw SingularLagrangianError("symbolic linear solve failed on the Hessian");

        std::map<VarRef, Expr, std::less<VarRef>> top_bindings;
        for (int i = 1; i <= n; ++i) top_bindings[qvar(i, k)] = (*solved)[i - 1];

        std::vector<Expr> parts;
        for (int j = 0; j + 1 <= k - 1; ++j)
            for (int i = 1; i <= n; ++i)
                parts.push_back(
                    mul(Expr::variable(pvar(i, j)), Expr::variable(qvar(i, j + 1))));
        for (int i = 1; i <= n; ++i)
            parts.push_back(mul(Expr::variable(pvar(i, k - 1)), (*solved)[i - 1]));
        parts.push_back(neg(substitute(lsys.L, top_bindings)));
        Expr H = simplify(Expr::sum(std::move(parts)));

        out.symbolic = true;
        out.system = HamiltonianSystem(n, k, H);
        out.inverse.mode = LegendreInverse::Mode::Symbolic;
        out.inverse.q_top = *solved;
        HamiltonianSystem hs = out.system;
        out.value = [hs](const StatePoint& x) {
            require_chart(x, cotjet_chart(hs.n, hs.k), "canonical H value");
            return evaluate(hs.H, chart_assignment(x));
        };
        return out;
    }

    out.symbolic = false;
    out.inverse.mode = LegendreInverse::Mode::NumericNewton;
    out.inverse.dL_top = dL_top;
    out.inverse.hessian = hess;
    Expr L = lsys.L;
    LegendreInverse inv = out.inverse;
    out.value = [n, k, L, inv](const StatePoint& x) {
        require_chart(x, cotjet_chart(n, k), "canonical H value");
        std::vector<double> q_top = inv.solve_top(x);
        Assignment a = chart_assignment(x);
        Assignment jet;
        for (int j = 0; j < k; ++j)
            for (int i = 1; i <= n; ++i) jet[qvar(i, j)] = a.at(qvar(i, j));
        for (int i = 1; i <= n; ++i) jet[qvar(i, k)] = q_top[i - 1];
        double H = 0.0;
        for (int j = 0; j + 1 <= k - 1; ++j)
            for (int i = 1; i <= n; ++i) H += a.at(pvar(i, j)) * a.at(qvar(i, j + 1));
        for (int i = 1; i <= n; ++i) H += a.at(pvar(i, k - 1)) * q_top[i - 1];
        return H - evaluate(L, jet);
    };
    return out;
}

ReconstructedLagrangian reconstruct_lagrangian(const HamiltonianSystem& hsys) {
    const int n = hsys.n, k = hsys.k;
    KthOrderReport order = is_kth_order(hsys);
    if (!order.is_kth_order) {
        for (const auto& id : order.identities)
            if (!id.holds) throw NotKthOrderError(id.detail);
    }
    ExprMatrix a = top_momentum_hessian(hsys);
    Expr det = sym_det(a);
    if (equivalent(det, Expr::constant(0LL)))
        throw IrregularError("d2H/dp^(k-1)^2 is symbolically singular: det = " + format(det));

    // G = theta(X_H) - H = sum_j p^(j) dH/dp^(j) - H
    std::vector<Expr> parts;
    for (int j = 0; j < k; ++j)
        for (int i = 1; i <= n; ++i)
            parts.push_back(mul(Expr::variable(pvar(i, j)), differentiate(hsys.H, pvar(i, j))));
    parts.push_back(neg(hsys.H));
    Expr G = simplify(Expr::sum(std::move(parts)));

    for (int s = 0; s + 1 <= k - 1; ++s) {
        for (int i = 1; i <= n; ++i) {
            Expr dG = differentiate(G, pvar(i, s));
            EquivalenceResult r = equivalent_report(dG, Expr::constant(0LL));
            if (!r.equivalent)
                throw NotProjectableError("theta(X_H) - H depends on p^(" + std::to_string(s) +
                                          ")_" + std::to_string(i) + ": d/dp = " + format(dG));
        }
    }

    std::vector<Expr> dH_top(n, Expr::constant(0LL));
    for (int i = 1; i <= n; ++i) dH_top[i - 1] = differentiate(hsys.H, pvar(i, k - 1));
    bool affine = true;
    for (const auto& row : a)
        for (const auto& e : row)
            if (contains_level(e, VarKind::P, k - 1)) affine = false;

    ReconstructedLagrangian out;
    if (affine) {
        // solve d2H/dp^2 * p = q_(k) - dH/dp^(k-1)|_{p^(k-1)=0} for p^(k-1)
        auto zeros = zero_bindings(VarKind::P, n, k - 1);
        std::vector<Expr> rhs(n, Expr::constant(0LL));
        for (int i = 1; i <= n; ++i)
            rhs[i - 1] = sub(Expr::variable(qvar(i, k)), substitute(dH_top[i - 1], zeros));
        auto solved = sym_linear_solve(a, rhs);
        if (!solved) throw IrregularError("symbolic linear solve failed on d2H/dp^2");

        std::map<VarRef, Expr, std::less<VarRef>> bindings;
        for (int s = 0; s + 1 <= k - 1; ++s)
            for (int i = 1; i <= n; ++i) bindings[pvar(i, s)] = Expr::constant(0LL);
        for (int i = 1; i <= n; ++i) bindings[pvar(i, k - 1)] = (*solved)[i - 1];
        Expr L = substitute(G, bindings);
        out.symbolic = true;
        out.system = LagrangianSystem(n, k, L);
        LagrangianSystem ls = out.system;
        out.value = [ls](const StatePoint& x) {
            require_chart(x, jetq_chart(ls.n, ls.k), "reconstructed L value");
            return evaluate(ls.L, chart_assignment(x));
        };
        return out;
    }

    out.symbolic = false;
    Expr Gc = G;
    ExprMatrix hess = a;
    std::vector<Expr> top = dH_top;
    out.value = [n, k, Gc, hess, top](const StatePoint& x) {
        require_chart(x, jetq_chart(n, k), "reconstructed L value");
        Assignment jet = chart_assignment(x);
        // Newton for p^(k-1) with q_(k) as target, p^(s<k-1) pinned to 0
        Assignment a2;
        for (int j = 0; j < k; ++j)
            for (int i = 1; i <= n; ++i) a2[qvar(i, j)] = jet.at(qvar(i, j));
        for (int s = 0; s + 1 <= k - 1; ++s)
            for (int i = 1; i <= n; ++i) a2[pvar(i, s)] = 0.0;
        std::vector<double> p(n, 0.0);
        bool converged = false;
        for (int iter = 0; iter < 50; ++iter) {
            for (int i = 1; i <= n; ++i) a2[pvar(i, k - 1)] = p[i - 1];
            std::vector<double> f(n);
            double norm = 0.0;
            for (int i = 1; i <= n; ++i) {
                f[i - 1] = evaluate(top[i - 1], a2) - jet.at(qvar(i, k));
                norm = std::max(norm, std::abs(f[i - 1]));
            }
            if (norm < 1e-12) {
                converged = true;
                break;
            }
            std::vector<double> jac(static_cast<std::size_t>(n) * n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) jac[i * n + j] = evaluate(hess[i][j], a2);
            std::vector<double> step;
            if (!lu_solve(jac, f, n, step))
                throw InversionFailedError("Newton iteration hit a singular d2H/dp^2");
            for (int i = 0; i < n; ++i) p[i] -= step[i];
        }
        if (!converged) throw InversionFailedError("Newton did not converge inverting FH_o");
        for (int i = 1; i <= n; ++i) a2[pvar(i, k - 1)] = p[i - 1];
        return evaluate(Gc, a2);
    };
    return out;
}

bool fho_section_check(const LagrangianSystem& lsys, const HamiltonianSystem& hsys) {
    const int n = lsys.n, k = lsys.k;
    MomentaTable momenta = jacobi_ostrogradsky_momenta(lsys);

    // symbolic: dH/dp^(k-1) pulled back through leg_L must be q_(k)
    std::map<VarRef, Expr, std::less<VarRef>> pullback;
    for (int r = 0; r < k; ++r)
        for (int i = 1; i <= n; ++i) pullback[pvar(i, r)] = momenta.at(i, r);
    for (int i = 1; i <= n; ++i) {
        Expr composed = substitute(differentiate(hsys.H, pvar(i, k - 1)), pullback);
        if (!equivalent(composed, Expr::variable(qvar(i, k)))) return false;
    }

    // numeric: FH_o(leg_L(pad(x))) == x for sampled x in JetQ(k), pad filling
    // levels k+1..2k-1 with zeros (Upsilon = leg_L o Psi is a section of FH_o)
    CoordinateMap leg = legendre_ostrogradsky(lsys);
    CoordinateMap fho = reduced_fiber_derivative(hsys);
    UniformRng rng(kEquivalenceSeed);
    for (int s = 0; s < kEquivalenceSamples; ++s) {
        std::vector<double> x(static_cast<std::size_t>((k + 1) * n));
        for (auto& v : x) v = rng.uniform(-2.0, 2.0);
        std::vector<double> padded(static_cast<std::size_t>(2 * k * n), 0.0);
        std::copy(x.begin(), x.end(), padded.begin());
        StatePoint jet(jetq_chart(n, 2 * k - 1), padded);
        StatePoint back = fho.apply(leg.apply(jet));
        for (std::size_t i = 0; i < x.size(); ++i)
            if (std::abs(back.values[i] - x[i]) > kEquivalenceTol) return false;
    }
    return true;
}

}  // namespace hogm
