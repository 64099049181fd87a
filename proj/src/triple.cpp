#include "hogm/triple.hpp"

#include <cmath>
#include <stdexcept>
#include <type_traits>

namespace hogm {

IntMatrix IntMatrix::zero(int dim) {
    IntMatrix m;
    m.dim = dim;
    m.a.assign(static_cast<std::size_t>(dim) * dim, 0);
    return m;
}

IntMatrix IntMatrix::identity(int dim) {
    IntMatrix m = zero(dim);
    for (int i = 0; i < dim; ++i) m.at(i, i) = 1;
    return m;
}

IntMatrix int_mul(const IntMatrix& x, const IntMatrix& y) {
    if (x.dim != y.dim) throw std::invalid_argument("int_mul: dimension mismatch");
    IntMatrix out = IntMatrix::zero(x.dim);
    for (int r = 0; r < x.dim; ++r)
        for (int c = 0; c < x.dim; ++c) {
            long long s = 0;
            for (int t = 0; t < x.dim; ++t) s += x.at(r, t) * y.at(t, c);
            out.at(r, c) = s;
        }
    return out;
}

IntMatrix int_neg(const IntMatrix& x) {
    IntMatrix out = x;
    for (auto& v : out.a) v = -v;
    return out;
}

LinearChartMap::LinearChartMap(Chart src, Chart tgt, IntMatrix m)
    : source(src), target(tgt), matrix(std::move(m)) {
    if (source.dim() != target.dim() || matrix.dim != source.dim())
        throw std::invalid_argument("LinearChartMap: dimension mismatch");
    for (int r = 0; r < matrix.dim; ++r) {
        int nonzero = 0;
        for (int c = 0; c < matrix.dim; ++c) {
            long long v = matrix.at(r, c);
            if (v == 0) continue;
            if (v != 1 && v != -1)
                throw std::invalid_argument("LinearChartMap: entries must be 0 or +-1");
            ++nonzero;
        }
        if (nonzero != 1) throw std::invalid_argument("LinearChartMap: not a signed permutation");
    }
    for (int c = 0; c < matrix.dim; ++c) {
        int nonzero = 0;
        for (int r = 0; r < matrix.dim; ++r)
            if (matrix.at(r, c) != 0) ++nonzero;
        if (nonzero != 1) throw std::invalid_argument("LinearChartMap: not a signed permutation");
    }
}

std::vector<double> LinearChartMap::apply_raw(const std::vector<double>& x) const {
    std::vector<double> out(x.size(), 0.0);
    for (int r = 0; r < matrix.dim; ++r)
        for (int c = 0; c < matrix.dim; ++c)
            if (long long v = matrix.at(r, c); v != 0)
                out[r] += static_cast<double>(v) * x[c];
    return out;
}

StatePoint LinearChartMap::apply(const StatePoint& x) const {
    require_chart(x, source, "LinearChartMap::apply");
    return StatePoint(target, apply_raw(x.values));
}

std::vector<Rational> LinearChartMap::apply_exact(const std::vector<Rational>& x) const {
    std::vector<Rational> out(x.size(), Rational(0));
    for (int r = 0; r < matrix.dim; ++r)
        for (int c = 0; c < matrix.dim; ++c) {
            long long v = matrix.at(r, c);
            if (v == 0) continue;
            Rational term = x[c];
            if (v < 0) term = *rat_neg(term);
            auto s = rat_add(out[r], term);
            if (!s) throw std::overflow_error("apply_exact overflow");
            out[r] = *s;
        }
    return out;
}

LinearChartMap LinearChartMap::inverse() const {
    IntMatrix t = IntMatrix::zero(matrix.dim);
    for (int r = 0; r < matrix.dim; ++r)
        for (int c = 0; c < matrix.dim; ++c) t.at(c, r) = matrix.at(r, c);
    return LinearChartMap(target, source, std::move(t));
}

LinearChartMap compose(const LinearChartMap& outer, const LinearChartMap& inner) {
    if (!(inner.target == outer.source))
        throw std::invalid_argument("compose: chart mismatch");
    return LinearChartMap(inner.source, outer.target, int_mul(outer.matrix, inner.matrix));
}

LinearChartMap alpha_map(int k, int n) {
    const int kn = k * n, dim = 4 * kn;
    IntMatrix m = IntMatrix::zero(dim);
    for (int s = 0; s < kn; ++s) {
        m.at(s, s) = 1;                     // q <- q
        m.at(kn + s, 2 * kn + s) = 1;       // v <- qdot
        m.at(2 * kn + s, 3 * kn + s) = 1;   // a <- pdot
        m.at(3 * kn + s, kn + s) = 1;       // b <- p
    }
    return LinearChartMap(tancotjet_chart(n, k), cottanjet_chart(n, k), std::move(m));
}

LinearChartMap rk_map(int k, int n) {
    const int kn = k * n, dim = 4 * kn;
    IntMatrix m = IntMatrix::zero(dim);
    for (int s = 0; s < kn; ++s) {
        m.at(s, s) = 1;                     // q <- q
        m.at(kn + s, 3 * kn + s) = 1;       // p <- pt
        m.at(2 * kn + s, 2 * kn + s) = -1;  // a <- -p
        m.at(3 * kn + s, kn + s) = 1;       // b <- v
    }
    return LinearChartMap(cottanjet_chart(n, k), cotcotjet_chart(n, k), std::move(m));
}

LinearChartMap beta_map(int k, int n) { return compose(rk_map(k, n), alpha_map(k, n)); }

IntMatrix omega_canonical(const Chart& chart) {
    if (chart.kind != ChartKind::CotJet && chart.kind != ChartKind::CotTanJet &&
        chart.kind != ChartKind::CotCotJet)
        throw std::invalid_argument("omega_canonical: not a cotangent chart");
    const int dim = chart.dim(), half = dim / 2;
    IntMatrix m = IntMatrix::zero(dim);
    for (int i = 0; i < half; ++i) {
        m.at(i, half + i) = 1;
        m.at(half + i, i) = -1;
    }
    return m;
}

IntMatrix omega_complete_lift(const Chart& chart) {
    if (chart.kind != ChartKind::TanCotJet)
        throw std::invalid_argument("omega_complete_lift: expects the TanCotJet chart");
    const int kn = chart.order * chart.n, dim = chart.dim();
    IntMatrix m = IntMatrix::zero(dim);
    for (int s = 0; s < kn; ++s) {
        m.at(s, 3 * kn + s) = 1;  // dq ^ dpdot
        m.at(3 * kn + s, s) = -1;
        m.at(2 * kn + s, kn + s) = 1;  // dqdot ^ dp
        m.at(kn + s, 2 * kn + s) = -1;
    }
    return m;
}

PullbackVerdict symplectic_pullback_check(const LinearChartMap& map, const IntMatrix& omega_src,
                                          const IntMatrix& omega_tgt) {
    if (omega_src.dim != map.matrix.dim || omega_tgt.dim != map.matrix.dim)
        throw std::invalid_argument("symplectic_pullback_check: dimension mismatch");
    IntMatrix mt = IntMatrix::zero(map.matrix.dim);
    for (int r = 0; r < mt.dim; ++r)
        for (int c = 0; c < mt.dim; ++c) mt.at(r, c) = map.matrix.at(c, r);
    IntMatrix pulled = int_mul(int_mul(mt, omega_tgt), map.matrix);
    if (pulled == omega_src) return PullbackVerdict::Symplectic;
    if (pulled == int_neg(omega_src)) return PullbackVerdict::AntiSymplectic;
    return PullbackVerdict::Fail;
}

namespace {

// dL/dq_(j) for j = 0..k as expressions over JetQ(k)
std::vector<std::vector<Expr>> lagrangian_gradient(const LagrangianSystem& lsys) {
    std::vector<std::vector<Expr>> dL(lsys.k + 1, std::vector<Expr>(lsys.n, Expr::constant(0LL)));
    for (int j = 0; j <= lsys.k; ++j)
        for (int i = 1; i <= lsys.n; ++i) dL[j][i - 1] = differentiate(lsys.L, qvar(i, j));
    return dL;
}

// Scalar abstraction so the double and exact-rational paths share structure.
struct DoubleOps {
    using Scalar = double;
    static Scalar eval(const Expr& e, const Assignment& a, const RationalAssignment&) {
        return evaluate(e, a);
    }
    static Scalar subtract(Scalar a, Scalar b) { return a - b; }
};

struct RationalOps {
    using Scalar = Rational;
    static Scalar eval(const Expr& e, const Assignment&, const RationalAssignment& a) {
        auto r = try_evaluate_rational(e, a);
        if (!r) throw std::domain_error("expression is not exactly evaluable over rationals");
        return *r;
    }
    static Scalar subtract(const Scalar& a, const Scalar& b) {
        auto nb = rat_neg(b);
        if (!nb) throw std::overflow_error("rational negate overflow");
        auto s = rat_add(a, *nb);
        if (!s) throw std::overflow_error("rational subtract overflow");
        return *s;
    }
};

template <class Ops>
std::vector<typename Ops::Scalar> embed_sigma_impl(const LagrangianSystem& lsys,
                                                   const std::vector<typename Ops::Scalar>& params) {
    using Scalar = typename Ops::Scalar;
    const int n = lsys.n, k = lsys.k;
    if (static_cast<int>(params.size()) != 2 * k * n)
        throw std::invalid_argument("Sigma_L parameters must have length 2kn");

    // params layout: q_(0..k) then ptilde^(0..k-2)
    auto q = [&](int i, int j) -> const Scalar& { return params[j * n + (i - 1)]; };
    auto pt = [&](int i, int j) -> const Scalar& {
        return params[(k + 1) * n + j * n + (i - 1)];
    };

    Assignment a;
    RationalAssignment ra;
    for (int j = 0; j <= k; ++j)
        for (int i = 1; i <= n; ++i) {
            if constexpr (std::is_same_v<Scalar, double>) a[qvar(i, j)] = q(i, j);
            else ra[qvar(i, j)] = q(i, j);
        }

    auto dL = lagrangian_gradient(lsys);
    std::vector<Scalar> out;
    out.reserve(static_cast<std::size_t>(4 * k * n));
    for (int j = 0; j < k; ++j)
        for (int i = 1; i <= n; ++i) out.push_back(q(i, j));  // base q
    for (int j = 0; j < k; ++j)
        for (int i = 1; i <= n; ++i) out.push_back(q(i, j + 1));  // v = q_(j+1)
    for (int j = 0; j < k; ++j)
        for (int i = 1; i <= n; ++i) {
            Scalar grad = Ops::eval(dL[j][i - 1], a, ra);
            if (j == 0) out.push_back(grad);
            else out.push_back(Ops::subtract(grad, pt(i, j - 1)));
        }
    for (int j = 0; j < k; ++j)
        for (int i = 1; i <= n; ++i) {
            if (j <= k - 2) out.push_back(pt(i, j));
            else out.push_back(Ops::eval(dL[k][i - 1], a, ra));
        }
    return out;
}

template <class Ops>
std::vector<typename Ops::Scalar> sigma_residual_impl(const LagrangianSystem& lsys,
                                                      const std::vector<typename Ops::Scalar>& pt) {
    using Scalar = typename Ops::Scalar;
    const int n = lsys.n, k = lsys.k, kn = k * n;
    if (static_cast<int>(pt.size()) != 4 * kn)
        throw std::invalid_argument("CotTanJet point must have length 4kn");

    auto qs = [&](int i, int j) -> const Scalar& { return pt[j * n + (i - 1)]; };
    auto vs = [&](int i, int j) -> const Scalar& { return pt[kn + j * n + (i - 1)]; };
    auto as = [&](int i, int j) -> const Scalar& { return pt[2 * kn + j * n + (i - 1)]; };
    auto bs = [&](int i, int j) -> const Scalar& { return pt[3 * kn + j * n + (i - 1)]; };

    Assignment a;
    RationalAssignment ra;
    for (int j = 0; j < k; ++j)
        for (int i = 1; i <= n; ++i) {
            if constexpr (std::is_same_v<Scalar, double>) a[qvar(i, j)] = qs(i, j);
            else ra[qvar(i, j)] = qs(i, j);
        }
    for (int i = 1; i <= n; ++i) {
        if constexpr (std::is_same_v<Scalar, double>) a[qvar(i, k)] = vs(i, k - 1);
        else ra[qvar(i, k)] = vs(i, k - 1);
    }

    auto dL = lagrangian_gradient(lsys);
    std::vector<Scalar> out;
    out.reserve(static_cast<std::size_t>(2 * kn));
    // holonomy slots v_(j) = q_(j+1), j = 0..k-2
    for (int j = 0; j + 1 <= k - 1; ++j)
        for (int i = 1; i <= n; ++i) out.push_back(Ops::subtract(vs(i, j), qs(i, j + 1)));
    // covector slots conjugate to q
    for (int j = 0; j < k; ++j)
        for (int i = 1; i <= n; ++i) {
            Scalar expected = Ops::eval(dL[j][i - 1], a, ra);
            if (j >= 1) expected = Ops::subtract(expected, bs(i, j - 1));
            out.push_back(Ops::subtract(as(i, j), expected));
        }
    // top covector slot conjugate to v
    for (int i = 1; i <= n; ++i)
        out.push_back(Ops::subtract(bs(i, k - 1), Ops::eval(dL[k][i - 1], a, ra)));
    return out;
}

}  // namespace

StatePoint embed_sigma(const LagrangianSystem& lsys, const SigmaLPoint& s) {
    return StatePoint(cottanjet_chart(lsys.n, lsys.k), embed_sigma_impl<DoubleOps>(lsys, s.params));
}

std::vector<Rational> embed_sigma_exact(const LagrangianSystem& lsys,
                                        const std::vector<Rational>& params) {
    return embed_sigma_impl<RationalOps>(lsys, params);
}

std::vector<double> sigma_residual(const LagrangianSystem& lsys, const StatePoint& point) {
    require_chart(point, cottanjet_chart(lsys.n, lsys.k), "sigma_residual");
    return sigma_residual_impl<DoubleOps>(lsys, point.values);
}

std::vector<double> nl_residual(const LagrangianSystem& lsys, const StatePoint& point) {
    require_chart(point, tancotjet_chart(lsys.n, lsys.k), "nl_residual");
    return sigma_residual(lsys, alpha_map(lsys.k, lsys.n).apply(point));
}

std::vector<Rational> nl_residual_exact(const LagrangianSystem& lsys,
                                        const std::vector<Rational>& point) {
    return sigma_residual_impl<RationalOps>(lsys,
                                            alpha_map(lsys.k, lsys.n).apply_exact(point));
}

StatePoint fl_on_sigma(const LagrangianSystem& lsys, const SigmaLPoint& s) {
    const int n = lsys.n, k = lsys.k;
    if (static_cast<int>(s.params.size()) != 2 * k * n)
        throw std::invalid_argument("Sigma_L parameters must have length 2kn");
    Assignment a;
    for (int j = 0; j <= k; ++j)
        for (int i = 1; i <= n; ++i) a[qvar(i, j)] = s.params[j * n + (i - 1)];
    std::vector<double> vals;
    vals.reserve(static_cast<std::size_t>(2 * k * n));
    for (int j = 0; j < k; ++j)
        for (int i = 1; i <= n; ++i) vals.push_back(s.params[j * n + (i - 1)]);
    for (int j = 0; j + 1 <= k - 1; ++j)
        for (int i = 1; i <= n; ++i) vals.push_back(s.params[(k + 1) * n + j * n + (i - 1)]);
    for (int i = 1; i <= n; ++i) vals.push_back(evaluate(differentiate(lsys.L, qvar(i, k)), a));
    return StatePoint(cotjet_chart(n, k), std::move(vals));
}

SigmaLPoint phi_L(const LagrangianSystem& lsys, const StatePoint& x) {
    const int n = lsys.n, k = lsys.k;
    require_chart(x, jetq_chart(n, 2 * k - 1), "phi_L");
    std::vector<double> jet_k(x.values.begin(), x.values.begin() + (k + 1) * n);
    RegularityVerdict reg = is_regular_at(lsys, StatePoint(jetq_chart(n, k), jet_k));
    if (!reg.regular)
        throw IrregularError("phi_L at a singular point, |det| = " + std::to_string(reg.det));

    MomentaTable momenta = jacobi_ostrogradsky_momenta(lsys);
    Assignment a = chart_assignment(x);
    SigmaLPoint s;
    s.params.assign(static_cast<std::size_t>(2 * k * n), 0.0);
    for (int j = 0; j <= k; ++j)
        for (int i = 1; i <= n; ++i) s.params[j * n + (i - 1)] = x.values[j * n + (i - 1)];
    for (int j = 0; j + 1 <= k - 1; ++j)
        for (int i = 1; i <= n; ++i)
            s.params[(k + 1) * n + j * n + (i - 1)] = evaluate(momenta.at(i, j), a);
    return s;
}

CharacterizationReport solution_characterization_check(const LagrangianSystem& lsys,
                                                       const AnalyticCurve& curve,
                                                       const std::vector<double>& t_samples) {
    const int n = lsys.n, k = lsys.k;
    if (curve.dofs() != n) throw std::invalid_argument("curve dof count mismatch");
    MomentaTable momenta = jacobi_ostrogradsky_momenta(lsys);

    // d/dt of the momenta along a lift is d_T applied once more
    std::vector<std::vector<Expr>> dotted(n, std::vector<Expr>(k, Expr::constant(0LL)));
    for (int i = 1; i <= n; ++i)
        for (int r = 0; r < k; ++r)
            dotted[i - 1][r] = tulczyjew_derivative(momenta.at(i, r), 2 * k - 1);

    CharacterizationReport report;
    for (double t : t_samples) {
        StatePoint lift = curve.lift(2 * k, t);
        Assignment a = chart_assignment(lift);
        std::vector<double> point(static_cast<std::size_t>(4 * k * n));
        const int kn = k * n;
        for (int j = 0; j < k; ++j)
            for (int i = 1; i <= n; ++i) {
                point[j * n + i - 1] = curve.derivative(i, j, t);                 // q
                point[2 * kn + j * n + i - 1] = curve.derivative(i, j + 1, t);    // qdot
                point[kn + j * n + i - 1] = evaluate(momenta.at(i, j), a);        // p
                point[3 * kn + j * n + i - 1] = evaluate(dotted[i - 1][j], a);    // pdot
            }
        std::vector<double> res =
            nl_residual(lsys, StatePoint(tancotjet_chart(n, k), std::move(point)));
        for (double r : res) {
            if (std::abs(r) > report.max_residual) {
                report.max_residual = std::abs(r);
                report.argmax_time = t;
            }
        }
    }
    return report;
}

}  // namespace hogm
