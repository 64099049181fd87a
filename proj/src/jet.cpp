#include "hogm/jet.hpp"

#include <cmath>

namespace hogm {

namespace {

std::string block_name(const char* prefix, int i, int j) {
    return std::string(prefix) + std::to_string(i) + "_" + std::to_string(j);
}

}  // namespace

int Chart::dim() const {
    switch (kind) {
        case ChartKind::JetQ: return (order + 1) * n;
        case ChartKind::TanJet:
        case ChartKind::CotJet: return 2 * order * n;
        case ChartKind::TanCotJet:
        case ChartKind::CotTanJet:
        case ChartKind::CotCotJet: return 4 * order * n;
    }
    return 0;
}

std::string Chart::slot_name(int idx) const {
    const int block = idx / n;  // level-within-section count
    const int i = idx % n + 1;
    const int k = order;
    switch (kind) {
        case ChartKind::JetQ:
            return block_name("q", i, block);
        case ChartKind::TanJet:
            return block < k ? block_name("q", i, block) : block_name("v", i, block - k);
        case ChartKind::CotJet:
            return block < k ? block_name("q", i, block) : block_name("p", i, block - k);
        case ChartKind::TanCotJet: {
            int section = block / k, j = block % k;
            static const char* pre[4] = {"q", "p", "qdot", "pdot"};
            return block_name(pre[section], i, j);
        }
        case ChartKind::CotTanJet: {
            int section = block / k, j = block % k;
            static const char* pre[4] = {"q", "v", "a", "b"};
            return block_name(pre[section], i, j);
        }
        case ChartKind::CotCotJet: {
            int section = block / k, j = block % k;
            static const char* pre[4] = {"q", "p", "a", "b"};
            return block_name(pre[section], i, j);
        }
    }
    return "?";
}

std::vector<VarRef> Chart::variables() const {
    std::vector<VarRef> out;
    const int k = order;
    switch (kind) {
        case ChartKind::JetQ:
            for (int j = 0; j <= order; ++j)
                for (int i = 1; i <= n; ++i) out.push_back(qvar(i, j));
            return out;
        case ChartKind::TanJet:
            for (int j = 0; j < k; ++j)
                for (int i = 1; i <= n; ++i) out.push_back(qvar(i, j));
            for (int j = 0; j < k; ++j)
                for (int i = 1; i <= n; ++i) out.push_back(vvar(i, j));
            return out;
        case ChartKind::CotJet:
            for (int j = 0; j < k; ++j)
                for (int i = 1; i <= n; ++i) out.push_back(qvar(i, j));
            for (int j = 0; j < k; ++j)
                for (int i = 1; i <= n; ++i) out.push_back(pvar(i, j));
            return out;
        default:
            throw std::logic_error("chart has no grammar variables");
    }
}

Chart jetq_chart(int n, int m) { return Chart{ChartKind::JetQ, n, m}; }
Chart tanjet_chart(int n, int k) { return Chart{ChartKind::TanJet, n, k}; }
Chart cotjet_chart(int n, int k) { return Chart{ChartKind::CotJet, n, k}; }
Chart tancotjet_chart(int n, int k) { return Chart{ChartKind::TanCotJet, n, k}; }
Chart cottanjet_chart(int n, int k) { return Chart{ChartKind::CotTanJet, n, k}; }
Chart cotcotjet_chart(int n, int k) { return Chart{ChartKind::CotCotJet, n, k}; }

StatePoint::StatePoint(Chart c, std::vector<double> v) : chart(c), values(std::move(v)) {
    if (static_cast<int>(values.size()) != chart.dim())
        throw std::invalid_argument("state vector length " + std::to_string(values.size()) +
                                    " does not match chart dimension " + std::to_string(chart.dim()));
}

void require_chart(const StatePoint& p, const Chart& expected, const char* where) {
    if (!(p.chart == expected))
        throw ChartMismatchError(std::string(where) + ": chart mismatch");
}

Assignment chart_assignment(const StatePoint& p) {
    Assignment a;
    std::vector<VarRef> vars = p.chart.variables();
    for (std::size_t idx = 0; idx < vars.size(); ++idx) a[vars[idx]] = p.values[idx];
    return a;
}

Expr tulczyjew_derivative(const Expr& e, int order_bound) {
    for (const auto& v : free_variables(e)) {
        if (v.kind != VarKind::Q)
            throw std::invalid_argument("d_T is defined on jet functions only; found " +
                                        var_name(v));
        if (v.level > order_bound)
            throw std::invalid_argument("d_T: variable " + var_name(v) + " exceeds order bound " +
                                        std::to_string(order_bound));
    }
    std::set<VarRef> vars = free_variables(e);
    std::vector<Expr> parts;
    for (const auto& v : vars) {
        Expr de = differentiate(e, v);
        if (de.is_zero()) continue;
        parts.push_back(mul(Expr::variable(qvar(v.index, v.level + 1)), de));
    }
    return simplify(Expr::sum(std::move(parts)));
}

Expr iterated_dT(const Expr& e, int j, int order_bound) {
    if (j < 0) throw std::invalid_argument("iterated_dT: negative iteration count");
    Expr acc = e;
    for (int s = 0; s < j; ++s) acc = tulczyjew_derivative(acc, order_bound + s);
    return acc;
}

std::vector<double> holonomy_residual(int k, int n, const StatePoint& point) {
    require_chart(point, tanjet_chart(n, k), "holonomy_residual");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>((k - 1) * n));
    for (int j = 0; j + 1 <= k - 1; ++j)
        for (int i = 0; i < n; ++i)
            out.push_back(point.values[(k + j) * n + i] - point.values[(j + 1) * n + i]);
    return out;
}

AnalyticCurve::AnalyticCurve(std::vector<std::array<double, 6>> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw std::invalid_argument("curve needs at least one dof");
}

double AnalyticCurve::derivative(int dof, int j, double t) const {
    if (dof < 1 || dof > dofs()) throw std::invalid_argument("curve dof out of range");
    std::array<double, 6> c = coeffs_[dof - 1];
    // d/dt on span{1, t, t^2, t^3, sin, cos}: shift the polynomial part,
    // rotate the trigonometric part
    for (int s = 0; s < j; ++s) {
        std::array<double, 6> d{};
        d[0] = c[1];
        d[1] = 2.0 * c[2];
        d[2] = 3.0 * c[3];
        d[3] = 0.0;
        d[4] = -c[5];
        d[5] = c[4];
        c = d;
    }
    return c[0] + c[1] * t + c[2] * t * t + c[3] * t * t * t + c[4] * std::sin(t) +
           c[5] * std::cos(t);
}

StatePoint AnalyticCurve::lift(int m, double t) const {
    const int n = dofs();
    std::vector<double> vals(static_cast<std::size_t>((m + 1) * n));
    for (int j = 0; j <= m; ++j)
        for (int i = 1; i <= n; ++i) vals[static_cast<std::size_t>(j * n + i - 1)] = derivative(i, j, t);
    return StatePoint(jetq_chart(n, m), std::move(vals));
}

AnalyticCurve prolong_polynomial_curve(std::vector<std::array<double, 6>> coeffs) {
    return AnalyticCurve(std::move(coeffs));
}

}  // namespace hogm
