#include "hogm/dynamics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>

#include "hogm/triple.hpp"

namespace hogm {

namespace {

int chart_slot(const Chart& chart, const VarRef& v) {
    std::vector<VarRef> vars = chart.variables();
    for (std::size_t i = 0; i < vars.size(); ++i)
        if (vars[i] == v) return static_cast<int>(i);
    throw std::invalid_argument("variable " + var_name(v) + " is not a coordinate of the chart");
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

bool all_finite(const std::vector<double>& x) {
    for (double v : x)
        if (!std::isfinite(v)) return false;
    return true;
}

// Exceptions must not escape an OpenMP region; capture the first one and
// rethrow on the calling thread.
class ErrorLatch {
public:
    bool tripped() const { return flag_.load(std::memory_order_relaxed); }
    void capture() {
#pragma omp critical(hogm_error_latch)
        {
            if (!error_) error_ = std::current_exception();
        }
        flag_.store(true, std::memory_order_relaxed);
    }
    void rethrow_if_set() const {
        if (error_) std::rethrow_exception(error_);
    }

private:
    std::atomic<bool> flag_{false};
    std::exception_ptr error_;
};

}  // namespace

void CompiledExpr::compile(const Expr& e, const Chart& chart, int depth) {
    stack_depth_ = std::max(stack_depth_, depth + 1);
    switch (e.kind()) {
        case ExprKind::Constant:
            ops_.push_back({OpCode::Const, 0, e.number().value()});
            return;
        case ExprKind::Variable:
            ops_.push_back({OpCode::Slot, chart_slot(chart, e.var()), 0.0});
            return;
        case ExprKind::Negate:
            compile(e.args()[0], chart, depth);
            ops_.push_back({OpCode::Neg, 0, 0.0});
            return;
        case ExprKind::Power:
            compile(e.args()[0], chart, depth);
            ops_.push_back({OpCode::PowI, e.exponent(), 0.0});
            return;
        case ExprKind::Call:
            compile(e.args()[0], chart, depth);
            ops_.push_back({OpCode::Fn, static_cast<int>(e.func()), 0.0});
            return;
        case ExprKind::Sum: {
            int i = 0;
            for (const auto& k : e.args()) compile(k, chart, depth + i++);
            ops_.push_back({OpCode::Add, static_cast<int>(e.args().size()), 0.0});
            return;
        }
        case ExprKind::Product: {
            int i = 0;
            for (const auto& k : e.args()) compile(k, chart, depth + i++);
            ops_.push_back({OpCode::Mul, static_cast<int>(e.args().size()), 0.0});
            return;
        }
    }
}

CompiledExpr::CompiledExpr(const Expr& e, const Chart& chart) { compile(e, chart, 0); }

double CompiledExpr::eval(const std::vector<double>& state, std::vector<double>& stack) const {
    stack.clear();
    for (const auto& op : ops_) {
        switch (op.code) {
            case OpCode::Const:
                stack.push_back(op.value);
                break;
            case OpCode::Slot:
                stack.push_back(state[op.arg]);
                break;
            case OpCode::Neg:
                stack.back() = -stack.back();
                break;
            case OpCode::PowI:
                stack.back() = powi(stack.back(), op.arg);
                break;
            case OpCode::Fn: {
                double u = stack.back();
                switch (static_cast<Func>(op.arg)) {
                    case Func::Sin: u = std::sin(u); break;
                    case Func::Cos: u = std::cos(u); break;
                    case Func::Exp: u = std::exp(u); break;
                    case Func::Ln:
                        if (u <= 0.0) throw DomainError("ln of non-positive value");
                        u = std::log(u);
                        break;
                    case Func::Sqrt:
                        if (u < 0.0) throw DomainError("sqrt of negative value");
                        u = std::sqrt(u);
                        break;
                }
                stack.back() = u;
                break;
            }
            case OpCode::Add: {
                // left-to-right fold matches the tree walk exactly
                std::size_t base = stack.size() - op.arg;
                double acc = stack[base];
                for (int i = 1; i < op.arg; ++i) acc += stack[base + i];
                stack.resize(base);
                stack.push_back(acc);
                break;
            }
            case OpCode::Mul: {
                std::size_t base = stack.size() - op.arg;
                double acc = stack[base];
                for (int i = 1; i < op.arg; ++i) acc *= stack[base + i];
                stack.resize(base);
                stack.push_back(acc);
                break;
            }
        }
    }
    return stack.back();
}

double CompiledExpr::eval(const std::vector<double>& state) const {
    std::vector<double> scratch;
    scratch.reserve(static_cast<std::size_t>(stack_depth_) + 4);
    return eval(state, scratch);
}

OdeSystem hamilton_ode(const HamiltonianSystem& hsys) {
    const Chart chart = cotjet_chart(hsys.n, hsys.k);
    std::vector<Expr> field = hamilton_vector_field(hsys);
    std::vector<CompiledExpr> compiled;
    compiled.reserve(field.size());
    for (const auto& e : field) compiled.emplace_back(e, chart);

    OdeSystem ode;
    ode.dimension = chart.dim();
    ode.chart = chart;
    ode.provenance = "hamiltonian";
    ode.rhs = [compiled](const std::vector<double>& x, std::vector<double>& dx) {
        std::vector<double> scratch;
        dx.resize(compiled.size());
        for (std::size_t i = 0; i < compiled.size(); ++i) dx[i] = compiled[i].eval(x, scratch);
    };
    return ode;
}

OdeSystem lagrangian_ode(const LagrangianSystem& lsys) {
    const int n = lsys.n, k = lsys.k;
    const Chart chart = jetq_chart(n, 2 * k - 1);
    std::vector<Expr> residuals = euler_lagrange(lsys);

    // split R_i = S_ij q^j_(2k) + r_i; the residual is affine in q_(2k)
    std::map<VarRef, Expr, std::less<VarRef>> top_zero;
    for (int i = 1; i <= n; ++i) top_zero[qvar(i, 2 * k)] = Expr::constant(0LL);
    std::vector<CompiledExpr> s_entries;
    std::vector<CompiledExpr> r_entries;
    for (int i = 0; i < n; ++i) {
        for (int j = 1; j <= n; ++j) {
            Expr coeff = differentiate(residuals[i], qvar(j, 2 * k));
            for (const auto& v : free_variables(coeff))
                if (v.level >= 2 * k)
                    throw std::invalid_argument(
                        "Euler-Lagrange residual is not affine in the top derivative");
            s_entries.emplace_back(coeff, chart);
        }
        r_entries.emplace_back(substitute(residuals[i], top_zero), chart);
    }

    OdeSystem ode;
    ode.dimension = chart.dim();
    ode.chart = chart;
    ode.provenance = "lagrangian-explicit";
    const int dim = ode.dimension;
    ode.rhs = [n, k, dim, s_entries, r_entries](const std::vector<double>& x,
                                                std::vector<double>& dx) {
        std::vector<double> scratch;
        dx.resize(dim);
        for (int idx = 0; idx < dim - n; ++idx) dx[idx] = x[idx + n];
        std::vector<double> s(static_cast<std::size_t>(n) * n), r(n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) s[i * n + j] = s_entries[i * n + j].eval(x, scratch);
            r[i] = -r_entries[i].eval(x, scratch);
        }
        std::vector<double> top;
        if (!lu_solve(s, r, n, top)) {
            throw SingularHessianError("singular Hessian along trajectory, det = " +
                                           format_double_shortest(lu_det(s, n)),
                                       lu_det(s, n));
        }
        for (int i = 0; i < n; ++i) dx[dim - n + i] = top[i];
    };
    return ode;
}

Trajectory integrate_rk4(const OdeSystem& ode, const std::vector<double>& x0, double t0, double t1,
                         double h) {
    if (!(h > 0.0)) throw std::invalid_argument("integrate_rk4: step must be positive");
    if (!(t1 > t0)) throw std::invalid_argument("integrate_rk4: t1 must exceed t0");
    if (static_cast<int>(x0.size()) != ode.dimension)
        throw std::invalid_argument("integrate_rk4: initial state has wrong dimension");

    Trajectory traj;
    traj.chart = ode.chart;
    traj.times.push_back(t0);
    traj.states.push_back(x0);

    std::vector<double> x = x0, k1, k2, k3, k4, tmp(x0.size());
    // step times by multiplication, so accumulation error cannot leave a
    // spurious short trailing step; the final step lands on t1 exactly
    const auto steps = static_cast<long long>(std::ceil((t1 - t0) / h - 1e-9));
    double t = t0;
    for (long long s = 1; s <= std::max<long long>(steps, 1); ++s) {
        double t_next = (s >= steps) ? t1 : t0 + static_cast<double>(s) * h;
        double step = t_next - t;
        ode.rhs(x, k1);
        for (std::size_t i = 0; i < x.size(); ++i) tmp[i] = x[i] + 0.5 * step * k1[i];
        ode.rhs(tmp, k2);
        for (std::size_t i = 0; i < x.size(); ++i) tmp[i] = x[i] + 0.5 * step * k2[i];
        ode.rhs(tmp, k3);
        for (std::size_t i = 0; i < x.size(); ++i) tmp[i] = x[i] + step * k3[i];
        ode.rhs(tmp, k4);
        for (std::size_t i = 0; i < x.size(); ++i)
            x[i] += step / 6.0 * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
        t = t_next;
        if (!all_finite(x))
            throw NonFiniteStateError("state became non-finite at t = " +
                                          format_double_shortest(t) + "; last good t = " +
                                          format_double_shortest(traj.times.back()),
                                      traj.times.back());
        traj.times.push_back(t);
        traj.states.push_back(x);
    }
    return traj;
}

ResidualReport residual_along_serial(const Trajectory& traj, const SampleEvaluator& f) {
    ResidualReport report;
    report.per_sample.resize(traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i)
        report.per_sample[i] = f(traj.times[i], traj.states[i]);
    for (std::size_t i = 0; i < traj.size(); ++i) {
        double v = std::abs(report.per_sample[i]);
        if (v > report.max_abs) {
            report.max_abs = v;
            report.argmax_time = traj.times[i];
        }
    }
    return report;
}

ResidualReport residual_along(const Trajectory& traj, const SampleEvaluator& f) {
    ResidualReport report;
    const std::size_t m = traj.size();
    report.per_sample.resize(m);
    ErrorLatch latch;
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < m; ++i) {
        if (latch.tripped()) continue;
        try {
            report.per_sample[i] = f(traj.times[i], traj.states[i]);
        } catch (...) {
            latch.capture();
        }
    }
    latch.rethrow_if_set();
    // serial max-scan keeps the report deterministic under any thread count
    for (std::size_t i = 0; i < m; ++i) {
        double v = std::abs(report.per_sample[i]);
        if (v > report.max_abs) {
            report.max_abs = v;
            report.argmax_time = traj.times[i];
        }
    }
    return report;
}

double observable_drift(const Trajectory& traj, const SampleEvaluator& g) {
    if (traj.size() == 0) return 0.0;
    double base = g(traj.times[0], traj.states[0]);
    ResidualReport r = residual_along(
        traj, [&](double t, const std::vector<double>& x) { return g(t, x) - base; });
    return r.max_abs;
}

double energy_drift(const HamiltonianSystem& hsys, const Trajectory& traj) {
    const Chart chart = cotjet_chart(hsys.n, hsys.k);
    if (!(traj.chart == chart)) throw ChartMismatchError("energy_drift: chart mismatch");
    CompiledExpr H(hsys.H, chart);
    return observable_drift(
        traj, [&](double, const std::vector<double>& x) { return H.eval(x); });
}

ResidualReport discrete_el_residual(const LagrangianSystem& lsys, const Trajectory& traj) {
    const int n = lsys.n, k = lsys.k;
    if (!(traj.chart == jetq_chart(n, 2 * k - 1)))
        throw ChartMismatchError("discrete_el_residual: chart mismatch");
    std::vector<Expr> residuals = euler_lagrange(lsys);
    const Chart extended = jetq_chart(n, 2 * k);
    std::vector<CompiledExpr> compiled;
    for (const auto& e : residuals) compiled.emplace_back(e, extended);

    Trajectory interior;
    interior.chart = extended;
    for (std::size_t s = 1; s + 1 < traj.size(); ++s) {
        double dt = traj.times[s + 1] - traj.times[s - 1];
        std::vector<double> x = traj.states[s];
        for (int i = 0; i < n; ++i) {
            double upper = traj.states[s + 1][(2 * k - 1) * n + i];
            double lower = traj.states[s - 1][(2 * k - 1) * n + i];
            x.push_back((upper - lower) / dt);
        }
        interior.times.push_back(traj.times[s]);
        interior.states.push_back(std::move(x));
    }
    return residual_along(interior, [compiled](double, const std::vector<double>& x) {
        std::vector<double> scratch;
        double m = 0.0;
        for (const auto& c : compiled) m = std::max(m, std::abs(c.eval(x, scratch)));
        return m;
    });
}

ResidualReport discrete_nl_residual(const LagrangianSystem& lsys, const Trajectory& traj) {
    const int n = lsys.n, k = lsys.k, kn = k * n;
    if (!(traj.chart == cotjet_chart(n, k)))
        throw ChartMismatchError("discrete_nl_residual: chart mismatch");

    Trajectory lifted;
    lifted.chart = tancotjet_chart(n, k);
    for (std::size_t s = 1; s + 1 < traj.size(); ++s) {
        double dt = traj.times[s + 1] - traj.times[s - 1];
        std::vector<double> x(static_cast<std::size_t>(4 * kn));
        for (int idx = 0; idx < 2 * kn; ++idx) {
            x[idx] = traj.states[s][idx];
            x[2 * kn + idx] = (traj.states[s + 1][idx] - traj.states[s - 1][idx]) / dt;
        }
        lifted.times.push_back(traj.times[s]);
        lifted.states.push_back(std::move(x));
    }
    return residual_along(lifted, [&lsys, n, k](double, const std::vector<double>& x) {
        std::vector<double> res =
            nl_residual(lsys, StatePoint(tancotjet_chart(n, k), x));
        double m = 0.0;
        for (double r : res) m = std::max(m, std::abs(r));
        return m;
    });
}

CrossCheckReport cross_check(const LagrangianSystem& lsys, const std::vector<double>& x0_jet,
                             double t0, double t1, double h) {
    CanonicalHamiltonian canonical = canonical_hamiltonian(lsys);
    if (!canonical.symbolic)
        throw std::invalid_argument("cross_check needs the symbolic canonical Hamiltonian");

    CoordinateMap leg = legendre_ostrogradsky(lsys);
    const Chart jet_chart = jetq_chart(lsys.n, 2 * lsys.k - 1);
    std::vector<CompiledExpr> leg_compiled;
    for (const auto& c : leg.components) leg_compiled.emplace_back(c, jet_chart);

    CrossCheckReport report;
    report.lagrangian_flow = integrate_rk4(lagrangian_ode(lsys), x0_jet, t0, t1, h);
    StatePoint mapped0 = leg.apply(StatePoint(jet_chart, x0_jet));
    report.hamiltonian_flow =
        integrate_rk4(hamilton_ode(canonical.system), mapped0.values, t0, t1, h);

    const std::size_t m = report.lagrangian_flow.size();
    std::vector<double> dev(m, 0.0);
    ErrorLatch latch;
#pragma omp parallel for schedule(static)
    for (std::size_t s = 0; s < m; ++s) {
        if (latch.tripped()) continue;
        try {
            std::vector<double> scratch;
            double worst = 0.0;
            for (std::size_t i = 0; i < leg_compiled.size(); ++i) {
                double mapped = leg_compiled[i].eval(report.lagrangian_flow.states[s], scratch);
                worst = std::max(worst,
                                 std::abs(mapped - report.hamiltonian_flow.states[s][i]));
            }
            dev[s] = worst;
        } catch (...) {
            latch.capture();
        }
    }
    latch.rethrow_if_set();
    for (std::size_t s = 0; s < m; ++s) {
        if (dev[s] > report.max_deviation) {
            report.max_deviation = dev[s];
            report.argmax_time = report.lagrangian_flow.times[s];
        }
    }
    return report;
}

std::vector<Trajectory> integrate_ensemble_serial(const OdeSystem& ode,
                                                  const std::vector<std::vector<double>>& x0s,
                                                  double t0, double t1, double h) {
    std::vector<Trajectory> out(x0s.size());
    for (std::size_t i = 0; i < x0s.size(); ++i) out[i] = integrate_rk4(ode, x0s[i], t0, t1, h);
    return out;
}

std::vector<Trajectory> integrate_ensemble(const OdeSystem& ode,
                                           const std::vector<std::vector<double>>& x0s, double t0,
                                           double t1, double h) {
    std::vector<Trajectory> out(x0s.size());
    ErrorLatch latch;
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < x0s.size(); ++i) {
        if (latch.tripped()) continue;
        try {
            out[i] = integrate_rk4(ode, x0s[i], t0, t1, h);
        } catch (...) {
            latch.capture();
        }
    }
    latch.rethrow_if_set();
    return out;
}

}  // namespace hogm
