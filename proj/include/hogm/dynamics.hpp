#ifndef HOGM_DYNAMICS_HPP
#define HOGM_DYNAMICS_HPP

#include <functional>
#include <string>
#include <vector>

#include "hogm/hamiltonian.hpp"
#include "hogm/jet.hpp"
#include "hogm/lagrangian.hpp"

namespace hogm {

class SingularHessianError : public std::runtime_error {
public:
    SingularHessianError(const std::string& what, double det_)
        : std::runtime_error(what), det(det_) {}
    double det = 0.0;
};

class NonFiniteStateError : public std::runtime_error {
public:
    NonFiniteStateError(const std::string& what, double last_good)
        : std::runtime_error(what), last_good_time(last_good) {}
    double last_good_time = 0.0;
};

// Expression flattened to a postfix program over a chart's slot layout.
// Evaluation order matches the tree walk, so results are bit-identical to
// evaluate() on the chart assignment.
class CompiledExpr {
public:
    CompiledExpr() = default;
    CompiledExpr(const Expr& e, const Chart& chart);

    double eval(const std::vector<double>& state) const;
    double eval(const std::vector<double>& state, std::vector<double>& scratch) const;
    int stack_depth() const { return stack_depth_; }

private:
    enum class OpCode : std::uint8_t { Const, Slot, Add, Mul, Neg, PowI, Fn };
    struct Op {
        OpCode code;
        int arg = 0;  // slot index, operand count, exponent, or Func
        double value = 0.0;
    };
    std::vector<Op> ops_;
    int stack_depth_ = 0;

    void compile(const Expr& e, const Chart& chart, int depth);
};

struct Trajectory {
    Chart chart;
    std::vector<double> times;               // strictly increasing
    std::vector<std::vector<double>> states;  // one row per time

    std::size_t size() const { return times.size(); }
};

struct OdeSystem {
    int dimension = 0;
    Chart chart;
    std::string provenance;  // "hamiltonian" or "lagrangian-explicit"
    // deterministic, side-effect-free; must be safe to call concurrently
    std::function<void(const std::vector<double>&, std::vector<double>&)> rhs;
};

// Hamilton's equations as an explicit first-order system on CotJet(k).
OdeSystem hamilton_ode(const HamiltonianSystem& hsys);

// Explicit system on JetQ(2k-1): qdot_(j) = q_(j+1) below the top, and the top
// derivative from splitting the Euler-Lagrange residual as S q_(2k) + r = 0
// with S = dR/dq_(2k) extracted symbolically once and solved per evaluation.
OdeSystem lagrangian_ode(const LagrangianSystem& lsys);

// Classical fixed-step RK4; the last step is shortened to land on t1 exactly.
// Throws NonFiniteStateError (carrying the last good time) if the state leaves
// the finite range.
Trajectory integrate_rk4(const OdeSystem& ode, const std::vector<double>& x0, double t0, double t1,
                         double h);

using SampleEvaluator = std::function<double(double t, const std::vector<double>& state)>;

struct ResidualReport {
    double max_abs = 0.0;
    double argmax_time = 0.0;
    std::vector<double> per_sample;
};

// Evaluate at every sample; OpenMP over samples with a deterministic serial
// max-scan. residual_along_serial is the reference implementation the tests
// compare against.
ResidualReport residual_along(const Trajectory& traj, const SampleEvaluator& f);
ResidualReport residual_along_serial(const Trajectory& traj, const SampleEvaluator& f);

// max over t of |g(x(t)) - g(x(t0))| for a scalar observable g
double observable_drift(const Trajectory& traj, const SampleEvaluator& g);

// max |H(x(t)) - H(x(t0))| along a CotJet trajectory
double energy_drift(const HamiltonianSystem& hsys, const Trajectory& traj);

// Euler-Lagrange residual along a Lagrangian trajectory, with q_(2k) taken
// from central differences of the top state slot (interior samples).
ResidualReport discrete_el_residual(const LagrangianSystem& lsys, const Trajectory& traj);

// N_L membership residual along a CotJet trajectory of the canonical pair,
// with the dotted slots from central differences (interior samples).
ResidualReport discrete_nl_residual(const LagrangianSystem& lsys, const Trajectory& traj);

struct CrossCheckReport {
    double max_deviation = 0.0;
    double argmax_time = 0.0;
    Trajectory lagrangian_flow;   // JetQ(2k-1)
    Trajectory hamiltonian_flow;  // CotJet(k)
};

// Integrate the Lagrangian ODE from x0 and Hamilton's equations from
// leg_L(x0); report max over t of |leg_L(x_lag(t)) - x_ham(t)|.
CrossCheckReport cross_check(const LagrangianSystem& lsys, const std::vector<double>& x0_jet,
                             double t0, double t1, double h);

// Independent initial conditions in parallel; ensemble order is preserved.
std::vector<Trajectory> integrate_ensemble(const OdeSystem& ode,
                                           const std::vector<std::vector<double>>& x0s, double t0,
                                           double t1, double h);
std::vector<Trajectory> integrate_ensemble_serial(const OdeSystem& ode,
                                                  const std::vector<std::vector<double>>& x0s,
                                                  double t0, double t1, double h);

}  // namespace hogm

#endif
