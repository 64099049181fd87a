#ifndef HOGM_HAMILTONIAN_HPP
#define HOGM_HAMILTONIAN_HPP

#include <functional>
#include <vector>

#include "hogm/lagrangian.hpp"

namespace hogm {

class SingularLagrangianError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class InversionFailedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class NotKthOrderError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class NotProjectableError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class IrregularError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// H on T*T^(k-1)Q: q-levels <= k-1, p-levels <= k-1, no v/lambda variables.
struct HamiltonianSystem {
    int n = 1;
    int k = 1;
    Expr H;

    HamiltonianSystem() = default;
    HamiltonianSystem(int n_, int k_, Expr H_);
};

// Inversion of the top Legendre relation p^(k-1)_i = dL/dq^i_(k). Symbolic
// when that relation is affine in q_(k) (linear solve); otherwise Newton with
// fixed parameters (50 iterations, tol 1e-12, initial guess 0).
struct LegendreInverse {
    enum class Mode { Symbolic, NumericNewton };
    Mode mode = Mode::Symbolic;

    // symbolic: q~_(k)^i as expressions over CotJet(k) variables
    std::vector<Expr> q_top;

    // numeric: the residual system and its Jacobian, over JetQ(k) variables
    std::vector<Expr> dL_top;
    ExprMatrix hessian;
    int max_iterations = 50;
    double tol = 1e-12;

    // q_(k) from a CotJet(k) point (q-levels, p^(k-1)); throws InversionFailed
    std::vector<double> solve_top(const StatePoint& cotjet_point) const;
};

// CotJet(k) -> TanJet(k): base fixed, fiber v_(j) = dH/dp^(j).
CoordinateMap fiber_derivative(const HamiltonianSystem& hsys);

struct KthOrderIdentity {
    int dof = 0;
    int level = 0;   // j in dH/dp^(j) = q_(j+1)
    bool holds = false;
    std::string detail;
};

struct KthOrderReport {
    bool is_kth_order = true;
    std::vector<KthOrderIdentity> identities;
};

// dH/dp^(j)_i == q^i_(j+1) for all i and 0 <= j <= k-2; vacuous for k = 1.
KthOrderReport is_kth_order(const HamiltonianSystem& hsys);

// CotJet(k) -> JetQ(k): (q_(0..k-1); p) -> (q_(0..k-1), dH/dp^(k-1)).
// Requires a kth-order Hamiltonian.
CoordinateMap reduced_fiber_derivative(const HamiltonianSystem& hsys);

// det of d2H/dp^(k-1) dp^(k-1) at the point, same thresholding as the
// Lagrangian side. Requires a kth-order Hamiltonian.
RegularityVerdict is_regular_hamiltonian_at(const HamiltonianSystem& hsys, const StatePoint& point,
                                            double tol = kRegularityTol);

// ODE right-hand side in CotJet(k) ordering:
// qdot_(j) = dH/dp^(j), pdot^(j) = -dH/dq_(j).
std::vector<Expr> hamilton_vector_field(const HamiltonianSystem& hsys);

struct CanonicalHamiltonian {
    bool symbolic = false;
    HamiltonianSystem system;  // valid in symbolic mode
    LegendreInverse inverse;
    // H at a CotJet(k) point; works in both modes
    std::function<double(const StatePoint&)> value;
};

// H = sum_{j<=k-2} p^(j) q_(j+1) + p^(k-1) q~_(k) - L(q, q~_(k)), the canonical
// Hamiltonian of a regular Lagrangian. Symbolic whenever L is quadratic-or-less
// in q_(k). Throws SingularLagrangianError when the Hessian determinant is
// symbolically zero.
CanonicalHamiltonian canonical_hamiltonian(const LagrangianSystem& lsys);

struct ReconstructedLagrangian {
    bool symbolic = false;
    LagrangianSystem system;  // valid in symbolic mode
    // L at a JetQ(k) point; works in both modes
    std::function<double(const StatePoint&)> value;
};

// L with (FH_o)*L = theta(X_H) - H. Verifies projectability first and reports
// the offending partial on failure. Symbolic when dH/dp^(k-1) is affine in
// p^(k-1); otherwise only pointwise evaluation is offered.
ReconstructedLagrangian reconstruct_lagrangian(const HamiltonianSystem& hsys);

// For a canonical pair: dH/dp^(k-1) composed with leg_L equals q_(k)
// symbolically, and FH_o(leg_L(pad(x))) == x at sampled JetQ(k) points, i.e.
// FH_o is a left inverse of the zero-padding section composed with leg_L.
bool fho_section_check(const LagrangianSystem& lsys, const HamiltonianSystem& hsys);

}  // namespace hogm

#endif
