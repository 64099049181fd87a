#ifndef HOGM_LAGRANGIAN_HPP
#define HOGM_LAGRANGIAN_HPP

#include <vector>

#include "hogm/jet.hpp"
#include "hogm/linalg.hpp"

namespace hogm {

// A kth-order autonomous Lagrangian: n dofs, order k >= 1, L over q^i_(j) with
// j <= k. Construction validates the variable levels.
struct LagrangianSystem {
    int n = 1;
    int k = 1;
    Expr L;

    LagrangianSystem() = default;
    LagrangianSystem(int n_, int k_, Expr L_);
};

// p_hat[i-1][r] is the momentum of level r conjugate to dof i,
//   p_hat^(r-1)_i = sum_{j=0}^{k-r} (-1)^j d_T^j (dL/dq^i_(r+j)),
// an expression over q-levels <= 2k-1-r. Satisfies the recursion
//   p_hat^(r-1)_i = dL/dq^i_(r) - d_T(p_hat^(r)_i).
struct MomentaTable {
    int n = 0;
    int k = 0;
    std::vector<std::vector<Expr>> p_hat;  // [dof][level]

    const Expr& at(int dof, int level) const { return p_hat[dof - 1][level]; }
};

MomentaTable jacobi_ostrogradsky_momenta(const LagrangianSystem& sys);

// The coefficient of dq^i_(j) in the Poincare-Cartan 1-form is p_hat^(j)_i;
// this is the same table.
MomentaTable poincare_cartan_coefficients(const LagrangianSystem& sys);

// Residuals R_i = sum_{j=0}^{k} (-1)^j d_T^j (dL/dq^i_(j)), over q-levels <= 2k.
// A curve solves the dynamics iff every R_i vanishes along its lift.
std::vector<Expr> euler_lagrange(const LagrangianSystem& sys);

// Symbolic coordinate map between charts, with a numeric evaluator.
struct CoordinateMap {
    Chart source;
    Chart target;
    std::vector<Expr> components;  // indexed by target slot, over source variables

    StatePoint apply(const StatePoint& x) const;
};

// JetQ(2k-1) -> CotJet(k): identity on q_(0..k-1), momenta on the fiber.
CoordinateMap legendre_ostrogradsky(const LagrangianSystem& sys);

// d2L / dq^i_(k) dq^j_(k)
ExprMatrix highest_hessian(const LagrangianSystem& sys);

inline constexpr double kRegularityTol = 1e-10;

struct RegularityVerdict {
    bool regular = false;
    double det = 0.0;  // raw determinant of the highest Hessian at the point
};

// Regularity of L at a JetQ(k) point: |det| of the row-scaled highest Hessian
// above the threshold (default 1e-10).
RegularityVerdict is_regular_at(const LagrangianSystem& sys, const StatePoint& point,
                                double tol = kRegularityTol);

// E_L = sum_{r=1}^{k} q_(r) p_hat^(r-1) - L, over q-levels <= 2k-1.
Expr lagrangian_energy(const LagrangianSystem& sys);

// Multiplier-augmented system for constraints Phi^a on JetQ(k). The multipliers
// enter as extra configuration dofs n+1..n+m, so their Euler-Lagrange equations
// return the constraints. They are excluded from regularity checks.
struct ConstrainedSystem {
    LagrangianSystem augmented;  // n+m dofs
    int base_n = 0;
    int multipliers = 0;

    // dof index of multiplier a (1-based)
    int multiplier_dof(int a) const { return base_n + a; }
};

ConstrainedSystem extend_with_constraints(const LagrangianSystem& sys,
                                          const std::vector<Expr>& constraints);

}  // namespace hogm

#endif
