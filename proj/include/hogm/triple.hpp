#ifndef HOGM_TRIPLE_HPP
#define HOGM_TRIPLE_HPP

#include <vector>

#include "hogm/hamiltonian.hpp"
#include "hogm/jet.hpp"
#include "hogm/lagrangian.hpp"

namespace hogm {

// Square integer matrix, row-major. Everything in this module is exact.
struct IntMatrix {
    int dim = 0;
    std::vector<long long> a;

    long long& at(int r, int c) { return a[static_cast<std::size_t>(r) * dim + c]; }
    long long at(int r, int c) const { return a[static_cast<std::size_t>(r) * dim + c]; }
    static IntMatrix zero(int dim);
    static IntMatrix identity(int dim);
    friend bool operator==(const IntMatrix&, const IntMatrix&) = default;
};

IntMatrix int_mul(const IntMatrix& x, const IntMatrix& y);
IntMatrix int_neg(const IntMatrix& x);

// Coordinate shuffle between charts; the matrix is a signed permutation
// (exactly one +-1 per row and column), so inverse == transpose.
struct LinearChartMap {
    Chart source;
    Chart target;
    IntMatrix matrix;

    LinearChartMap(Chart src, Chart tgt, IntMatrix m);

    StatePoint apply(const StatePoint& x) const;
    std::vector<double> apply_raw(const std::vector<double>& x) const;
    std::vector<Rational> apply_exact(const std::vector<Rational>& x) const;
    LinearChartMap inverse() const;
};

LinearChartMap compose(const LinearChartMap& outer, const LinearChartMap& inner);

// alpha: TT*T^(k-1)Q -> T*TT^(k-1)Q, (q,p,qdot,pdot) -> (q, qdot, pdot, p)
LinearChartMap alpha_map(int k, int n);

// R_k: T*TT^(k-1)Q -> T*T*T^(k-1)Q, (q,v,p,pt) -> (q, pt, -p, v)
LinearChartMap rk_map(int k, int n);

// beta = R_k o alpha: (q,p,qdot,pdot) -> (q, p, -pdot, qdot) in the natural
// (base; fiber) ordering of T*T*T^(k-1)Q. This is i_X omega for the canonical
// omega; it is the composition the construction demands, and the
// anti-symplectomorphism checks pin it down.
LinearChartMap beta_map(int k, int n);

// canonical symplectic matrix of a cotangent-type chart (CotJet, CotTanJet,
// CotCotJet): pairs base slot i with fiber slot dim/2 + i
IntMatrix omega_canonical(const Chart& chart);

// complete lift of the canonical form on the TanCotJet chart:
// dq ^ dpdot + dqdot ^ dp in chart ordering
IntMatrix omega_complete_lift(const Chart& chart);

enum class PullbackVerdict { Symplectic, AntiSymplectic, Fail };

// M^T Omega_tgt M against +-Omega_src, exact integers.
PullbackVerdict symplectic_pullback_check(const LinearChartMap& map, const IntMatrix& omega_src,
                                          const IntMatrix& omega_tgt);

// Point of Sigma_L in its 2kn parameters (q_(0..k); ptilde^(0..k-2)),
// dof index running fastest inside each level block.
struct SigmaLPoint {
    std::vector<double> params;
};

// Immersion of Sigma_L into T*TT^(k-1)Q:
// (q_(j); q_(j+1); dL/dq_(0), dL/dq_(j)-pt^(j-1); pt^(0..k-2), dL/dq_(k)).
StatePoint embed_sigma(const LagrangianSystem& lsys, const SigmaLPoint& s);
std::vector<Rational> embed_sigma_exact(const LagrangianSystem& lsys,
                                        const std::vector<Rational>& params);

// Membership residual of a CotTanJet(k) point in Sigma_L: holonomy slots
// v_(j) - q_(j+1) (j <= k-2), then the covector-slot deviations from the
// embedding, with q_(k) read from v_(k-1). Zero iff the point lies in Sigma_L.
std::vector<double> sigma_residual(const LagrangianSystem& lsys, const StatePoint& point);

// Membership residual of a TanCotJet(k) point in N_L = alpha^{-1}(Sigma_L):
// dotted-base holonomy, pdot-slot relations, and p^(k-1) - dL/dq_(k).
std::vector<double> nl_residual(const LagrangianSystem& lsys, const StatePoint& point);
std::vector<Rational> nl_residual_exact(const LagrangianSystem& lsys,
                                        const std::vector<Rational>& point);

// FL on Sigma_L: (q_(0..k), pt) -> (q_(0..k-1); pt^(0..k-2), dL/dq_(k)).
StatePoint fl_on_sigma(const LagrangianSystem& lsys, const SigmaLPoint& s);

// phi_L = FL^{-1} o leg_L: JetQ(2k-1) -> Sigma_L parameters. Requires
// regularity at the point.
SigmaLPoint phi_L(const LagrangianSystem& lsys, const StatePoint& x);

// max over t-samples of |sigma_residual(alpha(d/dt(leg_L o gamma^(2k-1))))|,
// with the time derivative taken analytically through the curve lift. Near
// zero iff the curve solves the Euler-Lagrange equations.
struct CharacterizationReport {
    double max_residual = 0.0;
    double argmax_time = 0.0;
};
CharacterizationReport solution_characterization_check(const LagrangianSystem& lsys,
                                                       const AnalyticCurve& curve,
                                                       const std::vector<double>& t_samples);

}  // namespace hogm

#endif
