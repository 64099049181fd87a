#ifndef HOGM_JET_HPP
#define HOGM_JET_HPP

#include <array>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hogm/calculus.hpp"
#include "hogm/expr.hpp"

namespace hogm {

// Charts on the bundles the engine works in. Coordinate ordering is fixed:
// within a block the dof index runs fastest (i inner, j outer), blocks are
// laid out as listed below. Every module uses this ordering for state vectors.
//
//   JetQ(m):       q_(0) .. q_(m)                       dim (m+1)n
//   TanJet(k):     q_(0..k-1) ; v_(0..k-1)              dim 2kn
//   CotJet(k):     q_(0..k-1) ; p^(0..k-1)              dim 2kn
//   TanCotJet(k):  q ; p ; qdot ; pdot                  dim 4kn
//   CotTanJet(k):  q ; v ; a (conj. q) ; b (conj. v)    dim 4kn
//   CotCotJet(k):  q ; p ; a (conj. q) ; b (conj. p)    dim 4kn
enum class ChartKind { JetQ, TanJet, CotJet, TanCotJet, CotTanJet, CotCotJet };

struct Chart {
    ChartKind kind = ChartKind::JetQ;
    int n = 1;      // degrees of freedom
    int order = 1;  // m for JetQ, k otherwise

    int dim() const;
    // printable name of coordinate slot `idx` (grammar names where they exist)
    std::string slot_name(int idx) const;
    // slots that are grammar variables (JetQ, TanJet, CotJet only)
    std::vector<VarRef> variables() const;

    friend bool operator==(const Chart&, const Chart&) = default;
};

Chart jetq_chart(int n, int m);
Chart tanjet_chart(int n, int k);
Chart cotjet_chart(int n, int k);
Chart tancotjet_chart(int n, int k);
Chart cottanjet_chart(int n, int k);
Chart cotcotjet_chart(int n, int k);

struct StatePoint {
    Chart chart;
    std::vector<double> values;

    StatePoint() = default;
    StatePoint(Chart c, std::vector<double> v);
};

class ChartMismatchError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

void require_chart(const StatePoint& p, const Chart& expected, const char* where);

// Assignment binding the chart's variables to the point's values.
Assignment chart_assignment(const StatePoint& p);

// Tulczyjew derivation d_T: total time derivative on jet functions,
// d_T e = sum_{i,j<=order_bound} q^i_(j+1) * de/dq^i_(j). The result lives one
// jet order higher. Rejects expressions with P/V/Lambda variables.
Expr tulczyjew_derivative(const Expr& e, int order_bound);
Expr iterated_dT(const Expr& e, int j, int order_bound);

// v^i_(j) - q^i_(j+1) for j = 0..k-2; empty for k = 1.
std::vector<double> holonomy_residual(int k, int n, const StatePoint& point);

// Analytic test curve: per dof a linear combination of {1, t, t^2, t^3, sin t,
// cos t}. Closed under differentiation, so jet lifts are exact.
class AnalyticCurve {
public:
    // coeffs[i] = {c0, c1, c2, c3, c_sin, c_cos} for dof i+1
    explicit AnalyticCurve(std::vector<std::array<double, 6>> coeffs);

    int dofs() const { return static_cast<int>(coeffs_.size()); }
    // value of the j-th time derivative of dof (1-based) at t
    double derivative(int dof, int j, double t) const;
    // lift to JetQ(m): all q^i_(j)(t)
    StatePoint lift(int m, double t) const;

private:
    std::vector<std::array<double, 6>> coeffs_;
};

// Weights for one basis element of the curve space under repeated d/dt.
AnalyticCurve prolong_polynomial_curve(std::vector<std::array<double, 6>> coeffs);

}  // namespace hogm

#endif
