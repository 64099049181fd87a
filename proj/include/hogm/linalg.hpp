#ifndef HOGM_LINALG_HPP
#define HOGM_LINALG_HPP

#include <optional>
#include <vector>

#include "hogm/calculus.hpp"
#include "hogm/expr.hpp"

namespace hogm {

using ExprMatrix = std::vector<std::vector<Expr>>;

// Dense n*n helpers for the desk-scale systems the engine handles. Row-major.
double lu_det(std::vector<double> a, int n);

// determinant after scaling each row by its max-abs entry; the regularity
// threshold is applied to this value so it is insensitive to units
double lu_det_row_scaled(std::vector<double> a, int n);

// solve A x = b by partial-pivot elimination; false if a pivot vanishes
bool lu_solve(std::vector<double> a, std::vector<double> b, int n, std::vector<double>& x);

// Laplace expansion; fine for the n <= 4 matrices that occur here.
Expr sym_det(const ExprMatrix& a);

// Solve A x = b symbolically by Gaussian elimination. Pivots are entries that
// do not simplify to zero; division is multiplication by Power(pivot, -1).
// nullopt when the matrix is symbolically singular.
std::optional<std::vector<Expr>> sym_linear_solve(ExprMatrix a, std::vector<Expr> b);

}  // namespace hogm

#endif
