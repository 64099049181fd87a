#include "hogm/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace hogm {

namespace {

// returns determinant; a is destroyed
double lu_det_inplace(std::vector<double>& a, int n) {
    double det = 1.0;
    for (int c = 0; c < n; ++c) {
        int piv = c;
        for (int r = c + 1; r < n; ++r)
            if (std::abs(a[r * n + c]) > std::abs(a[piv * n + c])) piv = r;
        if (a[piv * n + c] == 0.0) return 0.0;
        if (piv != c) {
            for (int j = 0; j < n; ++j) std::swap(a[c * n + j], a[piv * n + j]);
            det = -det;
        }
        det *= a[c * n + c];
        for (int r = c + 1; r < n; ++r) {
            double f = a[r * n + c] / a[c * n + c];
            for (int j = c; j < n; ++j) a[r * n + j] -= f * a[c * n + j];
        }
    }
    return det;
}

}  // namespace

double lu_det(std::vector<double> a, int n) { return lu_det_inplace(a, n); }

double lu_det_row_scaled(std::vector<double> a, int n) {
    for (int r = 0; r < n; ++r) {
        double m = 0.0;
        for (int j = 0; j < n; ++j) m = std::max(m, std::abs(a[r * n + j]));
        if (m > 0.0)
            for (int j = 0; j < n; ++j) a[r * n + j] /= m;
    }
    return lu_det_inplace(a, n);
}

bool lu_solve(std::vector<double> a, std::vector<double> b, int n, std::vector<double>& x) {
    for (int c = 0; c < n; ++c) {
        int piv = c;
        for (int r = c + 1; r < n; ++r)
            if (std::abs(a[r * n + c]) > std::abs(a[piv * n + c])) piv = r;
        if (a[piv * n + c] == 0.0) return false;
        if (piv != c) {
            for (int j = 0; j < n; ++j) std::swap(a[c * n + j], a[piv * n + j]);
            std::swap(b[c], b[piv]);
        }
        for (int r = c + 1; r < n; ++r) {
            double f = a[r * n + c] / a[c * n + c];
            for (int j = c; j < n; ++j) a[r * n + j] -= f * a[c * n + j];
            b[r] -= f * b[c];
        }
    }
    x.assign(n, 0.0);
    for (int r = n - 1; r >= 0; --r) {
        double s = b[r];
        for (int j = r + 1; j < n; ++j) s -= a[r * n + j] * x[j];
        x[r] = s / a[r * n + r];
    }
    return true;
}

Expr sym_det(const ExprMatrix& a) {
    const std::size_t n = a.size();
    if (n == 0) return Expr::constant(1LL);
    if (n == 1) return simplify(a[0][0]);
    std::vector<Expr> terms;
    for (std::size_t c = 0; c < n; ++c) {
        ExprMatrix minor;
        for (std::size_t r = 1; r < n; ++r) {
            std::vector<Expr> row;
            for (std::size_t j = 0; j < n; ++j)
                if (j != c) row.push_back(a[r][j]);
            minor.push_back(std::move(row));
        }
        Expr cofactor = mul(a[0][c], sym_det(minor));
        terms.push_back(c % 2 == 0 ? cofactor : neg(cofactor));
    }
    return simplify(Expr::sum(std::move(terms)));
}

std::optional<std::vector<Expr>> sym_linear_solve(ExprMatrix a, std::vector<Expr> b) {
    const std::size_t n = a.size();
    for (auto& row : a)
        for (auto& e : row) e = simplify(e);
    for (auto& e : b) e = simplify(e);

    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = n;
        for (std::size_t r = c; r < n; ++r) {
            if (!a[r][c].is_zero()) {
                piv = r;
                break;
            }
        }
        if (piv == n) return std::nullopt;
        std::swap(a[c], a[piv]);
        std::swap(b[c], b[piv]);
        Expr inv = simplify(Expr::pow(a[c][c], -1));
        for (std::size_t r = c + 1; r < n; ++r) {
            if (a[r][c].is_zero()) continue;
            Expr f = simplify(mul(a[r][c], inv));
            for (std::size_t j = c; j < n; ++j) a[r][j] = simplify(sub(a[r][j], mul(f, a[c][j])));
            b[r] = simplify(sub(b[r], mul(f, b[c])));
        }
    }
    std::vector<Expr> x(n, Expr::constant(0LL));
    for (std::size_t ri = n; ri-- > 0;) {
        Expr s = b[ri];
        for (std::size_t j = ri + 1; j < n; ++j) s = sub(s, mul(a[ri][j], x[j]));
        x[ri] = simplify(mul(s, Expr::pow(a[ri][ri], -1)));
    }
    return x;
}

}  // namespace hogm
