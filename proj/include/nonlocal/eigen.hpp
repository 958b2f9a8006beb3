#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "nonlocal/errors.hpp"
#include "nonlocal/grid.hpp"
#include "nonlocal/operator.hpp"

namespace nonlocal {

namespace detail {

// Householder reduction of a symmetric row-major matrix to tridiagonal form
// (diagonal d, subdiagonal e with e[0] = 0); z is overwritten with the
// accumulated orthogonal transformation.
inline void tridiagonalize(std::vector<double>& z, std::size_t n, std::vector<double>& d, std::vector<double>& e) {
    for (std::size_t i = n - 1; i >= 1; --i) {
        const std::size_t l = i - 1;
        double h = 0.0;
        if (l > 0) {
            double scale = 0.0;
            for (std::size_t k = 0; k <= l; ++k) scale += std::abs(z[i * n + k]);
            if (scale == 0.0) {
                e[i] = z[i * n + l];
            } else {
                for (std::size_t k = 0; k <= l; ++k) {
                    z[i * n + k] /= scale;
                    h += z[i * n + k] * z[i * n + k];
                }
                double f = z[i * n + l];
                double g = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
                e[i] = scale * g;
                h -= f * g;
                z[i * n + l] = f - g;
                f = 0.0;
                for (std::size_t j = 0; j <= l; ++j) {
                    z[j * n + i] = z[i * n + j] / h;
                    g = 0.0;
                    for (std::size_t k = 0; k <= j; ++k) g += z[j * n + k] * z[i * n + k];
                    for (std::size_t k = j + 1; k <= l; ++k) g += z[k * n + j] * z[i * n + k];
                    e[j] = g / h;
                    f += e[j] * z[i * n + j];
                }
                const double hh = f / (h + h);
                for (std::size_t j = 0; j <= l; ++j) {
                    f = z[i * n + j];
                    const double ej = e[j] - hh * f;
                    e[j] = ej;
                    for (std::size_t k = 0; k <= j; ++k) z[j * n + k] -= f * e[k] + ej * z[i * n + k];
                }
            }
        } else {
            e[i] = z[i * n + l];
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (d[i] != 0.0) {
            for (std::size_t j = 0; j < i; ++j) {
                double g = 0.0;
                for (std::size_t k = 0; k < i; ++k) g += z[i * n + k] * z[k * n + j];
                for (std::size_t k = 0; k < i; ++k) z[k * n + j] -= g * z[k * n + i];
            }
        }
        d[i] = z[i * n + i];
        z[i * n + i] = 1.0;
        for (std::size_t j = 0; j < i; ++j) z[j * n + i] = z[i * n + j] = 0.0;
    }
}

// Implicit-shift QL on the tridiagonal (d, e), rotations accumulated into the
// columns of z. max_iter caps the sweeps per eigenvalue.
inline void ql_implicit(std::vector<double>& d, std::vector<double>& e, std::vector<double>& z, std::size_t n,
                        int max_iter) {
    using std::abs;
    for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;
    const double eps = std::numeric_limits<double>::epsilon();
    for (std::size_t l = 0; l < n; ++l) {
        int iter = 0;
        std::size_t m;
        do {
            for (m = l; m + 1 < n; ++m) {
                const double dd = abs(d[m]) + abs(d[m + 1]);
                if (abs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (iter++ == max_iter)
                    throw numerical_error("eigendecompose: QL failed to converge within " + std::to_string(max_iter) +
                                          " sweeps (residual subdiagonal " + std::to_string(e[l]) + " at index " +
                                          std::to_string(l) + ")");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                std::ptrdiff_t i;
                for (i = static_cast<std::ptrdiff_t>(m) - 1; i >= static_cast<std::ptrdiff_t>(l); --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    for (std::size_t k = 0; k < n; ++k) {
                        f = z[k * n + i + 1];
                        z[k * n + i + 1] = s * z[k * n + i] + c * f;
                        z[k * n + i] = c * z[k * n + i] - s * f;
                    }
                }
                if (r == 0.0 && i >= static_cast<std::ptrdiff_t>(l)) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

}  // namespace detail

// Spectrum of Lambda = -A: ascending eigenvalues and Euclidean-orthonormal
// eigenvector columns. L2-grid norms carry the extra factor h, so a field
// expanded as u = sum c_k phi_k has ||u||^2_h = h * sum c_k^2.
struct EigenDecomposition {
    Grid1D grid;
    std::vector<double> eigenvalues;  // ascending, all positive
    std::vector<double> q;            // row-major n x n; column k is eigenvector k

    std::size_t n() const { return grid.n; }

    std::vector<double> to_modal(const Field& u) const {
        require_same_grid(grid, u, "to_modal");
        const std::size_t m = grid.n;
        std::vector<double> c(m, 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            const double ui = u[i];
            const double* row = &q[i * m];
            for (std::size_t k = 0; k < m; ++k) c[k] += row[k] * ui;
        }
        return c;
    }

    Field from_modal(const std::vector<double>& c) const {
        if (c.size() != grid.n) throw dimension_error("from_modal: coefficient size mismatch");
        const std::size_t m = grid.n;
        Field u(m);
        for (std::size_t i = 0; i < m; ++i) {
            const double* row = &q[i * m];
            double s = 0.0;
            for (std::size_t k = 0; k < m; ++k) s += row[k] * c[k];
            u[i] = s;
        }
        return u;
    }

    Field eigenvector(std::size_t k) const {
        Field v(grid.n);
        for (std::size_t i = 0; i < grid.n; ++i) v[i] = q[i * grid.n + k];
        return v;
    }
};

inline EigenDecomposition eigendecompose(const NonlocalOperator& op, int max_iter = 30) {
    const std::size_t n = op.grid.n;
    std::vector<double> z(n * n);
    for (std::size_t k = 0; k < n * n; ++k) z[k] = -op.a[k];  // Lambda = -A

    std::vector<double> d(n, 0.0), e(n, 0.0);
    detail::tridiagonalize(z, n, d, e);
    detail::ql_implicit(d, e, z, n, max_iter);

    // Ascending sort, columns permuted along.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });

    EigenDecomposition eig{op.grid, std::vector<double>(n), std::vector<double>(n * n)};
    for (std::size_t k = 0; k < n; ++k) {
        eig.eigenvalues[k] = d[order[k]];
        for (std::size_t i = 0; i < n; ++i) eig.q[i * n + k] = z[i * n + order[k]];
    }

    // Deterministic sign: the first entry whose magnitude reaches half the
    // column maximum is made positive.
    for (std::size_t k = 0; k < n; ++k) {
        double peak = 0.0;
        for (std::size_t i = 0; i < n; ++i) peak = std::max(peak, std::abs(eig.q[i * n + k]));
        for (std::size_t i = 0; i < n; ++i) {
            if (std::abs(eig.q[i * n + k]) >= 0.5 * peak) {
                if (eig.q[i * n + k] < 0.0)
                    for (std::size_t r = 0; r < n; ++r) eig.q[r * n + k] = -eig.q[r * n + k];
                break;
            }
        }
    }

    // Contract validation: orthonormality, residual, positivity.
    const double lambda_max = eig.eigenvalues[n - 1];
    if (!(eig.eigenvalues[0] > 0.0))
        throw numerical_error("eigendecompose: smallest eigenvalue " + std::to_string(eig.eigenvalues[0]) +
                              " is not positive");
    double ortho = 0.0;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a; b < n; ++b) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += eig.q[i * n + a] * eig.q[i * n + b];
            ortho = std::max(ortho, std::abs(s - (a == b ? 1.0 : 0.0)));
        }
    if (ortho > 1e-10)
        throw numerical_error("eigendecompose: orthonormality defect " + std::to_string(ortho));
    double resid = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j) s += -op.a[i * n + j] * eig.q[j * n + k];
            resid = std::max(resid, std::abs(s - eig.eigenvalues[k] * eig.q[i * n + k]));
        }
    if (resid > 1e-8 * lambda_max)
        throw numerical_error("eigendecompose: residual " + std::to_string(resid) + " exceeds 1e-8 * lambda_max");
    return eig;
}

// Printed asymptotic for the k-th eigenvalue, reported verbatim with no
// domain-scaling correction.
inline double asymptotic_eigenvalue(double alpha, std::size_t k_index) {
    if (!(alpha > 0.0 && alpha < 2.0))
        throw parameter_error("asymptotic_eigenvalue: alpha must lie in (0,2)");
    if (k_index < 1) throw parameter_error("asymptotic_eigenvalue: index must be >= 1");
    return std::pow(static_cast<double>(k_index) / 2.0 - (2.0 - alpha) / 8.0, alpha);
}

// Same asymptotic with the pi factor restored and the 2^alpha scaling that
// transplants the unit-interval result from the symmetric interval (-1,1).
inline double corrected_asymptotic_eigenvalue(double alpha, std::size_t k_index) {
    if (!(alpha > 0.0 && alpha < 2.0))
        throw parameter_error("corrected_asymptotic_eigenvalue: alpha must lie in (0,2)");
    if (k_index < 1) throw parameter_error("corrected_asymptotic_eigenvalue: index must be >= 1");
    return std::pow(static_cast<double>(k_index) * std::numbers::pi - (2.0 - alpha) * std::numbers::pi / 4.0, alpha);
}

}  // namespace nonlocal
