#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "nonlocal/errors.hpp"
#include "nonlocal/grid.hpp"
#include "nonlocal/linalg.hpp"
#include "nonlocal/operator.hpp"

namespace nonlocal {

// Two-point gradient of a field: G_ij = (u_j - u_i) * k_ij with k_ij the
// symmetric square root of the operator's pairwise weight a_ij, plus one
// exterior entry per node pairing u_i against the zero exterior value.
// With quadrature weights h/2 per ordered interior pair and h per exterior
// entry, sum w * G(u) * G(v) = -<A u, v>_h exactly (see dirichlet_form).
struct PairwiseGradient {
    std::size_t n = 0;
    std::vector<double> interior;  // row-major n x n, antisymmetric, zero diagonal
    std::vector<double> exterior;  // per-node entry (0 - u_i) * sqrt(ext_mass_i)

    double pair(std::size_t i, std::size_t j) const { return interior[i * n + j]; }
};

inline PairwiseGradient nonlocal_gradient(const Field& u, const NonlocalOperator& op) {
    require_same_grid(op.grid, u, "nonlocal_gradient");
    const std::size_t n = op.grid.n;
    PairwiseGradient g;
    g.n = n;
    g.interior.assign(n * n, 0.0);
    g.exterior.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double k = std::sqrt(op.entry(i, j));
            const double v = (u[j] - u[i]) * k;
            g.interior[i * n + j] = v;
            g.interior[j * n + i] = -v;
        }
        g.exterior[i] = -u[i] * std::sqrt(op.ext_mass[i]);
    }
    return g;
}

// Quadratic pairing of two gradients under the canonical weights.
inline double gradient_pairing(const Grid1D& grid, const PairwiseGradient& gu, const PairwiseGradient& gv) {
    if (gu.n != grid.n || gv.n != grid.n) throw dimension_error("gradient_pairing: size mismatch");
    const std::size_t n = grid.n;
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) s += gu.interior[i * n + j] * gv.interior[i * n + j];
    double e = 0.0;
    for (std::size_t i = 0; i < n; ++i) e += gu.exterior[i] * gv.exterior[i];
    // h/2 per ordered pair = h per unordered pair; h per exterior entry.
    return grid.h * (s + e);
}

// Dirichlet form -<A u, v>_h evaluated through the pairwise structure without
// materializing gradients; exact counterpart of gradient_pairing.
inline double dirichlet_form(const NonlocalOperator& op, const Field& u, const Field& v) {
    require_same_grid(op.grid, u, "dirichlet_form");
    require_same_grid(op.grid, v, "dirichlet_form");
    const std::size_t n = op.grid.n;
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = &op.a[i * n];
        for (std::size_t j = i + 1; j < n; ++j) s += row[j] * (u[j] - u[i]) * (v[j] - v[i]);
    }
    double e = 0.0;
    for (std::size_t i = 0; i < n; ++i) e += op.ext_mass[i] * u[i] * v[i];
    return op.grid.h * (s + e);
}

inline double dirichlet_energy(const NonlocalOperator& op, const Field& u) { return dirichlet_form(op, u, u); }

struct PoincareDetail {
    double c_p;                     // 1 / lambda_1
    std::vector<double> minimizer;  // unit-2-norm eigenvector of the smallest eigenvalue
    int iterations;
};

// Smallest eigenvalue of Lambda = -A by inverse power iteration on a Cholesky
// factorization; independent of the dense eigensolver so the two can
// cross-check each other. The factorization doubles as the definiteness test.
inline PoincareDetail poincare_detail(const NonlocalOperator& op, double rtol = 1e-13, int max_iter = 500) {
    const std::size_t n = op.grid.n;
    std::vector<double> lambda(n * n);
    for (std::size_t k = 0; k < n * n; ++k) lambda[k] = -op.a[k];

    CholeskyFactor chol;
    try {
        chol = CholeskyFactor::factor(lambda, n, "poincare_constant");
    } catch (const numerical_error&) {
        throw numerical_error("poincare_constant: operator is not negative definite; assembly corruption");
    }

    std::vector<double> z(n, 1.0 / std::sqrt(static_cast<double>(n)));
    double rho_prev = 0.0;
    int iter = 0;
    for (; iter < max_iter; ++iter) {
        chol.solve(z);
        double norm2 = 0.0;
        for (double v : z) norm2 += v * v;
        const double inv = 1.0 / std::sqrt(norm2);
        for (double& v : z) v *= inv;
        // Rayleigh quotient z^T Lambda z (z has unit 2-norm).
        double rho = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j) s += lambda[i * n + j] * z[j];
            rho += z[i] * s;
        }
        if (iter > 0 && std::abs(rho - rho_prev) <= rtol * rho) {
            rho_prev = rho;
            break;
        }
        rho_prev = rho;
    }
    if (!(rho_prev > 0.0)) throw numerical_error("poincare_constant: nonpositive Rayleigh quotient");
    return PoincareDetail{1.0 / rho_prev, std::move(z), iter + 1};
}

// Sharp constant in ||u||^2 <= C_P * dirichlet_energy(u).
inline double poincare_constant(const NonlocalOperator& op) { return poincare_detail(op).c_p; }

}  // namespace nonlocal
