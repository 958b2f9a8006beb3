#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "nonlocal/errors.hpp"
#include "nonlocal/grid.hpp"
#include "nonlocal/kernel.hpp"

namespace nonlocal {

namespace detail {

// int_a^b y^{-1-alpha} dy
inline double kernel_mass(double alpha, double a, double b) {
    return (std::pow(a, -alpha) - std::pow(b, -alpha)) / alpha;
}

// int_a^b y^{-alpha} dy, continuous across alpha = 1
inline double kernel_first_moment(double alpha, double a, double b) {
    if (alpha == 1.0) return std::log(b / a);
    return (std::pow(b, 1.0 - alpha) - std::pow(a, 1.0 - alpha)) / (1.0 - alpha);
}

// Second antiderivative of y^{-1-alpha}; second differences of it give exact
// integrals of the kernel against piecewise-linear hat functions.
inline double kernel_second_antiderivative(double alpha, double y) {
    if (alpha == 1.0) return -std::log(y);
    return std::pow(y, 1.0 - alpha) / (alpha * (alpha - 1.0));
}

}  // namespace detail

// Dense symmetric discretization of the nonlocal operator
//   (A u)(x) = c_alpha PV int (u(x+y) - u(x)) |y|^{-1-alpha} dy
// on the uniform grid, with u extended by zero outside (0,1).
//
// Construction: u is interpolated piecewise-linearly on the hat basis; the
// far field |y| > r (r = split*h) is integrated exactly against the hats, and
// the near field |y| <= r uses the symmetrized second-difference model
// (u(x+y)+u(x-y)-2u(x) ~ y^2 (u_{i+1}-2u_i+u_{i-1})/h^2), which is what makes
// the singular part integrable. The exterior ("volume constraint") mass is
// kept in closed form, so no truncation of the kernel tail occurs anywhere.
struct NonlocalOperator {
    Grid1D grid;
    KernelSpec kernel;
    std::vector<double> a;         // row-major n x n matrix entries
    std::vector<double> ext_mass;  // per-row exterior interaction mass, > 0; row sum of a = -ext_mass

    double entry(std::size_t i, std::size_t j) const { return a[i * grid.n + j]; }

    // y = A u
    Field apply(const Field& u) const {
        require_same_grid(grid, u, "NonlocalOperator::apply");
        const std::size_t n = grid.n;
        Field y(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double* row = &a[i * n];
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j) s += row[j] * u[j];
            y[i] = s;
        }
        return y;
    }
};

// Assembles the operator. Off-diagonal weights are exact hat-function
// integrals of the kernel (second differences of the antiderivative); each
// diagonal entry is the negated sum of its row's off-diagonal and exterior
// weights, so the discrete Green identity holds to roundoff by construction.
inline NonlocalOperator assemble_operator(const Grid1D& grid, const KernelSpec& kernel) {
    const double alpha = kernel.alpha;
    const double c = kernel.c_alpha;
    const double h = grid.h;
    const double r = kernel.singularity_split * h;
    const std::size_t n = grid.n;

    using detail::kernel_first_moment;
    using detail::kernel_mass;
    using detail::kernel_second_antiderivative;

    // Near-field second-difference coefficient on u_{i+-1}.
    const double near = std::pow(r, 2.0 - alpha) / ((2.0 - alpha) * h * h);

    // Hat-function weights W_m = int hat_m(y) y^{-1-alpha} dy over y > r.
    // m = 1 is special because its support [0, 2h] meets the near-field ball.
    auto antider = [&](std::size_t m) { return kernel_second_antiderivative(alpha, static_cast<double>(m) * h); };
    std::vector<double> w(n + 1, 0.0);
    w[1] = kernel_first_moment(alpha, r, h) / h + 2.0 * kernel_mass(alpha, h, 2.0 * h) -
           kernel_first_moment(alpha, h, 2.0 * h) / h;
    for (std::size_t m = 2; m <= n; ++m) w[m] = (antider(m + 1) - 2.0 * antider(m) + antider(m - 1)) / h;

    // Own-hat far-field weight; vanishes when the split radius is a full cell.
    const double own = 2.0 * (kernel_mass(alpha, r, h) - kernel_first_moment(alpha, r, h) / h);

    // Tail sums S(M) = sum_{m >= M} W_m; the telescoping uses that the
    // antiderivative has vanishing slope at infinity.
    std::vector<double> tail(n + 1, 0.0);
    for (std::size_t m = 2; m <= n; ++m)
        tail[m] = (antider(m - 1) - antider(m)) / h;
    tail[1] = w[1] + tail[2];

    NonlocalOperator op{grid, kernel, std::vector<double>(n * n, 0.0), std::vector<double>(n, 0.0)};

    for (std::size_t i = 0; i < n; ++i) {
        // Distances to the nearest exterior node on each side are i+1 and n-i.
        const std::size_t left = i + 1, right = n - i;
        double ext = tail[left] + tail[right];
        if (left == 1) ext += near;
        if (right == 1) ext += near;
        op.ext_mass[i] = c * ext;

        double offdiag_sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const std::size_t m = (j > i) ? j - i : i - j;
            const double value = c * (m == 1 ? w[1] + near : w[m]);
            op.a[i * n + j] = value;
            offdiag_sum += value;
        }
        op.a[i * n + i] = -(offdiag_sum + op.ext_mass[i]);
    }

    // Closed-form diagonal: full kernel mass outside the split ball, minus the
    // own-hat recapture, plus the near-field center weight. Agreement with the
    // row-sum diagonal validates the entire weight bookkeeping.
    const double diag_closed = -c * (2.0 * std::pow(r, -alpha) / alpha - own + 2.0 * near);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = op.a[i * n + i];
        if (!(d < 0.0) || std::abs(d - diag_closed) > 1e-10 * std::abs(diag_closed))
            throw numerical_error("assemble_operator: diagonal mismatch at row " + std::to_string(i) +
                                  " (row-sum " + std::to_string(d) + ", closed form " + std::to_string(diag_closed) + ")");
        if (!(op.ext_mass[i] > 0.0))
            throw numerical_error("assemble_operator: nonpositive exterior mass at row " + std::to_string(i));
    }
    return op;
}

}  // namespace nonlocal
