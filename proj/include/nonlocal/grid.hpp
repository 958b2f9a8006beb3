#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nonlocal/errors.hpp"

namespace nonlocal {

// Uniform interior mesh of D = (0,1). Everything outside the interior nodes
// carries the value 0 (exterior condition on all of the complement, not just
// the two endpoints).
struct Grid1D {
    std::size_t n;  // interior node count
    double h;       // spacing, 1/(n+1)

    explicit Grid1D(std::size_t n_interior)
        : n(n_interior), h(1.0 / static_cast<double>(n_interior + 1)) {
        if (n < 2) throw grid_error("Grid1D: need at least 2 interior nodes, got " + std::to_string(n));
    }

    // x_i for i = 0..n-1 maps to i+1 spacings from the left boundary.
    double node(std::size_t i) const { return h * static_cast<double>(i + 1); }

    std::vector<double> nodes() const {
        std::vector<double> x(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = node(i);
        return x;
    }

    bool operator==(const Grid1D& other) const { return n == other.n; }
};

// State vector on the interior nodes, implicitly zero on the exterior.
struct Field {
    std::vector<double> values;
    std::optional<double> time_tag;

    Field() = default;
    explicit Field(std::size_t n, double fill = 0.0) : values(n, fill) {}
    explicit Field(std::vector<double> v) : values(std::move(v)) {}

    std::size_t size() const { return values.size(); }
    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }

    bool all_finite() const {
        for (double v : values)
            if (!std::isfinite(v)) return false;
        return true;
    }
};

inline Field sample(const Grid1D& grid, const std::function<double(double)>& f) {
    Field u(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) u[i] = f(grid.node(i));
    return u;
}

inline void require_same_grid(const Grid1D& grid, const Field& u, const char* where) {
    if (u.size() != grid.n)
        throw dimension_error(std::string(where) + ": field has " + std::to_string(u.size()) +
                              " entries, grid has " + std::to_string(grid.n) + " nodes");
}

// Discrete L2 inner product h * sum(u_i v_i); the mesh weight makes norms
// comparable across refinements.
inline double inner(const Grid1D& grid, const Field& u, const Field& v) {
    require_same_grid(grid, u, "inner");
    require_same_grid(grid, v, "inner");
    double s = 0.0;
    for (std::size_t i = 0; i < grid.n; ++i) s += u[i] * v[i];
    return grid.h * s;
}

inline double norm_l2_sq(const Grid1D& grid, const Field& u) { return inner(grid, u, u); }

inline double norm_l2(const Grid1D& grid, const Field& u) { return std::sqrt(norm_l2_sq(grid, u)); }

inline double norm_inf(const Field& u) {
    double m = 0.0;
    for (double v : u.values) m = std::max(m, std::abs(v));
    return m;
}

// Mass functional h * sum(u_i), the discrete integral over D.
inline double mass(const Grid1D& grid, const Field& u) {
    require_same_grid(grid, u, "mass");
    double s = 0.0;
    for (double v : u.values) s += v;
    return grid.h * s;
}

// Forward-difference H1 seminorm squared including the two boundary jumps to
// the zero exterior: sum over the n+1 gaps of ((u_{i+1}-u_i)/h)^2 * h.
inline double h1_seminorm_sq(const Grid1D& grid, const Field& u) {
    require_same_grid(grid, u, "h1_seminorm_sq");
    double s = u[0] * u[0];  // jump at the left boundary
    for (std::size_t i = 0; i + 1 < grid.n; ++i) {
        const double d = u[i + 1] - u[i];
        s += d * d;
    }
    s += u[grid.n - 1] * u[grid.n - 1];  // jump at the right boundary
    return s / grid.h;
}

}  // namespace nonlocal
