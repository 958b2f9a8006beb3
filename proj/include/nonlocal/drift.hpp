#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "nonlocal/errors.hpp"
#include "nonlocal/grid.hpp"

namespace nonlocal {

// Transport coefficient sampled where the scheme needs it: node values for
// reporting and bound checks, interface values for the conservative flux.
// The declared derivative bounds feed the stability and uniqueness envelopes,
// so construction cross-checks them against finite differences of the samples.
struct Drift {
    Field b_nodes;               // at grid nodes x_1..x_n
    std::vector<double> b_mid;   // at the n+1 interfaces x_{i-1/2}, i = 0..n
    double b_prime_sup = 0.0;    // declared bound on |b'|
    double b_second_sup = 0.0;   // declared bound on |b''|

    double max_abs() const {
        double m = 0.0;
        for (double v : b_nodes.values) m = std::max(m, std::abs(v));
        for (double v : b_mid) m = std::max(m, std::abs(v));
        return m;
    }

    static Drift zero(const Grid1D& grid) {
        Drift d;
        d.b_nodes = Field(grid.n);
        d.b_mid.assign(grid.n + 1, 0.0);
        return d;
    }

    static Drift from_function(const Grid1D& grid, const std::function<double(double)>& b, double b_prime_sup,
                               double b_second_sup) {
        if (!b) throw parameter_error("Drift: callable required");
        if (!(b_prime_sup >= 0.0) || !(b_second_sup >= 0.0))
            throw parameter_error("Drift: derivative bounds must be nonnegative");
        Drift d;
        d.b_prime_sup = b_prime_sup;
        d.b_second_sup = b_second_sup;
        d.b_nodes = sample(grid, b);
        d.b_mid.resize(grid.n + 1);
        for (std::size_t j = 0; j <= grid.n; ++j)
            d.b_mid[j] = b(grid.h * (static_cast<double>(j) + 0.5));
        if (!d.b_nodes.all_finite()) throw parameter_error("Drift: non-finite node sample");
        for (double v : d.b_mid)
            if (!std::isfinite(v)) throw parameter_error("Drift: non-finite interface sample");

        // Interleave interfaces and nodes into one h/2-spaced sequence, then
        // difference it: the declared sups must dominate what the samples show
        // (1% slack for the finite-difference bias).
        std::vector<double> fine;
        fine.reserve(2 * grid.n + 1);
        for (std::size_t i = 0; i < grid.n; ++i) {
            fine.push_back(d.b_mid[i]);
            fine.push_back(d.b_nodes[i]);
        }
        fine.push_back(d.b_mid[grid.n]);
        const double half = grid.h / 2.0;
        double d1 = 0.0, d2 = 0.0;
        for (std::size_t i = 0; i + 1 < fine.size(); ++i) d1 = std::max(d1, std::abs(fine[i + 1] - fine[i]) / half);
        for (std::size_t i = 1; i + 1 < fine.size(); ++i)
            d2 = std::max(d2, std::abs(fine[i + 1] - 2.0 * fine[i] + fine[i - 1]) / (half * half));
        if (d1 > b_prime_sup * 1.01)
            throw parameter_error("Drift: sampled |b'| reaches " + std::to_string(d1) +
                                  ", above the declared bound " + std::to_string(b_prime_sup));
        if (d2 > b_second_sup * 1.01)
            throw parameter_error("Drift: sampled |b''| reaches " + std::to_string(d2) +
                                  ", above the declared bound " + std::to_string(b_second_sup));
        return d;
    }
};

// Conservative first-order upwind divergence of the flux b u with zero
// exterior state. Returns (F_{i+1/2} - F_{i-1/2}) / h per node; the telescoped
// sum leaves only boundary fluxes, each of which drains mass when u >= 0.
inline Field upwind_divergence(const Grid1D& grid, const Drift& drift, const Field& u) {
    require_same_grid(grid, u, "upwind_divergence");
    if (drift.b_mid.size() != grid.n + 1) throw dimension_error("upwind_divergence: drift/grid mismatch");
    const std::size_t n = grid.n;
    std::vector<double> flux(n + 1);
    for (std::size_t j = 0; j <= n; ++j) {
        const double b = drift.b_mid[j];
        const double up = b > 0.0 ? (j > 0 ? u[j - 1] : 0.0) : (j < n ? u[j] : 0.0);
        flux[j] = b * up;
    }
    Field div(n);
    for (std::size_t i = 0; i < n; ++i) div[i] = (flux[i + 1] - flux[i]) / grid.h;
    return div;
}

}  // namespace nonlocal
