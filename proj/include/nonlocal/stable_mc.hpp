#pragma once

// Probabilistic oracle: killed jump diffusions driven by symmetric stable
// increments, simulated path-by-path with a counter RNG so ensembles are
// bit-reproducible for a given seed regardless of scheduling. The increment
// scale is pinned to the same normalization as the nonlocal operator: the
// driver's generator has Fourier symbol -|theta|^alpha, which at alpha = 2
// is the full Laplacian (variance 2 dt), not the probabilist's half.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "nonlocal/drift.hpp"
#include "nonlocal/errors.hpp"
#include "nonlocal/grid.hpp"
#include "nonlocal/rng.hpp"

namespace nonlocal {

// Chambers-Mallows-Stuck draw of a standard symmetric alpha-stable variable
// (characteristic function exp(-|theta|^alpha)). The alpha = 1 and alpha = 2
// ends use their exact closed forms.
inline double sample_stable_standard(double alpha, CounterRng& rng) {
    const double v = std::numbers::pi * (rng.uniform_open() - 0.5);  // U(-pi/2, pi/2)
    if (alpha == 2.0) {
        const double w = -std::log(rng.uniform_open());
        return 2.0 * std::sin(v) * std::sqrt(w);
    }
    if (alpha == 1.0) return std::tan(v);
    const double w = -std::log(rng.uniform_open());
    const double s = std::sin(alpha * v) / std::pow(std::cos(v), 1.0 / alpha);
    return s * std::pow(std::cos(v - alpha * v) / w, (1.0 - alpha) / alpha);
}

// Increment of the driving process over dt: self-similarity gives the
// dt^{1/alpha} scale.
inline double sample_stable_increment(double alpha, double dt, CounterRng& rng) {
    if (!(alpha > 0.0) || !(alpha <= 2.0)) throw parameter_error("sample_stable_increment: alpha must be in (0, 2]");
    if (!(dt > 0.0)) throw parameter_error("sample_stable_increment: dt must be positive");
    return std::pow(dt, 1.0 / alpha) * sample_stable_standard(alpha, rng);
}

struct StableSimConfig {
    double alpha = 1.0;
    Drift drift;  // empty b_mid means zero drift
    std::size_t n_paths = 200000;
    double dt = 1e-4;
    double T = 0.25;
    std::uint64_t seed = 0;
    std::size_t bins = 32;

    void validate() const {
        if (!(alpha > 0.0) || !(alpha <= 2.0)) throw parameter_error("StableSimConfig: alpha must be in (0, 2]");
        if (n_paths < 1000) throw parameter_error("StableSimConfig: need at least 1000 paths");
        if (!(dt > 0.0)) throw parameter_error("StableSimConfig: dt must be positive");
        if (!(T >= 0.0)) throw parameter_error("StableSimConfig: T must be >= 0");
        if (bins < 16) throw parameter_error("StableSimConfig: need at least 16 bins");
    }
};

struct KilledEnsemble {
    std::vector<double> positions;  // survivors only, strictly inside (0,1)
    std::size_t n_paths = 0;

    std::size_t survivors() const { return positions.size(); }
    double survival_fraction() const {
        return n_paths == 0 ? 0.0 : static_cast<double>(positions.size()) / static_cast<double>(n_paths);
    }
};

namespace detail {

// Piecewise-linear drift read on the h/2-spaced interface/node lattice,
// clamped at the ends; identically zero when the drift is empty.
inline double drift_at(const Drift& drift, double x) {
    const std::size_t segments = drift.b_mid.empty() ? 0 : 2 * drift.b_nodes.size();
    if (segments == 0) return 0.0;
    const std::size_t n = drift.b_nodes.size();
    const double half = 1.0 / static_cast<double>(2 * (n + 1));
    auto fine = [&](std::size_t k) {  // k = 0..2n: interface, node, interface, ...
        return (k % 2 == 0) ? drift.b_mid[k / 2] : drift.b_nodes[k / 2];
    };
    const double s = x / half - 1.0;  // fine index coordinate
    if (s <= 0.0) return fine(0);
    if (s >= static_cast<double>(segments)) return fine(segments);
    const std::size_t k = static_cast<std::size_t>(s);
    const double frac = s - static_cast<double>(k);
    return fine(k) * (1.0 - frac) + fine(k + 1) * frac;
}

}  // namespace detail

// Euler-Maruyama with killing at the first step that lands outside (0,1) --
// jump overshoot included, the post-jump position is what gets tested, which
// is the process realizing the exterior (volume) constraint. Initial
// positions are drawn from the normalized piecewise-constant density; each
// path owns the RNG stream (seed, path index).
inline KilledEnsemble simulate_killed(const StableSimConfig& cfg, const Grid1D& grid, const Field& initial_density) {
    cfg.validate();
    require_same_grid(grid, initial_density, "simulate_killed");
    std::vector<double> cdf(grid.n);
    double total = 0.0;
    for (std::size_t i = 0; i < grid.n; ++i) {
        if (!(initial_density[i] >= 0.0))
            throw parameter_error("simulate_killed: initial density must be nonnegative (node " + std::to_string(i) +
                                  ")");
        total += initial_density[i];
        cdf[i] = total;
    }
    if (!(total > 0.0)) throw parameter_error("simulate_killed: initial density has zero mass");
    for (double& c : cdf) c /= total;

    const std::size_t steps = static_cast<std::size_t>(std::llround(cfg.T / cfg.dt));
    const double jump_scale = std::pow(cfg.dt, 1.0 / cfg.alpha);

    KilledEnsemble out;
    out.n_paths = cfg.n_paths;
    out.positions.reserve(cfg.n_paths);
    for (std::size_t p = 0; p < cfg.n_paths; ++p) {
        CounterRng rng(cfg.seed, p);
        // Inverse-CDF draw of the starting cell, uniform inside the cell.
        const double u = rng.uniform_open();
        const std::size_t cell =
            static_cast<std::size_t>(std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        double x = grid.node(std::min(cell, grid.n - 1)) + (rng.uniform_open() - 0.5) * grid.h;
        bool alive = x > 0.0 && x < 1.0;
        for (std::size_t m = 0; alive && m < steps; ++m) {
            x += cfg.dt * detail::drift_at(cfg.drift, x) + jump_scale * sample_stable_standard(cfg.alpha, rng);
            alive = x > 0.0 && x < 1.0;
        }
        if (alive) out.positions.push_back(x);
    }
    return out;
}

// Sub-probability histogram over uniform bins of (0,1): entry = fraction of
// all launched paths ending alive in the bin, so the total is the survival
// fraction.
inline std::vector<double> histogram(const KilledEnsemble& ensemble, std::size_t bins) {
    if (bins < 1) throw parameter_error("histogram: need at least one bin");
    if (ensemble.n_paths == 0) throw parameter_error("histogram: ensemble launched no paths");
    std::vector<double> mass(bins, 0.0);
    const double w = 1.0 / static_cast<double>(ensemble.n_paths);
    for (double x : ensemble.positions) {
        if (!(x > 0.0 && x < 1.0)) throw numerical_error("histogram: survivor outside the domain");
        const std::size_t b = std::min(static_cast<std::size_t>(x * static_cast<double>(bins)), bins - 1);
        mass[b] += w;
    }
    return mass;
}

struct DensityComparison {
    double l1 = 0.0;             // L1 distance of the two conditional (shape) densities
    double mc_survival = 0.0;
    double pde_survival = 0.0;   // final mass over initial mass
    double survival_se = 0.0;    // binomial standard error of the MC fraction
    bool survival_ok = false;    // |mc - pde| <= 3 se + 0.01 discretization budget
};

// Bins the PDE field alongside the ensemble histogram and compares the two
// conditional densities (each normalized to unit mass over survivors); the
// survival masses themselves get the binomial 3-sigma + 0.01 budget.
inline DensityComparison compare_density(const KilledEnsemble& ensemble, const Grid1D& grid, const Field& pde_final,
                                         const Field& pde_initial, std::size_t bins) {
    require_same_grid(grid, pde_final, "compare_density");
    require_same_grid(grid, pde_initial, "compare_density");
    if (ensemble.survivors() == 0) throw numerical_error("compare_density: no surviving paths to compare");
    const double m0 = mass(grid, pde_initial);
    if (!(m0 > 0.0)) throw parameter_error("compare_density: initial PDE mass must be positive");

    std::vector<double> pde_mass(bins, 0.0);
    for (std::size_t i = 0; i < grid.n; ++i) {
        const std::size_t b =
            std::min(static_cast<std::size_t>(grid.node(i) * static_cast<double>(bins)), bins - 1);
        pde_mass[b] += grid.h * pde_final[i];
    }
    const std::vector<double> mc_mass = histogram(ensemble, bins);

    DensityComparison out;
    out.mc_survival = ensemble.survival_fraction();
    double pde_total = 0.0;
    for (double v : pde_mass) pde_total += v;
    out.pde_survival = pde_total / m0;
    if (!(pde_total > 0.0)) throw numerical_error("compare_density: PDE mass vanished, nothing to normalize");

    for (std::size_t b = 0; b < bins; ++b)
        out.l1 += std::abs(pde_mass[b] / pde_total - mc_mass[b] / out.mc_survival);
    out.survival_se = std::sqrt(out.mc_survival * (1.0 - out.mc_survival) /
                                static_cast<double>(ensemble.n_paths));
    out.survival_ok = std::abs(out.mc_survival - out.pde_survival) <= 3.0 * out.survival_se + 0.01;
    return out;
}

// Hill tail-index estimate over the top share of |samples|; the reciprocal
// mean log-excess over the threshold order statistic.
inline double hill_tail_index(std::vector<double> magnitudes, double top_fraction = 0.01) {
    if (!(top_fraction > 0.0) || !(top_fraction < 1.0))
        throw parameter_error("hill_tail_index: top fraction must be in (0,1)");
    for (double& v : magnitudes) v = std::abs(v);
    const std::size_t k = static_cast<std::size_t>(static_cast<double>(magnitudes.size()) * top_fraction);
    if (k < 10 || k + 1 > magnitudes.size()) throw parameter_error("hill_tail_index: too few samples for the tail");
    std::nth_element(magnitudes.begin(), magnitudes.begin() + static_cast<std::ptrdiff_t>(k), magnitudes.end(),
                     std::greater<double>());
    const double threshold = magnitudes[k];
    if (!(threshold > 0.0)) throw numerical_error("hill_tail_index: degenerate tail threshold");
    double s = 0.0;
    for (std::size_t i = 0; i < k; ++i) s += std::log(magnitudes[i] / threshold);
    return static_cast<double>(k) / s;
}

}  // namespace nonlocal
