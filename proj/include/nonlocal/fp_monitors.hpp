#pragma once

// Certificates over recorded transport-diffusion trajectories: the discrete
// weak form against a fixed test-function battery, the H1 growth envelope,
// and the two-run uniqueness/stability contraction.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "nonlocal/calculus.hpp"
#include "nonlocal/eigen.hpp"
#include "nonlocal/errors.hpp"
#include "nonlocal/fp_solver.hpp"

namespace nonlocal {

struct WeakResidualReport {
    std::vector<std::string> names;     // test-function identifiers
    std::vector<double> residuals;      // sup over records of |weak form| / ||phi||_H1
    double worst = 0.0;
};

// Discrete weak form at each recorded step: time difference forward, drift
// term through the same conservative flux the scheme uses, nonlocal term via
// the symmetric pairing <u, A phi>. Test battery: the first ten eigenvectors
// (smooth, global) and ten single-node hats (rough, local). A phi is
// precomputed once per phi, so each record costs O(n) per test function.
inline WeakResidualReport weak_residual(const NonlocalOperator& op, const EigenDecomposition& eig,
                                        const Drift& drift, const FPTrajectory& traj) {
    if (traj.states.size() < 2) throw parameter_error("weak_residual: need at least two records");
    const Grid1D& grid = op.grid;
    const std::size_t n = grid.n;

    std::vector<std::pair<std::string, Field>> phis;
    const std::size_t n_eig = std::min<std::size_t>(10, n);
    for (std::size_t k = 0; k < n_eig; ++k) phis.emplace_back("eig" + std::to_string(k + 1), eig.eigenvector(k));
    const std::size_t n_hat = std::min<std::size_t>(10, n);
    for (std::size_t j = 0; j < n_hat; ++j) {
        const std::size_t i = ((j + 1) * n) / (n_hat + 1);
        Field hat(n);
        hat[i] = 1.0;
        phis.emplace_back("hat@" + std::to_string(grid.node(i)).substr(0, 5), std::move(hat));
    }

    WeakResidualReport rep;
    for (const auto& [name, phi] : phis) {
        const Field a_phi = op.apply(phi);
        const double phi_h1 = std::sqrt(norm_l2_sq(grid, phi) + h1_seminorm_sq(grid, phi));
        double sup = 0.0;
        for (std::size_t m = 0; m + 1 < traj.states.size(); ++m) {
            const double dt = traj.t[m + 1] - traj.t[m];
            const Field& u = traj.states[m];
            const Field& u_next = traj.states[m + 1];
            const Field div = upwind_divergence(grid, drift, u);
            double r = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                r += ((u_next[i] - u[i]) / dt + div[i]) * phi[i] - u[i] * a_phi[i];
            sup = std::max(sup, std::abs(grid.h * r) / phi_h1);
        }
        if (!std::isfinite(sup)) throw numerical_error("weak_residual: non-finite residual for " + name);
        rep.names.push_back(name);
        rep.residuals.push_back(sup);
        rep.worst = std::max(rep.worst, sup);
    }
    return rep;
}

struct FPEnergyReport {
    bool pass = true;
    double c = 0.0;            // growth constant 3 (1 + |b'| + |b''|) in the envelope
    double q0 = 0.0;           // ||u(0)|| + ||du(0)|| + ||u_t(0)||
    double worst_ratio = 0.0;  // max over records of Q(t) / envelope(t)
    double first_fail_t = -1.0;
};

// Q(t) = ||u|| + ||grad u|| + ||u_t|| must stay inside e^{C t} Q(0) with
// C = 3 (1 + |b'|_sup + |b''|_sup); u_t by forward differences of the records
// (backward at the final one).
inline FPEnergyReport h1_energy_check(const FPTrajectory& traj, const Drift& drift, const Grid1D& grid) {
    if (traj.states.size() < 2) throw parameter_error("h1_energy_check: need at least two records");
    const std::size_t count = traj.states.size();
    auto u_t_norm = [&](std::size_t m) {
        const std::size_t lo = m + 1 < count ? m : m - 1;
        const double dt = traj.t[lo + 1] - traj.t[lo];
        Field d(grid.n);
        for (std::size_t i = 0; i < grid.n; ++i) d[i] = (traj.states[lo + 1][i] - traj.states[lo][i]) / dt;
        return norm_l2(grid, d);
    };
    auto q_at = [&](std::size_t m) {
        return norm_l2(grid, traj.states[m]) + std::sqrt(h1_seminorm_sq(grid, traj.states[m])) + u_t_norm(m);
    };

    FPEnergyReport rep;
    rep.c = 3.0 * (1.0 + drift.b_prime_sup + drift.b_second_sup);
    rep.q0 = q_at(0);
    for (std::size_t m = 0; m < count; ++m) {
        const double envelope = std::exp(rep.c * (traj.t[m] - traj.t.front())) * rep.q0;
        const double q = q_at(m);
        const double ratio = envelope > 0.0 ? q / envelope : (q > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
        rep.worst_ratio = std::max(rep.worst_ratio, ratio);
        if (q > envelope * (1.0 + 1e-9) + 1e-12 && rep.pass) {
            rep.pass = false;
            rep.first_fail_t = traj.t[m];
        }
    }
    return rep;
}

struct UniquenessReport {
    std::vector<double> t;
    std::vector<double> d;          // ||u_a - u_b||^2 per record
    bool identical_zero = false;    // d identically zero (bitwise-deterministic solver)
    double fitted_exponent = 0.0;   // least-squares slope of log d over records with d > 0
    double envelope_rate = 0.0;     // 2 |b'|_sup
    bool pass = false;
};

// Two runs from u0_a, u0_b on the same discretization: the squared L2 gap
// d(t) may grow no faster than e^{2 |b'|_sup t}; equal data must give d = 0
// exactly. The fitted exponent gets 10% slack over the envelope rate plus an
// absolute 1e-9 for the driftless case where the rate is exactly zero.
inline UniquenessReport uniqueness_check(const FPSolver& solver, const Drift& drift, const Field& u0_a,
                                         const Field& u0_b, const FPConfig& cfg, double eps = 0.0) {
    const FPTrajectory a = solver.solve_viscous(eps, drift, u0_a, cfg);
    const FPTrajectory b = solver.solve_viscous(eps, drift, u0_b, cfg);
    const Grid1D& grid = solver.grid();

    UniquenessReport rep;
    rep.t = a.t;
    rep.envelope_rate = 2.0 * drift.b_prime_sup;
    rep.d.resize(a.states.size());
    for (std::size_t m = 0; m < a.states.size(); ++m) {
        Field diff(grid.n);
        for (std::size_t i = 0; i < grid.n; ++i) diff[i] = a.states[m][i] - b.states[m][i];
        rep.d[m] = norm_l2_sq(grid, diff);
    }
    rep.identical_zero = std::all_of(rep.d.begin(), rep.d.end(), [](double v) { return v == 0.0; });
    if (rep.identical_zero) {
        rep.pass = true;
        return rep;
    }

    // Slope of log d against t, ignoring records where the gap hit zero.
    double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
    std::size_t cnt = 0;
    for (std::size_t m = 0; m < rep.d.size(); ++m) {
        if (!(rep.d[m] > 0.0)) continue;
        const double y = std::log(rep.d[m]);
        st += rep.t[m];
        sy += y;
        stt += rep.t[m] * rep.t[m];
        sty += rep.t[m] * y;
        ++cnt;
    }
    if (cnt < 2) throw numerical_error("uniqueness_check: gap vanished almost everywhere, no exponent to fit");
    const double denom = static_cast<double>(cnt) * stt - st * st;
    rep.fitted_exponent = (static_cast<double>(cnt) * sty - st * sy) / denom;

    bool pointwise = true;
    const double d0 = rep.d.front();
    for (std::size_t m = 0; m < rep.d.size(); ++m) {
        const double envelope = d0 * std::exp(rep.envelope_rate * (rep.t[m] - rep.t.front()));
        if (rep.d[m] > envelope * (1.0 + 1e-6) + 1e-300) pointwise = false;
    }
    rep.pass = pointwise && rep.fitted_exponent <= rep.envelope_rate * 1.1 + 1e-9;
    return rep;
}

}  // namespace nonlocal
