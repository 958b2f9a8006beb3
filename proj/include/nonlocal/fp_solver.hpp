#pragma once

// Transport-diffusion solver for the conservation form u_t + div(b u) = A u
// plus an artificial local viscosity eps * Laplacian, stepped IMEX: both
// diffusion terms implicit (they are stiff), the drift explicit under a CFL
// bound. The viscosity sweep drives eps -> 0 and watches the runs become a
// Cauchy sequence; the smallest-eps run is the limit candidate, not an
// extrapolation.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "nonlocal/drift.hpp"
#include "nonlocal/errors.hpp"
#include "nonlocal/grid.hpp"
#include "nonlocal/linalg.hpp"
#include "nonlocal/operator.hpp"

namespace nonlocal {

struct ViscositySchedule {
    std::vector<double> epsilons;

    // 2^{-k} for k = 0..K.
    static ViscositySchedule dyadic(std::size_t k_max) {
        ViscositySchedule s;
        s.epsilons.resize(k_max + 1);
        for (std::size_t k = 0; k <= k_max; ++k) s.epsilons[k] = std::ldexp(1.0, -static_cast<int>(k));
        return s;
    }

    void validate() const {
        if (epsilons.empty()) throw parameter_error("ViscositySchedule: empty");
        if (!(epsilons.front() <= 1.0)) throw parameter_error("ViscositySchedule: must start at or below 1");
        if (!(epsilons.back() > 0.0)) throw parameter_error("ViscositySchedule: must stay positive");
        for (std::size_t k = 0; k + 1 < epsilons.size(); ++k)
            if (!(epsilons[k + 1] < epsilons[k]))
                throw parameter_error("ViscositySchedule: must decrease strictly at index " + std::to_string(k + 1));
    }
};

struct FPConfig {
    double T = 0.5;
    double dt = 1e-4;
    std::size_t record_every = 1;   // keep every k-th step (plus t = 0 and t = T)
    bool include_nonlocal = true;   // false: pure local viscosity run (control experiments)

    void validate() const {
        if (!(dt > 0.0)) throw parameter_error("FPConfig: dt must be positive");
        if (!(T >= dt)) throw parameter_error("FPConfig: T must cover at least one step");
        if (record_every < 1) throw parameter_error("FPConfig: record_every must be >= 1");
    }
};

struct FPTrajectory {
    double eps = 0.0;
    double dt = 0.0;
    std::vector<double> t;
    std::vector<Field> states;  // aligned with t
};

struct VanishingViscosityResult {
    FPTrajectory limit;             // smallest-eps run
    std::vector<double> gaps;       // sup_t L2 distance between consecutive runs
    bool gaps_decreasing = false;   // strict decrease = Cauchy behavior; false is a convergence-failure report
};

// Convolution with the normalized compact bump psi(s) = exp(-1/(1-s^2)),
// |s| < 1, scaled to width eps and zero-extended past the boundary. The
// weights form a probability vector, so the L2 norm can only shrink. Widths
// at or below h see no neighbor inside the support and reduce to the
// identity (the mollifier is unresolvable on the mesh, data returned as-is).
inline Field mollify_initial(const Grid1D& grid, const Field& u0, double eps) {
    require_same_grid(grid, u0, "mollify_initial");
    if (!(eps > 0.0)) throw parameter_error("mollify_initial: eps must be positive");
    const std::size_t reach = eps > grid.h ? static_cast<std::size_t>(std::ceil(eps / grid.h)) - 1 : 0;
    if (reach == 0) return u0;

    std::vector<double> w(2 * reach + 1);
    double total = 0.0;
    for (std::size_t j = 0; j <= 2 * reach; ++j) {
        const double s = (static_cast<double>(j) - static_cast<double>(reach)) * grid.h / eps;
        w[j] = std::exp(-1.0 / (1.0 - s * s));
        total += w[j];
    }
    for (double& v : w) v /= total;

    Field out(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j <= 2 * reach; ++j) {
            const std::ptrdiff_t src = static_cast<std::ptrdiff_t>(i + j) - static_cast<std::ptrdiff_t>(reach);
            if (src >= 0 && src < static_cast<std::ptrdiff_t>(grid.n)) s += w[j] * u0[static_cast<std::size_t>(src)];
        }
        out[i] = s;
    }
    return out;
}

class FPSolver {
  public:
    explicit FPSolver(NonlocalOperator op) : op_(std::move(op)) {}

    const NonlocalOperator& op() const { return op_; }
    const Grid1D& grid() const { return op_.grid; }

    FPTrajectory solve_viscous(double eps, const Drift& drift, const Field& u0, const FPConfig& cfg) const {
        cfg.validate();
        require_same_grid(grid(), u0, "solve_viscous");
        if (!(eps >= 0.0)) throw parameter_error("solve_viscous: eps must be >= 0");
        if (!u0.all_finite()) throw parameter_error("solve_viscous: non-finite initial data");
        const double b_max = drift.max_abs();
        if (b_max > 0.0 && cfg.dt > grid().h / (2.0 * b_max))
            throw parameter_error("solve_viscous: dt " + std::to_string(cfg.dt) + " violates the drift CFL bound " +
                                  std::to_string(grid().h / (2.0 * b_max)));

        const CholeskyFactor factor = factor_step_matrix(eps, cfg);
        const std::size_t steps = static_cast<std::size_t>(std::llround(cfg.T / cfg.dt));

        FPTrajectory traj;
        traj.eps = eps;
        traj.dt = cfg.dt;
        traj.t.reserve(steps / cfg.record_every + 2);
        traj.states.reserve(steps / cfg.record_every + 2);
        Field u = u0;
        traj.t.push_back(0.0);
        traj.states.push_back(u);
        for (std::size_t m = 1; m <= steps; ++m) {
            const Field div = upwind_divergence(grid(), drift, u);
            for (std::size_t i = 0; i < grid().n; ++i) u[i] -= cfg.dt * div[i];
            factor.solve(u.values);
            if (m % cfg.record_every == 0 || m == steps) {
                traj.t.push_back(cfg.dt * static_cast<double>(m));
                traj.states.push_back(u);
            }
        }
        if (!traj.states.back().all_finite()) throw numerical_error("solve_viscous: non-finite state at t = " +
                                                                    std::to_string(traj.t.back()));
        return traj;
    }

    VanishingViscosityResult vanishing_viscosity(const ViscositySchedule& schedule, const Drift& drift,
                                                 const Field& u0, const FPConfig& cfg,
                                                 const std::function<void(const FPTrajectory&)>& on_run = {}) const {
        schedule.validate();
        VanishingViscosityResult out;
        FPTrajectory prev;
        for (std::size_t k = 0; k < schedule.epsilons.size(); ++k) {
            const double eps = schedule.epsilons[k];
            FPTrajectory traj = solve_viscous(eps, drift, mollify_initial(grid(), u0, eps), cfg);
            if (on_run) on_run(traj);
            if (k > 0) {
                double gap = 0.0;
                for (std::size_t m = 0; m < traj.states.size(); ++m) {
                    Field diff(grid().n);
                    for (std::size_t i = 0; i < grid().n; ++i) diff[i] = traj.states[m][i] - prev.states[m][i];
                    gap = std::max(gap, norm_l2(grid(), diff));
                }
                out.gaps.push_back(gap);
            }
            prev = std::move(traj);
        }
        out.gaps_decreasing = true;
        for (std::size_t k = 0; k + 1 < out.gaps.size(); ++k)
            if (!(out.gaps[k + 1] < out.gaps[k])) out.gaps_decreasing = false;
        out.limit = std::move(prev);
        return out;
    }

  private:
    // M = I - dt (eps * second difference + nonlocal part), symmetric positive
    // definite: both diffusion operators are negative semidefinite and the
    // identity dominates. Factored once per (eps, dt) pair.
    CholeskyFactor factor_step_matrix(double eps, const FPConfig& cfg) const {
        const std::size_t n = grid().n;
        const double h2 = grid().h * grid().h;
        std::vector<double> m(n * n, 0.0);
        if (cfg.include_nonlocal)
            for (std::size_t i = 0; i < n * n; ++i) m[i] = -cfg.dt * op_.a[i];
        for (std::size_t i = 0; i < n; ++i) {
            m[i * n + i] += 1.0 + cfg.dt * eps * 2.0 / h2;
            if (i > 0) m[i * n + (i - 1)] -= cfg.dt * eps / h2;
            if (i + 1 < n) m[i * n + (i + 1)] -= cfg.dt * eps / h2;
        }
        return CholeskyFactor::factor(m, n, "solve_viscous step matrix");
    }

    NonlocalOperator op_;
};

}  // namespace nonlocal
