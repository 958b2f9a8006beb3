#pragma once

// Mild-solution machinery for u_t = A u + F(u): a Picard iteration on the
// exponential left-endpoint quadrature of the Duhamel integral, the matching
// one-step exponential Euler integrator, and a global driver that records the
// energy quantities consumed by the monitors in gl_monitors.hpp.
//
// All stepping happens in modal space (the integrator is diagonal there); the
// nonlinearity is evaluated nodally. With decay D = e^{-dt Lambda} and
// phi = (I - D) Lambda^{-1}, the map
//   Phi(U)_m = D^m u0 + sum_{j<m} D^{m-1-j} phi F(U_j)
// has the exponential-Euler trajectory as its exact fixed point.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "nonlocal/eigen.hpp"
#include "nonlocal/errors.hpp"
#include "nonlocal/grid.hpp"
#include "nonlocal/nonlinearity.hpp"
#include "nonlocal/operator.hpp"

namespace nonlocal {

struct GLConfig {
    double T_final = 10.0;
    double dt = 1e-3;
    double picard_tol = 1e-8;
    std::size_t picard_max_iters = 200;
    double ball_radius = 0.0;  // 0: auto, 1 + 2 ||u0||_X
    double T_local = 1.0;      // initial local window, halved until contraction
    std::size_t snapshot_every = 0;  // record full state every k-th step; 0 disables

    void validate() const {
        if (!(dt > 0.0)) throw parameter_error("GLConfig: dt must be positive");
        if (!(T_final >= dt)) throw parameter_error("GLConfig: T_final must cover at least one step");
        if (!(picard_tol > 0.0)) throw parameter_error("GLConfig: picard_tol must be positive");
        if (picard_max_iters < 1) throw parameter_error("GLConfig: picard_max_iters must be >= 1");
        if (!(ball_radius >= 0.0)) throw parameter_error("GLConfig: ball_radius must be >= 0");
        if (!(T_local > 0.0)) throw parameter_error("GLConfig: T_local must be positive");
    }
};

// Graph-norm ||u||_X^2 = h sum (1 + lambda_k) c_k^2, the natural contraction
// norm for the fixed-point map.
inline double xnorm_modal(const EigenDecomposition& eig, const std::vector<double>& c) {
    double s = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) s += (1.0 + eig.eigenvalues[k]) * c[k] * c[k];
    return std::sqrt(eig.grid.h * s);
}

inline double xnorm(const EigenDecomposition& eig, const Field& u) { return xnorm_modal(eig, eig.to_modal(u)); }

struct PicardResult {
    std::vector<Field> trajectory;  // nodal fields on 0, dt, ..., T_local
    double contraction_factor = 0.0;
    double residual = 0.0;
    std::size_t iterations = 0;
    double T_local = 0.0;  // accepted window after halving
    std::size_t halvings = 0;
};

struct EnergyTrace {
    GLVariant variant = GLVariant::cubic;
    double c_p = 0.0;     // discrete Poincare constant 1/lambda_1
    double domain = 1.0;  // |D|
    double e_f = 0.0;     // <f, Lambda f> for the forced variant
    double f_l2 = 0.0;    // ||f|| for the forced variant
    std::vector<double> t;
    std::vector<double> l2_sq;        // ||u||^2
    std::vector<double> seminorm_sq;  // E = <u, Lambda u>
    std::vector<double> halpha_sq;    // ||Lambda u||^2
    std::vector<double> l4;           // integral of u^4
    std::vector<double> f_sq;         // ||F(u)||^2
    // Trailing unit-window trapezoid integrals (integral from max(0, t-1) to t).
    std::vector<double> window_l2, window_seminorm, window_halpha, window_f;
};

struct GlobalRun {
    EnergyTrace trace;
    Field final_state;
    // Populated only when GLConfig::snapshot_every > 0 (first and last steps always included).
    std::vector<double> snapshot_t;
    std::vector<Field> snapshots;
};

// One exponential-Euler step u+ = D u + phi F(u); exact when F == 0.
inline Field step_exponential_euler(const Field& u, double dt, const Nonlinearity& nl,
                                    const EigenDecomposition& eig) {
    if (!(dt > 0.0)) throw parameter_error("step_exponential_euler: dt must be positive");
    std::vector<double> c = eig.to_modal(u);
    const std::vector<double> fc = eig.to_modal(nl.apply(eig.grid, u));
    for (std::size_t k = 0; k < c.size(); ++k) {
        const double lam = eig.eigenvalues[k];
        c[k] = std::exp(-lam * dt) * c[k] - std::expm1(-lam * dt) / lam * fc[k];
    }
    return eig.from_modal(c);
}

class GLSolver {
  public:
    GLSolver(NonlocalOperator op, EigenDecomposition eig) : op_(std::move(op)), eig_(std::move(eig)) {}
    explicit GLSolver(NonlocalOperator op) : op_(op), eig_(eigendecompose(op)) {}

    const NonlocalOperator& op() const { return op_; }
    const EigenDecomposition& eig() const { return eig_; }
    const Grid1D& grid() const { return op_.grid; }
    double poincare() const { return 1.0 / eig_.eigenvalues.front(); }

    Field step(const Field& u, double dt, const Nonlinearity& nl) const {
        return step_exponential_euler(u, dt, nl, eig_);
    }

    PicardResult picard_solve_local(const Field& u0, const Nonlinearity& nl, GLConfig cfg) const {
        cfg.validate();
        require_same_grid(grid(), u0, "picard_solve_local");
        if (!u0.all_finite()) throw parameter_error("picard_solve_local: u0 must be finite");
        const double R = cfg.ball_radius > 0.0 ? cfg.ball_radius : 1.0 + 2.0 * xnorm(eig_, u0);

        std::size_t steps = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(cfg.T_local / cfg.dt)));
        PicardResult result;
        std::vector<double> measured;
        for (std::size_t halving = 0;; ++halving) {
            const double ratio = contraction_ratio(nl, steps, cfg.dt, R);
            measured.push_back(ratio);
            if (ratio < 1.0) {
                result.contraction_factor = ratio;
                result.halvings = halving;
                break;
            }
            if (halving == 20 || steps == 1) {
                std::string list;
                for (double r : measured) list += (list.empty() ? "" : ", ") + std::to_string(r);
                throw numerical_error("picard_solve_local: no contraction after " + std::to_string(halving) +
                                      " halvings (measured ratios " + list + ")");
            }
            steps = std::max<std::size_t>(1, steps / 2);
        }
        result.T_local = static_cast<double>(steps) * cfg.dt;

        // Fixed-point iteration from the freely decaying trajectory.
        const auto [decay, phi] = step_factors(cfg.dt);
        const std::vector<double> c0 = eig_.to_modal(u0);
        std::vector<std::vector<double>> modal(steps + 1);
        modal[0] = c0;
        for (std::size_t m = 1; m <= steps; ++m) {
            modal[m] = modal[m - 1];
            for (std::size_t k = 0; k < c0.size(); ++k) modal[m][k] *= decay[k];
        }
        std::vector<Field> traj(steps + 1);
        for (std::size_t m = 0; m <= steps; ++m) traj[m] = eig_.from_modal(modal[m]);

        for (std::size_t iter = 1; iter <= cfg.picard_max_iters; ++iter) {
            const auto next = apply_map(traj, c0, nl, decay, phi);
            double residual = 0.0;
            for (std::size_t m = 0; m <= steps; ++m) {
                std::vector<double> d = eig_.to_modal(next[m]);
                const std::vector<double> dm = eig_.to_modal(traj[m]);
                for (std::size_t k = 0; k < d.size(); ++k) d[k] -= dm[k];
                residual = std::max(residual, xnorm_modal(eig_, d));
                const double sup = norm_inf(next[m]);
                if (sup > 1e6)
                    throw blowup_error("picard_solve_local: blow-up at node " + std::to_string(m) +
                                       " (sup-norm " + std::to_string(sup) + ")");
            }
            traj = next;
            result.iterations = iter;
            result.residual = residual;
            if (residual <= cfg.picard_tol) break;
            if (iter == cfg.picard_max_iters)
                throw numerical_error("picard_solve_local: residual " + std::to_string(residual) +
                                      " above tolerance after " + std::to_string(iter) + " iterations");
        }
        result.trajectory = std::move(traj);
        return result;
    }

    GlobalRun run_global(const Field& u0, const Nonlinearity& nl, const GLConfig& cfg) const {
        cfg.validate();
        require_same_grid(grid(), u0, "run_global");
        if (!u0.all_finite()) throw parameter_error("run_global: u0 must be finite");
        const std::size_t steps = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(cfg.T_final / cfg.dt)));
        const auto [decay, phi] = step_factors(cfg.dt);
        const double h = grid().h;
        const std::size_t n = grid().n;

        GlobalRun run;
        EnergyTrace& trace = run.trace;
        trace.variant = nl.variant;
        trace.c_p = poincare();
        trace.domain = 1.0;
        if (nl.variant == GLVariant::linear_forced) {
            const std::vector<double> fc = eig_.to_modal(nl.forcing);
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k) s += eig_.eigenvalues[k] * fc[k] * fc[k];
            trace.e_f = h * s;
            trace.f_l2 = norm_l2(grid(), nl.forcing);
        }
        auto reserve = [&](std::vector<double>& v) { v.reserve(steps + 1); };
        reserve(trace.t), reserve(trace.l2_sq), reserve(trace.seminorm_sq), reserve(trace.halpha_sq);
        reserve(trace.l4), reserve(trace.f_sq);

        std::vector<double> c = eig_.to_modal(u0);
        Field u = u0;
        for (std::size_t m = 0;; ++m) {
            const double sup = norm_inf(u);
            if (sup > 1e6) {
                throw blowup_error("run_global: blow-up at step " + std::to_string(m) + ", t = " +
                                   std::to_string(static_cast<double>(m) * cfg.dt) + " (sup-norm " +
                                   std::to_string(sup) + ", l2 " + std::to_string(norm_l2(grid(), u)) + ")");
            }
            const Field f = nl.apply(grid(), u);
            double y = 0.0, e = 0.0, ha = 0.0, l4 = 0.0, fsq = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                const double lam = eig_.eigenvalues[k];
                y += c[k] * c[k];
                e += lam * c[k] * c[k];
                ha += lam * lam * c[k] * c[k];
            }
            for (std::size_t i = 0; i < n; ++i) {
                const double v = u[i];
                l4 += v * v * v * v;
                fsq += f[i] * f[i];
            }
            trace.t.push_back(static_cast<double>(m) * cfg.dt);
            trace.l2_sq.push_back(h * y);
            trace.seminorm_sq.push_back(h * e);
            trace.halpha_sq.push_back(h * ha);
            trace.l4.push_back(h * l4);
            trace.f_sq.push_back(h * fsq);
            if (cfg.snapshot_every > 0 && (m % cfg.snapshot_every == 0 || m == steps)) {
                run.snapshot_t.push_back(static_cast<double>(m) * cfg.dt);
                run.snapshots.push_back(u);
            }
            if (m == steps) break;

            const std::vector<double> fc = eig_.to_modal(f);
            for (std::size_t k = 0; k < n; ++k) c[k] = decay[k] * c[k] + phi[k] * fc[k];
            u = eig_.from_modal(c);
        }

        fill_windows(trace, cfg.dt);
        run.final_state = std::move(u);
        return run;
    }

  private:
    NonlocalOperator op_;
    EigenDecomposition eig_;

    std::pair<std::vector<double>, std::vector<double>> step_factors(double dt) const {
        const std::size_t n = grid().n;
        std::vector<double> decay(n), phi(n);
        for (std::size_t k = 0; k < n; ++k) {
            const double lam = eig_.eigenvalues[k];
            decay[k] = std::exp(-lam * dt);
            phi[k] = -std::expm1(-lam * dt) / lam;  // dt * phi1(-dt lam), positive
        }
        return {std::move(decay), std::move(phi)};
    }

    // Phi applied to a nodal trajectory, anchored at c0; the Duhamel sum
    // W_m = sum_{j<m} D^{m-1-j} phi f_j advances as W <- D W + phi f_{m-1}.
    std::vector<Field> apply_map(const std::vector<Field>& traj, const std::vector<double>& c0,
                                 const Nonlinearity& nl, const std::vector<double>& decay,
                                 const std::vector<double>& phi) const {
        const std::size_t n = grid().n;
        const std::size_t steps = traj.size() - 1;
        std::vector<Field> out(steps + 1);
        out[0] = eig_.from_modal(c0);
        std::vector<double> linear = c0, duhamel(n, 0.0);
        for (std::size_t m = 1; m <= steps; ++m) {
            const std::vector<double> fc = eig_.to_modal(nl.apply(grid(), traj[m - 1]));
            for (std::size_t k = 0; k < n; ++k) {
                linear[k] *= decay[k];
                duhamel[k] = decay[k] * duhamel[k] + phi[k] * fc[k];
            }
            std::vector<double> c(n);
            for (std::size_t k = 0; k < n; ++k) c[k] = linear[k] + duhamel[k];
            out[m] = eig_.from_modal(c);
        }
        return out;
    }

    // Empirical Lipschitz ratio of the Duhamel part of the map over smooth
    // random trajectory pairs whose graph norm stays inside the R-ball. The
    // initial-value part cancels in differences, so it is omitted. Pairs
    // alternate between time-constant trajectories (maximal accumulation of
    // the difference through the Duhamel sum) and time-white ones.
    double contraction_ratio(const Nonlinearity& nl, std::size_t steps, double dt, double R) const {
        const std::size_t n = grid().n;
        const auto [decay, phi] = step_factors(dt);
        double worst = 0.0;
        for (unsigned pair = 0; pair < 4; ++pair) {
            std::mt19937_64 rng(0x5eed5eedULL + 7919ULL * pair + steps);
            std::normal_distribution<double> gauss(0.0, 1.0);
            const bool constant_in_time = pair % 2 == 0;
            auto random_traj = [&](double target) {
                std::vector<std::vector<double>> modal(steps + 1, std::vector<double>(n));
                double sup = 0.0;
                for (std::size_t m = 0; m <= steps; ++m) {
                    auto& c = modal[m];
                    if (constant_in_time && m > 0) {
                        c = modal[0];
                        continue;
                    }
                    for (std::size_t k = 0; k < n; ++k) c[k] = gauss(rng) / (1.0 + eig_.eigenvalues[k]);
                    sup = std::max(sup, xnorm_modal(eig_, c));
                }
                const double scale = target / sup;
                std::vector<Field> traj(steps + 1);
                for (std::size_t m = 0; m <= steps; ++m) {
                    for (auto& v : modal[m]) v *= scale;
                    traj[m] = eig_.from_modal(modal[m]);
                }
                return traj;
            };
            const auto a = random_traj(R * (0.5 + 0.25 * static_cast<double>(pair / 2 + 1)));
            const auto b = random_traj(R * (0.5 + 0.25 * static_cast<double>(pair / 2 + 1)));

            double num = 0.0, den = 0.0;
            std::vector<double> wa(n, 0.0), wb(n, 0.0);
            for (std::size_t m = 1; m <= steps; ++m) {
                const std::vector<double> fa = eig_.to_modal(nl.apply(grid(), a[m - 1]));
                const std::vector<double> fb = eig_.to_modal(nl.apply(grid(), b[m - 1]));
                std::vector<double> diff(n);
                for (std::size_t k = 0; k < n; ++k) {
                    wa[k] = decay[k] * wa[k] + phi[k] * fa[k];
                    wb[k] = decay[k] * wb[k] + phi[k] * fb[k];
                    diff[k] = wa[k] - wb[k];
                }
                num = std::max(num, xnorm_modal(eig_, diff));
            }
            for (std::size_t m = 0; m <= steps; ++m) {
                std::vector<double> d = eig_.to_modal(a[m]);
                const std::vector<double> db = eig_.to_modal(b[m]);
                for (std::size_t k = 0; k < n; ++k) d[k] -= db[k];
                den = std::max(den, xnorm_modal(eig_, d));
            }
            if (den > 0.0) worst = std::max(worst, num / den);
        }
        return worst;
    }

    static void fill_windows(EnergyTrace& trace, double dt) {
        const std::size_t count = trace.t.size();
        const std::size_t k = std::min<std::size_t>(count - 1, static_cast<std::size_t>(std::llround(1.0 / dt)));
        auto window = [&](const std::vector<double>& f, std::vector<double>& w) {
            std::vector<double> prefix(count, 0.0);
            for (std::size_t m = 1; m < count; ++m)
                prefix[m] = prefix[m - 1] + 0.5 * (f[m] + f[m - 1]) * (trace.t[m] - trace.t[m - 1]);
            w.resize(count);
            for (std::size_t m = 0; m < count; ++m) w[m] = prefix[m] - prefix[m > k ? m - k : 0];
        };
        window(trace.l2_sq, trace.window_l2);
        window(trace.seminorm_sq, trace.window_seminorm);
        window(trace.halpha_sq, trace.window_halpha);
        window(trace.f_sq, trace.window_f);
    }
};

}  // namespace nonlocal
