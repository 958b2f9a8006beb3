#include "nonlocal/gl_solver.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "nonlocal/calculus.hpp"
#include "nonlocal/gl_monitors.hpp"
#include "nonlocal/semigroup.hpp"

using namespace nonlocal;

namespace {

constexpr double kPi = std::numbers::pi;

GLSolver make_solver(std::size_t n, double alpha) {
    Grid1D grid(n);
    return GLSolver(assemble_operator(grid, KernelSpec::normalized(alpha)));
}

Field sine_field(const Grid1D& grid, double amplitude, int mode) {
    return sample(grid, [&](double x) { return amplitude * std::sin(static_cast<double>(mode) * kPi * x); });
}

double sup_xnorm_diff(const GLSolver& solver, const Field& a, const Field& b) {
    std::vector<double> d = solver.eig().to_modal(a);
    const std::vector<double> db = solver.eig().to_modal(b);
    for (std::size_t k = 0; k < d.size(); ++k) d[k] -= db[k];
    return xnorm_modal(solver.eig(), d);
}

}  // namespace

TEST(Picard, ZeroNonlinearityIsHeatFlowInOneIteration) {
    const auto solver = make_solver(63, 1.0);
    const Field u0 = sine_field(solver.grid(), 1.0, 1);
    GLConfig cfg;
    const auto res = solver.picard_solve_local(u0, Nonlinearity::zero(), cfg);
    EXPECT_EQ(res.iterations, 1u);
    EXPECT_EQ(res.residual, 0.0);
    EXPECT_LT(res.contraction_factor, 1.0);
    EXPECT_EQ(res.halvings, 0u);
    for (std::size_t m = 0; m < res.trajectory.size(); ++m) {
        const Field ref = heat_apply(solver.eig(), static_cast<double>(m) * cfg.dt, u0);
        for (std::size_t i = 0; i < solver.grid().n; ++i) EXPECT_NEAR(res.trajectory[m][i], ref[i], 1e-10);
    }
}

TEST(Picard, ZeroInitialDataStaysAtEquilibrium) {
    const auto solver = make_solver(63, 1.0);
    const Field u0(solver.grid().n);
    const auto res = solver.picard_solve_local(u0, Nonlinearity::cubic(), GLConfig{});
    EXPECT_EQ(res.iterations, 1u);
    for (const auto& field : res.trajectory)
        for (std::size_t i = 0; i < field.size(); ++i) EXPECT_EQ(field[i], 0.0);
}

TEST(Picard, ContractsAndConvergesOnReferenceConfig) {
    const auto solver = make_solver(255, 1.0);
    const Field u0 = sine_field(solver.grid(), 0.5, 1);
    GLConfig cfg;
    const auto res = solver.picard_solve_local(u0, Nonlinearity::cubic(), cfg);
    EXPECT_LT(res.contraction_factor, 1.0);
    EXPECT_LE(res.residual, cfg.picard_tol);

    // Mild-solution consistency: the fixed point rides the exponential-Euler
    // trajectory to within the quadrature budget 10 dt max||F||.
    Field u = u0;
    double worst = 0.0, max_f = 0.0;
    const Nonlinearity nl = Nonlinearity::cubic();
    for (std::size_t m = 0; m < res.trajectory.size(); ++m) {
        worst = std::max(worst, sup_xnorm_diff(solver, res.trajectory[m], u));
        max_f = std::max(max_f, norm_l2(solver.grid(), nl.apply(solver.grid(), res.trajectory[m])));
        if (m + 1 < res.trajectory.size()) u = solver.step(u, cfg.dt, nl);
    }
    EXPECT_LE(worst, 10.0 * cfg.dt * max_f);
}

TEST(Picard, StiffDataShrinksTheWindow) {
    const auto solver = make_solver(63, 1.0);
    const Field u0 = sine_field(solver.grid(), 3.0, 1);
    const auto res = solver.picard_solve_local(u0, Nonlinearity::cubic(), GLConfig{});
    EXPECT_GE(res.halvings, 1u);
    EXPECT_LT(res.T_local, 1.0);
    EXPECT_LT(res.contraction_factor, 1.0);
    EXPECT_LE(res.residual, 1e-8);
}

TEST(Picard, HopelessBallReportsNoContraction) {
    // A huge ball makes the cubic's sampled Lipschitz ratio exceed 1 even on
    // a single step, so the halving loop must give up loudly. (True blow-up is
    // unreachable through the public API: the audit admits only dissipative
    // custom terms, and the built-in variants are dissipative theorems.)
    const auto solver = make_solver(63, 1.0);
    const Field u0 = sine_field(solver.grid(), 50.0, 1);
    try {
        solver.picard_solve_local(u0, Nonlinearity::cubic(), GLConfig{});
        FAIL() << "expected numerical_error";
    } catch (const numerical_error& e) {
        EXPECT_NE(std::string(e.what()).find("no contraction"), std::string::npos);
    }
}

TEST(ExponentialEuler, ExactForZeroNonlinearity) {
    const auto solver = make_solver(63, 1.5);
    const Field u0 = sine_field(solver.grid(), 1.0, 2);
    const Field one = step_exponential_euler(u0, 0.25, Nonlinearity::zero(), solver.eig());
    const Field ref = heat_apply(solver.eig(), 0.25, u0);
    for (std::size_t i = 0; i < solver.grid().n; ++i) EXPECT_NEAR(one[i], ref[i], 1e-13);
}

TEST(ExponentialEuler, EquilibriumIsFixed) {
    const auto solver = make_solver(63, 1.0);
    const Field zero(solver.grid().n);
    const Field stepped = solver.step(zero, 0.1, Nonlinearity::cubic());
    for (std::size_t i = 0; i < solver.grid().n; ++i) EXPECT_EQ(stepped[i], 0.0);
}

TEST(ExponentialEuler, SelfRefinementShowsFirstOrder) {
    const auto solver = make_solver(63, 1.0);
    const Field u0 = sine_field(solver.grid(), 0.5, 1);
    const Nonlinearity nl = Nonlinearity::cubic();
    const double T = 1.0;
    auto integrate = [&](double dt) {
        Field u = u0;
        const std::size_t steps = static_cast<std::size_t>(std::llround(T / dt));
        for (std::size_t m = 0; m < steps; ++m) u = solver.step(u, dt, nl);
        return u;
    };
    const Field ref = integrate(1e-2 / 16.0);
    const double e1 = sup_xnorm_diff(solver, integrate(1e-2), ref);
    const double e2 = sup_xnorm_diff(solver, integrate(5e-3), ref);
    EXPECT_LT(e2, e1);
    EXPECT_GE(e1 / e2, 1.7);  // halving dt should roughly halve the error
}

TEST(RunGlobal, ZeroDataProducesIdenticallyZeroTrace) {
    const auto solver = make_solver(63, 1.0);
    GLConfig cfg;
    cfg.T_final = 2.0;
    const auto run = solver.run_global(Field(solver.grid().n), Nonlinearity::cubic(), cfg);
    for (std::size_t m = 0; m < run.trace.t.size(); ++m) {
        EXPECT_EQ(run.trace.l2_sq[m], 0.0);
        EXPECT_EQ(run.trace.seminorm_sq[m], 0.0);
        EXPECT_EQ(run.trace.halpha_sq[m], 0.0);
        EXPECT_EQ(run.trace.window_halpha[m], 0.0);
    }
    for (std::size_t i = 0; i < solver.grid().n; ++i) EXPECT_EQ(run.final_state[i], 0.0);
    EXPECT_TRUE(check_L2_decay(run.trace, run.trace.c_p).pass);
    EXPECT_TRUE(check_window_Halpha(run.trace).pass);
}

TEST(RunGlobal, CubicSettlesIntoTheAbsorbingSet) {
    const auto solver = make_solver(63, 1.5);
    GLConfig cfg;
    const auto run = solver.run_global(sine_field(solver.grid(), 1.0, 1), Nonlinearity::cubic(), cfg);
    const double absorbing = run.trace.c_p * run.trace.domain / 2.0;
    double tail = 0.0;
    for (std::size_t m = 0; m < run.trace.t.size(); ++m)
        if (run.trace.t[m] >= 5.0) tail = std::max(tail, run.trace.l2_sq[m]);
    EXPECT_LE(tail, absorbing + 10.0 * cfg.dt);
}

TEST(RunGlobal, LinearModeDecaysAtItsSpectralRate) {
    const auto solver = make_solver(63, 1.0);
    const double lambda1 = solver.eig().eigenvalues[0];
    GLConfig cfg;
    cfg.T_final = 2.0;
    const auto run =
        solver.run_global(solver.eig().eigenvector(0), Nonlinearity::linear_forced(Field(solver.grid().n)), cfg);
    const double slope =
        0.5 * (std::log(run.trace.l2_sq.back()) - std::log(run.trace.l2_sq.front())) / run.trace.t.back();
    EXPECT_NEAR(slope, 1.0 - lambda1, 0.02 * std::abs(1.0 - lambda1));
}

TEST(Monitors, FullSuitePassesOnSmallRuns) {
    const auto solver = make_solver(63, 0.8);
    GLConfig cfg;
    cfg.T_final = 4.0;
    for (double amplitude : {1.0, 10.0}) {
        for (int variant = 0; variant < 2; ++variant) {
            const Nonlinearity nl = variant == 0 ? Nonlinearity::cubic() : Nonlinearity::cubic_quadratic();
            const Field u0 = sine_field(solver.grid(), amplitude, amplitude > 1.0 ? 3 : 1);
            const auto run = solver.run_global(u0, nl, cfg);
            EXPECT_TRUE(check_L2_decay(run.trace, run.trace.c_p).pass)
                << variant_name(nl.variant) << " amp=" << amplitude;
            EXPECT_TRUE(check_window_Halpha(run.trace).pass) << variant_name(nl.variant) << " amp=" << amplitude;
            const auto su = check_seminorm_uniform(run.trace);
            EXPECT_TRUE(su.pass) << variant_name(nl.variant) << " amp=" << amplitude;
            EXPECT_EQ(su.gronwall.skipped, 0u);
            if (nl.variant == GLVariant::cubic)
                EXPECT_TRUE(check_dissipativity(run.trace).pass) << "amp=" << amplitude;
        }
    }
}

TEST(Monitors, SeminormCheckerMatchesClosedFormDiffusionTrace) {
    // Synthetic E(t) = e^{-t} on [0, 2]: window integral 1 - 1/e, bound
    // (1 - 1/e) e = e - 1 >= E everywhere.
    EnergyTrace trace;
    trace.variant = GLVariant::cubic;
    const double dt = 1e-3;
    for (std::size_t m = 0; m <= 2000; ++m) {
        const double t = dt * static_cast<double>(m);
        trace.t.push_back(t);
        trace.seminorm_sq.push_back(std::exp(-t));
    }
    const auto rep = check_seminorm_uniform(trace);
    EXPECT_TRUE(rep.pass);
    EXPECT_NEAR(rep.gronwall.a3, 0.6321205588285577, 1e-6);  // 1 - 1/e
    EXPECT_NEAR(rep.gronwall.bound, std::exp(1.0) - 1.0, 1e-5);
}

TEST(Monitors, DissipativityLedgerRejectsGrowingEnergy) {
    EnergyTrace trace;
    trace.variant = GLVariant::cubic;
    const double dt = 1e-3;
    for (std::size_t m = 0; m <= 1000; ++m) {
        const double t = dt * static_cast<double>(m);
        trace.t.push_back(t);
        trace.l2_sq.push_back(1.0 + t);  // grows with no budget
        trace.seminorm_sq.push_back(1.0);
        trace.l4.push_back(1.0);
        trace.f_sq.push_back(0.0);
    }
    const auto rep = check_dissipativity(trace);
    EXPECT_FALSE(rep.pass);
    EXPECT_EQ(rep.first_fail_t, 0.0);
    EXPECT_THROW(check_dissipativity([] {
                     EnergyTrace t2;
                     t2.variant = GLVariant::cubic_quadratic;
                     return t2;
                 }()),
                 parameter_error);
}

TEST(Monitors, CubicPairingIsNonnegativeExactly) {
    // Sign identity behind the dissipation ledger: every pairwise term
    // a_ij (u_j - u_i)(u_j^3 - u_i^3) multiplies same-signed differences, so
    // the Dirichlet pairing of u with u^3 cannot go negative.
    for (double alpha : {0.5, 1.5}) {
        Grid1D grid(63);
        const auto op = assemble_operator(grid, KernelSpec::normalized(alpha));
        std::mt19937_64 rng(42);
        std::uniform_real_distribution<double> dist(-3.0, 3.0);
        for (int trial = 0; trial < 100; ++trial) {
            Field u(grid.n), cubed(grid.n);
            for (std::size_t i = 0; i < grid.n; ++i) {
                u[i] = dist(rng);
                cubed[i] = u[i] * u[i] * u[i];
            }
            EXPECT_GE(dirichlet_form(op, u, cubed), 0.0);
        }
    }
}

TEST(Monitors, CompletedSquareBoundHoldsOnTheSampleGrid) {
    for (int ia = 0; ia <= 200; ++ia) {
        for (int ib = 0; ib <= 200; ++ib) {
            const double a = -10.0 + 0.1 * static_cast<double>(ia);
            const double b = -10.0 + 0.1 * static_cast<double>(ib);
            const double lhs = (a + b) - (a * a + a * b + b * b);
            const double identity = 1.0 - 0.5 * (a - 1.0) * (a - 1.0) - 0.5 * (b - 1.0) * (b - 1.0) -
                                    0.5 * (a + b) * (a + b);
            EXPECT_NEAR(lhs, identity, 1e-10);
            EXPECT_LE(lhs, 1.0);
        }
    }
}

TEST(Nonlinearity, AuditAdmitsDissipativeAndRejectsExplosive) {
    EXPECT_NO_THROW(Nonlinearity::custom([](double x) { return -x * x * x; }, 1.0, 4.0));
    EXPECT_NO_THROW(Nonlinearity::zero());
    EXPECT_THROW(Nonlinearity::custom([](double x) { return x * x * x; }, 1.0, 4.0), parameter_error);
    // The cubic reaction needs different constants at small and large xi, so
    // no single (C_d, p) certifies it through the audit.
    EXPECT_THROW(Nonlinearity::custom([](double x) { return x - x * x * x; }, 0.99, 4.0), parameter_error);
    EXPECT_THROW(Nonlinearity::custom([](double x) { return x - x * x * x; }, 0.8, 4.0), parameter_error);
    EXPECT_THROW(Nonlinearity::custom(nullptr, 1.0, 4.0), parameter_error);
    EXPECT_THROW(Nonlinearity::custom([](double) { return 0.0; }, 0.0, 4.0), parameter_error);
}

TEST(Nonlinearity, ForcedVariantRecordsForcingNorms) {
    const auto solver = make_solver(63, 1.0);
    GLConfig cfg;
    cfg.T_final = 2.0;
    const Field f = sine_field(solver.grid(), 0.3, 2);
    const auto run = solver.run_global(sine_field(solver.grid(), 1.0, 1), Nonlinearity::linear_forced(f), cfg);
    EXPECT_GT(run.trace.e_f, 0.0);
    EXPECT_NEAR(run.trace.f_l2, norm_l2(solver.grid(), f), 1e-12);
    EXPECT_TRUE(check_L2_decay(run.trace, run.trace.c_p).pass);

    Field bad = f;
    bad[0] = std::numeric_limits<double>::infinity();
    EXPECT_THROW(Nonlinearity::linear_forced(bad), parameter_error);
}

TEST(Config, InvalidParametersAreRejected) {
    const auto solver = make_solver(32, 1.0);
    const Field u0 = sine_field(solver.grid(), 1.0, 1);
    auto expect_bad = [&](GLConfig cfg) { EXPECT_THROW(cfg.validate(), parameter_error); };
    GLConfig cfg;
    cfg.dt = 0.0;
    expect_bad(cfg);
    cfg = GLConfig{};
    cfg.picard_tol = 0.0;
    expect_bad(cfg);
    cfg = GLConfig{};
    cfg.T_final = 1e-9;
    expect_bad(cfg);
    cfg = GLConfig{};
    cfg.picard_max_iters = 0;
    expect_bad(cfg);
    cfg = GLConfig{};
    cfg.T_local = 0.0;
    expect_bad(cfg);
    cfg = GLConfig{};
    cfg.ball_radius = -1.0;
    expect_bad(cfg);
}
