#include "nonlocal/fp_solver.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "nonlocal/eigen.hpp"
#include "nonlocal/fp_monitors.hpp"
#include "nonlocal/semigroup.hpp"

using namespace nonlocal;

namespace {

constexpr double kPi = std::numbers::pi;

struct Fixture {
    Grid1D grid;
    NonlocalOperator op;
    FPSolver solver;

    explicit Fixture(std::size_t n, double alpha = 1.0)
        : grid(n), op(assemble_operator(grid, KernelSpec::normalized(alpha))), solver(op) {}
};

Drift sine_drift(const Grid1D& grid) {
    return Drift::from_function(
        grid, [](double x) { return 0.5 * std::sin(2.0 * kPi * x); }, kPi, 2.0 * kPi * kPi);
}

Field half_sine(const Grid1D& grid, double amplitude = 1.0) {
    return sample(grid, [&](double x) { return amplitude * std::sin(kPi * x); });
}

double sup_l2_gap(const Grid1D& grid, const FPTrajectory& a, const FPTrajectory& b) {
    double gap = 0.0;
    for (std::size_t m = 0; m < a.states.size(); ++m) {
        Field d(grid.n);
        for (std::size_t i = 0; i < grid.n; ++i) d[i] = a.states[m][i] - b.states[m][i];
        gap = std::max(gap, norm_l2(grid, d));
    }
    return gap;
}

}  // namespace

TEST(Schedule, DyadicLadderAndValidation) {
    const auto s = ViscositySchedule::dyadic(3);
    ASSERT_EQ(s.epsilons.size(), 4u);
    EXPECT_EQ(s.epsilons[0], 1.0);
    EXPECT_EQ(s.epsilons[3], 0.125);
    EXPECT_NO_THROW(s.validate());

    EXPECT_THROW(ViscositySchedule{}.validate(), parameter_error);
    EXPECT_THROW((ViscositySchedule{{2.0, 1.0}}).validate(), parameter_error);
    EXPECT_THROW((ViscositySchedule{{0.5, 0.5}}).validate(), parameter_error);
    EXPECT_THROW((ViscositySchedule{{0.5, 0.0}}).validate(), parameter_error);

    FPConfig cfg;
    cfg.dt = 0.0;
    EXPECT_THROW(cfg.validate(), parameter_error);
    cfg = FPConfig{};
    cfg.T = cfg.dt / 2.0;
    EXPECT_THROW(cfg.validate(), parameter_error);
    cfg = FPConfig{};
    cfg.record_every = 0;
    EXPECT_THROW(cfg.validate(), parameter_error);
}

TEST(DriftType, DeclaredBoundsAreCrossChecked) {
    Grid1D grid(63);
    EXPECT_NO_THROW(sine_drift(grid));
    // Understating |b'| by 10% must trip the finite-difference audit.
    EXPECT_THROW(Drift::from_function(
                     grid, [](double x) { return 0.5 * std::sin(2.0 * kPi * x); }, 0.9 * kPi, 2.0 * kPi * kPi),
                 parameter_error);
    EXPECT_THROW(Drift::from_function(
                     grid, [](double x) { return 0.5 * std::sin(2.0 * kPi * x); }, kPi, 0.9 * 2.0 * kPi * kPi),
                 parameter_error);
    EXPECT_THROW(Drift::from_function(grid, nullptr, 1.0, 1.0), parameter_error);
    EXPECT_THROW(Drift::from_function(
                     grid, [](double x) { return x > 0.5 ? std::numeric_limits<double>::quiet_NaN() : 0.0; }, 1.0,
                     1.0),
                 parameter_error);
    EXPECT_EQ(Drift::zero(grid).max_abs(), 0.0);
}

TEST(Upwind, ConstantPositiveDriftTakesLeftStates) {
    Grid1D grid(16);
    const Drift drift = Drift::from_function(grid, [](double) { return 1.0; }, 0.0, 0.0);
    Field u(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) u[i] = static_cast<double>(i + 1);
    const Field div = upwind_divergence(grid, drift, u);
    EXPECT_NEAR(div[0], u[0] / grid.h, 1e-12);  // inflow from the zero exterior
    for (std::size_t i = 1; i < grid.n; ++i) EXPECT_NEAR(div[i], (u[i] - u[i - 1]) / grid.h, 1e-12);
}

TEST(Mollifier, ContractsNormAndDegradesToIdentityBelowMeshWidth) {
    Grid1D grid(127);
    EXPECT_THROW(mollify_initial(grid, Field(grid.n), 0.0), parameter_error);

    const Field zero(grid.n);
    const Field mz = mollify_initial(grid, zero, 0.25);
    for (std::size_t i = 0; i < grid.n; ++i) EXPECT_EQ(mz[i], 0.0);

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        Field u(grid.n);
        for (std::size_t i = 0; i < grid.n; ++i) u[i] = dist(rng);
        const Field m = mollify_initial(grid, u, 0.05);
        EXPECT_LE(norm_l2(grid, m), norm_l2(grid, u) * (1.0 + 1e-12));
    }

    // Unresolvable width: bitwise identity.
    const Field u = half_sine(grid);
    const Field tight = mollify_initial(grid, u, grid.h * 0.5);
    for (std::size_t i = 0; i < grid.n; ++i) EXPECT_EQ(tight[i], u[i]);

    // Shrinking width converges to the data, monotonically for this smooth u0.
    double prev = std::numeric_limits<double>::infinity();
    for (double eps : {0.2, 0.1, 0.05, 0.025}) {
        Field d = mollify_initial(grid, u, eps);
        for (std::size_t i = 0; i < grid.n; ++i) d[i] -= u[i];
        const double err = norm_l2(grid, d);
        EXPECT_LT(err, prev);
        prev = err;
    }
    EXPECT_LT(prev, 1e-3);
}

TEST(SolveViscous, MatchesTheSpectralFlowForPureDiffusion) {
    Fixture f(127);
    const auto eig = eigendecompose(f.op);
    const Field phi1 = eig.eigenvector(0);
    FPConfig cfg;
    cfg.T = 0.5;
    cfg.dt = 1e-3;
    const auto traj = f.solver.solve_viscous(0.0, Drift::zero(f.grid), phi1, cfg);
    double worst = 0.0;
    for (std::size_t m = 0; m < traj.states.size(); ++m) {
        const Field ref = heat_apply(eig, traj.t[m], phi1);
        Field d(f.grid.n);
        for (std::size_t i = 0; i < f.grid.n; ++i) d[i] = traj.states[m][i] - ref[i];
        worst = std::max(worst, norm_l2(f.grid, d));
    }
    EXPECT_LE(worst, 10.0 * cfg.dt * eig.eigenvalues[0] * cfg.T);
    EXPECT_LE(worst, 1e-4);  // measured 3.8e-5; implicit Euler first-order defect
}

TEST(SolveViscous, ZeroDataStaysZeroAndHugeDtTripsCFL) {
    Fixture f(63);
    FPConfig cfg;
    cfg.T = 0.05;
    cfg.dt = 1e-3;
    const auto traj = f.solver.solve_viscous(0.5, sine_drift(f.grid), Field(f.grid.n), cfg);
    for (const auto& s : traj.states)
        for (std::size_t i = 0; i < s.size(); ++i) EXPECT_EQ(s[i], 0.0);

    FPConfig bad = cfg;
    bad.dt = f.grid.h;  // CFL bound for max |b| = 0.5 is exactly h, violated beyond
    EXPECT_NO_THROW(f.solver.solve_viscous(0.0, sine_drift(f.grid), Field(f.grid.n), bad));
    bad.dt = f.grid.h * 1.01;
    EXPECT_THROW(f.solver.solve_viscous(0.0, sine_drift(f.grid), Field(f.grid.n), bad), parameter_error);
    EXPECT_THROW(f.solver.solve_viscous(-0.1, sine_drift(f.grid), Field(f.grid.n), cfg), parameter_error);
}

TEST(SolveViscous, PositivityAndStrictMassLoss) {
    Fixture f(127);
    FPConfig cfg;
    cfg.T = 0.25;
    cfg.dt = 2e-4;
    const Field u0 = half_sine(f.grid);
    const auto traj = f.solver.solve_viscous(0.1, sine_drift(f.grid), u0, cfg);
    const double floor_tol = -1e-12 * norm_inf(u0);
    double prev_mass = mass(f.grid, traj.states[0]);
    for (std::size_t m = 1; m < traj.states.size(); ++m) {
        for (std::size_t i = 0; i < f.grid.n; ++i) EXPECT_GE(traj.states[m][i], floor_tol);
        const double cur = mass(f.grid, traj.states[m]);
        EXPECT_LT(cur, prev_mass);  // exterior interaction drains mass every step
        prev_mass = cur;
    }
}

TEST(SolveViscous, LinearInInitialData) {
    Fixture f(63);
    FPConfig cfg;
    cfg.T = 0.05;
    cfg.dt = 1e-3;
    const Field v = half_sine(f.grid);
    const Field w = sample(f.grid, [](double x) { return x * (1.0 - x) * std::cos(3.0 * kPi * x); });
    Field combo(f.grid.n);
    const double a = -1.7;
    for (std::size_t i = 0; i < f.grid.n; ++i) combo[i] = a * v[i] + w[i];
    const Drift drift = sine_drift(f.grid);
    const auto tv = f.solver.solve_viscous(0.25, drift, v, cfg);
    const auto tw = f.solver.solve_viscous(0.25, drift, w, cfg);
    const auto tc = f.solver.solve_viscous(0.25, drift, combo, cfg);
    double worst = 0.0;
    for (std::size_t m = 0; m < tc.states.size(); ++m)
        for (std::size_t i = 0; i < f.grid.n; ++i)
            worst = std::max(worst, std::abs(tc.states[m][i] - a * tv.states[m][i] - tw.states[m][i]));
    EXPECT_LE(worst, 1e-10);
}

TEST(VanishingViscosity, ZeroDataGivesZeroGaps) {
    Fixture f(63);
    FPConfig cfg;
    cfg.T = 0.05;
    cfg.dt = 1e-3;
    const auto vv = f.solver.vanishing_viscosity(ViscositySchedule::dyadic(4), sine_drift(f.grid), Field(f.grid.n),
                                                 cfg);
    ASSERT_EQ(vv.gaps.size(), 4u);
    for (double g : vv.gaps) EXPECT_EQ(g, 0.0);
}

TEST(VanishingViscosity, GapsShrinkMonotonicallyOnTheDriftedRun) {
    Fixture f(127);
    FPConfig cfg;
    cfg.T = 0.25;
    cfg.dt = 2e-4;
    const auto vv = f.solver.vanishing_viscosity(ViscositySchedule::dyadic(6), sine_drift(f.grid),
                                                 half_sine(f.grid, 0.5), cfg);
    ASSERT_EQ(vv.gaps.size(), 6u);
    EXPECT_TRUE(vv.gaps_decreasing);
    EXPECT_LT(vv.gaps.back(), 1.5e-2);  // measured 9.66e-3 at this resolution
    EXPECT_EQ(vv.limit.eps, std::ldexp(1.0, -6));
}

TEST(VanishingViscosity, ConsecutiveRunsDifferLinearlyInEps) {
    Fixture f(127);
    FPConfig cfg;
    cfg.T = 0.5;
    cfg.dt = 1e-3;
    const Field u0 = half_sine(f.grid);
    const Drift zero = Drift::zero(f.grid);
    double prev_gap = std::numeric_limits<double>::infinity();
    for (double eps : {0.25, 0.125, 0.0625}) {
        const auto a = f.solver.solve_viscous(eps, zero, u0, cfg);
        const auto b = f.solver.solve_viscous(eps / 2.0, zero, u0, cfg);
        const double gap = sup_l2_gap(f.grid, a, b);
        EXPECT_LE(gap, eps);  // measured constant ~0.3-0.5
        EXPECT_LT(gap, prev_gap);
        prev_gap = gap;
    }
}

TEST(WeakResidual, ZeroTrajectoryAndShortTrajectoryEdges) {
    Fixture f(63);
    const auto eig = eigendecompose(f.op);
    FPTrajectory traj;
    traj.dt = 1e-3;
    traj.t = {0.0, 1e-3, 2e-3};
    traj.states.assign(3, Field(f.grid.n));
    const auto rep = weak_residual(f.op, eig, Drift::zero(f.grid), traj);
    ASSERT_EQ(rep.residuals.size(), 20u);
    for (double r : rep.residuals) EXPECT_EQ(r, 0.0);
    EXPECT_EQ(rep.worst, 0.0);

    traj.t.resize(1);
    traj.states.resize(1);
    EXPECT_THROW(weak_residual(f.op, eig, Drift::zero(f.grid), traj), parameter_error);
}

TEST(WeakResidual, SpectralModeReducesToTheTimeDiscretizationDefect) {
    Fixture f(127);
    const auto eig = eigendecompose(f.op);
    FPConfig cfg;
    cfg.T = 0.25;
    cfg.dt = 1e-3;
    const Field phi1 = eig.eigenvector(0);
    const auto traj = f.solver.solve_viscous(0.0, Drift::zero(f.grid), phi1, cfg);
    const auto rep = weak_residual(f.op, eig, Drift::zero(f.grid), traj);
    const double l1 = eig.eigenvalues[0];
    const double h1n = std::sqrt(norm_l2_sq(f.grid, phi1) + h1_seminorm_sq(f.grid, phi1));
    const double predicted = f.grid.h * l1 * l1 * cfg.dt / (1.0 + l1 * cfg.dt) / h1n;
    EXPECT_NEAR(rep.residuals[0], predicted, 0.02 * predicted);
}

TEST(WeakResidual, LimitCandidateStaysInsideTheRefinementBudget) {
    Fixture f(127);
    const auto eig = eigendecompose(f.op);
    FPConfig cfg;
    cfg.T = 0.25;
    cfg.dt = 2e-4;
    const auto vv = f.solver.vanishing_viscosity(ViscositySchedule::dyadic(6), sine_drift(f.grid),
                                                 half_sine(f.grid, 0.5), cfg);
    const auto rep = weak_residual(f.op, eig, sine_drift(f.grid), vv.limit);
    EXPECT_LE(rep.worst, 5.0 * (f.grid.h + cfg.dt + vv.limit.eps));
    for (double r : rep.residuals) EXPECT_TRUE(std::isfinite(r));
}

TEST(H1Energy, PureDissipationIsMonotoneAndInsideTheEnvelope) {
    Fixture f(127);
    FPConfig cfg;
    cfg.T = 0.5;
    cfg.dt = 1e-3;
    const auto traj = f.solver.solve_viscous(0.0, Drift::zero(f.grid), half_sine(f.grid), cfg);
    const auto rep = h1_energy_check(traj, Drift::zero(f.grid), f.grid);
    EXPECT_TRUE(rep.pass);
    EXPECT_EQ(rep.c, 3.0);
    EXPECT_LE(rep.worst_ratio, 1.0 + 1e-9);

    auto q_at = [&](std::size_t m) {
        const std::size_t lo = m + 1 < traj.states.size() ? m : m - 1;
        Field d(f.grid.n);
        for (std::size_t i = 0; i < f.grid.n; ++i)
            d[i] = (traj.states[lo + 1][i] - traj.states[lo][i]) / (traj.t[lo + 1] - traj.t[lo]);
        return norm_l2(f.grid, traj.states[m]) + std::sqrt(h1_seminorm_sq(f.grid, traj.states[m])) +
               norm_l2(f.grid, d);
    };
    double prev = q_at(0);
    for (std::size_t m = 1; m < traj.states.size(); ++m) {
        const double q = q_at(m);
        EXPECT_LE(q, prev * (1.0 + 1e-12));
        prev = q;
    }
}

TEST(H1Energy, UniformAcrossTheViscositySchedule) {
    Fixture f(127);
    FPConfig cfg;
    cfg.T = 0.25;
    cfg.dt = 2e-4;
    const Drift drift = sine_drift(f.grid);
    const Field u0 = half_sine(f.grid);
    double q_first = 0.0, q_max = 0.0;
    for (std::size_t k = 0; k <= 10; ++k) {
        const double eps = std::ldexp(1.0, -static_cast<int>(k));
        const auto traj = f.solver.solve_viscous(eps, drift, mollify_initial(f.grid, u0, eps), cfg);
        const auto rep = h1_energy_check(traj, drift, f.grid);
        EXPECT_TRUE(rep.pass) << "eps=" << eps;
        if (k == 0) q_first = rep.q0;
        q_max = std::max(q_max, rep.q0);
    }
    EXPECT_LE(q_max, 2.0 * q_first);  // no blow-up as the viscosity vanishes

    FPTrajectory stub;
    stub.t = {0.0};
    stub.states = {Field(f.grid.n)};
    EXPECT_THROW(h1_energy_check(stub, drift, f.grid), parameter_error);
}

TEST(Uniqueness, IdenticalDataGapIsExactlyZero) {
    Fixture f(63);
    FPConfig cfg;
    cfg.T = 0.1;
    cfg.dt = 5e-4;
    const auto rep = uniqueness_check(f.solver, sine_drift(f.grid), half_sine(f.grid), half_sine(f.grid), cfg);
    EXPECT_TRUE(rep.identical_zero);
    EXPECT_TRUE(rep.pass);
    for (double d : rep.d) EXPECT_EQ(d, 0.0);
}

TEST(Uniqueness, PerturbedDataStaysUnderTheContractionEnvelope) {
    Fixture f(127);
    FPConfig cfg;
    cfg.T = 0.5;
    cfg.dt = 2e-4;
    const Field u0 = half_sine(f.grid);
    Field u0b = u0;
    for (std::size_t i = 0; i < f.grid.n; ++i) u0b[i] += 0.01 * std::sin(3.0 * kPi * f.grid.node(i));
    const auto rep = uniqueness_check(f.solver, sine_drift(f.grid), u0, u0b, cfg);
    EXPECT_FALSE(rep.identical_zero);
    EXPECT_TRUE(rep.pass);
    EXPECT_NEAR(rep.envelope_rate, 2.0 * kPi, 1e-12);
    EXPECT_LE(rep.fitted_exponent, rep.envelope_rate * 1.1);
    EXPECT_LT(rep.fitted_exponent, 0.0);  // the gap in fact decays (measured -10.8)
}

TEST(Uniqueness, DriftlessGapIsNonIncreasing) {
    Fixture f(63);
    FPConfig cfg;
    cfg.T = 0.25;
    cfg.dt = 1e-3;
    const Field u0 = half_sine(f.grid);
    Field u0b = u0;
    u0b[f.grid.n / 2] += 0.05;
    const auto rep = uniqueness_check(f.solver, Drift::zero(f.grid), u0, u0b, cfg);
    EXPECT_TRUE(rep.pass);
    EXPECT_EQ(rep.envelope_rate, 0.0);
    for (std::size_t m = 1; m < rep.d.size(); ++m) EXPECT_LE(rep.d[m], rep.d[m - 1] * (1.0 + 1e-12));
}
