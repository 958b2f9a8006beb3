#include "nonlocal/semigroup.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "nonlocal/operator.hpp"

using namespace nonlocal;

namespace {

struct Setup {
    Grid1D grid;
    NonlocalOperator op;
    EigenDecomposition eig;
};

Setup make_setup(std::size_t n, double alpha) {
    Grid1D grid(n);
    NonlocalOperator op = assemble_operator(grid, KernelSpec::normalized(alpha));
    EigenDecomposition eig = eigendecompose(op);
    return {grid, std::move(op), std::move(eig)};
}

Field random_field(const Grid1D& grid, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Field u(grid.n);
    for (auto& v : u.values) v = dist(rng);
    return u;
}

std::vector<double> logspace(double lo, double hi, std::size_t count) {
    std::vector<double> t(count);
    const double llo = std::log10(lo), lhi = std::log10(hi);
    for (std::size_t i = 0; i < count; ++i)
        t[i] = std::pow(10.0, llo + (lhi - llo) * static_cast<double>(i) / static_cast<double>(count - 1));
    return t;
}

}  // namespace

TEST(Semigroup, TimeZeroIsIdentity) {
    const auto s = make_setup(63, 1.0);
    const Field u = random_field(s.grid, 3);
    const Field v = heat_apply(s.eig, 0.0, u);
    for (std::size_t i = 0; i < s.grid.n; ++i) EXPECT_NEAR(v[i], u[i], 1e-12);
}

TEST(Semigroup, GroundModeDecaysAtItsEigenrate) {
    const auto s = make_setup(63, 1.5);
    const Field phi = s.eig.eigenvector(0);
    const double t = 0.37;
    const Field v = heat_apply(s.eig, t, phi);
    const double decay = std::exp(-s.eig.eigenvalues[0] * t);
    for (std::size_t i = 0; i < s.grid.n; ++i) EXPECT_NEAR(v[i], decay * phi[i], 1e-12);
}

TEST(Semigroup, ShortTimeMatchesTaylorSeriesOfTheGenerator) {
    // Independent oracle: six Taylor terms built from repeated op.apply calls,
    // no spectral machinery involved. Truncation at t = 1e-4 with
    // lambda_max ~ 2e2 is ~(t lambda)^7/7! ~ 1e-16.
    const auto s = make_setup(63, 1.0);
    const Field u = random_field(s.grid, 11);
    const double t = 1e-4;
    Field taylor = u, term = u;
    double factorial = 1.0;
    for (int j = 1; j <= 6; ++j) {
        term = s.op.apply(term);
        factorial *= static_cast<double>(j);
        for (std::size_t i = 0; i < s.grid.n; ++i) taylor[i] += std::pow(t, j) / factorial * term[i];
    }
    const Field v = heat_apply(s.eig, t, u);
    double diff = 0.0;
    for (std::size_t i = 0; i < s.grid.n; ++i) diff = std::max(diff, std::abs(v[i] - taylor[i]));
    EXPECT_LT(diff, 1e-8);
}

TEST(Semigroup, CompositionLawHoldsToRoundoff) {
    const auto s = make_setup(63, 0.5);
    const Field u = random_field(s.grid, 5);
    const Field two_step = heat_apply(s.eig, 0.4, heat_apply(s.eig, 0.6, u));
    const Field one_step = heat_apply(s.eig, 1.0, u);
    for (std::size_t i = 0; i < s.grid.n; ++i) EXPECT_NEAR(two_step[i], one_step[i], 1e-10);
}

TEST(Semigroup, FractionalPowersCompose) {
    const auto s = make_setup(63, 1.0);
    const Field u = random_field(s.grid, 9);
    const Field split = fractional_power_apply(s.eig, 0.3, fractional_power_apply(s.eig, 0.7, u));
    const Field whole = fractional_power_apply(s.eig, 1.0, u);
    const double scale = norm_inf(whole);
    for (std::size_t i = 0; i < s.grid.n; ++i) EXPECT_NEAR(split[i], whole[i], 1e-9 * scale);
}

TEST(Semigroup, PowerOfOneIsTheOperatorItself) {
    const auto s = make_setup(63, 1.5);
    const Field u = random_field(s.grid, 13);
    const Field lam_u = fractional_power_apply(s.eig, 1.0, u);
    const Field minus_au = s.op.apply(u);
    for (std::size_t i = 0; i < s.grid.n; ++i) EXPECT_NEAR(lam_u[i], -minus_au[i], 1e-8 * s.eig.eigenvalues.back());
}

TEST(Semigroup, IntegralRepresentationMatchesSpectralNegativePowers) {
    // The quadrature of the Gamma-function representation is the independent
    // route; it must agree with direct spectral powers far below the 1e-6
    // contract. Checked at several exponents.
    const auto s = make_setup(63, 1.0);
    const Field u = random_field(s.grid, 17);
    for (double beta : {-0.25, -0.5, -0.75}) {
        const Field vi = fractional_power_apply(s.eig, beta, u, PowerMethod::integral);
        const Field vs = fractional_power_apply(s.eig, beta, u, PowerMethod::spectral);
        const double scale = norm_l2(s.grid, vs);
        double diff = 0.0;
        for (std::size_t i = 0; i < s.grid.n; ++i) diff = std::max(diff, std::abs(vi[i] - vs[i]));
        EXPECT_LT(diff, 1e-8 * scale) << "beta=" << beta;
    }
}

TEST(Semigroup, InverseUndoesTheOperator) {
    const auto s = make_setup(63, 1.0);
    const Field u = random_field(s.grid, 19);
    const Field round = fractional_power_apply(s.eig, -1.0, fractional_power_apply(s.eig, 1.0, u),
                                               PowerMethod::integral);
    for (std::size_t i = 0; i < s.grid.n; ++i) EXPECT_NEAR(round[i], u[i], 1e-7);
}

TEST(Semigroup, DecayBoundFamiliesHoldOnTheContractGrid) {
    const auto s = make_setup(255, 1.0);
    const auto report = verify_semigroup_bounds(s.eig, logspace(1e-3, 10.0, 50));
    EXPECT_TRUE(report.pass);
    EXPECT_TRUE(report.violations.empty());
    EXPECT_EQ(report.rows.size(), 50u * 5u);  // identity family, beta=1, three fractional betas
    for (const auto& row : report.rows) EXPECT_LE(row.norm, row.bound * (1.0 + 1e-12));
}

TEST(Semigroup, ParameterErrorsAreThrown) {
    const auto s = make_setup(32, 1.0);
    const Field u = random_field(s.grid, 23);
    EXPECT_THROW(heat_apply(s.eig, -0.1, u), parameter_error);
    EXPECT_THROW(fractional_power_apply(s.eig, 0.5, u, PowerMethod::integral), parameter_error);
    EXPECT_THROW(verify_semigroup_bounds(s.eig, {0.0, 1.0}), parameter_error);
}
