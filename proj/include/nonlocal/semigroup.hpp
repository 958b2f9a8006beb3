#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "nonlocal/eigen.hpp"
#include "nonlocal/errors.hpp"
#include "nonlocal/grid.hpp"

namespace nonlocal {

// u -> e^{-t Lambda} u by spectral calculus.
inline Field heat_apply(const EigenDecomposition& eig, double t, const Field& u) {
    if (!(t >= 0.0)) throw parameter_error("heat_apply: t must be >= 0, got " + std::to_string(t));
    std::vector<double> c = eig.to_modal(u);
    for (std::size_t k = 0; k < c.size(); ++k) c[k] *= std::exp(-eig.eigenvalues[k] * t);
    return eig.from_modal(c);
}

enum class PowerMethod {
    automatic,  // spectral for beta >= 0, quadrature of the integral representation for beta < 0
    spectral,
    integral,
};

namespace detail {

// Gauss-Legendre nodes/weights on [-1,1], 12-point; plenty for the smooth
// panel integrands below (relative panel error far below 1e-12).
struct Gauss12 {
    static constexpr int m = 12;
    // positive half of the symmetric rule
    static constexpr double x[6] = {0.1252334085114689, 0.3678314989981802, 0.5873179542866175,
                                    0.7699026741943047, 0.9041172563704748, 0.9815606342467192};
    static constexpr double w[6] = {0.2491470458134027, 0.2334925365383546, 0.2031674267230656,
                                    0.1600783285433461, 0.1069393259953189, 0.0471753363865120};
};

// q(lambda) = (1/Gamma(b)) int_0^inf t^{b-1} e^{-lambda t} dt evaluated by
// composite Gauss quadrature on geometrically shrinking panels, one shared
// node set for the whole spectrum. The grading resolves the t^{b-1}
// singularity; the upper cutoff is chosen from the smallest eigenvalue.
struct SemigroupQuadrature {
    std::vector<double> nodes;
    std::vector<double> weights;  // includes t^{b-1}/Gamma(b)
    double b;

    SemigroupQuadrature(double b_, double lambda_min) : b(b_) {
        // e^{-lambda_min T} < 1e-16 beyond the cutoff; head below t_min holds
        // less than 1e-9 of the smallest mode's mass.
        const double t_top = 38.0 / lambda_min;
        const double t_min = t_top * std::pow(1e-12, 1.0 / b) * 1e-3;
        const double gamma_b = std::tgamma(b);
        double hi = t_top;
        while (hi > t_min) {
            const double lo = hi * 0.5;
            const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
            for (int j = 0; j < 6; ++j) {
                for (double sgn : {-1.0, 1.0}) {
                    const double t = mid + sgn * half * Gauss12::x[j];
                    nodes.push_back(t);
                    weights.push_back(half * Gauss12::w[j] * std::pow(t, b - 1.0) / gamma_b);
                }
            }
            hi = lo;
        }
    }

    double apply(double lambda) const {
        double s = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * std::exp(-lambda * nodes[i]);
        return s;
    }
};

}  // namespace detail

// Lambda^beta u. Non-negative beta is spectral; negative beta goes through
// quadrature of the integral representation
//   Lambda^{-b} = (1/Gamma(b)) int_0^inf t^{b-1} e^{-t Lambda} dt,
// which also serves as the independent cross-check of the spectral route.
inline Field fractional_power_apply(const EigenDecomposition& eig, double beta, const Field& u,
                                    PowerMethod method = PowerMethod::automatic) {
    if (method == PowerMethod::automatic) method = (beta >= 0.0) ? PowerMethod::spectral : PowerMethod::integral;
    std::vector<double> c = eig.to_modal(u);
    if (method == PowerMethod::spectral) {
        for (std::size_t k = 0; k < c.size(); ++k) c[k] *= std::pow(eig.eigenvalues[k], beta);
        return eig.from_modal(c);
    }
    if (!(beta < 0.0))
        throw parameter_error("fractional_power_apply: the integral representation evaluates negative powers only");
    detail::SemigroupQuadrature quad(-beta, eig.eigenvalues.front());
    for (std::size_t k = 0; k < c.size(); ++k) c[k] *= quad.apply(eig.eigenvalues[k]);
    return eig.from_modal(c);
}

struct SemigroupBoundRow {
    double t;
    double beta;    // 0 for the plain semigroup family, 1 for Lambda e^{-t Lambda}
    double norm;    // operator 2-norm, exact over the discrete spectrum
    double bound;   // asserted majorant
};

struct SemigroupBoundReport {
    std::vector<SemigroupBoundRow> rows;
    std::vector<SemigroupBoundRow> violations;
    bool pass = true;
};

// Checks the three decay families over a positive time grid:
//   (i)  ||e^{-t Lambda}||           = e^{-lambda_1 t}            (equality)
//   (ii) ||Lambda e^{-t Lambda}||   <= (2/(e t)) e^{-lambda_1 t/2}
//   (iii)||Lambda^b e^{-t Lambda}|| <= (2b/(e t))^b e^{-lambda_1 t/2}
// All three are exact consequences of the scalar maximum of mu^b e^{-mu t/2},
// so failures indicate a spectral defect rather than a sharpness issue.
inline SemigroupBoundReport verify_semigroup_bounds(const EigenDecomposition& eig, const std::vector<double>& t_grid,
                                                    const std::vector<double>& betas = {0.25, 0.5, 0.75}) {
    const double lambda1 = eig.eigenvalues.front();
    SemigroupBoundReport report;
    const double slack = 1.0 + 1e-12;
    auto spectral_norm = [&](double beta, double t) {
        double m = 0.0;
        for (double lam : eig.eigenvalues) m = std::max(m, std::pow(lam, beta) * std::exp(-lam * t));
        return m;
    };
    for (double t : t_grid) {
        if (!(t > 0.0)) throw parameter_error("verify_semigroup_bounds: t grid must be strictly positive");
        {
            const double norm = spectral_norm(0.0, t);
            const double bound = std::exp(-lambda1 * t);
            SemigroupBoundRow row{t, 0.0, norm, bound};
            report.rows.push_back(row);
            if (std::abs(norm - bound) > 1e-12 * bound) report.violations.push_back(row);
        }
        {
            const double norm = spectral_norm(1.0, t);
            const double bound = 2.0 / (std::numbers::e * t) * std::exp(-lambda1 * t / 2.0);
            SemigroupBoundRow row{t, 1.0, norm, bound};
            report.rows.push_back(row);
            if (norm > bound * slack) report.violations.push_back(row);
        }
        for (double beta : betas) {
            const double norm = spectral_norm(beta, t);
            const double bound =
                std::pow(2.0 * beta / (std::numbers::e * t), beta) * std::exp(-lambda1 * t / 2.0);
            SemigroupBoundRow row{t, beta, norm, bound};
            report.rows.push_back(row);
            if (norm > bound * slack) report.violations.push_back(row);
        }
    }
    report.pass = report.violations.empty();
    return report;
}

}  // namespace nonlocal
