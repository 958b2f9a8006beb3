#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "nonlocal/errors.hpp"

namespace nonlocal {

// Normalization constant for the 1-D kernel |y|^{-1-alpha}: with this c_alpha
// the whole-line Fourier symbol of the operator is exactly -|xi|^alpha.
// Closed form: c_alpha = alpha * 2^{alpha-1} * Gamma((1+alpha)/2)
//                        / (sqrt(pi) * Gamma(1 - alpha/2)),
// continuous across alpha = 1 where it equals 1/pi.
inline double stable_normalization(double alpha) {
    if (!(alpha > 0.0 && alpha < 2.0))
        throw parameter_error("stable_normalization: alpha must lie in (0,2), got " + std::to_string(alpha));
    return alpha * std::pow(2.0, alpha - 1.0) * std::tgamma((1.0 + alpha) / 2.0) /
           (std::sqrt(std::numbers::pi) * std::tgamma(1.0 - alpha / 2.0));
}

// Kernel of the nonlocal operator: c_alpha * |y|^{-1-alpha} with a near-field
// regularization radius of singularity_split mesh cells (the |y| <= split*h
// ball is handled by a symmetrized second-difference model, everything beyond
// it by exact piecewise-linear quadrature).
struct KernelSpec {
    double alpha;
    double c_alpha;
    double singularity_split;  // in units of h, in (0, 1]

    KernelSpec(double alpha_, double c_alpha_, double split = 1.0)
        : alpha(alpha_), c_alpha(c_alpha_), singularity_split(split) {
        if (!(alpha > 0.0 && alpha < 2.0))
            throw parameter_error("KernelSpec: alpha must lie in (0,2), got " + std::to_string(alpha));
        if (!(c_alpha > 0.0))
            throw parameter_error("KernelSpec: c_alpha must be positive");
        if (!(split > 0.0 && split <= 1.0))
            throw parameter_error("KernelSpec: singularity_split must lie in (0,1], got " + std::to_string(split));
    }

    // Kernel with the standard stable normalization.
    static KernelSpec normalized(double alpha_) { return KernelSpec(alpha_, stable_normalization(alpha_)); }
};

}  // namespace nonlocal
