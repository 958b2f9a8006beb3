#pragma once

// Reaction terms for the semilinear equation u_t = A u + F(u). The built-in
// variants carry their own structural estimates; a custom pointwise F is
// admitted only after a sampled dissipativity audit
//   -C_d |xi|^p - C_d <= F(xi) xi <= -C_d |xi|^p + C_d   on xi in [-10, 10].

#include <cmath>
#include <functional>
#include <string>
#include <utility>

#include "nonlocal/errors.hpp"
#include "nonlocal/grid.hpp"

namespace nonlocal {

enum class GLVariant { cubic, cubic_quadratic, linear_forced, custom };

inline const char* variant_name(GLVariant v) {
    switch (v) {
        case GLVariant::cubic: return "cubic";
        case GLVariant::cubic_quadratic: return "cubic_quadratic";
        case GLVariant::linear_forced: return "linear_forced";
        case GLVariant::custom: return "custom";
    }
    return "?";
}

struct Nonlinearity {
    GLVariant variant = GLVariant::cubic;
    Field forcing;                              // linear_forced only
    std::function<double(double)> custom_f;     // custom only
    double dissipativity_constant = 1.0;        // C_d of the audit
    double dissipativity_power = 4.0;           // p of the audit

    static Nonlinearity cubic() { return {GLVariant::cubic, {}, {}, 0.0, 0.0}; }

    static Nonlinearity cubic_quadratic() { return {GLVariant::cubic_quadratic, {}, {}, 0.0, 0.0}; }

    static Nonlinearity linear_forced(Field f) {
        for (double v : f.values)
            if (!std::isfinite(v)) throw parameter_error("linear_forced: forcing field must be finite");
        return {GLVariant::linear_forced, std::move(f), {}, 0.0, 0.0};
    }

    // Admits F after the sampled audit; rejection names the first failing xi.
    static Nonlinearity custom(std::function<double(double)> f, double c_d, double p) {
        if (!f) throw parameter_error("custom nonlinearity: callable required");
        if (!(c_d > 0.0)) throw parameter_error("custom nonlinearity: C_d must be positive");
        if (!(p >= 0.0)) throw parameter_error("custom nonlinearity: power p must be >= 0");
        const int samples = 10000;
        for (int i = 0; i < samples; ++i) {
            const double xi = -10.0 + 20.0 * static_cast<double>(i) / static_cast<double>(samples - 1);
            const double v = f(xi) * xi;
            const double core = -c_d * std::pow(std::abs(xi), p);
            const double slack = 1e-12 * (1.0 + std::abs(core));
            if (!(v >= core - c_d - slack && v <= core + c_d + slack))
                throw parameter_error("custom nonlinearity failed the dissipativity audit at xi = " +
                                      std::to_string(xi) + ": F(xi)*xi = " + std::to_string(v) +
                                      " outside [-C_d|xi|^p - C_d, -C_d|xi|^p + C_d]");
        }
        return {GLVariant::custom, {}, std::move(f), c_d, p};
    }

    // F == 0 as a custom term: the audit holds with equality at p = 0.
    static Nonlinearity zero() { return custom([](double) { return 0.0; }, 1.0, 0.0); }

    double pointwise(double xi, std::size_t i) const {
        switch (variant) {
            case GLVariant::cubic: return xi - xi * xi * xi;
            case GLVariant::cubic_quadratic: return xi + xi * xi - xi * xi * xi;
            case GLVariant::linear_forced: return xi + forcing[i];
            case GLVariant::custom: return custom_f(xi);
        }
        return 0.0;
    }

    Field apply(const Grid1D& grid, const Field& u) const {
        require_same_grid(grid, u, "Nonlinearity::apply");
        if (variant == GLVariant::linear_forced && forcing.size() != grid.n)
            throw dimension_error("Nonlinearity::apply: forcing field size mismatch");
        Field out(grid.n);
        for (std::size_t i = 0; i < grid.n; ++i) out[i] = pointwise(u[i], i);
        return out;
    }
};

}  // namespace nonlocal
