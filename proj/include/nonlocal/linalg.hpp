#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "nonlocal/errors.hpp"

namespace nonlocal {

// Dense Cholesky factorization M = L L^T for symmetric positive definite M,
// lower triangle stored row-major. Factor once, solve many.
struct CholeskyFactor {
    std::size_t n = 0;
    std::vector<double> l;  // row-major, only i >= j entries meaningful

    static CholeskyFactor factor(const std::vector<double>& m, std::size_t n, const char* what) {
        CholeskyFactor f;
        f.n = n;
        f.l.assign(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j <= i; ++j) {
                double s = m[i * n + j];
                for (std::size_t k = 0; k < j; ++k) s -= f.l[i * n + k] * f.l[j * n + k];
                if (i == j) {
                    if (!(s > 0.0))
                        throw numerical_error(std::string(what) + ": not positive definite (pivot " +
                                              std::to_string(s) + " at index " + std::to_string(i) + ")");
                    f.l[i * n + i] = std::sqrt(s);
                } else {
                    f.l[i * n + j] = s / f.l[j * n + j];
                }
            }
        }
        return f;
    }

    // Solves L L^T x = b in place.
    void solve(std::vector<double>& b) const {
        for (std::size_t i = 0; i < n; ++i) {
            double s = b[i];
            for (std::size_t k = 0; k < i; ++k) s -= l[i * n + k] * b[k];
            b[i] = s / l[i * n + i];
        }
        for (std::size_t ii = n; ii-- > 0;) {
            double s = b[ii];
            for (std::size_t k = ii + 1; k < n; ++k) s -= l[k * n + ii] * b[k];
            b[ii] = s / l[ii * n + ii];
        }
    }
};

}  // namespace nonlocal
