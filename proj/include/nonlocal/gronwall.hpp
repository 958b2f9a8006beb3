#pragma once

// Discrete checkers for the classical and uniform Gronwall inequalities on
// sampled trajectories. Both operate on a TrajectoryTriple: a time grid with
// samples of y (the quantity), g and h (the inequality data y' <= g y + h),
// and a window length r for the uniform lemma.
//
// The differential premise can only be verified up to discretization error on
// sampled data, so each interval gets a tolerance of 10x the local truncation
// estimate (0.5 * dt * |y''| by divided differences). Intervals that exceed it
// are flagged; the uniform check skips windows containing flagged intervals
// and the classical check reports the flag while still returning the bound.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "nonlocal/errors.hpp"

namespace nonlocal {

struct TrajectoryTriple {
    std::vector<double> t;  // strictly increasing
    std::vector<double> y;
    std::vector<double> g;  // >= 0
    std::vector<double> h;  // >= 0
    double r = 0.0;         // window length, > 0, <= t.back() - t.front()
};

struct ClassicGronwallReport {
    double bound = 0.0;
    double value = 0.0;  // y at the query time
    bool premise_ok = true;
    std::size_t premise_violations = 0;
    bool pass = true;  // value <= bound; vacuously true when the premise failed
};

struct UniformGronwallReport {
    double a1 = 0.0, a2 = 0.0, a3 = 0.0;  // max window integrals of g, h, y
    double bound = 0.0;                   // (a3 / r + a2) * exp(a1)
    std::size_t windows = 0, skipped = 0;
    double worst_margin = 0.0;  // max over clean windows of y(t+r) - bound
    bool pass = false;          // every clean window satisfied its bound, and at least one was clean
};

namespace detail {

inline void validate_triple(const TrajectoryTriple& tr, bool need_window) {
    const std::size_t n = tr.t.size();
    if (n < 2) throw parameter_error("trajectory needs at least two samples");
    if (tr.y.size() != n || tr.g.size() != n || tr.h.size() != n)
        throw parameter_error("trajectory columns t, y, g, h must have equal length");
    for (std::size_t i = 0; i + 1 < n; ++i)
        if (!(tr.t[i + 1] > tr.t[i])) throw parameter_error("trajectory time grid must be strictly increasing");
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(tr.t[i]) || !std::isfinite(tr.y[i]) || !std::isfinite(tr.g[i]) || !std::isfinite(tr.h[i]))
            throw parameter_error("trajectory samples must be finite");
        if (tr.g[i] < 0.0 || tr.h[i] < 0.0) throw parameter_error("g and h must be nonnegative");
    }
    if (need_window) {
        if (!(tr.r > 0.0)) throw parameter_error("window length r must be positive");
        if (tr.r > tr.t.back() - tr.t.front() + 1e-12 * (tr.t.back() - tr.t.front()))
            throw parameter_error("window length r exceeds the trajectory span");
    }
}

// Cumulative trapezoid of f over the grid; C[0] = 0.
inline std::vector<double> cumtrapz(const std::vector<double>& t, const std::vector<double>& f) {
    std::vector<double> c(t.size(), 0.0);
    for (std::size_t i = 1; i < t.size(); ++i)
        c[i] = c[i - 1] + 0.5 * (f[i] + f[i - 1]) * (t[i] - t[i - 1]);
    return c;
}

// Piecewise-linear sample value at time tau (clamped to the grid range).
inline double interp(const std::vector<double>& t, const std::vector<double>& f, double tau) {
    if (tau <= t.front()) return f.front();
    if (tau >= t.back()) return f.back();
    const auto it = std::upper_bound(t.begin(), t.end(), tau);
    const std::size_t k = static_cast<std::size_t>(it - t.begin()) - 1;
    const double w = (tau - t[k]) / (t[k + 1] - t[k]);
    return f[k] + w * (f[k + 1] - f[k]);
}

// Cumulative trapezoid evaluated at tau, extending the node values with a
// partial cell whose far endpoint is linearly interpolated.
inline double cum_at(const std::vector<double>& t, const std::vector<double>& f, const std::vector<double>& c,
                     double tau) {
    if (tau <= t.front()) return 0.0;
    if (tau >= t.back()) return c.back();
    const auto it = std::upper_bound(t.begin(), t.end(), tau);
    const std::size_t k = static_cast<std::size_t>(it - t.begin()) - 1;
    const double fm = interp(t, f, tau);
    return c[k] + 0.5 * (f[k] + fm) * (tau - t[k]);
}

// Per-interval premise flags: interval i is violated when the sampled slope of
// y exceeds max(g y + h at either endpoint) by more than 10x the local
// truncation estimate. The max-endpoint form is the weakest discrete reading
// of y' <= g y + h consistent with linear sampling.
inline std::vector<char> premise_flags(const TrajectoryTriple& tr) {
    const std::size_t n = tr.t.size();
    std::vector<double> ydd(n, 0.0);  // |y''| estimate at nodes
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double dl = tr.t[i] - tr.t[i - 1], dr = tr.t[i + 1] - tr.t[i];
        const double sl = (tr.y[i] - tr.y[i - 1]) / dl, sr = (tr.y[i + 1] - tr.y[i]) / dr;
        ydd[i] = std::abs(2.0 * (sr - sl) / (dl + dr));
    }
    if (n > 2) {
        ydd[0] = ydd[1];
        ydd[n - 1] = ydd[n - 2];
    }
    std::vector<char> bad(n - 1, 0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double dt = tr.t[i + 1] - tr.t[i];
        const double slope = (tr.y[i + 1] - tr.y[i]) / dt;
        const double rhs = std::max(tr.g[i] * tr.y[i] + tr.h[i], tr.g[i + 1] * tr.y[i + 1] + tr.h[i + 1]);
        const double tol = 10.0 * 0.5 * dt * std::max(ydd[i], ydd[i + 1]) + 1e-9 * (1.0 + std::abs(rhs) + std::abs(slope));
        if (slope > rhs + tol) bad[i] = 1;
    }
    return bad;
}

}  // namespace detail

// Classical bound y(t0) exp(int g) + int h exp(int_s^t g) ds by trapezoidal
// quadrature from the front of the grid to the query time.
inline ClassicGronwallReport classic_gronwall_bound(const TrajectoryTriple& tr, double t_query) {
    detail::validate_triple(tr, false);
    if (t_query < tr.t.front() - 1e-12 || t_query > tr.t.back() + 1e-12 * std::max(1.0, std::abs(tr.t.back())))
        throw parameter_error("query time lies outside the trajectory grid");
    t_query = std::clamp(t_query, tr.t.front(), tr.t.back());
    {
        // The trajectory is only known at its samples; snap the query to the
        // nearest node so `value` is a sample, not an interpolant.
        const auto it = std::upper_bound(tr.t.begin(), tr.t.end(), t_query);
        const std::size_t k = it == tr.t.begin() ? 0 : static_cast<std::size_t>(it - tr.t.begin()) - 1;
        if (k + 1 < tr.t.size() && tr.t[k + 1] - t_query < t_query - tr.t[k]) t_query = tr.t[k + 1];
        else t_query = tr.t[k];
    }

    const auto cg = detail::cumtrapz(tr.t, tr.g);
    const double Gt = detail::cum_at(tr.t, tr.g, cg, t_query);

    // Outer trapezoid of q(s) = h(s) exp(G(t) - G(s)) over node times up to
    // t_query plus the interpolated partial cell.
    double integral = 0.0;
    double prev_q = tr.h.front() * std::exp(Gt - 0.0);
    double prev_t = tr.t.front();
    for (std::size_t i = 1; i < tr.t.size() && tr.t[i] <= t_query; ++i) {
        const double q = tr.h[i] * std::exp(Gt - cg[i]);
        integral += 0.5 * (q + prev_q) * (tr.t[i] - prev_t);
        prev_q = q;
        prev_t = tr.t[i];
    }
    if (t_query > prev_t) {
        const double hq = detail::interp(tr.t, tr.h, t_query);
        const double q = hq * std::exp(Gt - detail::cum_at(tr.t, tr.g, cg, t_query));
        integral += 0.5 * (q + prev_q) * (t_query - prev_t);
    }

    ClassicGronwallReport rep;
    rep.bound = tr.y.front() * std::exp(Gt) + integral;
    rep.value = detail::interp(tr.t, tr.y, t_query);

    const auto bad = detail::premise_flags(tr);
    for (std::size_t i = 0; i + 1 < tr.t.size() && tr.t[i] < t_query; ++i) rep.premise_violations += bad[i];
    rep.premise_ok = rep.premise_violations == 0;
    rep.pass = !rep.premise_ok || rep.value <= rep.bound * (1.0 + 1e-9) + 1e-12;
    return rep;
}

// Uniform lemma: with a1 >= int_w g, a2 >= int_w h, a3 >= int_w y over every
// length-r window w in range, y(t + r) <= (a3 / r + a2) exp(a1). Windows whose
// interior contains a premise violation are skipped (flagged via `skipped`).
inline UniformGronwallReport uniform_gronwall_check(const TrajectoryTriple& tr) {
    detail::validate_triple(tr, true);
    const std::size_t n = tr.t.size();
    const auto cg = detail::cumtrapz(tr.t, tr.g);
    const auto ch = detail::cumtrapz(tr.t, tr.h);
    const auto cy = detail::cumtrapz(tr.t, tr.y);
    const auto bad = detail::premise_flags(tr);
    std::vector<std::size_t> bad_prefix(n, 0);  // violations among intervals [0, i)
    for (std::size_t i = 1; i < n; ++i) bad_prefix[i] = bad_prefix[i - 1] + bad[i - 1];

    UniformGronwallReport rep;
    const double t_end = tr.t.back();
    const double slack = 1e-9 * (tr.t.back() - tr.t.front());
    bool all_clean_ok = true;
    double worst = -std::numeric_limits<double>::infinity();

    // First pass: window integral maxima over every admissible start node.
    for (std::size_t i = 0; i < n; ++i) {
        const double te = tr.t[i] + tr.r;
        if (te > t_end + slack) break;
        ++rep.windows;
        rep.a1 = std::max(rep.a1, detail::cum_at(tr.t, tr.g, cg, te) - cg[i]);
        rep.a2 = std::max(rep.a2, detail::cum_at(tr.t, tr.h, ch, te) - ch[i]);
        rep.a3 = std::max(rep.a3, detail::cum_at(tr.t, tr.y, cy, te) - cy[i]);
    }
    if (rep.windows == 0) throw parameter_error("no admissible window of length r fits the grid");
    rep.bound = (rep.a3 / tr.r + rep.a2) * std::exp(rep.a1);

    // Second pass: assert the bound at every clean window's right edge.
    for (std::size_t i = 0; i < rep.windows; ++i) {
        const double te = std::min(tr.t[i] + tr.r, t_end);
        const auto it = std::upper_bound(tr.t.begin(), tr.t.end(), te);
        const std::size_t k = std::min(static_cast<std::size_t>(it - tr.t.begin()), n - 1);
        if (bad_prefix[k] - bad_prefix[i] > 0) {
            ++rep.skipped;
            continue;
        }
        const double ye = detail::interp(tr.t, tr.y, te);
        worst = std::max(worst, ye - rep.bound);
        if (ye > rep.bound * (1.0 + 1e-9) + 1e-12) all_clean_ok = false;
    }
    rep.worst_margin = rep.skipped == rep.windows ? 0.0 : worst;
    rep.pass = all_clean_ok && rep.skipped < rep.windows;
    return rep;
}

}  // namespace nonlocal
