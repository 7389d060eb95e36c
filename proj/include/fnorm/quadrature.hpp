#ifndef FNORM_QUADRATURE_HPP
#define FNORM_QUADRATURE_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "fnorm/errors.hpp"

namespace fnorm {

/// Tolerances, truncation policy and subdivision limits for all integral
/// evaluations.
struct QuadratureConfig {
    double abs_tol = 1e-10;
    int max_subdivisions = 10000;
    double truncation_growth = 2.0;
    double tail_tol = 1e-12;

    void validate() const {
        if (!(abs_tol > 0.0 && abs_tol < 1.0))
            throw std::invalid_argument("QuadratureConfig: abs_tol must lie in (0,1)");
        if (max_subdivisions <= 0)
            throw std::invalid_argument("QuadratureConfig: max_subdivisions must be positive");
        if (!(truncation_growth > 1.0))
            throw std::invalid_argument("QuadratureConfig: truncation_growth must exceed 1");
        if (!(tail_tol > 0.0))
            throw std::invalid_argument("QuadratureConfig: tail_tol must be positive");
    }
};

struct IntegralResult {
    double value = 0.0;
    double error = 0.0;
};

namespace detail {

/// Adaptive Simpson on one smooth interval. Shares a subdivision budget
/// with sibling intervals; when the budget or depth runs out the current
/// estimate is accepted and its discrepancy charged to the error.
template <typename F>
class SimpsonWorker {
public:
    SimpsonWorker(F& f, int& budget) : f_(f), budget_(budget) {}

    IntegralResult run(double a, double b, double tol) {
        IntegralResult r;
        if (!(b > a)) return r;
        double fa = f_(a), fm = f_((a + b) / 2), fb = f_(b);
        double s = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        recurse(a, b, fa, fm, fb, s, tol, 48, r);
        return r;
    }

private:
    void recurse(double a, double b, double fa, double fm, double fb, double s,
                 double tol, int depth, IntegralResult& r) {
        double m = (a + b) / 2;
        double lm = (a + m) / 2, rm = (m + b) / 2;
        double flm = f_(lm), frm = f_(rm);
        double h = b - a;
        double sl = h / 12.0 * (fa + 4.0 * flm + fm);
        double sr = h / 12.0 * (fm + 4.0 * frm + fb);
        double s2 = sl + sr;
        double diff = s2 - s;
        if (std::abs(diff) <= 15.0 * tol || depth == 0 || budget_ <= 0 ||
            m <= a || m >= b) {
            r.value += s2 + diff / 15.0;
            r.error += (depth == 0 || budget_ <= 0) ? std::abs(diff)
                                                    : std::abs(diff) / 15.0;
            return;
        }
        budget_ -= 1;
        recurse(a, m, fa, flm, fm, sl, tol / 2, depth - 1, r);
        recurse(m, b, fm, frm, fb, sr, tol / 2, depth - 1, r);
    }

    F& f_;
    int& budget_;
};

inline std::vector<double> interior_points(std::span<const double> pts, double a, double b) {
    std::vector<double> out;
    for (double p : pts)
        if (p > a && p < b) out.push_back(p);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

} // namespace detail

/// Integral of f over the finite interval [a,b], split at the supplied
/// breakpoints (cdf kinks, branch switches, atoms).
template <typename F>
IntegralResult integrate(F f, double a, double b, double tol, const QuadratureConfig& cfg,
                         std::span<const double> breakpoints = {}) {
    IntegralResult total;
    if (!(b > a)) return total;
    if (!std::isfinite(a) || !std::isfinite(b))
        throw std::invalid_argument("integrate: finite interval required");
    std::vector<double> cuts = detail::interior_points(breakpoints, a, b);
    cuts.insert(cuts.begin(), a);
    cuts.push_back(b);
    int budget = cfg.max_subdivisions;
    double piece_tol = tol / static_cast<double>(cuts.size() - 1);
    detail::SimpsonWorker<F> worker(f, budget);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        IntegralResult r = worker.run(cuts[i], cuts[i + 1], piece_tol);
        total.value += r.value;
        total.error += r.error;
    }
    if (budget <= 0 && total.error > tol)
        throw IntegrationFailure("subdivision budget exhausted", total.value, total.error);
    return total;
}

/// Integral of f over [a, infinity). When `tail_bound(T)` (an upper bound
/// on the remaining mass beyond T) is supplied, the truncation point grows
/// geometrically until the bound falls below tail_tol; otherwise segments
/// are added until their contributions decay below tail_tol, and stalled
/// decay raises TailNotIntegrable.
template <typename F>
IntegralResult integrate_upper(F f, double a, double tol, const QuadratureConfig& cfg,
                               std::span<const double> breakpoints = {},
                               const std::function<double(double)>& tail_bound = {}) {
    IntegralResult total;
    double start = std::max(a, 0.0);
    double g0 = std::max({std::abs(start), 1.0});
    for (double p : breakpoints) g0 = std::max(g0, std::abs(p));

    if (tail_bound) {
        double t_cut = g0 * cfg.truncation_growth;
        while (tail_bound(t_cut) > cfg.tail_tol) {
            t_cut *= cfg.truncation_growth;
            if (!(t_cut < 1e300))
                throw TailNotIntegrable("tail bound does not decay within range");
        }
        // geometric guide marks keep each piece within one scale octave
        std::vector<double> cuts(breakpoints.begin(), breakpoints.end());
        for (double m = g0; m < t_cut; m *= cfg.truncation_growth) cuts.push_back(m);
        IntegralResult r = integrate(f, start, t_cut, tol, cfg, cuts);
        total.value = r.value;
        total.error = r.error + tail_bound(t_cut);
        return total;
    }

    // no analytic bound: geometric segments with decay detection
    IntegralResult head = integrate(f, start, g0, tol / 2, cfg, breakpoints);
    total.value = head.value;
    total.error = head.error;
    double lo = g0;
    double prev_contrib = std::numeric_limits<double>::infinity();
    int stall = 0;
    double seg_tol = tol / 8.0;
    for (int seg = 0; seg < 3000; ++seg) {
        double hi = lo * cfg.truncation_growth;
        IntegralResult r = integrate(f, lo, hi, seg_tol, cfg);
        total.value += r.value;
        total.error += r.error;
        double contrib = std::abs(r.value);
        if (contrib < cfg.tail_tol) {
            total.error += cfg.tail_tol;
            return total;
        }
        if (contrib >= prev_contrib) {
            if (++stall >= 3)
                throw TailNotIntegrable("segment contributions stopped decreasing");
        } else {
            stall = 0;
        }
        prev_contrib = contrib;
        lo = hi;
        seg_tol = std::max(seg_tol / 2, tol * 1e-6);
    }
    throw TailNotIntegrable("segment budget exhausted before tail decayed");
}

} // namespace fnorm

#endif // FNORM_QUADRATURE_HPP
