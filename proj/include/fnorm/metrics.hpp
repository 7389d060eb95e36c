#ifndef FNORM_METRICS_HPP
#define FNORM_METRICS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "fnorm/distribution.hpp"
#include "fnorm/evaluator.hpp"
#include "fnorm/quadrature.hpp"

namespace fnorm {

namespace detail {

/// Sign changes of F - G bisected to high precision; the crossings become
/// quadrature breakpoints so |F - G| stays piecewise smooth.
inline std::vector<double> cdf_crossings(const DistributionSpec& f, const DistributionSpec& g,
                                         double lo, double hi, std::size_t scan) {
    std::vector<double> out;
    auto diff = [&](double t) {
        return g.marginal_survival(0, t) - f.marginal_survival(0, t);
    };
    double prev_t = lo, prev_d = diff(lo);
    for (std::size_t j = 1; j <= scan; ++j) {
        double t = lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(scan);
        double dv = diff(t);
        if ((prev_d < 0.0 && dv > 0.0) || (prev_d > 0.0 && dv < 0.0)) {
            double a = prev_t, b = t;
            for (int it = 0; it < 60; ++it) {
                double m0 = 0.5 * (a + b);
                if ((diff(a) < 0.0) == (diff(m0) < 0.0)) a = m0;
                else b = m0;
            }
            out.push_back(0.5 * (a + b));
        }
        prev_t = t;
        prev_d = dv;
    }
    return out;
}

/// Exact distance between an empirical staircase and an arbitrary 1-D df:
/// between consecutive atoms the empirical cdf is constant, F crosses the
/// level exactly once (at the quantile), and int F over an interval reduces
/// to tail integrals.
inline double wasserstein_emp_vs_any(const SampleMatrix& sample, const DistributionSpec& g,
                                     const QuadratureConfig& cfg) {
    std::vector<double> atoms = sample.sorted_column(0);
    const double n = static_cast<double>(atoms.size());
    auto J = [&](double t) { return survival_integral(g, 0, t, cfg); };
    // int_a^b |G - c| dt with the sign change at q_G(c)
    auto piece = [&](double a, double b, double c) {
        if (!(b > a)) return 0.0;
        double t_star = c <= 0.0 ? a : (c >= 1.0 ? b : g.quantile(c));
        t_star = std::min(std::max(t_star, a), b);
        double ja = J(a), js = J(t_star), jb = J(b);
        double below = (c - 1.0) * (t_star - a) + (ja - js);   // G <= c here
        double above = (1.0 - c) * (b - t_star) - (js - jb);   // G >= c here
        return std::max(below, 0.0) + std::max(above, 0.0);
    };
    double acc = 0.0;
    double prev = 0.0;
    std::size_t i = 0;
    while (i < atoms.size()) {
        std::size_t j = i;
        while (j < atoms.size() && atoms[j] == atoms[i]) ++j;
        double level = static_cast<double>(i) / n;  // empirical cdf on [prev, atom)
        acc += piece(prev, atoms[i], level);
        prev = atoms[i];
        i = j;
    }
    acc += J(prev);  // beyond the largest atom the empirical cdf is 1
    return acc;
}

/// Exact 1-D Wasserstein distance between two empirical samples via the
/// merged quantile staircase.
inline double wasserstein_empirical(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n = a.size(), m = b.size();
    if (n == m) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += std::abs(a[i] - b[i]);
        return acc / static_cast<double>(n);
    }
    double acc = 0.0, u = 0.0;
    std::size_t i = 0, j = 0;
    while (i < n && j < m) {
        double ua = static_cast<double>(i + 1) / static_cast<double>(n);
        double ub = static_cast<double>(j + 1) / static_cast<double>(m);
        double next = std::min(ua, ub);
        acc += (next - u) * std::abs(a[i] - b[j]);
        u = next;
        if (ua <= next) ++i;
        if (ub <= next) ++j;
    }
    return acc;
}

} // namespace detail

/// Order-1 Wasserstein distance between 1-D specs, evaluated through the
/// quantile coupling. Sorted-sample staircases are summed exactly when both
/// specs are empirical; otherwise the coupling integral is computed in cdf
/// space, int |F - G| dt, which is the same value and keeps the integrand
/// bounded where quantiles blow up near u = 1.
inline double wasserstein_1d(const DistributionSpec& f, const DistributionSpec& g,
                             const QuadratureConfig& cfg = {}) {
    if (f.dim() != 1 || g.dim() != 1)
        throw std::invalid_argument("wasserstein_1d: specs must be 1-D");
    if (!std::isfinite(f.marginal_mean(0)) || !std::isfinite(g.marginal_mean(0)))
        throw std::domain_error("wasserstein_1d: finite means required");

    const auto* fe = f.get_if<Empirical>();
    const auto* ge = g.get_if<Empirical>();
    if (fe && ge)
        return detail::wasserstein_empirical(fe->sample.sorted_column(0),
                                             ge->sample.sorted_column(0));
    if (fe) return detail::wasserstein_emp_vs_any(fe->sample, g, cfg);
    if (ge) return detail::wasserstein_emp_vs_any(ge->sample, f, cfg);

    auto integrand = [&](double t) {
        return std::abs(g.marginal_survival(0, t) - f.marginal_survival(0, t));
    };
    std::vector<double> cuts = f.marginal_breakpoints(0);
    for (double b : g.marginal_breakpoints(0)) cuts.push_back(b);

    double sup_f = f.marginal_support_sup(0), sup_g = g.marginal_support_sup(0);
    if (std::isfinite(sup_f) && std::isfinite(sup_g)) {
        double hi = std::max(sup_f, sup_g);
        if (hi <= 0.0) return 0.0;
        for (double c : detail::cdf_crossings(f, g, 0.0, hi, 256)) cuts.push_back(c);
        return integrate(integrand, 0.0, hi, cfg.abs_tol, cfg, cuts).value;
    }

    double scan_hi = 2.0;
    for (const DistributionSpec* s : {&f, &g}) {
        double sup = s->marginal_support_sup(0);
        scan_hi = std::max(scan_hi, std::isfinite(sup) ? sup : s->quantile(1.0 - 1e-9));
    }
    for (double c : detail::cdf_crossings(f, g, 0.0, scan_hi, 512)) cuts.push_back(c);
    auto tail = [&](double t_cut) {
        return f.marginal_tail_integral(0, t_cut) + g.marginal_tail_integral(0, t_cut);
    };
    return integrate_upper(integrand, 0.0, cfg.abs_tol, cfg, cuts, tail).value;
}

/// Wasserstein distance between product measures: the L1 cost separates
/// across independent coordinates, so the distance is the sum of the 1-D
/// coordinate distances.
inline double wasserstein_product(const DistributionSpec& f, const DistributionSpec& g,
                                  const QuadratureConfig& cfg = {}) {
    if (f.dim() != g.dim())
        throw std::invalid_argument("wasserstein_product: dimension mismatch");
    if (f.dim() == 1) return wasserstein_1d(f, g, cfg);
    const auto* fp = f.get_if<IndependentProduct>();
    const auto* gp = g.get_if<IndependentProduct>();
    if (!fp || !gp)
        throw std::invalid_argument(
            "wasserstein_product: multivariate distance needs independent products");
    double acc = 0.0;
    for (std::size_t i = 0; i < fp->components.size(); ++i)
        acc += wasserstein_1d(fp->components[i], gp->components[i], cfg);
    return acc;
}

/// max over probes of |A(x) - B(x)| - ||x||_inf * w; never meaningfully
/// positive when w is the Wasserstein distance between the generating dfs.
inline double lipschitz_check(const FNormHandle& a, const FNormHandle& b, double w,
                              std::span<const std::vector<double>> probes) {
    if (a.dim() != b.dim()) throw std::invalid_argument("lipschitz_check: dimension mismatch");
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& x : probes) {
        double dev = std::abs(a(x) - b(x));
        worst = std::max(worst, dev - sup_norm(x) * w);
    }
    return worst;
}

struct ConvergenceRow {
    std::size_t index = 0;
    double max_norm_deviation = 0.0;  // over the probe grid
    double wasserstein = 0.0;
};

/// Tabulates, for each spec in the sequence, the largest F-norm deviation
/// from the limit over a grid in [0, corner] together with the Wasserstein
/// distance; pointwise norm convergence and Wasserstein convergence move
/// together.
inline std::vector<ConvergenceRow> wasserstein_equivalence_experiment(
    std::span<const DistributionSpec> sequence, const DistributionSpec& limit,
    std::span<const double> corner, std::size_t grid_count, QuadratureConfig cfg = {}) {
    const std::size_t k = limit.dim() + 1;
    if (corner.size() != k)
        throw std::invalid_argument("wasserstein_equivalence_experiment: bad corner length");
    if (grid_count < 2)
        throw std::invalid_argument("wasserstein_equivalence_experiment: grid_count >= 2");

    FNormHandle limit_handle = make_auto(limit, cfg);
    std::vector<std::vector<double>> grid;
    std::vector<std::size_t> ix(k, 0);
    std::size_t total = 1;
    for (std::size_t i = 0; i < k; ++i) total *= grid_count;
    for (std::size_t lin = 0; lin < total; ++lin) {
        std::vector<double> pt(k);
        for (std::size_t i = 0; i < k; ++i)
            pt[i] = corner[i] * static_cast<double>(ix[i]) / static_cast<double>(grid_count - 1);
        grid.push_back(std::move(pt));
        for (std::size_t i = 0; i < k; ++i) {
            if (++ix[i] < grid_count) break;
            ix[i] = 0;
        }
    }

    std::vector<ConvergenceRow> rows;
    for (std::size_t s = 0; s < sequence.size(); ++s) {
        FNormHandle h = make_auto(sequence[s], cfg);
        ConvergenceRow row;
        row.index = s;
        for (const auto& pt : grid)
            row.max_norm_deviation =
                std::max(row.max_norm_deviation, std::abs(h(pt) - limit_handle(pt)));
        row.wasserstein = wasserstein_product(sequence[s], limit, cfg);
        rows.push_back(row);
    }
    return rows;
}

} // namespace fnorm

#endif // FNORM_METRICS_HPP
