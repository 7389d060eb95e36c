#ifndef FNORM_INVERSION_HPP
#define FNORM_INVERSION_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fnorm/errors.hpp"
#include "fnorm/evaluator.hpp"
#include "fnorm/quadrature.hpp"

namespace fnorm {

// ---------------------------------------------------------------------------
// inversion: right-derivative of t -> ||(t, 1/x1, ..., 1/xd)|| at t = 1
// ---------------------------------------------------------------------------

struct InversionConfig {
    std::array<double, 3> steps{1e-3, 1e-4, 1e-5};  // descending
    double convexity_tol = 1e-7;
};

/// Recover F(x1,...,xd) from an F-norm evaluator. Convexity of the norm
/// section makes the forward difference quotients decrease monotonically to
/// the right-derivative; that monotonicity is asserted on every call.
inline double invert_to_cdf(const FNormHandle& handle, std::span<const double> x,
                            const InversionConfig& icfg = {}) {
    if (x.size() != handle.dim())
        throw std::invalid_argument("invert_to_cdf: need one coordinate per dimension");
    for (double v : x)
        if (!(v > 0.0)) throw std::domain_error("invert_to_cdf: coordinates must be > 0");

    std::vector<double> pt(x.size() + 1);
    for (std::size_t i = 0; i < x.size(); ++i) pt[i + 1] = 1.0 / x[i];

    auto g = [&](double t) {
        pt[0] = t;
        return handle.eval_detailed(pt);
    };

    EvalResult g1 = g(1.0);
    std::array<double, 3> q{}, qe{};
    for (std::size_t k = 0; k < icfg.steps.size(); ++k) {
        double h = icfg.steps[k];
        EvalResult gh = g(1.0 + h);
        q[k] = (gh.value - g1.value) / h;
        qe[k] = (gh.error + g1.error) / h;
    }
    for (std::size_t k = 0; k + 1 < q.size(); ++k) {
        if (q[k + 1] > q[k] + qe[k] + qe[k + 1] + icfg.convexity_tol)
            throw NotConvex("difference quotients increased as the step shrank");
    }

    // quotients behave like f'(1) + c h; steps decrease by 10, so the
    // two-point extrapolation (10 q_small - q_big)/9 removes the linear term
    double r = (10.0 * q[2] - q[1]) / 9.0;
    return std::min(std::max(r, 0.0), 1.0);
}

// ---------------------------------------------------------------------------
// 2-D classification
// ---------------------------------------------------------------------------

struct ClassificationConfig {
    double homogeneity_tol = 1e-8;
    double radial_tol = 1e-9;
    double value_e0_tol = 1e-9;
    double df_tol = 1e-6;               // derivative range/monotonicity slack
    double limit_slack = 1e-3;          // require derivative above 1 - this
    double mean_tol = 1e-2;
    double t_cap = 1e6;
    std::size_t grid_count = 256;
    QuadratureConfig quad{};
};

struct ClassificationReport {
    bool is_fnorm = false;
    double homogeneity_violation = 0.0;
    double radial_symmetry_violation = 0.0;
    double value_at_e0 = 0.0;                 // ||(1,0)||, must be 1
    double first_moment_candidate = 0.0;      // ||(0,1)||
    bool derivative_in_range = true;
    bool derivative_monotone = true;
    double derivative_limit = 0.0;
    bool mean_matches = false;
    double recovered_mean = 0.0;
    std::vector<std::pair<double, double>> recovered_cdf;  // (t, F(t))
    std::vector<std::string> reasons;
};

using NormEval2D = std::function<double(double, double)>;

namespace detail {

inline double section_derivative(const NormEval2D& f, double t) {
    double h = 1e-3 * std::max(1.0, std::abs(t));
    if (t <= h) {
        // one-sided second-order stencil: the section only exists for t >= 0
        return (-3.0 * f(t, 1.0) + 4.0 * f(t + h, 1.0) - f(t + 2.0 * h, 1.0)) / (2.0 * h);
    }
    return (f(t + h, 1.0) - f(t - h, 1.0)) / (2.0 * h);
}

} // namespace detail

/// Decide whether a bivariate norm is an F-norm: radial symmetry, a
/// derivative of the section t -> ||(t,1)|| that behaves like a df on
/// [0,inf), and a first moment matching ||(0,1)||. All failures are
/// report fields; nothing throws.
inline ClassificationReport classify_2d(const NormEval2D& norm_eval,
                                        const ClassificationConfig& cfg = {}) {
    ClassificationReport rep;

    // homogeneity spot-check
    {
        const double probes[][2] = {{1.0, 1.0}, {0.3, 0.7}, {2.0, 0.5}};
        const double lambdas[] = {0.5, 2.0, 3.0};
        double worst = 0.0;
        for (auto& p : probes) {
            double base = norm_eval(p[0], p[1]);
            for (double l : lambdas)
                worst = std::max(worst, std::abs(norm_eval(l * p[0], l * p[1]) - l * base));
        }
        rep.homogeneity_violation = worst;
        if (worst > cfg.homogeneity_tol) rep.reasons.push_back("not positively homogeneous");
    }

    // radial symmetry over sign patterns
    {
        const double probes[][2] = {{1.0, 1.0}, {0.5, 2.0}, {1.3, 0.2}, {0.0, 1.0}, {1.0, 0.0}};
        double worst = 0.0;
        for (auto& p : probes) {
            double base = norm_eval(p[0], p[1]);
            for (int sx : {1, -1})
                for (int sy : {1, -1})
                    worst = std::max(worst,
                                     std::abs(norm_eval(sx * p[0], sy * p[1]) - base));
        }
        rep.radial_symmetry_violation = worst;
        if (worst > cfg.radial_tol) rep.reasons.push_back("not radially symmetric");
    }

    rep.value_at_e0 = norm_eval(1.0, 0.0);
    if (std::abs(rep.value_at_e0 - 1.0) > cfg.value_e0_tol)
        rep.reasons.push_back("value at (1,0) is not 1");

    rep.first_moment_candidate = norm_eval(0.0, 1.0);

    auto deriv = [&](double t) { return detail::section_derivative(norm_eval, t); };

    // grow T until the derivative approaches 1 (or give up at the cap)
    double t_limit = 4.0;
    while (deriv(t_limit) < 1.0 - cfg.limit_slack && t_limit < cfg.t_cap) t_limit *= 2.0;
    rep.derivative_limit = deriv(t_limit);
    if (rep.derivative_limit < 1.0 - cfg.limit_slack)
        rep.reasons.push_back("derivative plateaus below 1: mass escapes to infinity");

    // recovered-cdf grid, range and monotonicity
    double prev = 0.0;
    rep.recovered_cdf.reserve(cfg.grid_count + 1);
    for (std::size_t j = 0; j <= cfg.grid_count; ++j) {
        double t = t_limit * static_cast<double>(j) / static_cast<double>(cfg.grid_count);
        double fd = deriv(t);
        rep.recovered_cdf.emplace_back(t, fd);
        if (fd < -cfg.df_tol || fd > 1.0 + cfg.df_tol) rep.derivative_in_range = false;
        if (j > 0 && fd < prev - cfg.df_tol) rep.derivative_monotone = false;
        prev = fd;
    }
    if (!rep.derivative_in_range)
        rep.reasons.push_back("derivative leaves [0,1]: not a distribution function");
    if (!rep.derivative_monotone)
        rep.reasons.push_back("derivative not monotone: not a distribution function");

    // first moment of the recovered df vs ||(0,1)||; extend T until the
    // quadratic-decay tail proxy is negligible
    double t_mean = t_limit;
    while ((1.0 - deriv(t_mean)) * t_mean * 4.0 > cfg.mean_tol && t_mean < cfg.t_cap)
        t_mean *= 2.0;
    auto survival = [&](double t) { return 1.0 - deriv(t); };
    IntegralResult mean_int =
        integrate(survival, 0.0, t_mean, std::min(cfg.mean_tol * 1e-2, 1e-5), cfg.quad,
                  std::vector<double>{1.0});
    rep.recovered_mean = mean_int.value;
    rep.mean_matches = std::abs(rep.recovered_mean - rep.first_moment_candidate) <=
                       cfg.mean_tol * std::max(1.0, rep.first_moment_candidate);
    if (!rep.mean_matches)
        rep.reasons.push_back("first moment of recovered df does not match ||(0,1)||");

    rep.is_fnorm = rep.reasons.empty();
    return rep;
}

inline ClassificationReport classify_2d(const FNormHandle& handle,
                                        const ClassificationConfig& cfg = {}) {
    if (handle.dim() != 1)
        throw std::invalid_argument("classify_2d: handle must be bivariate (d = 1)");
    return classify_2d(
        [&handle](double a, double b) {
            return handle({a, b});
        },
        cfg);
}

// ---------------------------------------------------------------------------
// extremal coefficient from a copula F-norm
// ---------------------------------------------------------------------------

struct ExtremalFitConfig {
    double window_lo = 0.95;
    std::size_t grid_count = 40;
    double degenerate_tol = 1e-8;
};

struct ExtremalFit {
    double theta = 1.0;        // clamped to [1, d]
    double theta_raw = 1.0;    // unclamped least-squares value
    double max_remainder = 0.0;
};

/// Extract ||1||_D from the copula norm near the corner: the remainder
/// r(x) = (1-x) - (1 - ||(x,1,...,1)||) behaves like theta/2 (1-x)^2 with a
/// cubic correction; a two-term least-squares fit removes the first-order
/// window bias.
inline ExtremalFit extremal_coefficient(const FNormHandle& copula_handle,
                                        const ExtremalFitConfig& cfg = {}) {
    const std::size_t d = copula_handle.dim();
    if (d < 1) throw std::invalid_argument("extremal_coefficient: bad handle");
    if (!(cfg.window_lo > 0.0 && cfg.window_lo < 1.0))
        throw std::invalid_argument("extremal_coefficient: window must lie in (0,1)");
    if (cfg.grid_count < 4)
        throw std::invalid_argument("extremal_coefficient: need at least 4 grid points");

    const double s_max = 1.0 - cfg.window_lo;
    std::vector<double> pt(d + 1, 1.0);
    double s22 = 0.0, s23 = 0.0, s33 = 0.0, r2 = 0.0, r3 = 0.0, max_r = 0.0;
    for (std::size_t j = 1; j <= cfg.grid_count; ++j) {
        double s = s_max * static_cast<double>(j) / static_cast<double>(cfg.grid_count);
        pt[0] = 1.0 - s;
        double v = copula_handle(pt);
        double r = s - (1.0 - v);
        max_r = std::max(max_r, std::abs(r));
        double s2 = s * s, s3 = s2 * s;
        s22 += s2 * s2;
        s23 += s2 * s3;
        s33 += s3 * s3;
        r2 += r * s2;
        r3 += r * s3;
    }
    if (max_r < cfg.degenerate_tol)
        throw WidenWindowAdvisory("remainder below noise over the window");

    double det = s22 * s33 - s23 * s23;
    ExtremalFit fit;
    if (std::abs(det) < 1e-300) throw WidenWindowAdvisory("singular fit");
    double a = (r2 * s33 - r3 * s23) / det;
    fit.theta_raw = 2.0 * a;
    fit.theta = std::min(std::max(fit.theta_raw, 1.0), static_cast<double>(d));
    fit.max_remainder = max_r;
    return fit;
}

} // namespace fnorm

#endif // FNORM_INVERSION_HPP
