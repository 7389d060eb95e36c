#ifndef FNORM_EMPIRICAL_HPP
#define FNORM_EMPIRICAL_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "fnorm/distribution.hpp"
#include "fnorm/errors.hpp"
#include "fnorm/evaluator.hpp"
#include "fnorm/quadrature.hpp"
#include "fnorm/rng.hpp"
#include "fnorm/sample.hpp"

namespace fnorm {

/// Empirical F-norm at x: exact sample mean of row-wise maxima.
inline double empirical_eval(const SampleMatrix& sample, std::span<const double> x) {
    return empirical_fnorm_eval(sample, x);
}

// ---------------------------------------------------------------------------
// uniform consistency over a box
// ---------------------------------------------------------------------------

struct SupDeviation {
    double grid_max = 0.0;
    /// grid_max plus the largest cell increment of the true norm; bounds the
    /// off-grid supremum by monotonicity of F-norms.
    double offgrid_bound = 0.0;
};

/// max over a regular grid in [0, corner] of |empirical - true|; corner has
/// length d+1.
inline SupDeviation sup_deviation(const SampleMatrix& sample, const FNormHandle& truth,
                                  std::span<const double> corner, std::size_t grid_count) {
    const std::size_t k = sample.dim() + 1;
    if (corner.size() != k)
        throw std::invalid_argument("sup_deviation: corner must have length d+1");
    if (truth.dim() != sample.dim())
        throw std::invalid_argument("sup_deviation: dimension mismatch");
    if (grid_count == 0) throw std::invalid_argument("sup_deviation: empty grid");

    const std::size_t g = grid_count;
    std::size_t total = 1;
    for (std::size_t i = 0; i < k; ++i) total *= g;

    std::vector<double> true_vals(total), emp_vals(total);
    std::vector<double> pt(k);
    std::vector<std::size_t> ix(k, 0);
    SupDeviation out;
    for (std::size_t lin = 0; lin < total; ++lin) {
        for (std::size_t i = 0; i < k; ++i)
            pt[i] = g == 1 ? 0.0
                           : corner[i] * static_cast<double>(ix[i]) / static_cast<double>(g - 1);
        true_vals[lin] = truth(pt);
        emp_vals[lin] = empirical_fnorm_eval(sample, pt);
        out.grid_max = std::max(out.grid_max, std::abs(emp_vals[lin] - true_vals[lin]));
        for (std::size_t i = 0; i < k; ++i) {
            if (++ix[i] < g) break;
            ix[i] = 0;
        }
    }

    // cell modulus of the true norm (upper-corner minus lower-corner value)
    double modulus = 0.0;
    if (g >= 2) {
        std::vector<std::size_t> cx(k, 0);
        std::size_t cells = 1;
        for (std::size_t i = 0; i < k; ++i) cells *= g - 1;
        for (std::size_t lin = 0; lin < cells; ++lin) {
            std::size_t lo = 0, hi = 0, stride = 1;
            for (std::size_t i = 0; i < k; ++i) {
                lo += cx[i] * stride;
                hi += (cx[i] + 1) * stride;
                stride *= g;
            }
            modulus = std::max(modulus, true_vals[hi] - true_vals[lo]);
            for (std::size_t i = 0; i < k; ++i) {
                if (++cx[i] < g - 1) break;
                cx[i] = 0;
            }
        }
    }
    out.offgrid_bound = out.grid_max + modulus;
    return out;
}

inline SupDeviation sup_deviation(const SampleMatrix& sample, const DistributionSpec& spec,
                                  std::span<const double> corner, std::size_t grid_count,
                                  QuadratureConfig cfg = {}) {
    return sup_deviation(sample, make_auto(spec, cfg), corner, grid_count);
}

// ---------------------------------------------------------------------------
// limit-process covariance
// ---------------------------------------------------------------------------

/// Cov(S(x1,y1), S(x2,y2)) of the empirical F-norm limit process:
/// x1 x2 * double integral over [1,inf)^2 of
/// F(min(a u, b v)) - F(a u) F(b v), a = x1/y1, b = x2/y2 componentwise.
/// For d > 1 the spec must be an independent product (joint cdf needed);
/// that route is experimental.
inline double clt_covariance(const DistributionSpec& spec, std::span<const double> p1,
                             std::span<const double> p2, const QuadratureConfig& cfg = {}) {
    const std::size_t d = spec.dim();
    if (p1.size() != d + 1 || p2.size() != d + 1)
        throw std::invalid_argument("clt_covariance: points must have length d+1");
    if (d > 1 && !spec.get_if<IndependentProduct>())
        throw std::invalid_argument(
            "clt_covariance: d > 1 requires an independent-product spec (experimental)");
    const double x1 = p1[0], x2 = p2[0];
    if (!(x1 > 0.0) || !(x2 > 0.0))
        throw std::domain_error("clt_covariance: x coordinates must be > 0");
    for (std::size_t i = 0; i < d; ++i) {
        if (p1[i + 1] < 0.0 || p2[i + 1] < 0.0)
            throw std::domain_error("clt_covariance: y coordinates must be >= 0");
        if (!std::isfinite(spec.marginal_variance(i)))
            throw std::domain_error("clt_covariance: finite variance required");
    }

    // active coordinates: those with both y's positive never vanish; a zero
    // y on either side removes the coordinate from that argument (1/0 = inf)
    std::vector<std::size_t> act1, act2;
    std::vector<double> a, b;
    for (std::size_t i = 0; i < d; ++i) {
        if (p1[i + 1] > 0.0) { act1.push_back(i); a.push_back(x1 / p1[i + 1]); }
        if (p2[i + 1] > 0.0) { act2.push_back(i); b.push_back(x2 / p2[i + 1]); }
    }
    if (act1.empty() || act2.empty()) return 0.0;

    // joint cdf factors: F(min(a u, b v)) needs per-coordinate min of the
    // two scalings; coordinates present on one side only keep that side.
    std::vector<std::size_t> act_all = act1;
    for (std::size_t i : act2)
        if (std::find(act_all.begin(), act_all.end(), i) == act_all.end())
            act_all.push_back(i);
    std::sort(act_all.begin(), act_all.end());

    auto coeff1 = [&](std::size_t i) -> double {  // a_i or +inf
        for (std::size_t k = 0; k < act1.size(); ++k)
            if (act1[k] == i) return a[k];
        return kInf;
    };
    auto coeff2 = [&](std::size_t i) -> double {
        for (std::size_t k = 0; k < act2.size(); ++k)
            if (act2[k] == i) return b[k];
        return kInf;
    };

    // d = 1: the inner integral reduces exactly to survival integrals,
    // leaving a single smooth outer quadrature
    if (act_all.size() == 1 && act1.size() == 1 && act2.size() == 1) {
        const double a0 = a[0], b0 = b[0];
        const double j_b = detail::survival_integral(spec, 0, b0, cfg);
        auto inner_exact = [&](double u) {
            double s_au = spec.marginal_survival(0, a0 * u);
            double v_star = std::max(1.0, a0 * u / b0);
            double j_star = detail::survival_integral(spec, 0, b0 * v_star, cfg);
            return s_au * ((v_star - 1.0) - (j_b - j_star) / b0) +
                   (1.0 - s_au) * j_star / b0;
        };
        std::vector<double> cuts{b0 / a0};
        for (double m : spec.marginal_breakpoints(0)) cuts.push_back(m / a0);
        double sup = spec.marginal_support_sup(0);
        IntegralResult outer;
        if (std::isfinite(sup)) {
            if (sup / a0 <= 1.0) return 0.0;
            outer = integrate(inner_exact, 1.0, sup / a0, cfg.abs_tol, cfg, cuts);
        } else {
            outer = integrate_upper(inner_exact, 1.0, cfg.abs_tol, cfg, cuts);
        }
        return x1 * x2 * outer.value;
    }

    std::vector<double> vmin(act_all.size()), v1(act1.size()), v2(act2.size());
    auto integrand_uv = [&](double u, double v) {
        for (std::size_t k = 0; k < act_all.size(); ++k) {
            std::size_t i = act_all[k];
            vmin[k] = std::min(coeff1(i) * u, coeff2(i) * v);
        }
        for (std::size_t k = 0; k < act1.size(); ++k) v1[k] = a[k] * u;
        for (std::size_t k = 0; k < act2.size(); ++k) v2[k] = b[k] * v;
        // F(min) - F1 F2 rewritten through survivals; the cdf form cancels
        // catastrophically once all three factors approach 1
        double sm = spec.survival_partial(act_all, vmin);
        double s1 = spec.survival_partial(act1, v1);
        double s2 = spec.survival_partial(act2, v2);
        return s1 + s2 - sm - s1 * s2;
    };

    // inner integral over v at fixed u
    auto inner = [&](double u) -> double {
        std::vector<double> cuts;
        double v_cross_max = 1.0;
        for (std::size_t k = 0; k < act_all.size(); ++k) {
            std::size_t i = act_all[k];
            double ai = coeff1(i), bi = coeff2(i);
            if (std::isfinite(ai) && std::isfinite(bi)) {
                cuts.push_back(ai * u / bi);
                v_cross_max = std::max(v_cross_max, ai * u / bi);
            }
        }
        for (std::size_t k = 0; k < act2.size(); ++k)
            for (double m : spec.marginal_breakpoints(act2[k])) cuts.push_back(m / b[k]);

        bool bounded = true;
        double v_hi = 0.0;
        for (std::size_t k = 0; k < act2.size(); ++k) {
            double sup = spec.marginal_support_sup(act2[k]);
            if (std::isfinite(sup)) v_hi = std::max(v_hi, sup / b[k]);
            else bounded = false;
        }
        auto f = [&](double v) { return integrand_uv(u, v); };
        double tol = cfg.abs_tol * 1e-2;
        if (bounded) {
            if (v_hi <= 1.0) return 0.0;
            return integrate(f, 1.0, v_hi, tol, cfg, cuts).value;
        }
        auto tail = [&](double v_cut) {
            double t = std::max(0.0, v_cross_max - v_cut);
            double vc = std::max(v_cut, v_cross_max);
            for (std::size_t k = 0; k < act2.size(); ++k)
                t += detail::survival_integral(spec, act2[k], b[k] * vc, cfg) / b[k];
            return t;
        };
        return integrate_upper(f, 1.0, tol, cfg, cuts, tail).value;
    };

    std::vector<double> ucuts;
    for (std::size_t k = 0; k < act1.size(); ++k) {
        for (double m : spec.marginal_breakpoints(act1[k])) ucuts.push_back(m / a[k]);
        std::size_t i = act1[k];
        if (std::isfinite(coeff2(i))) ucuts.push_back(coeff2(i) / a[k]);
    }
    bool bounded = true;
    double u_hi = 0.0;
    for (std::size_t k = 0; k < act1.size(); ++k) {
        double sup = spec.marginal_support_sup(act1[k]);
        if (std::isfinite(sup)) u_hi = std::max(u_hi, sup / a[k]);
        else bounded = false;
    }
    IntegralResult outer;
    if (bounded) {
        if (u_hi <= 1.0) return 0.0;
        outer = integrate(inner, 1.0, u_hi, cfg.abs_tol, cfg, ucuts);
    } else {
        outer = integrate_upper(inner, 1.0, cfg.abs_tol, cfg, ucuts);
    }
    return x1 * x2 * outer.value;
}

// ---------------------------------------------------------------------------
// Brownian-bridge representation of the limit process (d = 1)
// ---------------------------------------------------------------------------

struct LimitPathConfig {
    std::size_t bridge_points = 1u << 14;   // partition of [0,1]
    std::size_t integration_points = 4096;  // trapezoid nodes per probe point
    QuadratureConfig quad{};
};

struct LimitProcessPath {
    std::vector<std::array<double, 2>> points;  // (x, y)
    std::vector<double> values;                 // one realization of S
};

/// Simulates S(x,y) = y int_{x/y}^inf W(F(u)) du for a Brownian bridge W.
/// The integrability of sqrt(F(1-F)) is verified numerically up front;
/// interpolation tables are prepared once and shared by all paths.
class LimitProcessSimulator {
public:
    LimitProcessSimulator(const DistributionSpec& spec,
                          std::vector<std::array<double, 2>> points,
                          LimitPathConfig cfg = {})
        : points_(std::move(points)), m_(cfg.bridge_points), bridge_(cfg.bridge_points + 1) {
        if (spec.dim() != 1)
            throw std::invalid_argument("LimitProcessSimulator: spec must be 1-D");
        // precondition: integrable sqrt(F(1-F))
        auto root_var = [&](double u) {
            double s = spec.marginal_survival(0, u);
            return std::sqrt(s * (1.0 - s));
        };
        try {
            QuadratureConfig pre = cfg.quad;
            pre.abs_tol = 1e-6;
            pre.tail_tol = 1e-9;
            integrate_upper(root_var, 0.0, pre.abs_tol, pre,
                            spec.marginal_breakpoints(0));
        } catch (const TailNotIntegrable&) {
            throw BridgeUnavailable("sqrt(F(1-F)) is not integrable for this spec");
        }

        // truncation: survival negligible beyond t_max
        double t_max = std::max(1.0, spec.marginal_support_sup(0));
        if (!std::isfinite(t_max)) {
            t_max = 1.0;
            while (std::sqrt(spec.marginal_survival(0, t_max)) > cfg.quad.tail_tol &&
                   t_max < 1e12)
                t_max *= cfg.quad.truncation_growth;
        }

        for (const auto& p : points_) {
            Tableau tab;
            double x = p[0], y = p[1];
            if (y > 0.0 && x / y < t_max) {
                double lo = x / y;
                std::size_t k_nodes = cfg.integration_points;
                double du = (t_max - lo) / static_cast<double>(k_nodes);
                tab.idx.resize(k_nodes + 1);
                tab.frac.resize(k_nodes + 1);
                tab.w.resize(k_nodes + 1);
                for (std::size_t j = 0; j <= k_nodes; ++j) {
                    double u = lo + du * static_cast<double>(j);
                    double s = 1.0 - spec.marginal_survival(0, u);
                    double pos = s * static_cast<double>(m_);
                    auto ix = static_cast<std::size_t>(pos);
                    ix = std::min(ix, m_ - 1);
                    tab.idx[j] = ix;
                    tab.frac[j] = pos - static_cast<double>(ix);
                    tab.w[j] = (j == 0 || j == k_nodes) ? 0.5 * du * y : du * y;
                }
            }
            tabs_.push_back(std::move(tab));
        }
    }

    const std::vector<std::array<double, 2>>& points() const noexcept { return points_; }

    /// One realization of the limit process at all probe points.
    LimitProcessPath simulate(RandomStream& rng) {
        const double sd = 1.0 / std::sqrt(static_cast<double>(m_));
        bridge_[0] = 0.0;
        for (std::size_t k = 1; k <= m_; ++k) bridge_[k] = bridge_[k - 1] + sd * rng.normal();
        const double w1 = bridge_[m_];
        for (std::size_t k = 1; k <= m_; ++k)
            bridge_[k] -= w1 * static_cast<double>(k) / static_cast<double>(m_);

        LimitProcessPath path;
        path.points = points_;
        path.values.reserve(tabs_.size());
        for (const auto& tab : tabs_) {
            if (tab.idx.empty()) {
                path.values.push_back(0.0);
                continue;
            }
            double acc = 0.0;
            for (std::size_t j = 0; j < tab.idx.size(); ++j) {
                double b0 = bridge_[tab.idx[j]];
                double b1 = bridge_[tab.idx[j] + 1];
                acc += tab.w[j] * (b0 + tab.frac[j] * (b1 - b0));
            }
            path.values.push_back(acc);
        }
        return path;
    }

private:
    struct Tableau {
        std::vector<std::size_t> idx;
        std::vector<double> frac;
        std::vector<double> w;
    };

    std::vector<std::array<double, 2>> points_;
    std::size_t m_;
    std::vector<double> bridge_;
    std::vector<Tableau> tabs_;
};

/// Single-path convenience wrapper.
inline LimitProcessPath simulate_limit_path(const DistributionSpec& spec,
                                            std::vector<std::array<double, 2>> points,
                                            RandomStream& rng, LimitPathConfig cfg = {}) {
    LimitProcessSimulator sim(spec, std::move(points), cfg);
    return sim.simulate(rng);
}

// ---------------------------------------------------------------------------
// Pickands dependence function
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<double> simplex_embedding(std::span<const double> t) {
    double sum = 0.0;
    for (double v : t) {
        if (v < 0.0) throw std::domain_error("pickands: t must be componentwise >= 0");
        sum += v;
    }
    if (sum > 1.0 + 1e-12)
        throw std::domain_error("pickands: coordinates must sum to at most 1");
    std::vector<double> pt(t.size() + 1);
    pt[0] = std::max(0.0, 1.0 - sum);
    for (std::size_t i = 0; i < t.size(); ++i) pt[i + 1] = t[i];
    return pt;
}

} // namespace detail

/// A(t) = ||(1 - sum t_i, t_1, ..., t_d)||; determines the norm by
/// homogeneity and radial symmetry.
inline double pickands(const FNormHandle& handle, std::span<const double> t) {
    if (t.size() != handle.dim())
        throw std::invalid_argument("pickands: t must have length d");
    return handle(detail::simplex_embedding(t));
}

inline double empirical_pickands(const SampleMatrix& sample, std::span<const double> t) {
    if (t.size() != sample.dim())
        throw std::invalid_argument("empirical_pickands: t must have length d");
    return empirical_fnorm_eval(sample, detail::simplex_embedding(t));
}

} // namespace fnorm

#endif // FNORM_EMPIRICAL_HPP
