#ifndef FNORM_ALGEBRA_HPP
#define FNORM_ALGEBRA_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "fnorm/distribution.hpp"
#include "fnorm/errors.hpp"
#include "fnorm/evaluator.hpp"
#include "fnorm/quadrature.hpp"
#include "fnorm/rng.hpp"

namespace fnorm {

// ---------------------------------------------------------------------------
// signed specifications (log F-norms)
// ---------------------------------------------------------------------------

struct SNormal {
    double mu = 0.0;
    double sigma2 = 1.0;  // 0 degenerates to a point mass
    bool operator==(const SNormal&) const = default;
};

struct SMultiNormal {
    std::vector<double> mu;
    std::vector<double> sigma;  // row-major d x d
    bool operator==(const SMultiNormal&) const = default;
};

/// Standard negative Gumbel: P(X <= t) = 1 - exp(-e^t); exp(X) is unit
/// exponential.
struct SNegGumbel {
    bool operator==(const SNegGumbel&) const = default;
};

/// +1 / -1 with probability 1/2 each.
struct SRademacher {
    bool operator==(const SRademacher&) const = default;
};

/// Distribution on R^d whose components may be negative but carry finite
/// exponential moments, so exp(X) generates an F-norm (the log F-norm).
class SignedSpec {
public:
    using Variant = std::variant<SNormal, SMultiNormal, SNegGumbel, SRademacher>;

    SignedSpec(SNormal v) : v_(v) {
        if (!(v.sigma2 >= 0.0) || !std::isfinite(v.sigma2) || !std::isfinite(v.mu))
            throw std::invalid_argument("SNormal: require finite mu and sigma2 >= 0");
    }
    SignedSpec(SMultiNormal v) : v_(std::move(v)) {}
    SignedSpec(SNegGumbel v) : v_(v) {}
    SignedSpec(SRademacher v) : v_(v) {}

    std::size_t dim() const {
        if (const auto* m = std::get_if<SMultiNormal>(&v_)) return m->mu.size();
        return 1;
    }

    const Variant& variant() const noexcept { return v_; }

    /// Distribution of exp(X); always satisfies condition (H).
    DistributionSpec exp_spec() const {
        return std::visit(
            [](const auto& s) -> DistributionSpec {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, SNormal>) {
                    if (s.sigma2 == 0.0)
                        return DistributionSpec{Degenerate{{std::exp(s.mu)}}};
                    return DistributionSpec{LogNormal{s.mu, s.sigma2}};
                } else if constexpr (std::is_same_v<T, SMultiNormal>) {
                    return DistributionSpec{MultiNormalExp{s.mu, s.sigma}};
                } else if constexpr (std::is_same_v<T, SNegGumbel>) {
                    return DistributionSpec{Exponential{1.0}};
                } else {
                    return DistributionSpec{Empirical{SampleMatrix::from_rows(
                        {{std::exp(-1.0)}, {std::exp(1.0)}})}};
                }
            },
            v_);
    }

    bool operator==(const SignedSpec& o) const { return v_ == o.v_; }

private:
    Variant v_;
};

struct LogFnormOptions {
    QuadratureConfig quad{};
    std::size_t mc_n = 1000000;
    std::uint64_t mc_seed = 20200829;
};

/// F-norm of exp(X): closed forms for 1-D normal (lognormal / Husler-Reiss
/// form) and Gumbel (exponential form), quadrature for diagonal exp-normal,
/// Monte Carlo otherwise. Tagged LogTransform.
inline FNormHandle make_log_fnorm(const SignedSpec& s, const LogFnormOptions& opt = {}) {
    DistributionSpec es = s.exp_spec();
    FNormHandle inner = [&]() {
        if (has_closed_form(es)) return make_closed_form(es, opt.quad);
        if (const auto* mne = es.get_if<MultiNormalExp>()) {
            bool diag = true;
            std::size_t d = es.dim();
            for (std::size_t i = 0; i < d && diag; ++i)
                for (std::size_t j = 0; j < d; ++j)
                    if (i != j && mne->sigma[i * d + j] != 0.0) { diag = false; break; }
            if (!diag) return make_monte_carlo(es, opt.mc_n, opt.mc_seed);
        }
        return make_quadrature(es, opt.quad);
    }();
    return FNormHandle(
        EvalMethod::LogTransform, inner.dim(),
        [inner](std::span<const double> x) { return inner.eval_detailed(x); }, es,
        [es](std::size_t n, RandomStream& rng) { return es.sample(n, rng); });
}

inline double log_fnorm_eval(const SignedSpec& s, std::span<const double> x,
                             const LogFnormOptions& opt = {}) {
    return make_log_fnorm(s, opt)(x);
}

/// Husler-Reiss norm with parameter sigma2:
/// x Phi(sigma/2 + log(x/y)/sigma) + y Phi(sigma/2 + log(y/x)/sigma),
/// with explicit branches for zero coordinates and sigma -> 0.
inline double husler_reiss_eval(double sigma2, double x0, double x1) {
    if (!(sigma2 >= 0.0)) throw std::domain_error("husler_reiss_eval: sigma2 must be >= 0");
    double x = std::abs(x0), y = std::abs(x1);
    if (x == 0.0 || y == 0.0 || sigma2 == 0.0) return std::max(x, y);
    return closed::lognormal(-0.5 * sigma2, sigma2, x, y);
}

// ---------------------------------------------------------------------------
// products
// ---------------------------------------------------------------------------

enum class ProductMethod { Auto, Tonelli, MonteCarlo };

struct ProductOptions {
    ProductMethod method = ProductMethod::Auto;
    QuadratureConfig quad{};
    std::size_t mc_n = 1000000;
    std::uint64_t mc_seed = 424242;
};

namespace detail {

inline int tonelli_rank(const Decomposition& dec) {
    switch (dec.kind) {
        case Decomposition::Kind::Atoms: return 3;
        case Decomposition::Kind::ComonotoneCurve: return 2;
        case Decomposition::Kind::Density1D: return 1;
        default: return 0;
    }
}

/// Tonelli integral of ||(x0, x1 t1, ..., xd td)||_other against dG.
inline EvalResult tonelli_product_eval(const FNormHandle& other, const DistributionSpec& g_spec,
                                       const Decomposition& dec, std::span<const double> x,
                                       const QuadratureConfig& cfg) {
    const std::size_t d = other.dim();
    std::vector<double> pt(d + 1);

    if (dec.kind == Decomposition::Kind::Atoms) {
        EvalResult out;
        for (std::size_t k = 0; k < dec.atom_points.size(); ++k) {
            pt[0] = x[0];
            for (std::size_t j = 0; j < d; ++j) pt[j + 1] = x[j + 1] * dec.atom_points[k][j];
            EvalResult r = other.eval_detailed(pt);
            out.value += dec.atom_weights[k] * r.value;
            out.error += dec.atom_weights[k] * r.error;
        }
        return out;
    }

    if (dec.kind == Decomposition::Kind::ComonotoneCurve) {
        auto f = [&](double t) {
            pt[0] = x[0];
            for (std::size_t j = 0; j < d; ++j) pt[j + 1] = x[j + 1] * t;
            return other(pt);
        };
        std::vector<double> cuts;
        for (std::size_t j = 0; j < d; ++j)
            if (std::abs(x[j + 1]) > 0.0) cuts.push_back(std::abs(x[0] / x[j + 1]));
        IntegralResult r = integrate(f, 0.0, 1.0, cfg.abs_tol, cfg, cuts);
        return {r.value, r.error};
    }

    // Density1D, d == 1
    double x0 = std::abs(x[0]), x1 = std::abs(x[1]);
    auto f = [&](double t) {
        pt[0] = x0;
        pt[1] = x1 * t;
        return dec.pdf(t) * other(pt);
    };
    std::vector<double> cuts = dec.pdf_breakpoints;
    if (x1 > 0.0) cuts.push_back(x0 / x1);  // value-branch switch of the inner norm
    if (std::isfinite(dec.support_hi)) {
        IntegralResult r =
            integrate(f, dec.support_lo, dec.support_hi, cfg.abs_tol, cfg, cuts);
        return {r.value, r.error};
    }
    double other_unit = other({0.0, 1.0});  // ||(0,1)|| of the inner norm
    auto tail = [&](double t_cut) {
        double sf = g_spec.marginal_survival(0, t_cut);
        double part_mean = t_cut * sf + g_spec.marginal_tail_integral(0, t_cut);
        return x0 * sf + x1 * other_unit * part_mean;
    };
    IntegralResult r = integrate_upper(f, dec.support_lo, cfg.abs_tol, cfg, cuts, tail);
    return {r.value, r.error};
}

} // namespace detail

/// (||.||_F * ||.||_G)(x): the F-norm of the componentwise product of
/// independent vectors with dfs F and G. Tonelli integration against the
/// factor with the simpler distribution (atoms summed exactly), Monte Carlo
/// from both samplers otherwise.
inline EvalResult product_eval_detailed(const FNormHandle& a, const FNormHandle& b,
                                        std::span<const double> x,
                                        const ProductOptions& opt = {}) {
    if (a.dim() != b.dim())
        throw std::invalid_argument("product: factors must share the dimension");
    if (x.size() != a.dim() + 1)
        throw std::invalid_argument("product: point must have length d+1");

    if (opt.method != ProductMethod::MonteCarlo) {
        // pick the integration side: best-ranked usable decomposition
        Decomposition da, db;
        int ra = 0, rb = 0;
        if (a.spec()) {
            da = decomposition(*a.spec());
            ra = detail::tonelli_rank(da);
            if (da.kind == Decomposition::Kind::Density1D && a.dim() != 1) ra = 0;
        }
        if (b.spec()) {
            db = decomposition(*b.spec());
            rb = detail::tonelli_rank(db);
            if (db.kind == Decomposition::Kind::Density1D && b.dim() != 1) rb = 0;
        }
        if (ra > 0 || rb > 0) {
            if (rb >= ra)
                return detail::tonelli_product_eval(a, *b.spec(), db, x, opt.quad);
            return detail::tonelli_product_eval(b, *a.spec(), da, x, opt.quad);
        }
        if (opt.method == ProductMethod::Tonelli)
            throw ProductUnavailable("no factor has a tractable df for Tonelli integration");
    }

    if (!a.can_sample() || !b.can_sample())
        throw ProductUnavailable("factors cannot be sampled for Monte Carlo");
    RandomStream rng_a(opt.mc_seed);
    RandomStream rng_b = rng_a.split(1);
    SampleMatrix sa = a.sample(opt.mc_n, rng_a);
    SampleMatrix sb = b.sample(opt.mc_n, rng_b);
    const std::size_t d = a.dim();
    double mean = 0.0, m2 = 0.0;
    double x0 = std::abs(x[0]);
    for (std::size_t i = 0; i < opt.mc_n; ++i) {
        double m = x0;
        for (std::size_t j = 0; j < d; ++j)
            m = std::max(m, std::abs(x[j + 1]) * sa.at(i, j) * sb.at(i, j));
        double delta = m - mean;
        mean += delta / static_cast<double>(i + 1);
        m2 += delta * (m - mean);
    }
    double var = opt.mc_n > 1 ? m2 / static_cast<double>(opt.mc_n - 1) : 0.0;
    return {mean, std::sqrt(var / static_cast<double>(opt.mc_n))};
}

inline double product_eval(const FNormHandle& a, const FNormHandle& b,
                           std::span<const double> x, const ProductOptions& opt = {}) {
    return product_eval_detailed(a, b, x, opt).value;
}

/// Product handle; samples by componentwise products of independent draws
/// from the factors (re-drawing from base specs, never nesting estimates).
inline FNormHandle make_product(const FNormHandle& a, const FNormHandle& b,
                                const ProductOptions& opt = {}) {
    if (a.dim() != b.dim())
        throw std::invalid_argument("make_product: factors must share the dimension");
    FNormHandle::SampleFn sampler;
    if (a.can_sample() && b.can_sample()) {
        sampler = [a, b](std::size_t n, RandomStream& rng) {
            RandomStream rb(rng.raw());  // fresh substream per call
            SampleMatrix sa = a.sample(n, rng);
            SampleMatrix sb = b.sample(n, rb);
            SampleMatrix out(n, sa.dim());
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < sa.dim(); ++j)
                    out.set(i, j, sa.at(i, j) * sb.at(i, j));
            return out;
        };
    }
    return FNormHandle(
        EvalMethod::Product, a.dim(),
        [a, b, opt](std::span<const double> x) { return product_eval_detailed(a, b, x, opt); },
        std::nullopt, std::move(sampler));
}

// ---------------------------------------------------------------------------
// structure checks
// ---------------------------------------------------------------------------

struct IdempotenceReport {
    bool idempotent = false;
    double max_deviation = 0.0;
};

/// Only the sup-norm reproduces itself under the product.
inline IdempotenceReport idempotent_check(const FNormHandle& handle,
                                          std::span<const std::vector<double>> probes,
                                          double tol = 1e-8, const ProductOptions& opt = {}) {
    IdempotenceReport rep;
    for (const auto& x : probes) {
        double p = product_eval(handle, handle, x, opt);
        rep.max_deviation = std::max(rep.max_deviation, std::abs(p - handle(x)));
    }
    rep.idempotent = rep.max_deviation <= tol;
    return rep;
}

/// max over probes of |(log A * log B)(x) - log(A+B)(x)| for independent
/// 1-D normals; the product of log F-norms realizes convolution.
inline double convolution_identity_check(const SignedSpec& sa, const SignedSpec& sb,
                                         std::span<const std::vector<double>> probes,
                                         const LogFnormOptions& opt = {}) {
    const auto* na = std::get_if<SNormal>(&sa.variant());
    const auto* nb = std::get_if<SNormal>(&sb.variant());
    if (na == nullptr || nb == nullptr)
        throw std::invalid_argument("convolution_identity_check: 1-D normal specs required");
    FNormHandle ha = make_log_fnorm(sa, opt);
    FNormHandle hb = make_log_fnorm(sb, opt);
    FNormHandle hsum =
        make_log_fnorm(SignedSpec{SNormal{na->mu + nb->mu, na->sigma2 + nb->sigma2}}, opt);
    ProductOptions popt;
    popt.quad = opt.quad;
    double worst = 0.0;
    for (const auto& x : probes)
        worst = std::max(worst, std::abs(product_eval(ha, hb, x, popt) - hsum(x)));
    return worst;
}

// ---------------------------------------------------------------------------
// central limit theorem as F-norm convergence
// ---------------------------------------------------------------------------

namespace detail {

/// Quantile of Binomial(n, 1/2): mode-centered cdf walk, stable for large n.
inline std::size_t binom_half_quantile(std::size_t n, double u) {
    const double nn = static_cast<double>(n);
    std::size_t k0 = n / 2;
    double pmf = std::exp(std::lgamma(nn + 1.0) - std::lgamma(static_cast<double>(k0) + 1.0) -
                          std::lgamma(nn - static_cast<double>(k0) + 1.0) -
                          nn * 0.6931471805599453);
    double cdf = (n % 2 == 0) ? 0.5 + 0.5 * pmf : 0.5;
    std::size_t k = k0;
    if (u <= cdf) {
        while (k > 0) {
            double below = cdf - pmf;
            if (below < u) break;
            cdf = below;
            pmf *= static_cast<double>(k) / (nn - static_cast<double>(k) + 1.0);
            --k;
        }
        return k;
    }
    while (k < n && cdf < u) {
        ++k;
        pmf *= (nn - static_cast<double>(k) + 1.0) / static_cast<double>(k);
        cdf += pmf;
    }
    return k;
}

} // namespace detail

struct CltDemoRow {
    std::size_t n = 0;
    double x0 = 0.0;
    double x1 = 0.0;
    double estimate = 0.0;   // Monte Carlo estimate of E max(x0, x1 exp(S_n))
    double limit = 0.0;      // closed-form log F-norm of the Gaussian limit
    double deviation = 0.0;  // estimate - limit
    double std_error = 0.0;  // standard error of the paired deviation
};

/// Pointwise convergence of the log F-norms of normalized sums toward the
/// Gaussian log F-norm, tabulated over an x grid. The estimator pairs each
/// replication's sum with the Gaussian draw built from the same uniform
/// (common random numbers), so the deviation column resolves well below the
/// raw Monte Carlo noise.
inline std::vector<CltDemoRow> clt_fnorm_demo(const SignedSpec& base,
                                              std::span<const std::size_t> n_list,
                                              std::span<const std::vector<double>> x_grid,
                                              std::size_t replications, std::uint64_t seed) {
    double var = 0.0;
    bool rademacher = false;
    if (std::get_if<SRademacher>(&base.variant())) {
        var = 1.0;
        rademacher = true;
    } else if (const auto* nb = std::get_if<SNormal>(&base.variant())) {
        if (nb->mu != 0.0)
            throw std::invalid_argument("clt_fnorm_demo: base must be centered");
        var = nb->sigma2;
    } else {
        throw std::invalid_argument("clt_fnorm_demo: base must be rademacher or normal");
    }
    if (replications == 0) throw std::invalid_argument("clt_fnorm_demo: replications >= 1");
    if (x_grid.empty()) throw std::invalid_argument("clt_fnorm_demo: empty x grid");
    for (const auto& x : x_grid)
        if (x.size() != 2)
            throw std::invalid_argument("clt_fnorm_demo: grid points must be (x0, x1)");

    const double sig = std::sqrt(var);
    std::vector<double> limits;
    for (const auto& x : x_grid)
        limits.push_back(log_fnorm_eval(SignedSpec{SNormal{0.0, var}},
                                        std::vector<double>{std::abs(x[0]), std::abs(x[1])}));
    auto f = [](double x0, double x1, double s) { return std::max(x0, x1 * std::exp(s)); };

    std::vector<CltDemoRow> rows;
    for (std::size_t n : n_list) {
        RandomStream rng(seed);
        std::vector<double> mean(x_grid.size(), 0.0), m2(x_grid.size(), 0.0);
        const double sqn = std::sqrt(static_cast<double>(n));
        for (std::size_t r = 0; r < replications; ++r) {
            double u = rng.uniform();
            double xi = sig * normal_quantile(u);
            double sum;
            if (rademacher) {
                auto k = detail::binom_half_quantile(n, u);
                sum = (2.0 * static_cast<double>(k) - static_cast<double>(n)) / sqn;
            } else {
                sum = xi;
            }
            for (std::size_t j = 0; j < x_grid.size(); ++j) {
                double x0 = std::abs(x_grid[j][0]), x1 = std::abs(x_grid[j][1]);
                double diff = f(x0, x1, sum) - f(x0, x1, xi);
                double delta = diff - mean[j];
                mean[j] += delta / static_cast<double>(r + 1);
                m2[j] += delta * (diff - mean[j]);
            }
        }
        for (std::size_t j = 0; j < x_grid.size(); ++j) {
            CltDemoRow row;
            row.n = n;
            row.x0 = std::abs(x_grid[j][0]);
            row.x1 = std::abs(x_grid[j][1]);
            row.limit = limits[j];
            row.deviation = mean[j];
            row.estimate = limits[j] + mean[j];
            double v = replications > 1 ? m2[j] / static_cast<double>(replications - 1) : 0.0;
            row.std_error = std::sqrt(v / static_cast<double>(replications));
            rows.push_back(row);
        }
    }
    return rows;
}

/// Single-point convenience overload.
inline std::vector<CltDemoRow> clt_fnorm_demo(const SignedSpec& base,
                                              std::span<const std::size_t> n_list,
                                              std::span<const double> x,
                                              std::size_t replications, std::uint64_t seed) {
    std::vector<std::vector<double>> grid{std::vector<double>(x.begin(), x.end())};
    return clt_fnorm_demo(base, n_list, grid, replications, seed);
}

} // namespace fnorm

#endif // FNORM_ALGEBRA_HPP
