#ifndef FNORM_EVALUATOR_HPP
#define FNORM_EVALUATOR_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fnorm/distribution.hpp"
#include "fnorm/errors.hpp"
#include "fnorm/math.hpp"
#include "fnorm/quadrature.hpp"
#include "fnorm/rng.hpp"
#include "fnorm/sample.hpp"

namespace fnorm {

enum class EvalMethod { ClosedForm, Quadrature, MonteCarlo, Empirical, Product, LogTransform };

inline const char* method_name(EvalMethod m) {
    switch (m) {
        case EvalMethod::ClosedForm: return "closed";
        case EvalMethod::Quadrature: return "quad";
        case EvalMethod::MonteCarlo: return "mc";
        case EvalMethod::Empirical: return "empirical";
        case EvalMethod::Product: return "product";
        case EvalMethod::LogTransform: return "log";
    }
    return "?";
}

struct EvalResult {
    double value = 0.0;
    double error = 0.0;  // error bound (quadrature) or standard error (MC)
};

// ---------------------------------------------------------------------------
// closed forms
// ---------------------------------------------------------------------------

namespace closed {

inline double degenerate(std::span<const double> c, std::span<const double> x) {
    double m = std::abs(x[0]);
    for (std::size_t i = 0; i < c.size(); ++i) m = std::max(m, c[i] * std::abs(x[i + 1]));
    return m;
}

inline double bernoulli(double p, double x0, double x1) {
    x0 = std::abs(x0);
    x1 = std::abs(x1);
    return (1.0 - p) * x0 + p * std::max(x0, x1);
}

inline double uniform(double x0, double x1) {
    x0 = std::abs(x0);
    x1 = std::abs(x1);
    if (x1 <= x0) return x0;
    return (x0 * x0 + x1 * x1) / (2.0 * x1);
}

inline double exponential(double lambda, double x0, double x1) {
    x0 = std::abs(x0);
    x1 = std::abs(x1);
    if (x1 == 0.0) return x0;
    return x0 + (x1 / lambda) * std::exp(-lambda * x0 / x1);
}

inline double pareto(double gamma, double x0, double x1) {
    x0 = std::abs(x0);
    x1 = std::abs(x1);
    if (x1 == 0.0) return x0;
    if (x1 <= x0) return x0 * (1.0 + gamma / (1.0 - gamma) * std::pow(x0 / x1, -1.0 / gamma));
    return x1 / (1.0 - gamma);
}

/// F-norm of exp(N(mu, sigma2)); the mu = -sigma2/2 case is the
/// Husler-Reiss norm with parameter sigma2.
inline double lognormal(double mu, double sigma2, double x0, double x1) {
    double x = std::abs(x0), y = std::abs(x1);
    if (y == 0.0) return x;
    double mean = std::exp(mu + 0.5 * sigma2);
    if (x == 0.0) return y * mean;
    double sig = std::sqrt(sigma2);
    return x * normal_cdf((std::log(x / y) - mu) / sig) +
           y * mean * normal_cdf(sig + (std::log(y / x) + mu) / sig);
}

/// Frechet(p) norm section: x0 + int_{x0}^inf [1 - exp(-(t/x1)^{-p})] dt,
/// evaluated by quadrature of the univariate integrand.
inline IntegralResult frechet(double shape, double x0, double x1, const QuadratureConfig& cfg) {
    x0 = std::abs(x0);
    x1 = std::abs(x1);
    if (x1 == 0.0) return {x0, 0.0};
    auto integrand = [shape, x1](double t) {
        return t <= 0.0 ? 1.0 : -std::expm1(-std::pow(t / x1, -shape));
    };
    auto tail = [shape, x1](double t_cut) {
        return x1 * std::pow(t_cut / x1, 1.0 - shape) / (shape - 1.0);
    };
    IntegralResult r = integrate_upper(integrand, x0, cfg.abs_tol, cfg,
                                       std::vector<double>{x1}, tail);
    return {x0 + r.value, r.error};
}

} // namespace closed

/// Closed-form evaluation for the catalog variants that have one.
inline EvalResult closed_form_eval(const DistributionSpec& spec, std::span<const double> x,
                                   const QuadratureConfig& cfg = {}) {
    if (x.size() != spec.dim() + 1)
        throw std::invalid_argument("closed_form_eval: point must have length d+1");
    return std::visit(
        [&](const auto& s) -> EvalResult {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Degenerate>) {
                return {closed::degenerate(s.c, x), 0.0};
            } else if constexpr (std::is_same_v<T, Bernoulli>) {
                return {closed::bernoulli(s.p, x[0], x[1]), 0.0};
            } else if constexpr (std::is_same_v<T, Uniform01>) {
                return {closed::uniform(x[0], x[1]), 0.0};
            } else if constexpr (std::is_same_v<T, Exponential>) {
                return {closed::exponential(s.lambda, x[0], x[1]), 0.0};
            } else if constexpr (std::is_same_v<T, Pareto>) {
                return {closed::pareto(s.gamma, x[0], x[1]), 0.0};
            } else if constexpr (std::is_same_v<T, Frechet>) {
                IntegralResult r = closed::frechet(s.shape, x[0], x[1], cfg);
                return {r.value, r.error};
            } else if constexpr (std::is_same_v<T, LogNormal>) {
                return {closed::lognormal(s.mu, s.sigma2, x[0], x[1]), 0.0};
            } else {
                throw std::invalid_argument("closed_form_eval: no closed form for this variant");
            }
        },
        spec.variant());
}

// ---------------------------------------------------------------------------
// exact empirical F-norm
// ---------------------------------------------------------------------------

/// (1/n) sum_i max(|x0|, |x1| X1(i), ..., |xd| Xd(i)); exact sample mean.
inline double empirical_fnorm_eval(const SampleMatrix& sample, std::span<const double> x) {
    if (x.size() != sample.dim() + 1)
        throw std::invalid_argument("empirical_fnorm_eval: point must have length d+1");
    const std::size_t n = sample.size(), d = sample.dim();
    double acc = 0.0;
    double x0 = std::abs(x[0]);
    for (std::size_t i = 0; i < n; ++i) {
        double m = x0;
        auto row = sample.row(i);
        for (std::size_t j = 0; j < d; ++j) m = std::max(m, std::abs(x[j + 1]) * row[j]);
        acc += m;
    }
    return acc / static_cast<double>(n);
}

// ---------------------------------------------------------------------------
// fundamental-formula quadrature
// ---------------------------------------------------------------------------

/// |x0| + int_{|x0|}^inf [1 - F(t/|x1|, ..., t/|xd|)] dt with the 1/0 = inf
/// convention implemented by dropping zero-coefficient coordinates.
inline EvalResult quadrature_eval(const DistributionSpec& spec, std::span<const double> x,
                                  const QuadratureConfig& cfg = {}) {
    if (x.size() != spec.dim() + 1)
        throw std::invalid_argument("quadrature_eval: point must have length d+1");
    cfg.validate();

    // the empirical df integrates exactly to the sample mean of maxima
    if (const auto* emp = spec.get_if<Empirical>())
        return {empirical_fnorm_eval(emp->sample, x), 0.0};

    const double a = std::abs(x[0]);
    std::vector<std::size_t> active;
    std::vector<double> coeff;
    for (std::size_t i = 0; i < spec.dim(); ++i) {
        double c = std::abs(x[i + 1]);
        if (c > 0.0) {
            active.push_back(i);
            coeff.push_back(c);
        }
    }
    if (active.empty()) return {a, 0.0};

    std::vector<double> vals(active.size());
    auto integrand = [&](double t) {
        for (std::size_t k = 0; k < active.size(); ++k) vals[k] = t / coeff[k];
        return spec.survival_partial(active, vals);
    };

    std::vector<double> cuts;
    bool bounded = true;
    double t_max = 0.0;
    for (std::size_t k = 0; k < active.size(); ++k) {
        for (double b : spec.marginal_breakpoints(active[k])) cuts.push_back(coeff[k] * b);
        double sup = spec.marginal_support_sup(active[k]);
        if (std::isfinite(sup))
            t_max = std::max(t_max, coeff[k] * sup);
        else
            bounded = false;
    }

    IntegralResult r;
    if (bounded) {
        r = integrate(integrand, a, t_max, cfg.abs_tol, cfg, cuts);
    } else {
        auto tail = [&](double t_cut) {
            double b = 0.0;
            for (std::size_t k = 0; k < active.size(); ++k)
                b += coeff[k] * spec.marginal_tail_integral(active[k], t_cut / coeff[k]);
            return b;
        };
        r = integrate_upper(integrand, a, cfg.abs_tol, cfg, cuts, tail);
    }
    return {a + r.value, r.error};
}

// ---------------------------------------------------------------------------
// FNormHandle
// ---------------------------------------------------------------------------

/// An evaluable F-norm. Handles are immutable values; evaluation is a pure
/// function safe for concurrent calls. Monte Carlo handles freeze their
/// seed and sample so repeated evaluation is deterministic.
class FNormHandle {
public:
    using EvalFn = std::function<EvalResult(std::span<const double>)>;
    using SampleFn = std::function<SampleMatrix(std::size_t, RandomStream&)>;

    FNormHandle(EvalMethod method, std::size_t dim, EvalFn eval,
                std::optional<DistributionSpec> spec = std::nullopt, SampleFn sampler = {})
        : impl_(std::make_shared<const Impl>(
              Impl{method, dim, std::move(eval), std::move(spec), std::move(sampler)})) {}

    std::size_t dim() const noexcept { return impl_->dim; }
    EvalMethod method() const noexcept { return impl_->method; }

    double operator()(std::span<const double> x) const { return eval_detailed(x).value; }
    double operator()(std::initializer_list<double> x) const {
        return eval_detailed(std::span<const double>(x.begin(), x.size())).value;
    }

    EvalResult eval_detailed(std::span<const double> x) const {
        if (x.size() != impl_->dim + 1)
            throw std::invalid_argument("FNormHandle: point must have length d+1");
        for (double v : x)
            if (!std::isfinite(v))
                throw std::invalid_argument("FNormHandle: point must be finite");
        return impl_->eval(x);
    }

    /// The distribution behind the handle, when one is attached.
    const DistributionSpec* spec() const noexcept {
        return impl_->spec ? &*impl_->spec : nullptr;
    }

    bool can_sample() const noexcept { return static_cast<bool>(impl_->sampler); }

    /// Draw from the generating distribution (componentwise products for
    /// product handles).
    SampleMatrix sample(std::size_t n, RandomStream& rng) const {
        if (!impl_->sampler)
            throw ProductUnavailable("handle cannot sample its generator");
        return impl_->sampler(n, rng);
    }

private:
    struct Impl {
        EvalMethod method;
        std::size_t dim;
        EvalFn eval;
        std::optional<DistributionSpec> spec;
        SampleFn sampler;
    };
    std::shared_ptr<const Impl> impl_;
};

namespace detail {

inline FNormHandle::SampleFn spec_sampler(const DistributionSpec& spec) {
    return [spec](std::size_t n, RandomStream& rng) { return spec.sample(n, rng); };
}

/// int_lo^inf P(X_i > t) dt: closed form where the catalog has one,
/// quadrature behind the Frechet bound otherwise.
inline double survival_integral(const DistributionSpec& spec, std::size_t i, double lo,
                                const QuadratureConfig& cfg) {
    bool frechet_like = spec.get_if<Frechet>() != nullptr;
    if (const auto* prod = spec.get_if<IndependentProduct>())
        frechet_like = prod->components[i].get_if<Frechet>() != nullptr;
    if (!frechet_like) return spec.marginal_tail_integral(i, lo);
    auto f = [&](double t) { return spec.marginal_survival(i, t); };
    auto tail = [&](double t_cut) { return spec.marginal_tail_integral(i, t_cut); };
    return integrate_upper(f, lo, cfg.abs_tol, cfg, {}, tail).value;
}

} // namespace detail

inline FNormHandle make_closed_form(const DistributionSpec& spec, QuadratureConfig cfg = {}) {
    if (!has_closed_form(spec))
        throw std::invalid_argument("make_closed_form: no closed form for this spec");
    return FNormHandle(
        EvalMethod::ClosedForm, spec.dim(),
        [spec, cfg](std::span<const double> x) { return closed_form_eval(spec, x, cfg); },
        spec, detail::spec_sampler(spec));
}

inline FNormHandle make_quadrature(const DistributionSpec& spec, QuadratureConfig cfg = {}) {
    cfg.validate();
    return FNormHandle(
        EvalMethod::Quadrature, spec.dim(),
        [spec, cfg](std::span<const double> x) { return quadrature_eval(spec, x, cfg); },
        spec, detail::spec_sampler(spec));
}

inline FNormHandle make_empirical(const SampleMatrix& sample) {
    auto shared = std::make_shared<const SampleMatrix>(sample);
    DistributionSpec spec{Empirical{*shared}};
    return FNormHandle(
        EvalMethod::Empirical, shared->dim(),
        [shared](std::span<const double> x) {
            return EvalResult{empirical_fnorm_eval(*shared, x), 0.0};
        },
        spec, detail::spec_sampler(spec));
}

/// Monte Carlo oracle: the sample of n seeded draws is frozen at
/// construction; eval reports the mean of maxima and its standard error.
inline FNormHandle make_monte_carlo(const DistributionSpec& spec, std::size_t n,
                                    std::uint64_t seed) {
    RandomStream rng(seed);
    auto sample = std::make_shared<const SampleMatrix>(spec.sample(n, rng));
    return FNormHandle(
        EvalMethod::MonteCarlo, spec.dim(),
        [sample](std::span<const double> x) {
            const SampleMatrix& s = *sample;
            const std::size_t n_rows = s.size(), d = s.dim();
            double mean = 0.0, m2 = 0.0;
            double x0 = std::abs(x[0]);
            for (std::size_t i = 0; i < n_rows; ++i) {
                double m = x0;
                auto row = s.row(i);
                for (std::size_t j = 0; j < d; ++j)
                    m = std::max(m, std::abs(x[j + 1]) * row[j]);
                double delta = m - mean;
                mean += delta / static_cast<double>(i + 1);
                m2 += delta * (m - mean);
            }
            double var = n_rows > 1 ? m2 / static_cast<double>(n_rows - 1) : 0.0;
            return EvalResult{mean, std::sqrt(var / static_cast<double>(n_rows))};
        },
        spec, detail::spec_sampler(spec));
}

/// Closed form when the catalog has one, quadrature otherwise.
inline FNormHandle make_auto(const DistributionSpec& spec, QuadratureConfig cfg = {}) {
    return has_closed_form(spec) ? make_closed_form(spec, cfg) : make_quadrature(spec, cfg);
}

/// The sup-norm on R^{d+1}: the F-norm of the constant vector (1,...,1),
/// identity element of the product.
inline FNormHandle make_sup_norm(std::size_t d) {
    return make_closed_form(DistributionSpec{Degenerate{std::vector<double>(d, 1.0)}});
}

// ---------------------------------------------------------------------------
// derived operations
// ---------------------------------------------------------------------------

/// Max-characteristic function phi(x) = E max(1, x1 X1, ..., xd Xd);
/// the F-norm at first coordinate 1. Always >= 1.
inline double max_cf(const FNormHandle& handle, std::span<const double> x) {
    for (double v : x)
        if (v < 0.0) throw std::domain_error("max_cf: coordinates must be >= 0");
    std::vector<double> pt(x.size() + 1, 1.0);
    for (std::size_t i = 0; i < x.size(); ++i) pt[i + 1] = x[i];
    return handle(pt);
}

struct NormBounds {
    double lower = 0.0;
    double upper = 0.0;
};

/// Weighted-sup lower bound and L1-style upper bound; the norm value is
/// guaranteed to lie between them.
inline NormBounds bounds(const DistributionSpec& spec, std::span<const double> x) {
    if (x.size() != spec.dim() + 1)
        throw std::invalid_argument("bounds: point must have length d+1");
    NormBounds b;
    b.lower = std::abs(x[0]);
    b.upper = std::abs(x[0]);
    for (std::size_t i = 0; i < spec.dim(); ++i) {
        double m = spec.marginal_mean(i);
        b.lower = std::max(b.lower, std::abs(x[i + 1]) * m);
        b.upper += std::abs(x[i + 1]) * m;
    }
    return b;
}

/// Takahashi-type certificate: the norm equals the weighted sup-norm with
/// weights c iff it takes the value 1 at (1, 1/c1, ..., 1/cd).
inline bool is_weighted_supnorm(const FNormHandle& handle, std::span<const double> means,
                                double tol = 1e-9) {
    if (means.size() != handle.dim())
        throw std::invalid_argument("is_weighted_supnorm: need one mean per coordinate");
    std::vector<double> pt(means.size() + 1, 1.0);
    for (std::size_t i = 0; i < means.size(); ++i) {
        if (!(means[i] > 0.0))
            throw std::domain_error("is_weighted_supnorm: means must be positive");
        pt[i + 1] = 1.0 / means[i];
    }
    return std::abs(handle(pt) - 1.0) <= tol;
}

struct FrechetReduction {
    double lhs = 0.0;  // F-norm of the max-stable df with independent margins
    double rhs = 0.0;  // bivariate Frechet norm at (x0, ||(x1..xd)||_p)
};

/// Max-stable reduction: for independent Frechet(p) margins the (d+1)-dim
/// norm collapses to the bivariate Frechet norm at (x0, lp-norm of the rest).
inline FrechetReduction frechet_reduction_check(double shape, std::span<const double> x,
                                                const QuadratureConfig& cfg = {}) {
    if (x.size() < 2)
        throw std::invalid_argument("frechet_reduction_check: need at least (x0, x1)");
    std::size_t d = x.size() - 1;
    std::vector<DistributionSpec> margins(d, DistributionSpec{Frechet{shape}});
    DistributionSpec joint{IndependentProduct{margins}};
    FrechetReduction out;
    out.lhs = quadrature_eval(joint, x, cfg).value;
    double lp = lp_norm(x.subspan(1), shape);
    out.rhs = closed::frechet(shape, x[0], lp, cfg).value;
    return out;
}

} // namespace fnorm

#endif // FNORM_EVALUATOR_HPP
