#ifndef FNORM_DISTRIBUTION_HPP
#define FNORM_DISTRIBUTION_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "fnorm/errors.hpp"
#include "fnorm/math.hpp"
#include "fnorm/rng.hpp"
#include "fnorm/sample.hpp"

namespace fnorm {

class DistributionSpec;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Variant payloads
// ---------------------------------------------------------------------------

/// Point mass at a nonnegative vector c. Zero components are representable
/// (validate_H reports them); negative ones are rejected outright.
struct Degenerate {
    std::vector<double> c;
    bool operator==(const Degenerate&) const = default;
};

struct Bernoulli {
    double p;
    bool operator==(const Bernoulli&) const = default;
};

struct Uniform01 {
    bool operator==(const Uniform01&) const = default;
};

struct Exponential {
    double lambda;
    bool operator==(const Exponential&) const = default;
};

/// Pareto with tail index gamma in (0,1); support starts at 1,
/// cdf F(t) = 1 - t^{-1/gamma} for t >= 1.
struct Pareto {
    double gamma;
    bool operator==(const Pareto&) const = default;
};

/// Frechet with shape p > 1: F(t) = exp(-t^{-p}), t > 0.
struct Frechet {
    double shape;
    bool operator==(const Frechet&) const = default;
};

struct LogNormal {
    double mu;
    double sigma2;
    bool operator==(const LogNormal&) const = default;
};

/// exp of a d-dimensional normal N(mu, Sigma). Joint cdf is available only
/// for diagonal Sigma; otherwise evaluation must go through Monte Carlo.
struct MultiNormalExp {
    std::vector<double> mu;
    std::vector<double> sigma;  // row-major d x d
    bool operator==(const MultiNormalExp&) const = default;
};

struct IndependentProduct {
    std::vector<DistributionSpec> components;  // 1-D each
    bool operator==(const IndependentProduct&) const;
};

enum class CopulaKind { Independence, Comonotone };

struct Copula {
    CopulaKind kind;
    std::size_t dim;
    bool operator==(const Copula&) const = default;
};

struct Empirical {
    SampleMatrix sample;
    bool operator==(const Empirical& o) const { return sample == o.sample; }
};

using SpecVariant = std::variant<Degenerate, Bernoulli, Uniform01, Exponential, Pareto,
                                 Frechet, LogNormal, MultiNormalExp, IndependentProduct,
                                 Copula, Empirical>;

struct HViolation {
    std::size_t coordinate;
    std::string reason;
};

/// Result of the condition-(H) check: every marginal mean finite and
/// strictly positive, support nonnegative. Violations are reported, never
/// thrown.
struct HValidationReport {
    bool pass = true;
    std::vector<HViolation> violations;
};

namespace detail {

inline void check_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + ": must be finite");
}

/// Cholesky factor of a symmetric PSD matrix (row-major), zero-pivot
/// tolerant. Throws if the matrix is not PSD.
inline std::vector<double> cholesky_psd(const std::vector<double>& a, std::size_t d) {
    std::vector<double> L(d * d, 0.0);
    double scale = 0.0;
    for (std::size_t i = 0; i < d; ++i) scale = std::max(scale, std::abs(a[i * d + i]));
    const double tol = 1e-12 * std::max(scale, 1.0);
    for (std::size_t j = 0; j < d; ++j) {
        double diag = a[j * d + j];
        for (std::size_t k = 0; k < j; ++k) diag -= L[j * d + k] * L[j * d + k];
        if (diag < -tol)
            throw std::invalid_argument("MultiNormalExp: covariance not positive semidefinite");
        diag = std::max(diag, 0.0);
        L[j * d + j] = std::sqrt(diag);
        for (std::size_t i = j + 1; i < d; ++i) {
            double s = a[i * d + j];
            for (std::size_t k = 0; k < j; ++k) s -= L[i * d + k] * L[j * d + k];
            L[i * d + j] = (L[j * d + j] > 0.0) ? s / L[j * d + j] : 0.0;
        }
    }
    return L;
}

inline double clamp01(double t) { return std::min(std::max(t, 0.0), 1.0); }

} // namespace detail

// ---------------------------------------------------------------------------
// DistributionSpec
// ---------------------------------------------------------------------------

/// Declarative description of a d-dimensional distribution with nonnegative
/// support. Immutable after construction; construction validates parameter
/// domains, while condition (H) is checked separately by validate_h().
class DistributionSpec {
public:
    DistributionSpec(Degenerate v) : v_(std::move(v)) { init(); }
    DistributionSpec(Bernoulli v) : v_(v) { init(); }
    DistributionSpec(Uniform01 v) : v_(v) { init(); }
    DistributionSpec(Exponential v) : v_(v) { init(); }
    DistributionSpec(Pareto v) : v_(v) { init(); }
    DistributionSpec(Frechet v) : v_(v) { init(); }
    DistributionSpec(LogNormal v) : v_(v) { init(); }
    DistributionSpec(MultiNormalExp v) : v_(std::move(v)) { init(); }
    DistributionSpec(IndependentProduct v) : v_(std::move(v)) { init(); }
    DistributionSpec(Copula v) : v_(v) { init(); }
    DistributionSpec(Empirical v) : v_(std::move(v)) { init(); }

    std::size_t dim() const noexcept { return dim_; }

    const SpecVariant& variant() const noexcept { return v_; }

    template <typename T>
    const T* get_if() const noexcept { return std::get_if<T>(&v_); }

    // -- joint cdf --------------------------------------------------------

    /// F(t_1,...,t_d). Throws CdfUnavailable for exp-normal specs with
    /// non-diagonal covariance.
    double cdf(std::span<const double> t) const {
        require_len(t.size());
        idx_buffer_.resize(dim_);
        for (std::size_t i = 0; i < dim_; ++i) idx_buffer_[i] = i;
        return cdf_partial(idx_buffer_, t);
    }

    /// P(X_{idx_1} <= v_1, ..., X_{idx_k} <= v_k): the joint cdf with the
    /// remaining coordinates marginalized out (the 1/0 = inf convention).
    double cdf_partial(std::span<const std::size_t> idx, std::span<const double> vals) const;

    /// 1 - cdf_partial, computed without cancellation in the far tail.
    double survival_partial(std::span<const std::size_t> idx, std::span<const double> vals) const;

    double marginal_cdf(std::size_t i, double t) const;

    /// P(X_i > t), stable for t deep in the tail.
    double marginal_survival(std::size_t i, double t) const;

    // -- 1-D quantile -----------------------------------------------------

    /// Left-continuous inverse of the cdf; d = 1 only.
    double quantile(double u) const;

    // -- moments ----------------------------------------------------------

    double marginal_mean(std::size_t i) const;

    /// +inf when the second moment does not exist.
    double marginal_variance(std::size_t i) const;

    // -- sampling ---------------------------------------------------------

    /// n iid rows, inverse-transform throughout; deterministic given the
    /// stream state.
    SampleMatrix sample(std::size_t n, RandomStream& rng) const;

    // -- condition (H) ----------------------------------------------------

    HValidationReport validate_h() const {
        HValidationReport rep;
        for (std::size_t i = 0; i < dim_; ++i) {
            double m = marginal_mean(i);
            if (!std::isfinite(m)) {
                rep.pass = false;
                rep.violations.push_back({i, "marginal mean not finite"});
            } else if (!(m > 0.0)) {
                rep.pass = false;
                rep.violations.push_back({i, "marginal mean not strictly positive"});
            }
        }
        return rep;
    }

    // -- support metadata (drives quadrature truncation) -------------------

    /// Supremum of the support of margin i; +inf when unbounded.
    double marginal_support_sup(std::size_t i) const;

    /// Points where the marginal cdf is non-smooth (jumps or kinks).
    std::vector<double> marginal_breakpoints(std::size_t i) const;

    /// Exact value or upper bound of \int_s^infty [1 - F_i(t)] dt, s >= 0.
    double marginal_tail_integral(std::size_t i, double s) const;

    bool operator==(const DistributionSpec& o) const { return v_ == o.v_; }

private:
    void init();
    void require_len(std::size_t k) const {
        if (k != dim_) throw std::invalid_argument("DistributionSpec: dimension mismatch");
    }

    SpecVariant v_;
    std::size_t dim_ = 0;
    std::vector<std::vector<double>> sorted_cols_;    // Empirical only
    std::vector<double> chol_;                        // MultiNormalExp only
    bool diagonal_sigma_ = true;                      // MultiNormalExp only
    mutable std::vector<std::size_t> idx_buffer_;
};

inline bool IndependentProduct::operator==(const IndependentProduct& o) const {
    return components == o.components;
}

// ---------------------------------------------------------------------------
// construction-time validation
// ---------------------------------------------------------------------------

inline void DistributionSpec::init() {
    std::visit(
        [this](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Degenerate>) {
                if (s.c.empty()) throw std::invalid_argument("Degenerate: empty vector");
                for (double v : s.c) {
                    detail::check_finite(v, "Degenerate c");
                    if (v < 0.0) throw std::invalid_argument("Degenerate: components must be >= 0");
                }
                dim_ = s.c.size();
            } else if constexpr (std::is_same_v<T, Bernoulli>) {
                if (!(s.p > 0.0 && s.p < 1.0))
                    throw std::invalid_argument("Bernoulli: p must lie in (0,1)");
                dim_ = 1;
            } else if constexpr (std::is_same_v<T, Uniform01>) {
                dim_ = 1;
            } else if constexpr (std::is_same_v<T, Exponential>) {
                if (!(s.lambda > 0.0) || !std::isfinite(s.lambda))
                    throw std::invalid_argument("Exponential: lambda must be positive");
                dim_ = 1;
            } else if constexpr (std::is_same_v<T, Pareto>) {
                if (!(s.gamma > 0.0 && s.gamma < 1.0))
                    throw std::invalid_argument("Pareto: gamma must lie in (0,1)");
                dim_ = 1;
            } else if constexpr (std::is_same_v<T, Frechet>) {
                if (!(s.shape > 1.0) || !std::isfinite(s.shape))
                    throw std::invalid_argument("Frechet: shape must exceed 1");
                dim_ = 1;
            } else if constexpr (std::is_same_v<T, LogNormal>) {
                detail::check_finite(s.mu, "LogNormal mu");
                if (!(s.sigma2 > 0.0) || !std::isfinite(s.sigma2))
                    throw std::invalid_argument("LogNormal: sigma2 must be positive");
                dim_ = 1;
            } else if constexpr (std::is_same_v<T, MultiNormalExp>) {
                std::size_t d = s.mu.size();
                if (d == 0) throw std::invalid_argument("MultiNormalExp: empty mean");
                if (s.sigma.size() != d * d)
                    throw std::invalid_argument("MultiNormalExp: sigma must be d x d");
                for (double v : s.mu) detail::check_finite(v, "MultiNormalExp mu");
                for (std::size_t i = 0; i < d; ++i) {
                    if (!(s.sigma[i * d + i] > 0.0))
                        throw std::invalid_argument("MultiNormalExp: diagonal of sigma must be positive");
                    for (std::size_t j = 0; j < d; ++j) {
                        detail::check_finite(s.sigma[i * d + j], "MultiNormalExp sigma");
                        if (std::abs(s.sigma[i * d + j] - s.sigma[j * d + i]) > 1e-12)
                            throw std::invalid_argument("MultiNormalExp: sigma must be symmetric");
                        if (i != j && s.sigma[i * d + j] != 0.0) diagonal_sigma_ = false;
                    }
                }
                chol_ = detail::cholesky_psd(s.sigma, d);
                dim_ = d;
            } else if constexpr (std::is_same_v<T, IndependentProduct>) {
                if (s.components.empty())
                    throw std::invalid_argument("IndependentProduct: no components");
                for (const auto& c : s.components)
                    if (c.dim() != 1)
                        throw std::invalid_argument("IndependentProduct: components must be 1-D");
                dim_ = s.components.size();
            } else if constexpr (std::is_same_v<T, Copula>) {
                if (s.dim == 0) throw std::invalid_argument("Copula: dim must be positive");
                dim_ = s.dim;
            } else if constexpr (std::is_same_v<T, Empirical>) {
                dim_ = s.sample.dim();
                sorted_cols_.resize(dim_);
                for (std::size_t j = 0; j < dim_; ++j)
                    sorted_cols_[j] = s.sample.sorted_column(j);
            }
        },
        v_);
}

// ---------------------------------------------------------------------------
// cdf
// ---------------------------------------------------------------------------

inline double DistributionSpec::marginal_cdf(std::size_t i, double t) const {
    if (i >= dim_) throw std::invalid_argument("marginal_cdf: coordinate out of range");
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Degenerate>) {
                return t >= s.c[i] ? 1.0 : 0.0;
            } else if constexpr (std::is_same_v<T, Bernoulli>) {
                if (t < 0.0) return 0.0;
                return t < 1.0 ? 1.0 - s.p : 1.0;
            } else if constexpr (std::is_same_v<T, Uniform01>) {
                return detail::clamp01(t);
            } else if constexpr (std::is_same_v<T, Exponential>) {
                return t <= 0.0 ? 0.0 : -std::expm1(-s.lambda * t);
            } else if constexpr (std::is_same_v<T, Pareto>) {
                return t < 1.0 ? 0.0 : 1.0 - std::pow(t, -1.0 / s.gamma);
            } else if constexpr (std::is_same_v<T, Frechet>) {
                return t <= 0.0 ? 0.0 : std::exp(-std::pow(t, -s.shape));
            } else if constexpr (std::is_same_v<T, LogNormal>) {
                return t <= 0.0 ? 0.0 : normal_cdf((std::log(t) - s.mu) / std::sqrt(s.sigma2));
            } else if constexpr (std::is_same_v<T, MultiNormalExp>) {
                if (t <= 0.0) return 0.0;
                return normal_cdf((std::log(t) - s.mu[i]) / std::sqrt(s.sigma[i * dim_ + i]));
            } else if constexpr (std::is_same_v<T, IndependentProduct>) {
                return s.components[i].marginal_cdf(0, t);
            } else if constexpr (std::is_same_v<T, Copula>) {
                return detail::clamp01(t);
            } else if constexpr (std::is_same_v<T, Empirical>) {
                const auto& col = sorted_cols_[i];
                auto it = std::upper_bound(col.begin(), col.end(), t);
                return static_cast<double>(it - col.begin()) / static_cast<double>(col.size());
            }
        },
        v_);
}

inline double DistributionSpec::marginal_survival(std::size_t i, double t) const {
    if (i >= dim_) throw std::invalid_argument("marginal_survival: coordinate out of range");
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Degenerate>) {
                return t >= s.c[i] ? 0.0 : 1.0;
            } else if constexpr (std::is_same_v<T, Bernoulli>) {
                if (t < 0.0) return 1.0;
                return t < 1.0 ? s.p : 0.0;
            } else if constexpr (std::is_same_v<T, Uniform01>) {
                return 1.0 - detail::clamp01(t);
            } else if constexpr (std::is_same_v<T, Exponential>) {
                return t <= 0.0 ? 1.0 : std::exp(-s.lambda * t);
            } else if constexpr (std::is_same_v<T, Pareto>) {
                return t < 1.0 ? 1.0 : std::pow(t, -1.0 / s.gamma);
            } else if constexpr (std::is_same_v<T, Frechet>) {
                return t <= 0.0 ? 1.0 : -std::expm1(-std::pow(t, -s.shape));
            } else if constexpr (std::is_same_v<T, LogNormal>) {
                return t <= 0.0 ? 1.0
                                : normal_cdf(-(std::log(t) - s.mu) / std::sqrt(s.sigma2));
            } else if constexpr (std::is_same_v<T, MultiNormalExp>) {
                if (t <= 0.0) return 1.0;
                return normal_cdf(-(std::log(t) - s.mu[i]) / std::sqrt(s.sigma[i * dim_ + i]));
            } else if constexpr (std::is_same_v<T, IndependentProduct>) {
                return s.components[i].marginal_survival(0, t);
            } else if constexpr (std::is_same_v<T, Copula>) {
                return 1.0 - detail::clamp01(t);
            } else if constexpr (std::is_same_v<T, Empirical>) {
                const auto& col = sorted_cols_[i];
                auto it = std::upper_bound(col.begin(), col.end(), t);
                return static_cast<double>(col.end() - it) / static_cast<double>(col.size());
            }
        },
        v_);
}

inline double DistributionSpec::survival_partial(std::span<const std::size_t> idx,
                                                 std::span<const double> vals) const {
    if (idx.size() != vals.size())
        throw std::invalid_argument("survival_partial: index/value length mismatch");
    if (idx.empty()) return 0.0;
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Copula>) {
                if (s.kind == CopulaKind::Comonotone) {
                    double m = 0.0;
                    for (std::size_t k = 0; k < idx.size(); ++k)
                        m = std::max(m, 1.0 - detail::clamp01(vals[k]));
                    return m;
                }
            }
            if constexpr (std::is_same_v<T, Degenerate>) {
                for (std::size_t k = 0; k < idx.size(); ++k)
                    if (vals[k] < s.c[idx[k]]) return 1.0;
                return 0.0;
            } else if constexpr (std::is_same_v<T, Empirical>) {
                return 1.0 - cdf_partial(idx, vals);
            } else {
                if constexpr (std::is_same_v<T, MultiNormalExp>) {
                    if (!diagonal_sigma_)
                        throw CdfUnavailable(
                            "exp-normal joint cdf requires diagonal covariance; use Monte Carlo");
                }
                // product of marginal cdfs: 1 - prod(1 - s_i) via expm1/log1p
                double log_cdf = 0.0;
                for (std::size_t k = 0; k < idx.size(); ++k) {
                    double sv = marginal_survival(idx[k], vals[k]);
                    if (sv >= 1.0) return 1.0;
                    log_cdf += std::log1p(-sv);
                }
                return -std::expm1(log_cdf);
            }
        },
        v_);
}

inline double DistributionSpec::cdf_partial(std::span<const std::size_t> idx,
                                            std::span<const double> vals) const {
    if (idx.size() != vals.size())
        throw std::invalid_argument("cdf_partial: index/value length mismatch");
    if (idx.empty()) return 1.0;
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, MultiNormalExp>) {
                if (!diagonal_sigma_)
                    throw CdfUnavailable(
                        "exp-normal joint cdf requires diagonal covariance; use Monte Carlo");
                double p = 1.0;
                for (std::size_t k = 0; k < idx.size() && p > 0.0; ++k)
                    p *= marginal_cdf(idx[k], vals[k]);
                return p;
            } else if constexpr (std::is_same_v<T, Copula>) {
                if (s.kind == CopulaKind::Independence) {
                    double p = 1.0;
                    for (std::size_t k = 0; k < idx.size() && p > 0.0; ++k)
                        p *= detail::clamp01(vals[k]);
                    return p;
                }
                double m = 1.0;
                for (std::size_t k = 0; k < idx.size(); ++k)
                    m = std::min(m, detail::clamp01(vals[k]));
                return m;
            } else if constexpr (std::is_same_v<T, Empirical>) {
                const auto& mat = s.sample;
                std::size_t count = 0;
                for (std::size_t r = 0; r < mat.size(); ++r) {
                    bool le = true;
                    for (std::size_t k = 0; k < idx.size(); ++k) {
                        if (mat.at(r, idx[k]) > vals[k]) { le = false; break; }
                    }
                    count += le ? 1u : 0u;
                }
                return static_cast<double>(count) / static_cast<double>(mat.size());
            } else {
                // all remaining variants are products of their margins or 1-D
                double p = 1.0;
                for (std::size_t k = 0; k < idx.size() && p > 0.0; ++k)
                    p *= marginal_cdf(idx[k], vals[k]);
                return p;
            }
        },
        v_);
}

// ---------------------------------------------------------------------------
// quantile (1-D)
// ---------------------------------------------------------------------------

inline double DistributionSpec::quantile(double u) const {
    if (dim_ != 1) throw std::invalid_argument("quantile: spec must be 1-D");
    if (!(u > 0.0 && u < 1.0)) throw std::domain_error("quantile: u must lie in (0,1)");
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Degenerate>) {
                return s.c[0];
            } else if constexpr (std::is_same_v<T, Bernoulli>) {
                return u <= 1.0 - s.p ? 0.0 : 1.0;
            } else if constexpr (std::is_same_v<T, Uniform01>) {
                return u;
            } else if constexpr (std::is_same_v<T, Exponential>) {
                return -std::log1p(-u) / s.lambda;
            } else if constexpr (std::is_same_v<T, Pareto>) {
                return std::pow(1.0 - u, -s.gamma);
            } else if constexpr (std::is_same_v<T, Frechet>) {
                return std::pow(-std::log(u), -1.0 / s.shape);
            } else if constexpr (std::is_same_v<T, LogNormal>) {
                return std::exp(s.mu + std::sqrt(s.sigma2) * normal_quantile(u));
            } else if constexpr (std::is_same_v<T, MultiNormalExp>) {
                return std::exp(s.mu[0] + std::sqrt(s.sigma[0]) * normal_quantile(u));
            } else if constexpr (std::is_same_v<T, IndependentProduct>) {
                return s.components[0].quantile(u);
            } else if constexpr (std::is_same_v<T, Copula>) {
                return u;
            } else if constexpr (std::is_same_v<T, Empirical>) {
                const auto& col = sorted_cols_[0];
                double nn = static_cast<double>(col.size());
                std::size_t k = static_cast<std::size_t>(std::ceil(nn * u));
                k = std::min(std::max<std::size_t>(k, 1), col.size());
                return col[k - 1];
            }
        },
        v_);
}

// ---------------------------------------------------------------------------
// moments
// ---------------------------------------------------------------------------

inline double DistributionSpec::marginal_mean(std::size_t i) const {
    if (i >= dim_) throw std::invalid_argument("marginal_mean: coordinate out of range");
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Degenerate>) {
                return s.c[i];
            } else if constexpr (std::is_same_v<T, Bernoulli>) {
                return s.p;
            } else if constexpr (std::is_same_v<T, Uniform01>) {
                return 0.5;
            } else if constexpr (std::is_same_v<T, Exponential>) {
                return 1.0 / s.lambda;
            } else if constexpr (std::is_same_v<T, Pareto>) {
                return 1.0 / (1.0 - s.gamma);
            } else if constexpr (std::is_same_v<T, Frechet>) {
                return std::tgamma(1.0 - 1.0 / s.shape);
            } else if constexpr (std::is_same_v<T, LogNormal>) {
                return std::exp(s.mu + 0.5 * s.sigma2);
            } else if constexpr (std::is_same_v<T, MultiNormalExp>) {
                return std::exp(s.mu[i] + 0.5 * s.sigma[i * dim_ + i]);
            } else if constexpr (std::is_same_v<T, IndependentProduct>) {
                return s.components[i].marginal_mean(0);
            } else if constexpr (std::is_same_v<T, Copula>) {
                return 0.5;
            } else if constexpr (std::is_same_v<T, Empirical>) {
                return s.sample.column_mean(i);
            }
        },
        v_);
}

inline double DistributionSpec::marginal_variance(std::size_t i) const {
    if (i >= dim_) throw std::invalid_argument("marginal_variance: coordinate out of range");
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Degenerate>) {
                return 0.0;
            } else if constexpr (std::is_same_v<T, Bernoulli>) {
                return s.p * (1.0 - s.p);
            } else if constexpr (std::is_same_v<T, Uniform01>) {
                return 1.0 / 12.0;
            } else if constexpr (std::is_same_v<T, Exponential>) {
                return 1.0 / (s.lambda * s.lambda);
            } else if constexpr (std::is_same_v<T, Pareto>) {
                if (s.gamma >= 0.5) return kInf;
                double m = 1.0 / (1.0 - s.gamma);
                return 1.0 / (1.0 - 2.0 * s.gamma) - m * m;
            } else if constexpr (std::is_same_v<T, Frechet>) {
                if (s.shape <= 2.0) return kInf;
                double m = std::tgamma(1.0 - 1.0 / s.shape);
                return std::tgamma(1.0 - 2.0 / s.shape) - m * m;
            } else if constexpr (std::is_same_v<T, LogNormal>) {
                return std::expm1(s.sigma2) * std::exp(2.0 * s.mu + s.sigma2);
            } else if constexpr (std::is_same_v<T, MultiNormalExp>) {
                double v = s.sigma[i * dim_ + i];
                return std::expm1(v) * std::exp(2.0 * s.mu[i] + v);
            } else if constexpr (std::is_same_v<T, IndependentProduct>) {
                return s.components[i].marginal_variance(0);
            } else if constexpr (std::is_same_v<T, Copula>) {
                return 1.0 / 12.0;
            } else if constexpr (std::is_same_v<T, Empirical>) {
                return s.sample.column_variance(i);
            }
        },
        v_);
}

// ---------------------------------------------------------------------------
// sampling
// ---------------------------------------------------------------------------

inline SampleMatrix DistributionSpec::sample(std::size_t n, RandomStream& rng) const {
    if (n == 0) throw std::invalid_argument("sample: n must be >= 1");
    SampleMatrix out(n, dim_);
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Degenerate>) {
                for (std::size_t r = 0; r < n; ++r)
                    for (std::size_t j = 0; j < dim_; ++j) out.set(r, j, s.c[j]);
            } else if constexpr (std::is_same_v<T, MultiNormalExp>) {
                std::vector<double> eta(dim_);
                for (std::size_t r = 0; r < n; ++r) {
                    for (std::size_t j = 0; j < dim_; ++j) eta[j] = rng.normal();
                    for (std::size_t j = 0; j < dim_; ++j) {
                        double z = s.mu[j];
                        for (std::size_t k = 0; k <= j; ++k) z += chol_[j * dim_ + k] * eta[k];
                        out.set(r, j, std::exp(z));
                    }
                }
            } else if constexpr (std::is_same_v<T, IndependentProduct>) {
                for (std::size_t r = 0; r < n; ++r)
                    for (std::size_t j = 0; j < dim_; ++j)
                        out.set(r, j, s.components[j].quantile(rng.uniform()));
            } else if constexpr (std::is_same_v<T, Copula>) {
                for (std::size_t r = 0; r < n; ++r) {
                    if (s.kind == CopulaKind::Comonotone) {
                        double u = rng.uniform();
                        for (std::size_t j = 0; j < dim_; ++j) out.set(r, j, u);
                    } else {
                        for (std::size_t j = 0; j < dim_; ++j) out.set(r, j, rng.uniform());
                    }
                }
            } else if constexpr (std::is_same_v<T, Empirical>) {
                std::size_t m = s.sample.size();
                for (std::size_t r = 0; r < n; ++r) {
                    auto k = static_cast<std::size_t>(rng.uniform() * static_cast<double>(m));
                    k = std::min(k, m - 1);
                    for (std::size_t j = 0; j < dim_; ++j) out.set(r, j, s.sample.at(k, j));
                }
            } else {
                for (std::size_t r = 0; r < n; ++r) out.set(r, 0, quantile(rng.uniform()));
            }
        },
        v_);
    return out;
}

// ---------------------------------------------------------------------------
// support metadata
// ---------------------------------------------------------------------------

inline double DistributionSpec::marginal_support_sup(std::size_t i) const {
    if (i >= dim_) throw std::invalid_argument("marginal_support_sup: out of range");
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Degenerate>) return s.c[i];
            else if constexpr (std::is_same_v<T, Bernoulli>) return 1.0;
            else if constexpr (std::is_same_v<T, Uniform01>) return 1.0;
            else if constexpr (std::is_same_v<T, Copula>) return 1.0;
            else if constexpr (std::is_same_v<T, IndependentProduct>)
                return s.components[i].marginal_support_sup(0);
            else if constexpr (std::is_same_v<T, Empirical>) return s.sample.column_max(i);
            else return kInf;
        },
        v_);
}

inline std::vector<double> DistributionSpec::marginal_breakpoints(std::size_t i) const {
    if (i >= dim_) throw std::invalid_argument("marginal_breakpoints: out of range");
    return std::visit(
        [&](const auto& s) -> std::vector<double> {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Degenerate>) return {s.c[i]};
            else if constexpr (std::is_same_v<T, Bernoulli>) return {0.0, 1.0};
            else if constexpr (std::is_same_v<T, Uniform01>) return {0.0, 1.0};
            else if constexpr (std::is_same_v<T, Copula>) return {0.0, 1.0};
            else if constexpr (std::is_same_v<T, Pareto>) return {1.0};
            else if constexpr (std::is_same_v<T, IndependentProduct>)
                return s.components[i].marginal_breakpoints(0);
            else if constexpr (std::is_same_v<T, Empirical>) {
                std::vector<double> b = sorted_cols_[i];
                b.erase(std::unique(b.begin(), b.end()), b.end());
                return b;
            } else return {};
        },
        v_);
}

inline double DistributionSpec::marginal_tail_integral(std::size_t i, double s0) const {
    if (i >= dim_) throw std::invalid_argument("marginal_tail_integral: out of range");
    double s = std::max(s0, 0.0);
    return std::visit(
        [&](const auto& sp) -> double {
            using T = std::decay_t<decltype(sp)>;
            if constexpr (std::is_same_v<T, Degenerate>) {
                return std::max(sp.c[i] - s, 0.0);
            } else if constexpr (std::is_same_v<T, Bernoulli>) {
                return s >= 1.0 ? 0.0 : sp.p * (1.0 - s);
            } else if constexpr (std::is_same_v<T, Uniform01>) {
                return s >= 1.0 ? 0.0 : 0.5 * (1.0 - s) * (1.0 - s);
            } else if constexpr (std::is_same_v<T, Copula>) {
                return s >= 1.0 ? 0.0 : 0.5 * (1.0 - s) * (1.0 - s);
            } else if constexpr (std::is_same_v<T, Exponential>) {
                return std::exp(-sp.lambda * s) / sp.lambda;
            } else if constexpr (std::is_same_v<T, Pareto>) {
                double tail1 = sp.gamma / (1.0 - sp.gamma);  // int_1^inf t^{-1/gamma}
                if (s <= 1.0) return (1.0 - s) + tail1;
                return sp.gamma / (1.0 - sp.gamma) * std::pow(s, 1.0 - 1.0 / sp.gamma);
            } else if constexpr (std::is_same_v<T, Frechet>) {
                // 1 - exp(-t^{-p}) <= t^{-p}
                if (s <= 1.0) return (1.0 - s) + 1.0 / (sp.shape - 1.0);
                return std::pow(s, 1.0 - sp.shape) / (sp.shape - 1.0);
            } else if constexpr (std::is_same_v<T, LogNormal>) {
                if (s <= 0.0) return marginal_mean(i);
                double sig = std::sqrt(sp.sigma2);
                double z = (std::log(s) - sp.mu) / sig;
                return std::exp(sp.mu + 0.5 * sp.sigma2) * normal_cdf(sig - z) -
                       s * normal_cdf(-z);
            } else if constexpr (std::is_same_v<T, MultiNormalExp>) {
                double v = sp.sigma[i * dim_ + i];
                double sig = std::sqrt(v);
                if (s <= 0.0) return marginal_mean(i);
                double z = (std::log(s) - sp.mu[i]) / sig;
                return std::exp(sp.mu[i] + 0.5 * v) * normal_cdf(sig - z) - s * normal_cdf(-z);
            } else if constexpr (std::is_same_v<T, IndependentProduct>) {
                return sp.components[i].marginal_tail_integral(0, s);
            } else if constexpr (std::is_same_v<T, Empirical>) {
                const auto& col = sorted_cols_[i];
                double acc = 0.0;
                for (auto it = col.rbegin(); it != col.rend() && *it > s; ++it) acc += *it - s;
                return acc / static_cast<double>(col.size());
            }
        },
        v_);
}

// ---------------------------------------------------------------------------
// Tonelli decomposition (atoms / 1-D density / comonotone curve)
// ---------------------------------------------------------------------------

struct Decomposition {
    enum class Kind { Atoms, Density1D, ComonotoneCurve, None };
    Kind kind = Kind::None;
    std::vector<std::vector<double>> atom_points;
    std::vector<double> atom_weights;
    std::function<double(double)> pdf;  // Density1D
    double support_lo = 0.0;
    double support_hi = kInf;
    std::vector<double> pdf_breakpoints;
};

inline Decomposition decomposition(const DistributionSpec& spec) {
    Decomposition dec;
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Degenerate>) {
                dec.kind = Decomposition::Kind::Atoms;
                dec.atom_points = {s.c};
                dec.atom_weights = {1.0};
            } else if constexpr (std::is_same_v<T, Bernoulli>) {
                dec.kind = Decomposition::Kind::Atoms;
                dec.atom_points = {{0.0}, {1.0}};
                dec.atom_weights = {1.0 - s.p, s.p};
            } else if constexpr (std::is_same_v<T, Empirical>) {
                dec.kind = Decomposition::Kind::Atoms;
                double w = 1.0 / static_cast<double>(s.sample.size());
                for (std::size_t r = 0; r < s.sample.size(); ++r) {
                    auto row = s.sample.row(r);
                    dec.atom_points.emplace_back(row.begin(), row.end());
                    dec.atom_weights.push_back(w);
                }
            } else if constexpr (std::is_same_v<T, Uniform01>) {
                dec.kind = Decomposition::Kind::Density1D;
                dec.pdf = [](double) { return 1.0; };
                dec.support_lo = 0.0;
                dec.support_hi = 1.0;
            } else if constexpr (std::is_same_v<T, Exponential>) {
                dec.kind = Decomposition::Kind::Density1D;
                double lam = s.lambda;
                dec.pdf = [lam](double t) { return lam * std::exp(-lam * t); };
            } else if constexpr (std::is_same_v<T, Pareto>) {
                dec.kind = Decomposition::Kind::Density1D;
                double g = s.gamma;
                dec.pdf = [g](double t) {
                    return t < 1.0 ? 0.0 : std::pow(t, -1.0 / g - 1.0) / g;
                };
                dec.support_lo = 1.0;
            } else if constexpr (std::is_same_v<T, Frechet>) {
                dec.kind = Decomposition::Kind::Density1D;
                double p = s.shape;
                dec.pdf = [p](double t) {
                    return t <= 0.0 ? 0.0
                                    : p * std::pow(t, -p - 1.0) * std::exp(-std::pow(t, -p));
                };
            } else if constexpr (std::is_same_v<T, LogNormal>) {
                dec.kind = Decomposition::Kind::Density1D;
                double mu = s.mu, sig = std::sqrt(s.sigma2);
                dec.pdf = [mu, sig](double t) {
                    return t <= 0.0 ? 0.0 : normal_pdf((std::log(t) - mu) / sig) / (t * sig);
                };
            } else if constexpr (std::is_same_v<T, MultiNormalExp>) {
                if (spec.dim() == 1) {
                    double mu = s.mu[0], sig = std::sqrt(s.sigma[0]);
                    dec.kind = Decomposition::Kind::Density1D;
                    dec.pdf = [mu, sig](double t) {
                        return t <= 0.0 ? 0.0 : normal_pdf((std::log(t) - mu) / sig) / (t * sig);
                    };
                }
            } else if constexpr (std::is_same_v<T, Copula>) {
                if (spec.dim() == 1) {
                    dec.kind = Decomposition::Kind::Density1D;
                    dec.pdf = [](double) { return 1.0; };
                    dec.support_lo = 0.0;
                    dec.support_hi = 1.0;
                } else if (s.kind == CopulaKind::Comonotone) {
                    dec.kind = Decomposition::Kind::ComonotoneCurve;
                    dec.support_lo = 0.0;
                    dec.support_hi = 1.0;
                }
            } else if constexpr (std::is_same_v<T, IndependentProduct>) {
                if (spec.dim() == 1) {
                    dec = decomposition(s.components[0]);
                    return;
                }
                // tensor product when every component is atomic and small
                std::vector<Decomposition> parts;
                std::size_t total = 1;
                for (const auto& c : s.components) {
                    parts.push_back(decomposition(c));
                    if (parts.back().kind != Decomposition::Kind::Atoms) return;
                    total *= parts.back().atom_points.size();
                    if (total > 200000) return;
                }
                dec.kind = Decomposition::Kind::Atoms;
                dec.atom_points = {{}};
                dec.atom_weights = {1.0};
                for (const auto& part : parts) {
                    std::vector<std::vector<double>> pts;
                    std::vector<double> wts;
                    for (std::size_t a = 0; a < dec.atom_points.size(); ++a)
                        for (std::size_t b = 0; b < part.atom_points.size(); ++b) {
                            auto p = dec.atom_points[a];
                            p.push_back(part.atom_points[b][0]);
                            pts.push_back(std::move(p));
                            wts.push_back(dec.atom_weights[a] * part.atom_weights[b]);
                        }
                    dec.atom_points = std::move(pts);
                    dec.atom_weights = std::move(wts);
                }
            }
        },
        spec.variant());
    return dec;
}

/// True when the distribution has a closed-form F-norm.
inline bool has_closed_form(const DistributionSpec& spec) {
    return std::visit(
        [&](const auto& s) -> bool {
            using T = std::decay_t<decltype(s)>;
            return std::is_same_v<T, Degenerate> || std::is_same_v<T, Bernoulli> ||
                   std::is_same_v<T, Uniform01> || std::is_same_v<T, Exponential> ||
                   std::is_same_v<T, Pareto> || std::is_same_v<T, Frechet> ||
                   std::is_same_v<T, LogNormal>;
        },
        spec.variant());
}

} // namespace fnorm

#endif // FNORM_DISTRIBUTION_HPP
