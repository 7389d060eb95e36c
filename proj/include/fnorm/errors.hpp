#ifndef FNORM_ERRORS_HPP
#define FNORM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fnorm {

/// Adaptive integration ran out of subdivisions before reaching the
/// requested tolerance. Carries the best estimate and its error bound.
class IntegrationFailure : public std::runtime_error {
public:
    IntegrationFailure(const std::string& what, double estimate, double error_bound)
        : std::runtime_error("integration-failure: " + what),
          estimate_(estimate), error_bound_(error_bound) {}
    double estimate() const noexcept { return estimate_; }
    double error_bound() const noexcept { return error_bound_; }

private:
    double estimate_;
    double error_bound_;
};

/// Tail segments of a semi-infinite integral stopped decaying; the
/// integrand is not numerically integrable at infinity.
class TailNotIntegrable : public std::runtime_error {
public:
    explicit TailNotIntegrable(const std::string& what)
        : std::runtime_error("tail-not-integrable-numerically: " + what) {}
};

/// Signals that a joint cdf has no usable form (e.g. exp-normal with
/// non-diagonal covariance); callers should fall back to Monte Carlo.
class CdfUnavailable : public std::runtime_error {
public:
    explicit CdfUnavailable(const std::string& what)
        : std::runtime_error("cdf-unavailable: " + what) {}
};

/// Difference quotients of a norm section failed to decrease with the
/// step; the evaluated function is not convex, hence not an F-norm.
class NotConvex : public std::runtime_error {
public:
    explicit NotConvex(const std::string& what)
        : std::runtime_error("not-convex: " + what) {}
};

/// Neither Tonelli quadrature nor Monte Carlo can evaluate a product.
class ProductUnavailable : public std::runtime_error {
public:
    explicit ProductUnavailable(const std::string& what)
        : std::runtime_error("product-unavailable: " + what) {}
};

/// The Brownian-bridge representation requires an integrable
/// sqrt(F(1-F)); the numeric check failed.
class BridgeUnavailable : public std::runtime_error {
public:
    explicit BridgeUnavailable(const std::string& what)
        : std::runtime_error("bridge-representation-unavailable: " + what) {}
};

/// Extremal-coefficient fit was degenerate; the caller should widen
/// the fit window.
class WidenWindowAdvisory : public std::runtime_error {
public:
    explicit WidenWindowAdvisory(const std::string& what)
        : std::runtime_error("widen-window: " + what) {}
};

} // namespace fnorm

#endif // FNORM_ERRORS_HPP
