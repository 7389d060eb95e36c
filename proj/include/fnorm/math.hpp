#ifndef FNORM_MATH_HPP
#define FNORM_MATH_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace fnorm {

inline constexpr double inv_sqrt2 = 0.70710678118654752440;
inline constexpr double sqrt_2pi = 2.50662827463100050242;

/// Standard normal cdf.
inline double normal_cdf(double z) {
    return 0.5 * std::erfc(-z * inv_sqrt2);
}

inline double normal_pdf(double z) {
    return std::exp(-0.5 * z * z) / sqrt_2pi;
}

/// Standard normal quantile: Acklam's rational approximation followed by
/// one Halley refinement against erfc, accurate to full double precision
/// for u in (0,1).
inline double normal_quantile(double u) {
    if (!(u > 0.0 && u < 1.0))
        throw std::domain_error("normal_quantile: u must lie in (0,1)");

    static constexpr double a[6] = {
        -3.969683028665376e+01,  2.209460984245205e+02, -2.759285104469687e+02,
         1.383577518672690e+02, -3.066479806614716e+01,  2.506628277459239e+00};
    static constexpr double b[5] = {
        -5.447609879822406e+01,  1.615858368580409e+02, -1.556989798598866e+02,
         6.680131188771972e+01, -1.328068155288572e+01};
    static constexpr double c[6] = {
        -7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
        -2.549732539343734e+00,  4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[4] = {
         7.784695709041462e-03,  3.224671290700398e-01,  2.445134137142996e+00,
         3.754408661907416e+00};

    const double u_low = 0.02425;
    double x;
    if (u < u_low) {
        double q = std::sqrt(-2.0 * std::log(u));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (u <= 1.0 - u_low) {
        double q = u - 0.5;
        double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        double q = std::sqrt(-2.0 * std::log(1.0 - u));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
             ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    // Halley refinement.
    double e = normal_cdf(x) - u;
    double g = e * sqrt_2pi * std::exp(0.5 * x * x);
    x -= g / (1.0 + 0.5 * x * g);
    return x;
}

inline double sup_norm(std::span<const double> x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

inline double l1_norm(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += std::abs(v);
    return s;
}

inline double l2_norm(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

inline double lp_norm(std::span<const double> x, double p) {
    if (p < 1.0) throw std::domain_error("lp_norm: p must be >= 1");
    double s = 0.0;
    for (double v : x) s += std::pow(std::abs(v), p);
    return std::pow(s, 1.0 / p);
}

inline std::vector<double> abs_coords(std::span<const double> x) {
    std::vector<double> out(x.begin(), x.end());
    for (double& v : out) v = std::abs(v);
    return out;
}

} // namespace fnorm

#endif // FNORM_MATH_HPP
