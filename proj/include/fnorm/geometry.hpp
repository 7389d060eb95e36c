#ifndef FNORM_GEOMETRY_HPP
#define FNORM_GEOMETRY_HPP

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fnorm/algebra.hpp"
#include "fnorm/evaluator.hpp"
#include "fnorm/math.hpp"

namespace fnorm {

/// Finite set of points approximating the positive-orthant unit sphere S+
/// of an F-norm. Every point satisfies |eval(point) - 1| <= the tolerance
/// used when tracing.
class SpherePointCloud {
public:
    explicit SpherePointCloud(std::size_t ambient_dim) : k_(ambient_dim) {
        if (ambient_dim < 2)
            throw std::invalid_argument("SpherePointCloud: ambient dimension >= 2 required");
    }

    std::size_t ambient_dim() const noexcept { return k_; }
    std::size_t size() const noexcept { return flat_.size() / k_; }

    std::span<const double> point(std::size_t i) const { return {flat_.data() + i * k_, k_}; }

    void push(std::span<const double> p) {
        if (p.size() != k_) throw std::invalid_argument("SpherePointCloud: wrong point length");
        for (double v : p) {
            if (!(v >= 0.0)) throw std::invalid_argument("SpherePointCloud: negative coordinate");
            flat_.push_back(v);
        }
    }

private:
    std::size_t k_;
    std::vector<double> flat_;
};

namespace detail {

inline void simplex_directions(std::size_t parts, std::size_t m,
                               std::vector<std::size_t>& stack,
                               const std::function<void(std::span<const std::size_t>)>& emit) {
    if (stack.size() + 1 == parts) {
        std::size_t used = 0;
        for (std::size_t v : stack) used += v;
        stack.push_back(m - used);
        emit(stack);
        stack.pop_back();
        return;
    }
    std::size_t used = 0;
    for (std::size_t v : stack) used += v;
    for (std::size_t k = 0; k + used <= m; ++k) {
        stack.push_back(k);
        simplex_directions(parts, m, stack, emit);
        stack.pop_back();
    }
}

} // namespace detail

/// Scale the directions of the L1-simplex lattice {s >= 0, sum = 1} with
/// resolution m onto the unit sphere: s / ||s||. Each emitted point is
/// re-evaluated and must sit on the sphere within `sphere_tol`.
inline SpherePointCloud trace_sphere(const FNormHandle& handle, std::size_t m,
                                     double sphere_tol = 1e-9) {
    if (m < 2) throw std::invalid_argument("trace_sphere: m must be >= 2");
    const std::size_t k = handle.dim() + 1;
    SpherePointCloud cloud(k);
    std::vector<double> dir(k), pt(k);
    std::vector<std::size_t> stack;
    detail::simplex_directions(
        k, m, stack, [&](std::span<const std::size_t> lattice) {
            for (std::size_t i = 0; i < k; ++i)
                dir[i] = static_cast<double>(lattice[i]) / static_cast<double>(m);
            double v = handle(dir);
            for (std::size_t i = 0; i < k; ++i) pt[i] = dir[i] / v;
            double check = handle(pt);
            if (std::abs(check - 1.0) > sphere_tol)
                throw std::runtime_error("trace_sphere: point misses the sphere tolerance");
            cloud.push(pt);
        });
    return cloud;
}

/// Closed-form parametrization of the Husler-Reiss unit sphere:
/// (1, lambda) / (Phi(sigma/2 - log(lambda)/sigma) + lambda Phi(sigma/2 +
/// log(lambda)/sigma)), plus the endpoints (1,0) and (0,1).
inline SpherePointCloud hr_sphere_param(double sigma, std::span<const double> lambdas) {
    if (!(sigma > 0.0)) throw std::domain_error("hr_sphere_param: sigma must be > 0");
    SpherePointCloud cloud(2);
    const double e0[2] = {1.0, 0.0};
    cloud.push(e0);
    for (double lam : lambdas) {
        if (!(lam > 0.0)) throw std::domain_error("hr_sphere_param: lambdas must be > 0");
        double denom = normal_cdf(0.5 * sigma - std::log(lam) / sigma) +
                       lam * normal_cdf(0.5 * sigma + std::log(lam) / sigma);
        double p[2] = {1.0 / denom, lam / denom};
        cloud.push(p);
    }
    const double e1[2] = {0.0, 1.0};
    cloud.push(e1);
    return cloud;
}

enum class MetricKind { Sup, L1, L2 };

namespace detail {

template <typename Dist>
double hausdorff_impl(const SpherePointCloud& a, const SpherePointCloud& b, Dist&& dist) {
    if (a.ambient_dim() != b.ambient_dim())
        throw std::invalid_argument("hausdorff: ambient dimension mismatch");
    if (a.size() == 0 || b.size() == 0)
        throw std::invalid_argument("hausdorff: clouds must be nonempty");
    double worst = 0.0;
    auto directed = [&](const SpherePointCloud& from, const SpherePointCloud& to) {
        for (std::size_t i = 0; i < from.size(); ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < to.size(); ++j)
                best = std::min(best, dist(from.point(i), to.point(j)));
            worst = std::max(worst, best);
        }
    };
    directed(a, b);
    directed(b, a);
    return worst;
}

} // namespace detail

/// Exact bidirectional max-min distance between the finite clouds under the
/// chosen ambient norm.
inline double hausdorff(const SpherePointCloud& a, const SpherePointCloud& b,
                        MetricKind metric = MetricKind::L2) {
    std::vector<double> diff(a.ambient_dim());
    return detail::hausdorff_impl(a, b, [&](std::span<const double> p, std::span<const double> q) {
        for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = p[i] - q[i];
        switch (metric) {
            case MetricKind::Sup: return sup_norm(diff);
            case MetricKind::L1: return l1_norm(diff);
            default: return l2_norm(diff);
        }
    });
}

/// Hausdorff distance with an F-norm as the ambient metric.
inline double hausdorff(const SpherePointCloud& a, const SpherePointCloud& b,
                        const FNormHandle& metric) {
    if (metric.dim() + 1 != a.ambient_dim())
        throw std::invalid_argument("hausdorff: metric dimension mismatch");
    std::vector<double> diff(a.ambient_dim());
    return detail::hausdorff_impl(a, b, [&](std::span<const double> p, std::span<const double> q) {
        for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = p[i] - q[i];
        return metric(diff);
    });
}

struct HausdorffRow {
    std::size_t index = 0;
    double distance = 0.0;
};

/// Trace each spec's sphere and tabulate the Hausdorff distance to the
/// limit sphere; the sequence decreases toward the grid floor when the
/// spec sequence converges.
inline std::vector<HausdorffRow> hausdorff_convergence_experiment(
    std::span<const DistributionSpec> sequence, const DistributionSpec& limit, std::size_t m,
    MetricKind metric = MetricKind::L2, QuadratureConfig cfg = {}) {
    SpherePointCloud limit_cloud = trace_sphere(make_auto(limit, cfg), m);
    std::vector<HausdorffRow> rows;
    for (std::size_t i = 0; i < sequence.size(); ++i) {
        SpherePointCloud cloud = trace_sphere(make_auto(sequence[i], cfg), m);
        rows.push_back({i, hausdorff(cloud, limit_cloud, metric)});
    }
    return rows;
}

} // namespace fnorm

#endif // FNORM_GEOMETRY_HPP
