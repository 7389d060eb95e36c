#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "fnorm/geometry.hpp"

using namespace fnorm;
using Catch::Approx;

TEST_CASE("sphere tracing", "[geometry]") {
    SECTION("sup-norm sphere lies on the unit square boundary") {
        auto cloud = trace_sphere(make_sup_norm(1), 64);
        REQUIRE(cloud.size() == 65);
        for (std::size_t i = 0; i < cloud.size(); ++i) {
            auto p = cloud.point(i);
            double m = std::max(p[0], p[1]);
            REQUIRE(m == Approx(1.0).margin(1e-12));
        }
    }
    SECTION("uniform sphere: direction (0,1) lands on (0,2)") {
        auto uni = make_closed_form(DistributionSpec{Uniform01{}});
        auto cloud = trace_sphere(uni, 64);
        auto first = cloud.point(0);  // lattice starts at (0, m)/m
        REQUIRE(first[0] == Approx(0.0).margin(1e-15));
        REQUIRE(first[1] == Approx(2.0).margin(1e-12));
        REQUIRE(uni({0.0, 2.0}) == Approx(1.0).margin(1e-15));
    }
    SECTION("direction (1,0,...,0) maps to itself") {
        auto deg = make_closed_form(DistributionSpec{Degenerate{{2.0, 3.0}}});
        auto cloud = trace_sphere(deg, 8);
        auto last = cloud.point(cloud.size() - 1);  // lattice ends at (m,0,...,0)/m
        REQUIRE(last[0] == 1.0);
        REQUIRE(last[1] == 0.0);
        REQUIRE(last[2] == 0.0);
    }
    SECTION("every traced point passes the post-hoc sphere check") {
        auto par = make_quadrature(DistributionSpec{Pareto{0.5}});
        auto cloud = trace_sphere(par, 32);
        for (std::size_t i = 0; i < cloud.size(); ++i)
            REQUIRE(par(cloud.point(i)) == Approx(1.0).margin(1e-9));
    }
    SECTION("uniform sphere matches the explicit description") {
        auto uni = make_closed_form(DistributionSpec{Uniform01{}});
        auto cloud = trace_sphere(uni, 256);
        for (std::size_t i = 0; i < cloud.size(); ++i) {
            auto p = cloud.point(i);
            if (p[1] > p[0] + 1e-9) {
                REQUIRE(p[1] == Approx(1.0 + std::sqrt(1.0 - p[0] * p[0])).margin(1e-8));
            } else {
                REQUIRE(p[0] == Approx(1.0).margin(1e-12));
                REQUIRE(p[1] <= 1.0 + 1e-12);
            }
        }
    }
}

TEST_CASE("Husler-Reiss sphere parametrization", "[geometry]") {
    SECTION("lambda = 1, sigma = 1") {
        auto cloud = hr_sphere_param(1.0, std::vector<double>{1.0});
        REQUIRE(cloud.size() == 3);  // endpoints plus the parametrized point
        auto mid = cloud.point(1);
        double expected = 1.0 / (2.0 * normal_cdf(0.5));
        REQUIRE(mid[0] == Approx(expected).margin(1e-12));
        REQUIRE(mid[1] == Approx(expected).margin(1e-12));
    }
    SECTION("endpoints are present") {
        auto cloud = hr_sphere_param(2.0, std::vector<double>{0.5, 2.0});
        REQUIRE(cloud.point(0)[0] == 1.0);
        REQUIRE(cloud.point(0)[1] == 0.0);
        REQUIRE(cloud.point(cloud.size() - 1)[0] == 0.0);
        REQUIRE(cloud.point(cloud.size() - 1)[1] == 1.0);
    }
    SECTION("sigma -> 0 approaches the sup-norm corner at lambda = 1") {
        auto cloud = hr_sphere_param(1e-6, std::vector<double>{1.0});
        REQUIRE(cloud.point(1)[0] == Approx(1.0).margin(1e-6));
        REQUIRE(cloud.point(1)[1] == Approx(1.0).margin(1e-6));
    }
    SECTION("large sigma approaches the L1 segment") {
        auto cloud = hr_sphere_param(40.0, std::vector<double>{1.0});
        REQUIRE(cloud.point(1)[0] == Approx(0.5).margin(1e-3));
        REQUIRE(cloud.point(1)[1] == Approx(0.5).margin(1e-3));
    }
    SECTION("points satisfy the Husler-Reiss norm equation") {
        auto cloud = hr_sphere_param(1.3, std::vector<double>{0.2, 0.7, 1.9, 4.2});
        for (std::size_t i = 1; i + 1 < cloud.size(); ++i) {
            auto p = cloud.point(i);
            REQUIRE(husler_reiss_eval(1.3 * 1.3, p[0], p[1]) == Approx(1.0).margin(1e-12));
        }
    }
}

TEST_CASE("Hausdorff distance", "[geometry]") {
    SECTION("identical clouds") {
        auto cloud = hr_sphere_param(1.0, std::vector<double>{0.5, 1.0, 2.0});
        REQUIRE(hausdorff(cloud, cloud, MetricKind::L2) == 0.0);
    }
    SECTION("single-pair distance") {
        SpherePointCloud a(2), b(2);
        a.push(std::vector<double>{0.0, 0.0});
        b.push(std::vector<double>{3.0, 4.0});
        REQUIRE(hausdorff(a, b, MetricKind::L2) == Approx(5.0));
        REQUIRE(hausdorff(a, b, MetricKind::L1) == Approx(7.0));
        REQUIRE(hausdorff(a, b, MetricKind::Sup) == Approx(4.0));
    }
    SECTION("symmetry, nonnegativity and the triangle inequality") {
        RandomStream rng(21);
        auto make_cloud = [&](std::size_t n) {
            SpherePointCloud c(2);
            for (std::size_t i = 0; i < n; ++i)
                c.push(std::vector<double>{rng.uniform(), rng.uniform()});
            return c;
        };
        for (int trial = 0; trial < 20; ++trial) {
            auto a = make_cloud(8), b = make_cloud(6), c = make_cloud(7);
            double ab = hausdorff(a, b), bc = hausdorff(b, c), ac = hausdorff(a, c);
            REQUIRE(ab == hausdorff(b, a));
            REQUIRE(ab >= 0.0);
            REQUIRE(ac <= ab + bc + 1e-12);
        }
    }
    SECTION("dimension mismatch") {
        SpherePointCloud a(2), b(3);
        a.push(std::vector<double>{1.0, 0.0});
        b.push(std::vector<double>{1.0, 0.0, 0.0});
        REQUIRE_THROWS_AS(hausdorff(a, b, MetricKind::L2), std::invalid_argument);
    }
    SECTION("an F-norm can serve as the ambient metric") {
        auto metric = make_closed_form(DistributionSpec{Uniform01{}});
        SpherePointCloud a(2), b(2);
        a.push(std::vector<double>{0.0, 0.0});
        b.push(std::vector<double>{0.0, 1.0});
        REQUIRE(hausdorff(a, b, metric) == Approx(0.5));
    }
    SECTION("nearby Husler-Reiss spheres are close") {
        std::vector<double> lambdas;
        for (int i = 0; i < 512; ++i)
            lambdas.push_back(0.01 * std::pow(100.0 / 0.01, i / 511.0));
        auto base = hr_sphere_param(1.0, lambdas);
        auto close = hr_sphere_param(1.0 + 1e-3, lambdas);
        REQUIRE(hausdorff(base, close, MetricKind::L2) < 1e-2);
    }
}

TEST_CASE("Hausdorff convergence experiment", "[geometry]") {
    SECTION("Pareto sequence under all three metrics") {
        std::vector<DistributionSpec> seq;
        for (int k = 2; k <= 5; ++k)
            seq.push_back(DistributionSpec{Pareto{0.5 + std::pow(2.0, -k)}});
        DistributionSpec limit{Pareto{0.5}};
        for (auto metric : {MetricKind::Sup, MetricKind::L1, MetricKind::L2}) {
            auto rows = hausdorff_convergence_experiment(seq, limit, 64, metric);
            for (std::size_t i = 1; i < rows.size(); ++i)
                REQUIRE(rows[i].distance < rows[i - 1].distance);
        }
    }
    SECTION("a constant sequence sits at the grid floor") {
        std::vector<DistributionSpec> seq(3, DistributionSpec{Uniform01{}});
        auto rows = hausdorff_convergence_experiment(seq, DistributionSpec{Uniform01{}}, 64);
        for (const auto& r : rows) REQUIRE(r.distance == Approx(0.0).margin(1e-12));
    }
}
