#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "fnorm/distribution.hpp"

using namespace fnorm;
using Catch::Approx;

namespace {

std::vector<DistributionSpec> catalog_1d() {
    return {DistributionSpec{Uniform01{}},        DistributionSpec{Exponential{1.0}},
            DistributionSpec{Exponential{2.5}},   DistributionSpec{Pareto{0.5}},
            DistributionSpec{Pareto{0.25}},       DistributionSpec{Bernoulli{0.3}},
            DistributionSpec{Frechet{2.0}},       DistributionSpec{LogNormal{0.0, 1.0}},
            DistributionSpec{Degenerate{{2.0}}}};
}

} // namespace

TEST_CASE("parameter domains are enforced at construction", "[distributions]") {
    REQUIRE_THROWS_AS((DistributionSpec{Bernoulli{0.0}}), std::invalid_argument);
    REQUIRE_THROWS_AS((DistributionSpec{Bernoulli{1.0}}), std::invalid_argument);
    REQUIRE_THROWS_AS((DistributionSpec{Pareto{1.0}}), std::invalid_argument);
    REQUIRE_THROWS_AS((DistributionSpec{Pareto{-0.1}}), std::invalid_argument);
    REQUIRE_THROWS_AS((DistributionSpec{Exponential{0.0}}), std::invalid_argument);
    REQUIRE_THROWS_AS((DistributionSpec{Frechet{1.0}}), std::invalid_argument);
    REQUIRE_THROWS_AS((DistributionSpec{LogNormal{0.0, 0.0}}), std::invalid_argument);
    REQUIRE_THROWS_AS((DistributionSpec{Degenerate{{1.0, -1.0}}}), std::invalid_argument);
    REQUIRE_THROWS_AS((DistributionSpec{Copula{CopulaKind::Independence, 0}}),
                      std::invalid_argument);
    // asymmetric covariance
    REQUIRE_THROWS_AS((DistributionSpec{MultiNormalExp{{0.0, 0.0}, {1.0, 0.5, 0.2, 1.0}}}),
                      std::invalid_argument);
    // zero degenerate components are representable (validate_h flags them)
    REQUIRE_NOTHROW((DistributionSpec{Degenerate{{1.0, 0.0}}}));
}

TEST_CASE("cdf values", "[distributions]") {
    REQUIRE(DistributionSpec{Uniform01{}}.cdf(std::vector<double>{0.5}) == Approx(0.5));
    // Pareto df: F(t) = 1 - t^{-1/gamma}, t >= 1
    REQUIRE(DistributionSpec{Pareto{0.5}}.cdf(std::vector<double>{4.0}) == Approx(0.9375));
    REQUIRE(DistributionSpec{Pareto{0.5}}.cdf(std::vector<double>{0.99}) == 0.0);
    DistributionSpec com{Copula{CopulaKind::Comonotone, 2}};
    REQUIRE(com.cdf(std::vector<double>{0.3, 0.7}) == Approx(0.3));
    DistributionSpec ind{Copula{CopulaKind::Independence, 2}};
    REQUIRE(ind.cdf(std::vector<double>{0.3, 0.7}) == Approx(0.21));

    SECTION("bernoulli steps") {
        DistributionSpec b{Bernoulli{0.3}};
        REQUIRE(b.cdf(std::vector<double>{-0.1}) == 0.0);
        REQUIRE(b.cdf(std::vector<double>{0.0}) == Approx(0.7));
        REQUIRE(b.cdf(std::vector<double>{0.999}) == Approx(0.7));
        REQUIRE(b.cdf(std::vector<double>{1.0}) == 1.0);
    }

    SECTION("empirical cdf uses weak componentwise inequalities") {
        DistributionSpec e{Empirical{SampleMatrix::from_rows({{1.0, 2.0}, {2.0, 1.0}})}};
        REQUIRE(e.cdf(std::vector<double>{1.0, 2.0}) == Approx(0.5));
        REQUIRE(e.cdf(std::vector<double>{2.0, 2.0}) == Approx(1.0));
        REQUIRE(e.cdf(std::vector<double>{0.5, 0.5}) == 0.0);
    }

    SECTION("exp-normal joint cdf only for diagonal covariance") {
        DistributionSpec diag{MultiNormalExp{{0.0, 0.0}, {1.0, 0.0, 0.0, 1.0}}};
        double c = diag.cdf(std::vector<double>{1.0, 1.0});
        REQUIRE(c == Approx(0.25));  // Phi(0)^2
        DistributionSpec full{MultiNormalExp{{0.0, 0.0}, {1.0, 0.5, 0.5, 1.0}}};
        REQUIRE_THROWS_AS(full.cdf(std::vector<double>{1.0, 1.0}), CdfUnavailable);
    }
}

TEST_CASE("quantiles are the left-continuous inverse", "[distributions]") {
    REQUIRE(DistributionSpec{Exponential{1.0}}.quantile(1.0 - std::exp(-1.0)) == Approx(1.0));
    REQUIRE(DistributionSpec{Pareto{0.5}}.quantile(0.75) == Approx(2.0));
    REQUIRE(DistributionSpec{Uniform01{}}.quantile(0.25) == Approx(0.25));
    REQUIRE_THROWS_AS(DistributionSpec{Uniform01{}}.quantile(0.0), std::domain_error);
    REQUIRE_THROWS_AS(DistributionSpec{Uniform01{}}.quantile(1.0), std::domain_error);

    SECTION("bernoulli boundary") {
        DistributionSpec b{Bernoulli{0.3}};
        REQUIRE(b.quantile(0.7) == 0.0);   // u = 1-p belongs to the lower branch
        REQUIRE(b.quantile(0.70001) == 1.0);
    }

    SECTION("empirical order statistics") {
        DistributionSpec e{Empirical{SampleMatrix::from_rows({{3.0}, {1.0}, {2.0}})}};
        REQUIRE(e.quantile(0.2) == 1.0);
        REQUIRE(e.quantile(1.0 / 3.0) == 1.0);
        REQUIRE(e.quantile(0.34) == 2.0);
        REQUIRE(e.quantile(0.99) == 3.0);
    }

    SECTION("left-continuous inverse property across the catalog") {
        for (const auto& spec : catalog_1d()) {
            for (double u : {0.05, 0.25, 0.5, 0.75, 0.95}) {
                double q = spec.quantile(u);
                REQUIRE(spec.cdf(std::vector<double>{q}) >= u - 1e-12);
                double eps = 1e-9 * std::max(1.0, std::abs(q));
                REQUIRE(spec.cdf(std::vector<double>{q - eps}) < u);
            }
        }
    }
}

TEST_CASE("marginal means and variances", "[distributions]") {
    REQUIRE(DistributionSpec{Pareto{0.5}}.marginal_mean(0) == Approx(2.0));
    REQUIRE(DistributionSpec{LogNormal{0.0, 1.0}}.marginal_mean(0) ==
            Approx(std::exp(0.5)).epsilon(1e-12));
    REQUIRE(DistributionSpec{Copula{CopulaKind::Independence, 3}}.marginal_mean(2) ==
            Approx(0.5));
    REQUIRE(DistributionSpec{Frechet{2.0}}.marginal_mean(0) ==
            Approx(std::tgamma(0.5)).epsilon(1e-12));
    REQUIRE(std::isinf(DistributionSpec{Pareto{0.5}}.marginal_variance(0)));
    REQUIRE(DistributionSpec{Pareto{0.25}}.marginal_variance(0) ==
            Approx(2.0 - 16.0 / 9.0).epsilon(1e-12));
    REQUIRE(DistributionSpec{Uniform01{}}.marginal_variance(0) == Approx(1.0 / 12.0));
}

TEST_CASE("sampling is deterministic and inverse-transform", "[distributions]") {
    SECTION("degenerate draws its atom") {
        RandomStream rng(1);
        auto s = DistributionSpec{Degenerate{{2.0, 3.0}}}.sample(3, rng);
        for (std::size_t i = 0; i < 3; ++i) {
            REQUIRE(s.at(i, 0) == 2.0);
            REQUIRE(s.at(i, 1) == 3.0);
        }
    }
    SECTION("uniform mean within 3 sigma / sqrt(n)") {
        RandomStream rng(12345);
        auto s = DistributionSpec{Uniform01{}}.sample(1000000, rng);
        REQUIRE(std::abs(s.column_mean(0) - 0.5) < 0.002);
    }
    SECTION("bernoulli mean within 3 sqrt(pq/n)") {
        RandomStream rng(777);
        auto s = DistributionSpec{Bernoulli{0.3}}.sample(1000000, rng);
        REQUIRE(std::abs(s.column_mean(0) - 0.3) < 0.0014);
    }
    SECTION("same seed, same draws") {
        RandomStream a(9), b(9);
        auto sa = DistributionSpec{Pareto{0.5}}.sample(100, a);
        auto sb = DistributionSpec{Pareto{0.5}}.sample(100, b);
        REQUIRE(sa == sb);
    }
    SECTION("sample means converge for finite-variance variants") {
        for (const auto& spec : catalog_1d()) {
            if (!std::isfinite(spec.marginal_variance(0))) continue;
            RandomStream rng(2024);
            auto s = spec.sample(100000, rng);
            double sd = std::sqrt(s.column_variance(0));
            double bound = 5.0 * sd / std::sqrt(100000.0) + 1e-12;
            REQUIRE(std::abs(s.column_mean(0) - spec.marginal_mean(0)) < bound);
        }
    }
    SECTION("comonotone copula repeats one uniform per row") {
        RandomStream rng(5);
        auto s = DistributionSpec{Copula{CopulaKind::Comonotone, 3}}.sample(10, rng);
        for (std::size_t i = 0; i < 10; ++i) {
            REQUIRE(s.at(i, 0) == s.at(i, 1));
            REQUIRE(s.at(i, 1) == s.at(i, 2));
        }
    }
    SECTION("empirical resampling stays inside the sample") {
        DistributionSpec e{Empirical{SampleMatrix::from_rows({{1.0}, {5.0}})}};
        RandomStream rng(3);
        auto s = e.sample(50, rng);
        for (std::size_t i = 0; i < 50; ++i)
            REQUIRE((s.at(i, 0) == 1.0 || s.at(i, 0) == 5.0));
    }
}

TEST_CASE("condition (H) validation reports violations", "[distributions]") {
    REQUIRE(DistributionSpec{Pareto{0.5}}.validate_h().pass);

    DistributionSpec zero_col{
        Empirical{SampleMatrix::from_rows({{1.0, 0.0}, {2.0, 0.0}})}};
    auto rep = zero_col.validate_h();
    REQUIRE_FALSE(rep.pass);
    REQUIRE(rep.violations.size() == 1);
    REQUIRE(rep.violations[0].coordinate == 1);

    auto rep2 = DistributionSpec{Degenerate{{1.0, 0.0}}}.validate_h();
    REQUIRE_FALSE(rep2.pass);
    REQUIRE(rep2.violations[0].coordinate == 1);
}

TEST_CASE("independent products multiply their marginal cdfs exactly", "[distributions]") {
    DistributionSpec prod{IndependentProduct{
        {DistributionSpec{Uniform01{}}, DistributionSpec{Exponential{1.0}},
         DistributionSpec{Pareto{0.5}}}}};
    RandomStream rng(31);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> t{4.0 * rng.uniform(), 4.0 * rng.uniform(), 4.0 * rng.uniform()};
        double joint = prod.cdf(t);
        double expected = DistributionSpec{Uniform01{}}.cdf(std::vector<double>{t[0]}) *
                          DistributionSpec{Exponential{1.0}}.cdf(std::vector<double>{t[1]}) *
                          DistributionSpec{Pareto{0.5}}.cdf(std::vector<double>{t[2]});
        REQUIRE(joint == expected);  // exact product
    }
}

TEST_CASE("survival and cdf are complementary", "[distributions][property]") {
    std::vector<DistributionSpec> specs = catalog_1d();
    specs.push_back(DistributionSpec{Copula{CopulaKind::Comonotone, 3}});
    specs.push_back(DistributionSpec{Copula{CopulaKind::Independence, 2}});
    specs.push_back(DistributionSpec{IndependentProduct{
        {DistributionSpec{Uniform01{}}, DistributionSpec{Pareto{0.5}}}}});
    specs.push_back(
        DistributionSpec{Empirical{SampleMatrix::from_rows({{1.0, 2.0}, {0.5, 3.0}})}});
    RandomStream rng(64);
    for (const auto& spec : specs) {
        std::vector<std::size_t> idx(spec.dim());
        for (std::size_t i = 0; i < spec.dim(); ++i) idx[i] = i;
        for (int trial = 0; trial < 200; ++trial) {
            std::vector<double> t(spec.dim());
            for (double& v : t) v = 6.0 * rng.uniform() - 0.5;
            double c = spec.cdf_partial(idx, t);
            double s = spec.survival_partial(idx, t);
            REQUIRE(c >= 0.0);
            REQUIRE(c <= 1.0);
            REQUIRE(s >= 0.0);
            REQUIRE(s <= 1.0);
            REQUIRE(c + s == Approx(1.0).margin(1e-12));
        }
    }
}

TEST_CASE("support metadata drives truncation", "[distributions]") {
    REQUIRE(DistributionSpec{Uniform01{}}.marginal_support_sup(0) == 1.0);
    REQUIRE(std::isinf(DistributionSpec{Pareto{0.5}}.marginal_support_sup(0)));
    REQUIRE(DistributionSpec{Empirical{SampleMatrix::from_rows({{2.0}, {7.0}})}}
                .marginal_support_sup(0) == 7.0);

    // tail integrals agree with the analytic survival integral
    DistributionSpec expo{Exponential{2.0}};
    REQUIRE(expo.marginal_tail_integral(0, 1.0) ==
            Approx(std::exp(-2.0) / 2.0).epsilon(1e-12));
    DistributionSpec par{Pareto{0.5}};
    REQUIRE(par.marginal_tail_integral(0, 4.0) == Approx(0.25).epsilon(1e-12));
    REQUIRE(par.marginal_tail_integral(0, 0.0) == Approx(2.0).epsilon(1e-12));  // the mean
}
