#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <sstream>

#include "fnorm/serialization.hpp"

using namespace fnorm;
using Catch::Approx;

TEST_CASE("spec JSON round trips", "[serialization][property]") {
    std::vector<DistributionSpec> specs{
        DistributionSpec{Degenerate{{2.0, 3.0}}},
        DistributionSpec{Bernoulli{0.3}},
        DistributionSpec{Uniform01{}},
        DistributionSpec{Exponential{1.25}},
        DistributionSpec{Pareto{0.5}},
        DistributionSpec{Frechet{2.5}},
        DistributionSpec{LogNormal{0.1, 0.9}},
        DistributionSpec{MultiNormalExp{{0.0, 0.5}, {1.0, 0.2, 0.2, 2.0}}},
        DistributionSpec{IndependentProduct{
            {DistributionSpec{Uniform01{}}, DistributionSpec{Pareto{0.5}}}}},
        DistributionSpec{Copula{CopulaKind::Comonotone, 3}},
        DistributionSpec{Empirical{SampleMatrix::from_rows({{1.0, 2.0}, {0.25, 3.0}})}}};
    for (const auto& spec : specs) {
        json j = spec_to_json(spec);
        // serialize text and parse back, as the CLI echo does
        json j2 = json::parse(j.dump());
        REQUIRE(parse_spec(j2) == spec);
    }
}

TEST_CASE("signed spec JSON round trips", "[serialization]") {
    std::vector<SignedSpec> specs{SignedSpec{SNormal{0.3, 1.7}}, SignedSpec{SNegGumbel{}},
                                  SignedSpec{SRademacher{}},
                                  SignedSpec{SMultiNormal{{0.0, 0.1}, {1.0, 0.0, 0.0, 1.0}}}};
    for (const auto& spec : specs) {
        json j = signed_spec_to_json(spec);
        REQUIRE(parse_signed_spec(json::parse(j.dump())) == spec);
    }
}

TEST_CASE("bad spec JSON is rejected", "[serialization]") {
    REQUIRE_THROWS_AS(parse_spec(json::parse("{\"type\":\"nope\"}")), std::invalid_argument);
    REQUIRE_THROWS_AS(parse_spec(json::parse("{}")), std::invalid_argument);
    REQUIRE_THROWS_AS(parse_spec(json::parse("{\"type\":\"pareto\",\"gamma\":1.5}")),
                      std::invalid_argument);
}

TEST_CASE("sample CSV round trips", "[serialization]") {
    auto m = SampleMatrix::from_rows({{1.0, 0.125}, {2.5, 0.0}, {0.3333333333333333, 7.0}});
    std::stringstream ss;
    write_sample_csv(ss, m);
    std::string text = ss.str();
    REQUIRE(text.substr(0, 6) == "x1,x2\n");
    std::stringstream in(text);
    REQUIRE(read_sample_csv(in) == m);
}

TEST_CASE("cloud CSV round trips", "[serialization]") {
    SpherePointCloud cloud(2);
    cloud.push(std::vector<double>{1.0, 0.0});
    cloud.push(std::vector<double>{0.7231050534236590, 0.7231050534236590});
    std::stringstream ss;
    write_cloud_csv(ss, cloud);
    std::stringstream in(ss.str());
    auto back = read_cloud_csv(in);
    REQUIRE(back.size() == cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i)
        for (std::size_t j = 0; j < 2; ++j)
            REQUIRE(back.point(i)[j] == cloud.point(i)[j]);
}

TEST_CASE("format_double is shortest round-trip", "[serialization][property]") {
    RandomStream rng(404);
    for (int i = 0; i < 2000; ++i) {
        double v = (rng.uniform() - 0.25) * std::pow(10.0, 12.0 * (rng.uniform() - 0.5));
        REQUIRE(std::strtod(format_double(v).c_str(), nullptr) == v);
    }
    REQUIRE(format_double(0.5) == "0.5");
    REQUIRE(format_double(1.0) == "1");
}

TEST_CASE("spec argument shortcuts", "[serialization]") {
    REQUIRE(parse_spec_argument("uniform") == DistributionSpec{Uniform01{}});
    REQUIRE(parse_spec_argument("pareto") == DistributionSpec{Pareto{0.5}});
    REQUIRE(parse_spec_argument("{\"type\":\"bernoulli\",\"p\":0.4}") ==
            DistributionSpec{Bernoulli{0.4}});
    REQUIRE_THROWS_AS(parse_spec_argument("mystery"), std::invalid_argument);
}

TEST_CASE("empirical specs load from CSV files", "[serialization]") {
    std::string path = "test_serialization_tmp.csv";
    auto m = SampleMatrix::from_rows({{0.5}, {1.5}});
    write_sample_csv(path, m);
    json j{{"type", "empirical"}, {"file", path}};
    auto spec = parse_spec(j);
    REQUIRE(spec == DistributionSpec{Empirical{m}});
    std::remove(path.c_str());
}
