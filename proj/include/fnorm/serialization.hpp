#ifndef FNORM_SERIALIZATION_HPP
#define FNORM_SERIALIZATION_HPP

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fnorm/algebra.hpp"
#include "fnorm/distribution.hpp"
#include "fnorm/geometry.hpp"
#include "fnorm/sample.hpp"

namespace fnorm {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

/// Shortest round-trip decimal representation.
inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    double back = std::strtod(buf, nullptr);
    if (back == v) {
        for (int prec = 1; prec < 17; ++prec) {
            char shorter[32];
            std::snprintf(shorter, sizeof(shorter), "%.*g", prec, v);
            if (std::strtod(shorter, nullptr) == v) return shorter;
        }
    }
    return buf;
}

inline void write_sample_csv(std::ostream& os, const SampleMatrix& m) {
    for (std::size_t j = 0; j < m.dim(); ++j) os << (j ? "," : "") << "x" << (j + 1);
    os << "\n";
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = 0; j < m.dim(); ++j)
            os << (j ? "," : "") << format_double(m.at(i, j));
        os << "\n";
    }
}

inline void write_sample_csv(const std::string& path, const SampleMatrix& m) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    write_sample_csv(os, m);
}

inline SampleMatrix read_sample_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("sample csv: missing header");
    std::vector<std::vector<double>> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            std::size_t pos = 0;
            double v = std::stod(cell, &pos);
            row.push_back(v);
        }
        rows.push_back(std::move(row));
    }
    return SampleMatrix::from_rows(rows);
}

inline SampleMatrix read_sample_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open sample file: " + path);
    return read_sample_csv(is);
}

inline void write_cloud_csv(std::ostream& os, const SpherePointCloud& cloud) {
    for (std::size_t j = 0; j < cloud.ambient_dim(); ++j) os << (j ? "," : "") << "x" << j;
    os << "\n";
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        auto p = cloud.point(i);
        for (std::size_t j = 0; j < p.size(); ++j) os << (j ? "," : "") << format_double(p[j]);
        os << "\n";
    }
}

inline SpherePointCloud read_cloud_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("cloud csv: missing header");
    std::size_t cols = 1;
    for (char c : line) cols += (c == ',') ? 1 : 0;
    SpherePointCloud cloud(cols);
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        cloud.push(row);
    }
    return cloud;
}

inline SpherePointCloud read_cloud_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open cloud file: " + path);
    return read_cloud_csv(is);
}

/// Header plus numeric rows; the CSV shape used by all experiment outputs.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

inline void write_table_csv(std::ostream& os, const Table& t) {
    for (std::size_t j = 0; j < t.header.size(); ++j) os << (j ? "," : "") << t.header[j];
    os << "\n";
    for (const auto& row : t.rows) {
        for (std::size_t j = 0; j < row.size(); ++j)
            os << (j ? "," : "") << format_double(row[j]);
        os << "\n";
    }
}

// ---------------------------------------------------------------------------
// JSON specs
// ---------------------------------------------------------------------------

inline json spec_to_json(const DistributionSpec& spec) {
    return std::visit(
        [&](const auto& s) -> json {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Degenerate>) {
                return {{"type", "degenerate"}, {"c", s.c}};
            } else if constexpr (std::is_same_v<T, Bernoulli>) {
                return {{"type", "bernoulli"}, {"p", s.p}};
            } else if constexpr (std::is_same_v<T, Uniform01>) {
                return {{"type", "uniform"}};
            } else if constexpr (std::is_same_v<T, Exponential>) {
                return {{"type", "exponential"}, {"lambda", s.lambda}};
            } else if constexpr (std::is_same_v<T, Pareto>) {
                return {{"type", "pareto"}, {"gamma", s.gamma}};
            } else if constexpr (std::is_same_v<T, Frechet>) {
                return {{"type", "frechet"}, {"p", s.shape}};
            } else if constexpr (std::is_same_v<T, LogNormal>) {
                return {{"type", "lognormal"}, {"mu", s.mu}, {"sigma2", s.sigma2}};
            } else if constexpr (std::is_same_v<T, MultiNormalExp>) {
                std::size_t d = s.mu.size();
                json rows = json::array();
                for (std::size_t i = 0; i < d; ++i) {
                    json row = json::array();
                    for (std::size_t j = 0; j < d; ++j) row.push_back(s.sigma[i * d + j]);
                    rows.push_back(row);
                }
                return {{"type", "multinormal-exp"}, {"mu", s.mu}, {"sigma", rows}};
            } else if constexpr (std::is_same_v<T, IndependentProduct>) {
                json comps = json::array();
                for (const auto& c : s.components) comps.push_back(spec_to_json(c));
                return {{"type", "product"}, {"components", comps}};
            } else if constexpr (std::is_same_v<T, Copula>) {
                return {{"type", "copula"},
                        {"variant",
                         s.kind == CopulaKind::Independence ? "independence" : "comonotone"},
                        {"dim", s.dim}};
            } else if constexpr (std::is_same_v<T, Empirical>) {
                json rows = json::array();
                for (std::size_t i = 0; i < s.sample.size(); ++i) {
                    json row = json::array();
                    for (std::size_t j = 0; j < s.sample.dim(); ++j)
                        row.push_back(s.sample.at(i, j));
                    rows.push_back(row);
                }
                return {{"type", "empirical"}, {"data", rows}};
            }
        },
        spec.variant());
}

inline DistributionSpec parse_spec(const json& j) {
    if (!j.is_object() || !j.contains("type"))
        throw std::invalid_argument("spec json: object with a \"type\" field required");
    const std::string type = j.at("type").get<std::string>();
    if (type == "degenerate")
        return DistributionSpec{Degenerate{j.at("c").get<std::vector<double>>()}};
    if (type == "bernoulli") return DistributionSpec{Bernoulli{j.at("p").get<double>()}};
    if (type == "uniform") return DistributionSpec{Uniform01{}};
    if (type == "exponential")
        return DistributionSpec{Exponential{j.at("lambda").get<double>()}};
    if (type == "pareto") return DistributionSpec{Pareto{j.at("gamma").get<double>()}};
    if (type == "frechet") return DistributionSpec{Frechet{j.at("p").get<double>()}};
    if (type == "lognormal")
        return DistributionSpec{
            LogNormal{j.at("mu").get<double>(), j.at("sigma2").get<double>()}};
    if (type == "multinormal-exp") {
        auto mu = j.at("mu").get<std::vector<double>>();
        auto rows = j.at("sigma").get<std::vector<std::vector<double>>>();
        std::vector<double> sigma;
        for (const auto& r : rows)
            for (double v : r) sigma.push_back(v);
        return DistributionSpec{MultiNormalExp{mu, sigma}};
    }
    if (type == "product") {
        std::vector<DistributionSpec> comps;
        for (const auto& c : j.at("components")) comps.push_back(parse_spec(c));
        return DistributionSpec{IndependentProduct{std::move(comps)}};
    }
    if (type == "copula") {
        const std::string v = j.at("variant").get<std::string>();
        CopulaKind kind;
        if (v == "independence") kind = CopulaKind::Independence;
        else if (v == "comonotone") kind = CopulaKind::Comonotone;
        else throw std::invalid_argument("spec json: unknown copula variant: " + v);
        return DistributionSpec{Copula{kind, j.at("dim").get<std::size_t>()}};
    }
    if (type == "empirical") {
        if (j.contains("file")) {
            return DistributionSpec{
                Empirical{read_sample_csv(j.at("file").get<std::string>())}};
        }
        auto rows = j.at("data").get<std::vector<std::vector<double>>>();
        return DistributionSpec{Empirical{SampleMatrix::from_rows(rows)}};
    }
    throw std::invalid_argument("spec json: unknown type: " + type);
}

inline json signed_spec_to_json(const SignedSpec& spec) {
    return std::visit(
        [](const auto& s) -> json {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, SNormal>) {
                return {{"type", "normal"}, {"mu", s.mu}, {"sigma2", s.sigma2}};
            } else if constexpr (std::is_same_v<T, SMultiNormal>) {
                std::size_t d = s.mu.size();
                json rows = json::array();
                for (std::size_t i = 0; i < d; ++i) {
                    json row = json::array();
                    for (std::size_t j = 0; j < d; ++j) row.push_back(s.sigma[i * d + j]);
                    rows.push_back(row);
                }
                return {{"type", "multinormal"}, {"mu", s.mu}, {"sigma", rows}};
            } else if constexpr (std::is_same_v<T, SNegGumbel>) {
                return {{"type", "gumbel"}};
            } else {
                return {{"type", "rademacher"}};
            }
        },
        spec.variant());
}

inline SignedSpec parse_signed_spec(const json& j) {
    if (!j.is_object() || !j.contains("type"))
        throw std::invalid_argument("signed spec json: object with a \"type\" field required");
    const std::string type = j.at("type").get<std::string>();
    if (type == "normal")
        return SignedSpec{SNormal{j.at("mu").get<double>(), j.at("sigma2").get<double>()}};
    if (type == "multinormal") {
        auto mu = j.at("mu").get<std::vector<double>>();
        auto rows = j.at("sigma").get<std::vector<std::vector<double>>>();
        std::vector<double> sigma;
        for (const auto& r : rows)
            for (double v : r) sigma.push_back(v);
        return SignedSpec{SMultiNormal{mu, sigma}};
    }
    if (type == "gumbel") return SignedSpec{SNegGumbel{}};
    if (type == "rademacher") return SignedSpec{SRademacher{}};
    throw std::invalid_argument("signed spec json: unknown type: " + type);
}

/// Accepts inline JSON, a path to a .json file, or a bare catalog name with
/// conventional parameters (uniform, exponential, pareto, bernoulli,
/// frechet, lognormal).
inline DistributionSpec parse_spec_argument(const std::string& arg) {
    std::string s = arg;
    if (!s.empty() && s.front() == '{') return parse_spec(json::parse(s));
    if (s.size() > 5 && s.substr(s.size() - 5) == ".json") {
        std::ifstream is(s);
        if (!is) throw std::invalid_argument("cannot open spec file: " + s);
        json j;
        is >> j;
        return parse_spec(j);
    }
    if (s == "uniform") return DistributionSpec{Uniform01{}};
    if (s == "exponential") return DistributionSpec{Exponential{1.0}};
    if (s == "pareto") return DistributionSpec{Pareto{0.5}};
    if (s == "bernoulli") return DistributionSpec{Bernoulli{0.5}};
    if (s == "frechet") return DistributionSpec{Frechet{2.0}};
    if (s == "lognormal") return DistributionSpec{LogNormal{0.0, 1.0}};
    throw std::invalid_argument("unrecognized spec argument: " + arg);
}

inline SignedSpec parse_signed_spec_argument(const std::string& arg) {
    std::string s = arg;
    if (!s.empty() && s.front() == '{') return parse_signed_spec(json::parse(s));
    if (s.size() > 5 && s.substr(s.size() - 5) == ".json") {
        std::ifstream is(s);
        if (!is) throw std::invalid_argument("cannot open spec file: " + s);
        json j;
        is >> j;
        return parse_signed_spec(j);
    }
    if (s == "normal") return SignedSpec{SNormal{0.0, 1.0}};
    if (s == "gumbel") return SignedSpec{SNegGumbel{}};
    if (s == "rademacher") return SignedSpec{SRademacher{}};
    throw std::invalid_argument("unrecognized signed spec argument: " + arg);
}

} // namespace fnorm

#endif // FNORM_SERIALIZATION_HPP
