// fnorm: command-line front end for the F-norm library.
//
// One subcommand per capability; structured JSON on stdout (CSV for tables
// via --out/--format). Exit codes: 0 success, 1 domain error, 2 numeric
// failure (partial results attached), 64 usage.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fnorm/algebra.hpp"
#include "fnorm/distribution.hpp"
#include "fnorm/empirical.hpp"
#include "fnorm/evaluator.hpp"
#include "fnorm/geometry.hpp"
#include "fnorm/inversion.hpp"
#include "fnorm/metrics.hpp"
#include "fnorm/serialization.hpp"

namespace {

using fnorm::json;

std::vector<double> parse_point(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(std::stod(cell));
    if (out.empty()) throw std::invalid_argument("empty point");
    return out;
}

std::vector<std::array<double, 2>> parse_point_pairs(const std::string& s) {
    std::vector<std::array<double, 2>> out;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ';')) {
        auto p = parse_point(part);
        if (p.size() != 2) throw std::invalid_argument("limit-sim points must be x,y pairs");
        out.push_back({p[0], p[1]});
    }
    return out;
}

std::vector<double> parse_lambda_grid(const std::string& s) {
    // "log:lo:hi:count" or "lin:lo:hi:count" or comma-separated values
    if (s.rfind("log:", 0) == 0 || s.rfind("lin:", 0) == 0) {
        bool logspace = s[1] == 'o';
        std::stringstream ss(s.substr(4));
        std::string cell;
        std::vector<double> parts;
        while (std::getline(ss, cell, ':')) parts.push_back(std::stod(cell));
        if (parts.size() != 3) throw std::invalid_argument("grid must be log:lo:hi:count");
        double lo = parts[0], hi = parts[1];
        auto count = static_cast<std::size_t>(parts[2]);
        if (count < 2 || !(hi > lo)) throw std::invalid_argument("bad lambda grid");
        std::vector<double> out(count);
        for (std::size_t i = 0; i < count; ++i) {
            double f = static_cast<double>(i) / static_cast<double>(count - 1);
            out[i] = logspace ? lo * std::pow(hi / lo, f) : lo + f * (hi - lo);
        }
        return out;
    }
    return parse_point(s);
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

void write_table(const std::string& out_path, const fnorm::Table& table) {
    if (out_path.empty() || out_path == "-") {
        fnorm::write_table_csv(std::cout, table);
        return;
    }
    std::ofstream os(out_path);
    if (!os) throw std::runtime_error("cannot open for writing: " + out_path);
    fnorm::write_table_csv(os, table);
}

struct SeedOption {
    std::optional<std::uint64_t> seed;
    std::uint64_t require(const std::string& cmd) const {
        if (!seed)
            throw CLI::RequiredError(cmd + ": --seed is mandatory for stochastic runs");
        return *seed;
    }
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"F-norm calculus: evaluation, inversion, products, geometry and "
                 "convergence diagnostics for norms generated by nonnegative "
                 "integrable distributions"};
    app.require_subcommand(1);

    std::string spec_arg, spec_b_arg, point_arg, out_path, format = "json";
    std::string norm_arg, copula_arg = "independence", metric_arg = "l2";
    std::string sample_path, p1_arg, p2_arg, points_arg, ns_arg = "100,10000", base_arg = "rademacher";
    std::string lambda_arg = "log:0.01:100:512";
    std::string method_arg = "auto";
    double lp_p = 2.0, window = 0.95, sigma = 1.0, factor = 2.0;
    std::size_t mc_n = 1000000, dim = 2, grid_count = 40, m_res = 512, paths = 10000,
                reps = 1000000, converge_grid = 9;
    SeedOption seed;

    auto table_json = [](const fnorm::Table& t) {
        json rows = json::array();
        for (const auto& row : t.rows) {
            json obj;
            for (std::size_t j = 0; j < t.header.size(); ++j) obj[t.header[j]] = row[j];
            rows.push_back(obj);
        }
        return rows;
    };

    auto add_seed = [&seed](CLI::App* cmd) {
        cmd->add_option("--seed", seed.seed, "random seed (mandatory for stochastic methods)");
    };

    // ---- eval ----
    auto* c_eval = app.add_subcommand("eval", "Evaluate an F-norm at a point (length d+1)");
    c_eval->add_option("--spec", spec_arg, "distribution spec: inline JSON, file.json, or name")
        ->required();
    c_eval->add_option("--point", point_arg, "comma-separated coordinates x0,x1,...")->required();
    c_eval->add_option("--method", method_arg, "closed|quad|mc|auto (default auto)");
    c_eval->add_option("--mc-n", mc_n, "Monte Carlo sample size (default 1e6)");
    add_seed(c_eval);

    // ---- validate ----
    auto* c_validate = app.add_subcommand("validate", "Check condition (H) for a spec");
    c_validate->add_option("--spec", spec_arg, "distribution spec")->required();

    // ---- invert ----
    auto* c_invert =
        app.add_subcommand("invert", "Recover F(x) from the norm's right-derivative at t=1");
    c_invert->add_option("--spec", spec_arg, "distribution spec")->required();
    c_invert->add_option("--at", point_arg, "evaluation point x1,...,xd (positive)")->required();
    c_invert->add_option("--method", method_arg, "closed|quad|auto (default auto)");

    // ---- classify ----
    auto* c_classify = app.add_subcommand(
        "classify", "Decide whether a bivariate norm is an F-norm and recover its df");
    c_classify->add_option("--norm", norm_arg,
                           "builtin:lp | builtin:l1 | builtin:scaled-sup | builtin:sup");
    c_classify->add_option("--p", lp_p, "exponent for builtin:lp (default 2)");
    c_classify->add_option("--factor", factor, "factor for builtin:scaled-sup (default 2)");
    c_classify->add_option("--spec", spec_arg, "classify the norm of a 1-D spec instead");

    // ---- extremal ----
    auto* c_extremal =
        app.add_subcommand("extremal", "Extremal coefficient of a copula via its F-norm");
    c_extremal->add_option("--copula", copula_arg, "independence|comonotone (default independence)");
    c_extremal->add_option("--dim", dim, "copula dimension (default 2)");
    c_extremal->add_option("--window", window, "fit window lower end in (0,1), default 0.95");
    c_extremal->add_option("--grid-count", grid_count, "fit grid size (default 40)");

    // ---- estimate ----
    auto* c_estimate = app.add_subcommand("estimate", "Empirical F-norm from a CSV sample");
    c_estimate->add_option("--sample", sample_path, "CSV file, header x1..xd")->required();
    c_estimate->add_option("--point", point_arg, "coordinates x0,...,xd")->required();

    // ---- clt ----
    auto* c_clt = app.add_subcommand(
        "clt", "Covariance of the empirical F-norm limit process at two points");
    c_clt->add_option("--spec", spec_arg, "1-D distribution spec (finite variance)")->required();
    c_clt->add_option("--p1", p1_arg, "first point x,y")->required();
    c_clt->add_option("--p2", p2_arg, "second point x,y")->required();

    // ---- limit-sim ----
    auto* c_limitsim = app.add_subcommand(
        "limit-sim", "Simulate the Brownian-bridge representation of the limit process");
    c_limitsim->add_option("--spec", spec_arg, "1-D distribution spec")->required();
    c_limitsim->add_option("--paths", paths, "number of simulated paths (default 10000)");
    c_limitsim->add_option("--points", points_arg, "probe points \"x,y;x,y\" (default 0.5,1;0.7,1)");
    c_limitsim->add_option("--out", out_path, "CSV output path for per-path values");
    add_seed(c_limitsim);

    // ---- product ----
    auto* c_product = app.add_subcommand("product", "Product of two F-norms");
    c_product->add_option("--specA", spec_arg, "first factor spec")->required();
    c_product->add_option("--specB", spec_b_arg, "second factor spec")->required();
    c_product->add_option("--point", point_arg, "coordinates x0,...,xd")->required();
    c_product->add_option("--method", method_arg, "tonelli|mc|auto (default auto)");
    c_product->add_option("--mc-n", mc_n, "Monte Carlo sample size (default 1e6)");
    add_seed(c_product);

    // ---- logfnorm ----
    auto* c_logf = app.add_subcommand("logfnorm", "Log F-norm of a signed spec (exp transform)");
    c_logf->add_option("--spec", spec_arg, "signed spec: normal|gumbel|rademacher or JSON")
        ->required();
    c_logf->add_option("--point", point_arg, "coordinates x0,...,xd")->required();

    // ---- clt-demo ----
    auto* c_cltdemo = app.add_subcommand(
        "clt-demo", "Central limit theorem as pointwise log F-norm convergence");
    c_cltdemo->add_option("--base", base_arg, "rademacher (default) or normal");
    c_cltdemo->add_option("--ns", ns_arg, "comma-separated sample sizes (default 100,10000)");
    c_cltdemo->add_option("--points", point_arg, "x grid \"x0,x1;x0,x1\" (default 1,1)");
    c_cltdemo->add_option("--reps", reps, "Monte Carlo replications (default 1e6)");
    c_cltdemo->add_option("--out", out_path, "CSV output path");
    c_cltdemo->add_option("--format", format, "json (default) or csv on stdout");
    add_seed(c_cltdemo);

    // ---- sphere ----
    auto* c_sphere =
        app.add_subcommand("sphere", "Trace the positive-orthant unit sphere of an F-norm");
    c_sphere->add_option("--spec", spec_arg, "distribution spec")->required();
    c_sphere->add_option("--m", m_res, "directions per axis (default 512)");
    c_sphere->add_option("--out", out_path, "CSV output path (default stdout)");

    // ---- hr-sphere ----
    auto* c_hrsphere = app.add_subcommand(
        "hr-sphere", "Closed-form Husler-Reiss unit-sphere parametrization");
    c_hrsphere->add_option("--sigma", sigma, "Husler-Reiss sigma > 0 (default 1)");
    c_hrsphere->add_option("--lambda-grid", lambda_arg,
                           "log:lo:hi:count, lin:lo:hi:count, or values (default log:0.01:100:512)");
    c_hrsphere->add_option("--out", out_path, "CSV output path (default stdout)");

    // ---- hausdorff ----
    auto* c_hausdorff =
        app.add_subcommand("hausdorff", "Hausdorff distance between two point clouds");
    c_hausdorff->add_option("--a", spec_arg, "first cloud CSV")->required();
    c_hausdorff->add_option("--b", spec_b_arg, "second cloud CSV")->required();
    c_hausdorff->add_option("--metric", metric_arg, "sup|l1|l2 (default l2)");

    // ---- wasserstein ----
    auto* c_wass = app.add_subcommand(
        "wasserstein", "Order-1 Wasserstein distance between two specs (1-D or products)");
    c_wass->add_option("--a", spec_arg, "first spec")->required();
    c_wass->add_option("--b", spec_b_arg, "second spec")->required();

    // ---- converge ----
    auto* c_converge = app.add_subcommand(
        "converge", "Norm deviation and Wasserstein distance along a spec sequence");
    c_converge->add_option("--sequence", spec_arg, "JSON array of specs (inline or file)")
        ->required();
    c_converge->add_option("--limit", spec_b_arg, "limit spec")->required();
    c_converge->add_option("--corner", point_arg, "probe box corner (default 2,...,2)");
    c_converge->add_option("--grid-count", converge_grid, "probe grid per axis (default 9)");
    c_converge->add_option("--out", out_path, "CSV output path");
    c_converge->add_option("--format", format, "json (default) or csv on stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 64;
    }

    try {
        using namespace fnorm;

        if (*c_eval) {
            DistributionSpec spec = parse_spec_argument(spec_arg);
            auto pt = parse_point(point_arg);
            FNormHandle h = [&]() {
                if (method_arg == "closed") return make_closed_form(spec);
                if (method_arg == "quad") return make_quadrature(spec);
                if (method_arg == "mc")
                    return make_monte_carlo(spec, mc_n, seed.require("eval"));
                return make_auto(spec);
            }();
            EvalResult r = h.eval_detailed(pt);
            json out{{"command", "eval"},     {"spec", spec_to_json(spec)},
                     {"point", pt},           {"value", r.value},
                     {"method", method_name(h.method())}, {"error_bound", r.error}};
            if (h.method() == EvalMethod::MonteCarlo) {
                out["seed"] = *seed.seed;
                out["mc_n"] = mc_n;
            }
            emit(out);
        } else if (*c_validate) {
            DistributionSpec spec = parse_spec_argument(spec_arg);
            HValidationReport rep = spec.validate_h();
            json viols = json::array();
            for (const auto& v : rep.violations)
                viols.push_back({{"coordinate", v.coordinate}, {"reason", v.reason}});
            json out{{"command", "validate"},
                     {"spec", spec_to_json(spec)},
                     {"pass", rep.pass},
                     {"violations", viols}};
            if (!rep.pass) {
                json err{{"error", {{"code", "h-violation"},
                                    {"message", "condition (H) violated"}}},
                         {"report", out}};
                emit(err);
                return 1;
            }
            emit(out);
        } else if (*c_invert) {
            DistributionSpec spec = parse_spec_argument(spec_arg);
            auto at = parse_point(point_arg);
            FNormHandle h = method_arg == "quad" ? make_quadrature(spec)
                          : method_arg == "closed" ? make_closed_form(spec)
                                                   : make_auto(spec);
            double v = invert_to_cdf(h, at);
            emit(json{{"command", "invert"}, {"spec", spec_to_json(spec)}, {"at", at},
                      {"cdf", v}, {"method", method_name(h.method())}});
        } else if (*c_classify) {
            ClassificationReport rep;
            json input;
            if (!norm_arg.empty()) {
                input = norm_arg;
                if (norm_arg == "builtin:lp") {
                    double p = lp_p;
                    rep = classify_2d([p](double a, double b) {
                        return std::pow(std::pow(std::abs(a), p) + std::pow(std::abs(b), p),
                                        1.0 / p);
                    });
                } else if (norm_arg == "builtin:l1") {
                    rep = classify_2d(
                        [](double a, double b) { return std::abs(a) + std::abs(b); });
                } else if (norm_arg == "builtin:sup") {
                    rep = classify_2d(
                        [](double a, double b) { return std::max(std::abs(a), std::abs(b)); });
                } else if (norm_arg == "builtin:scaled-sup") {
                    double f = factor;
                    rep = classify_2d([f](double a, double b) {
                        return f * std::max(std::abs(a), std::abs(b));
                    });
                } else {
                    throw std::invalid_argument("unknown builtin norm: " + norm_arg);
                }
            } else if (!spec_arg.empty()) {
                DistributionSpec spec = parse_spec_argument(spec_arg);
                input = spec_to_json(spec);
                rep = classify_2d(make_auto(spec));
            } else {
                throw std::invalid_argument("classify: provide --norm or --spec");
            }
            json cdf = json::array();
            for (auto& [t, ft] : rep.recovered_cdf) cdf.push_back({t, ft});
            emit(json{{"command", "classify"},
                      {"input", input},
                      {"is_fnorm", rep.is_fnorm},
                      {"reasons", rep.reasons},
                      {"value_at_e0", rep.value_at_e0},
                      {"radial_symmetry_violation", rep.radial_symmetry_violation},
                      {"derivative_monotone", rep.derivative_monotone},
                      {"derivative_limit", rep.derivative_limit},
                      {"mean_matches", rep.mean_matches},
                      {"recovered_mean", rep.recovered_mean},
                      {"first_moment_candidate", rep.first_moment_candidate},
                      {"recovered_cdf", cdf}});
        } else if (*c_extremal) {
            CopulaKind kind;
            if (copula_arg == "independence") kind = CopulaKind::Independence;
            else if (copula_arg == "comonotone") kind = CopulaKind::Comonotone;
            else throw std::invalid_argument("unknown copula: " + copula_arg);
            DistributionSpec spec{Copula{kind, dim}};
            ExtremalFitConfig cfg;
            cfg.window_lo = window;
            cfg.grid_count = grid_count;
            ExtremalFit fit = extremal_coefficient(make_quadrature(spec), cfg);
            emit(json{{"command", "extremal"}, {"copula", copula_arg}, {"dim", dim},
                      {"window", window}, {"theta", fit.theta},
                      {"theta_raw", fit.theta_raw}, {"method", "quad"}});
        } else if (*c_estimate) {
            SampleMatrix sample = read_sample_csv(sample_path);
            auto pt = parse_point(point_arg);
            double v = empirical_eval(sample, pt);
            emit(json{{"command", "estimate"}, {"sample", sample_path}, {"n", sample.size()},
                      {"point", pt}, {"value", v}, {"method", "empirical"}});
        } else if (*c_clt) {
            DistributionSpec spec = parse_spec_argument(spec_arg);
            auto p1 = parse_point(p1_arg), p2 = parse_point(p2_arg);
            double cv = clt_covariance(spec, p1, p2);
            emit(json{{"command", "clt"}, {"spec", spec_to_json(spec)}, {"p1", p1}, {"p2", p2},
                      {"covariance", cv}, {"method", "quad"}});
        } else if (*c_limitsim) {
            DistributionSpec spec = parse_spec_argument(spec_arg);
            if (paths < 2) throw std::invalid_argument("limit-sim: need at least 2 paths");
            std::uint64_t sd = seed.require("limit-sim");
            auto pts = parse_point_pairs(points_arg.empty() ? "0.5,1;0.7,1" : points_arg);
            LimitProcessSimulator sim(spec, pts);
            RandomStream rng(sd);
            Table table;
            for (std::size_t j = 0; j < pts.size(); ++j)
                table.header.push_back("s" + std::to_string(j));
            std::vector<double> mean(pts.size(), 0.0);
            std::vector<double> cov(pts.size() * pts.size(), 0.0);
            for (std::size_t p = 0; p < paths; ++p) {
                auto path = sim.simulate(rng);
                table.rows.push_back(path.values);
                for (std::size_t i = 0; i < pts.size(); ++i) mean[i] += path.values[i];
            }
            for (double& v : mean) v /= static_cast<double>(paths);
            for (const auto& row : table.rows)
                for (std::size_t i = 0; i < pts.size(); ++i)
                    for (std::size_t j = 0; j < pts.size(); ++j)
                        cov[i * pts.size() + j] += (row[i] - mean[i]) * (row[j] - mean[j]);
            for (double& v : cov) v /= static_cast<double>(paths - 1);
            if (!out_path.empty()) write_table(out_path, table);
            json cv = json::array();
            for (std::size_t i = 0; i < pts.size(); ++i) {
                json row = json::array();
                for (std::size_t j = 0; j < pts.size(); ++j) row.push_back(cov[i * pts.size() + j]);
                cv.push_back(row);
            }
            emit(json{{"command", "limit-sim"}, {"spec", spec_to_json(spec)}, {"paths", paths},
                      {"seed", sd}, {"sample_covariance", cv},
                      {"out", out_path.empty() ? json() : json(out_path)},
                      {"method", "mc"}});
        } else if (*c_product) {
            DistributionSpec sa = parse_spec_argument(spec_arg);
            DistributionSpec sb = parse_spec_argument(spec_b_arg);
            auto pt = parse_point(point_arg);
            ProductOptions opt;
            opt.mc_n = mc_n;
            if (method_arg == "tonelli") opt.method = ProductMethod::Tonelli;
            else if (method_arg == "mc") {
                opt.method = ProductMethod::MonteCarlo;
                opt.mc_seed = seed.require("product");
            }
            EvalResult r =
                product_eval_detailed(make_auto(sa), make_auto(sb), pt, opt);
            json out{{"command", "product"}, {"specA", spec_to_json(sa)},
                     {"specB", spec_to_json(sb)}, {"point", pt}, {"value", r.value},
                     {"error_bound", r.error},
                     {"method", opt.method == ProductMethod::MonteCarlo ? "mc" : "tonelli"}};
            if (opt.method == ProductMethod::MonteCarlo) out["seed"] = opt.mc_seed;
            emit(out);
        } else if (*c_logf) {
            SignedSpec spec = parse_signed_spec_argument(spec_arg);
            auto pt = parse_point(point_arg);
            FNormHandle h = make_log_fnorm(spec);
            EvalResult r = h.eval_detailed(pt);
            emit(json{{"command", "logfnorm"}, {"spec", signed_spec_to_json(spec)},
                      {"point", pt}, {"value", r.value}, {"error_bound", r.error},
                      {"method", "log"}});
        } else if (*c_cltdemo) {
            std::uint64_t sd = seed.require("clt-demo");
            SignedSpec base = base_arg == "rademacher"
                                  ? SignedSpec{SRademacher{}}
                                  : SignedSpec{SNormal{0.0, 1.0}};
            std::vector<std::size_t> ns;
            for (double v : parse_point(ns_arg)) ns.push_back(static_cast<std::size_t>(v));
            std::vector<std::vector<double>> grid;
            for (const auto& p : parse_point_pairs(point_arg.empty() ? "1,1" : point_arg))
                grid.push_back({p[0], p[1]});
            auto rows = clt_fnorm_demo(base, ns, grid, reps, sd);
            Table table;
            table.header = {"n", "x0", "x1", "estimate", "limit", "deviation", "std_error"};
            for (const auto& r : rows)
                table.rows.push_back({static_cast<double>(r.n), r.x0, r.x1, r.estimate,
                                      r.limit, r.deviation, r.std_error});
            if (!out_path.empty()) write_table(out_path, table);
            if (format == "csv") {
                if (out_path.empty()) write_table("-", table);
            } else {
                emit(json{{"command", "clt-demo"}, {"base", base_arg},
                          {"seed", sd}, {"reps", reps}, {"rows", table_json(table)},
                          {"out", out_path.empty() ? json() : json(out_path)},
                          {"method", "mc"}});
            }
        } else if (*c_sphere) {
            DistributionSpec spec = parse_spec_argument(spec_arg);
            SpherePointCloud cloud = trace_sphere(make_auto(spec), m_res);
            if (out_path.empty() || out_path == "-") {
                write_cloud_csv(std::cout, cloud);
            } else {
                std::ofstream os(out_path);
                if (!os) throw std::runtime_error("cannot open for writing: " + out_path);
                write_cloud_csv(os, cloud);
                emit(json{{"command", "sphere"}, {"spec", spec_to_json(spec)}, {"m", m_res},
                          {"points", cloud.size()}, {"out", out_path}});
            }
        } else if (*c_hrsphere) {
            auto lambdas = parse_lambda_grid(lambda_arg);
            SpherePointCloud cloud = hr_sphere_param(sigma, lambdas);
            if (out_path.empty() || out_path == "-") {
                write_cloud_csv(std::cout, cloud);
            } else {
                std::ofstream os(out_path);
                if (!os) throw std::runtime_error("cannot open for writing: " + out_path);
                write_cloud_csv(os, cloud);
                emit(json{{"command", "hr-sphere"}, {"sigma", sigma},
                          {"points", cloud.size()}, {"out", out_path}});
            }
        } else if (*c_hausdorff) {
            SpherePointCloud a = read_cloud_csv(spec_arg);
            SpherePointCloud b = read_cloud_csv(spec_b_arg);
            MetricKind metric = metric_arg == "sup" ? MetricKind::Sup
                              : metric_arg == "l1" ? MetricKind::L1
                                                   : MetricKind::L2;
            emit(json{{"command", "hausdorff"}, {"a", spec_arg}, {"b", spec_b_arg},
                      {"metric", metric_arg}, {"distance", hausdorff(a, b, metric)}});
        } else if (*c_wass) {
            DistributionSpec a = parse_spec_argument(spec_arg);
            DistributionSpec b = parse_spec_argument(spec_b_arg);
            emit(json{{"command", "wasserstein"}, {"a", spec_to_json(a)},
                      {"b", spec_to_json(b)}, {"distance", wasserstein_product(a, b)},
                      {"method", "quad"}});
        } else if (*c_converge) {
            json seq_json;
            if (!spec_arg.empty() && spec_arg.front() == '[') {
                seq_json = json::parse(spec_arg);
            } else {
                std::ifstream is(spec_arg);
                if (!is) throw std::invalid_argument("cannot open sequence file: " + spec_arg);
                is >> seq_json;
            }
            std::vector<DistributionSpec> seq;
            for (const auto& j : seq_json) seq.push_back(parse_spec(j));
            DistributionSpec limit = parse_spec_argument(spec_b_arg);
            std::vector<double> corner =
                point_arg.empty() ? std::vector<double>(limit.dim() + 1, 2.0)
                                  : parse_point(point_arg);
            auto rows = wasserstein_equivalence_experiment(seq, limit, corner, converge_grid);
            Table table;
            table.header = {"index", "max_norm_deviation", "wasserstein"};
            for (const auto& r : rows)
                table.rows.push_back(
                    {static_cast<double>(r.index), r.max_norm_deviation, r.wasserstein});
            if (!out_path.empty()) write_table(out_path, table);
            if (format == "csv") {
                if (out_path.empty()) write_table("-", table);
            } else {
                emit(json{{"command", "converge"}, {"limit", spec_to_json(limit)},
                          {"corner", corner}, {"rows", table_json(table)},
                          {"out", out_path.empty() ? json() : json(out_path)},
                          {"method", "quad"}});
            }
        }
        return 0;
    } catch (const fnorm::IntegrationFailure& e) {
        emit(json{{"error", {{"code", "integration-failure"}, {"message", e.what()}}},
                  {"partial", {{"value", e.estimate()}, {"error_bound", e.error_bound()}}}});
        return 2;
    } catch (const fnorm::TailNotIntegrable& e) {
        emit(json{{"error", {{"code", "tail-not-integrable-numerically"}, {"message", e.what()}}}});
        return 2;
    } catch (const fnorm::WidenWindowAdvisory& e) {
        emit(json{{"error", {{"code", "widen-window"}, {"message", e.what()}}}});
        return 2;
    } catch (const fnorm::BridgeUnavailable& e) {
        emit(json{{"error", {{"code", "bridge-representation-unavailable"}, {"message", e.what()}}}});
        return 1;
    } catch (const fnorm::CdfUnavailable& e) {
        emit(json{{"error", {{"code", "cdf-unavailable"}, {"message", e.what()}}}});
        return 1;
    } catch (const fnorm::NotConvex& e) {
        emit(json{{"error", {{"code", "not-convex"}, {"message", e.what()}}}});
        return 1;
    } catch (const fnorm::ProductUnavailable& e) {
        emit(json{{"error", {{"code", "product-unavailable"}, {"message", e.what()}}}});
        return 1;
    } catch (const CLI::RequiredError& e) {
        std::cerr << e.what() << "\n";
        return 64;
    } catch (const std::invalid_argument& e) {
        emit(json{{"error", {{"code", "invalid-argument"}, {"message", e.what()}}}});
        return 1;
    } catch (const std::domain_error& e) {
        emit(json{{"error", {{"code", "domain-error"}, {"message", e.what()}}}});
        return 1;
    } catch (const std::exception& e) {
        emit(json{{"error", {{"code", "runtime"}, {"message", e.what()}}}});
        return 1;
    }
}
