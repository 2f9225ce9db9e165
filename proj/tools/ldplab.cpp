// ldplab: command-line front end.
//
// Exit codes: 0 ok, 2 usage or malformed input, 3 numerical failure,
// 4 infeasible experiment.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ldplab/configurations.hpp"
#include "ldplab/densities.hpp"
#include "ldplab/errors.hpp"
#include "ldplab/parallel.hpp"
#include "ldplab/projections.hpp"
#include "ldplab/rates.hpp"
#include "ldplab/report_io.hpp"
#include "ldplab/samplers.hpp"
#include "ldplab/verify.hpp"

#ifndef LDPLAB_BUILD_ID
#define LDPLAB_BUILD_ID "unknown"
#endif

using namespace ldplab;
using nlohmann::ordered_json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitInfeasible = 4;

// Usage-level failure raised by the front end itself.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw UsageError("cannot open " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) {
        throw UsageError("cannot write " + path);
    }
    out << text;
}

ordered_json real_json(double x) {
    return std::isfinite(x) ? ordered_json(x) : ordered_json(format_real(x));
}

double parse_p(const std::string& text) {
    if (text == "inf" || text == "infinity") {
        return std::numeric_limits<double>::infinity();
    }
    try {
        std::size_t used = 0;
        const double p = std::stod(text, &used);
        if (used != text.size()) {
            throw UsageError("malformed p: " + text);
        }
        return p;
    } catch (const std::logic_error&) {
        throw UsageError("malformed p: " + text);
    }
}

// [[a, b], [c, d]] or a flat [a, b] (one row).
DenseMatrix matrix_from_json(const nlohmann::json& doc) {
    if (!doc.is_array() || doc.empty()) {
        throw UsageError("matrix must be a non-empty JSON array");
    }
    std::vector<std::vector<double>> rows;
    try {
        if (doc.front().is_array()) {
            rows = doc.get<std::vector<std::vector<double>>>();
        } else {
            rows.push_back(doc.get<std::vector<double>>());
        }
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("malformed matrix: ") + e.what());
    }
    const std::size_t cols = rows.front().size();
    DenseMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols) {
            throw UsageError("malformed matrix: ragged rows");
        }
        for (std::size_t j = 0; j < cols; ++j) {
            if (!std::isfinite(rows[i][j])) {
                throw UsageError("malformed matrix: non-finite entry");
            }
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
    }
    return m;
}

DenseMatrix matrix_from_text(const std::string& text) {
    try {
        return matrix_from_json(nlohmann::json::parse(text));
    } catch (const nlohmann::json::parse_error& e) {
        throw UsageError(std::string("malformed matrix JSON: ") + e.what());
    }
}

// One CSV line of a sampled draw, reshaped to rows x (len / rows).
DenseMatrix matrix_from_csv_line(const std::string& path, int line_index, int rows) {
    std::ifstream in(path);
    if (!in) {
        throw UsageError("cannot open " + path);
    }
    std::string line;
    for (int i = 0; i <= line_index; ++i) {
        if (!std::getline(in, line)) {
            throw UsageError("CSV has fewer than " + std::to_string(line_index + 1) + " rows");
        }
    }
    std::vector<double> values;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        try {
            std::size_t used = 0;
            values.push_back(std::stod(cell, &used));
            if (used != cell.size()) {
                throw UsageError("malformed CSV cell: " + cell);
            }
        } catch (const std::logic_error&) {
            throw UsageError("malformed CSV cell: " + cell);
        }
    }
    if (rows < 1 || values.empty() || values.size() % static_cast<std::size_t>(rows) != 0) {
        throw UsageError("CSV row length is not a multiple of --rows");
    }
    const auto cols = static_cast<Eigen::Index>(values.size() / static_cast<std::size_t>(rows));
    DenseMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            m(i, j) = values[static_cast<std::size_t>(i * cols + j)];
        }
    }
    return m;
}

std::string csv_row(const DenseMatrix& m) {
    std::string row;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (!row.empty()) {
                row += ',';
            }
            row += format_real(m(i, j));
        }
    }
    return row + '\n';
}

std::string cloud_csv(const EmpiricalMeasure& cloud) {
    std::string out;
    for (Eigen::Index j = 0; j < cloud.points().cols(); ++j) {
        out += csv_row(cloud.points().col(j).transpose());
    }
    return out;
}

void write_sidecar(const std::string& output, const std::string& command, const ordered_json& config) {
    const ordered_json doc{{"command", command}, {"build_id", LDPLAB_BUILD_ID}, {"config", config}};
    write_file(output + ".json", doc.dump(2) + "\n");
}

// ------------------------------------------------------------------ sample
struct SampleArgs {
    std::string dist;
    int k = 1;
    int n = 1;
    int count = 1;
    std::string p = "2";
    std::uint64_t seed = 0;
    std::string output = "samples.csv";
};

int cmd_sample(const SampleArgs& a) {
    if (a.count < 1) {
        throw UsageError("count must be >= 1");
    }
    if (a.k < 1 || a.n < 1) {
        throw UsageError("k and n must be >= 1");
    }
    const bool needs_k_le_n = a.dist == "stiefel" || a.dist == "wishart";
    if (needs_k_le_n && a.k > a.n) {
        throw UsageError("k must be ≤ n");
    }
    const double p = parse_p(a.p);
    SeededRng rng(a.seed);
    std::string csv;
    for (int i = 0; i < a.count; ++i) {
        SeededRng draw = rng.substream(static_cast<std::uint64_t>(i));
        if (a.dist == "stiefel") {
            csv += csv_row(haar_stiefel(draw, a.k, a.n));
        } else if (a.dist == "orthogonal") {
            csv += csv_row(haar_orthogonal(draw, a.n));
        } else if (a.dist == "wishart") {
            csv += csv_row(wishart(draw, a.k, a.n).matrix());
        } else if (a.dist == "pgaussian") {
            const auto xs = p_gaussian(draw, PGaussianParams(p), a.n);
            csv += csv_row(Eigen::Map<const DenseMatrix>(xs.data(), 1, a.n));
        } else if (a.dist == "lpball") {
            const Vector x = uniform_lp_ball(draw, p, a.n, std::pow(static_cast<double>(a.n), 1.0 / p));
            csv += csv_row(x.transpose());
        } else {
            throw UsageError("unknown distribution " + a.dist);
        }
    }
    write_file(a.output, csv);
    write_sidecar(a.output, "sample",
                  {{"dist", a.dist}, {"k", a.k}, {"n", a.n}, {"p", a.p}, {"count", a.count}, {"seed", a.seed}});
    return 0;
}

// ------------------------------------------------------------------ density
struct DensityArgs {
    std::string kind;
    std::string matrix;
    double x = 0.0;
    int k = 1;
    int ell = 1;
    int n = 3;
    std::string p = "2";
};

int cmd_density(const DensityArgs& a) {
    double value = 0.0;
    if (a.kind == "inverted-t") {
        value = log_inverted_t_density(matrix_from_text(a.matrix), a.n);
    } else if (a.kind == "corner") {
        value = log_corner_density(matrix_from_text(a.matrix), a.k, a.ell, a.n);
    } else if (a.kind == "wishart") {
        value = log_wishart_density(SymmetricPSD(matrix_from_text(a.matrix)), a.k, a.n);
    } else if (a.kind == "pgaussian") {
        value = log_p_gaussian_density(a.x, parse_p(a.p));
    } else if (a.kind == "pth-power") {
        value = log_pth_power_density(a.x, parse_p(a.p));
    } else if (a.kind == "mvgamma") {
        value = log_multivariate_gamma(a.k, a.x);
    } else if (a.kind == "sigma2") {
        value = sigma_p_squared(parse_p(a.p));
    } else {
        throw UsageError("unknown density kind " + a.kind);
    }
    std::cout << ordered_json{{"kind", a.kind}, {"value", real_json(value)}}.dump(2) << "\n";
    return 0;
}

// ------------------------------------------------------------------ rate
struct RateArgs {
    std::string matrix;
    std::string matrix_file;
    int rows = 1;
    int line = 0;
    std::string mode = "truncated";
    int k_max = 0;
};

int cmd_rate(const RateArgs& a) {
    DenseMatrix m;
    if (!a.matrix.empty()) {
        m = matrix_from_text(a.matrix);
    } else if (!a.matrix_file.empty()) {
        const bool csv = a.matrix_file.size() >= 4 && a.matrix_file.substr(a.matrix_file.size() - 4) == ".csv";
        m = csv ? matrix_from_csv_line(a.matrix_file, a.line, a.rows) : matrix_from_text(read_file(a.matrix_file));
    } else {
        throw UsageError("provide --matrix or --matrix-file");
    }
    ordered_json out;
    RateValue rate;
    if (a.mode == "orthogonal") {
        const auto report = rate_orthogonal_truncated(m, a.k_max > 0 ? a.k_max : static_cast<int>(m.rows()));
        rate.value = report.partial_rates.back();
        rate.boundary = report.boundary;
        out["report"] = ordered_json::parse(truncation_report_to_json(report));
    } else if (a.mode == "truncated") {
        const auto cols = ColumnList::from_matrix(m);
        const auto result = rate_truncated(cols, static_cast<int>(cols.size()), 0.0);
        rate = result.rate;
        out["report"] = ordered_json::parse(truncation_report_to_json(result.report));
    } else {
        throw UsageError("unknown rate mode " + a.mode);
    }
    ordered_json head{{"rate", real_json(rate.value)},
                      {"display", rate.is_infinite() ? (rate.boundary ? "+inf (boundary)" : "+inf")
                                                     : format_real(rate.value)},
                      {"boundary", rate.boundary}};
    head.update(out);
    std::cout << head.dump(2) << "\n";
    return 0;
}

// ------------------------------------------------------------------ project
struct ProjectArgs {
    std::string matrix;
    std::string law = "inf";
    double sigma2 = 0.0;
    int count = 1000;
    std::uint64_t seed = 0;
    std::string output = "projected.csv";
};

ProductLaw product_law_from(const std::string& name) {
    if (name == "rademacher") {
        return ProductLaw::rademacher();
    }
    return ProductLaw::p_gaussian(PGaussianParams(parse_p(name)));
}

int cmd_project(const ProjectArgs& a) {
    const DenseMatrix m = matrix_from_text(a.matrix);
    const ProductLaw law = product_law_from(a.law);
    const double sigma2 = a.sigma2 > 0.0 ? a.sigma2 : law.variance();
    const ProjectedLaw projected(ColumnList::from_matrix(m), sigma2, law);
    const auto cloud = sample_projected_law(SeededRng(a.seed), projected, a.count);
    write_file(a.output, cloud_csv(cloud));
    write_sidecar(a.output, "project",
                  {{"matrix", nlohmann::json::parse(a.matrix)},
                   {"law", a.law},
                   {"sigma2", sigma2},
                   {"count", a.count},
                   {"seed", a.seed}});
    return 0;
}

// ------------------------------------------------------------------ compare
struct CompareArgs {
    int k = 1;
    double p = 1.0;
    std::vector<int> n_list{20, 80, 320};
    int count = 20000;
    int grid = 50;
    std::uint64_t seed = 0;
};

int cmd_compare(const CompareArgs& a) {
    const auto est = compare_ball_vs_product(SeededRng(a.seed), a.k, a.p, a.n_list, a.count, a.grid);
    ordered_json rows = ordered_json::array();
    for (const auto& [n, d] : est) {
        rows.push_back({{"n", n}, {"levy_prokhorov", real_json(d)}});
    }
    std::cout << ordered_json{{"k", a.k}, {"p", a.p}, {"count", a.count}, {"estimates", rows}}.dump(2) << "\n";
    return 0;
}

// ------------------------------------------------------------------ verify
const std::set<std::string> kConfigKeys{"schema_version", "seed", "command", "output_path", "parameters"};
const std::set<std::string> kCornerKeys{"kind", "k", "ell", "target", "radius", "n_values", "samples_per_n", "method"};
const std::set<std::string> kConfigurationKeys{"kind", "k", "target", "r", "rho", "n_values", "samples_per_n"};

void reject_unknown(const nlohmann::json& obj, const std::set<std::string>& allowed, const std::string& where) {
    if (!obj.is_object()) {
        throw UsageError(where + " must be a JSON object");
    }
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.contains(key)) {
            throw UsageError("unknown field '" + key + "' in " + where);
        }
    }
}

int cmd_verify(const std::string& config_path, const std::string& output_override) {
    nlohmann::json cfg;
    try {
        cfg = nlohmann::json::parse(read_file(config_path));
    } catch (const nlohmann::json::parse_error& e) {
        throw UsageError(std::string("malformed config: ") + e.what());
    }
    reject_unknown(cfg, kConfigKeys, "config");
    try {
        if (cfg.at("schema_version").get<int>() != 1) {
            throw UsageError("schema_version must be 1");
        }
        if (cfg.contains("command") && cfg["command"].get<std::string>() != "verify") {
            throw UsageError("config command must be 'verify'");
        }
        const auto seed = cfg.at("seed").get<std::uint64_t>();
        const std::string output = !output_override.empty() ? output_override
                                                            : cfg.value("output_path", std::string("verify_report"));
        const auto& params = cfg.at("parameters");
        const std::string kind = params.value("kind", std::string("corner"));
        const auto n_values = params.at("n_values").get<std::vector<int>>();
        if (n_values.empty()) {
            throw UsageError("n_values must not be empty");
        }
        SlopeReport report;
        if (kind == "corner") {
            reject_unknown(params, kCornerKeys, "parameters");
            LdpExperiment exp;
            exp.k = params.value("k", 1);
            exp.ell = params.value("ell", 1);
            exp.target = matrix_from_json(params.at("target"));
            exp.radius = params.at("radius").get<double>();
            exp.n_values = n_values;
            exp.samples_per_n = params.value("samples_per_n", 100000);
            const std::string method = params.value("method", std::string("quadrature"));
            if (method == "quadrature") {
                exp.method = EstimationMethod::Quadrature;
            } else if (method == "monte_carlo") {
                exp.method = EstimationMethod::MonteCarlo;
            } else {
                throw UsageError("method must be 'quadrature' or 'monte_carlo'");
            }
            report = run_ldp_corner(SeededRng(seed), exp);
        } else if (kind == "configuration") {
            reject_unknown(params, kConfigurationKeys, "parameters");
            const auto target = config_from_json(params.at("target").dump());
            report = run_ldp_configuration(SeededRng(seed), params.value("k", target.dim()), target,
                                           params.at("r").get<double>(), params.at("rho").get<double>(), n_values,
                                           params.value("samples_per_n", 1000000));
        } else {
            throw UsageError("parameters.kind must be 'corner' or 'configuration'");
        }
        ordered_json doc = ordered_json::parse(slope_report_to_json(report));
        doc["build_id"] = LDPLAB_BUILD_ID;
        doc["config"] = ordered_json::parse(cfg.dump());
        write_file(output + ".json", doc.dump(2) + "\n");
        write_file(output + ".csv", slope_report_to_csv(report));
        std::cout << "fitted_slope " << format_real(report.fitted_slope) << "\nrate_reference "
                  << format_real(report.rate_reference.value) << "\nrelative_gap "
                  << format_real(report.relative_gap) << "\n";
        return 0;
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("malformed config: ") + e.what());
    }
}

// ------------------------------------------------------------------ dickey / clt
int print_distribution(const DistributionReport& report, double alpha) {
    ordered_json doc = ordered_json::parse(distribution_report_to_json(report));
    doc["alpha"] = alpha;
    doc["passed"] = report.passed(alpha);
    std::cout << doc.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ldplab: Haar/Stiefel sampling, exact densities, rate functions and LDP checks"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "Worker threads (LDPLAB_THREADS overrides)")->check(CLI::NonNegativeNumber);

    SampleArgs sample;
    auto* s = app.add_subcommand("sample", "Draw samples and write CSV plus a JSON sidecar");
    s->add_option("--dist", sample.dist, "stiefel|orthogonal|wishart|pgaussian|lpball")
        ->required()
        ->check(CLI::IsMember({"stiefel", "orthogonal", "wishart", "pgaussian", "lpball"}));
    s->add_option("--k", sample.k, "Rows");
    s->add_option("--n", sample.n, "Columns / dimension / degrees of freedom");
    s->add_option("--p", sample.p, "p for pgaussian/lpball ('inf' for uniform)");
    s->add_option("--count", sample.count, "Number of draws");
    s->add_option("--seed", sample.seed, "Seed");
    s->add_option("--output", sample.output, "CSV path; the sidecar is <path>.json");

    DensityArgs density;
    auto* d = app.add_subcommand("density", "Evaluate a log-density");
    d->add_option("--kind", density.kind, "inverted-t|corner|wishart|pgaussian|pth-power|mvgamma|sigma2")->required();
    d->add_option("--matrix", density.matrix, "Matrix as JSON");
    d->add_option("--x", density.x, "Scalar argument");
    d->add_option("--k", density.k, "k");
    d->add_option("--ell", density.ell, "ell");
    d->add_option("--n", density.n, "n (degrees of freedom)");
    d->add_option("--p", density.p, "p");

    RateArgs rate;
    auto* r = app.add_subcommand("rate", "Evaluate the rate function of a matrix");
    r->add_option("--matrix", rate.matrix, "Matrix as JSON");
    r->add_option("--matrix-file", rate.matrix_file, "JSON file, or CSV from 'sample'");
    r->add_option("--rows", rate.rows, "Rows k when reading a CSV line");
    r->add_option("--line", rate.line, "Zero-based CSV line");
    r->add_option("--mode", rate.mode, "truncated|orthogonal")->check(CLI::IsMember({"truncated", "orthogonal"}));
    r->add_option("--k-max", rate.k_max, "Leading row blocks for --mode orthogonal");

    ProjectArgs project;
    auto* pr = app.add_subcommand("project", "Sample a projected law sum C_j Y_j + sigma (Id - AA*)^{1/2} N");
    pr->add_option("--matrix", project.matrix, "A as JSON (k x m)")->required();
    pr->add_option("--law", project.law, "p, 'inf' (uniform) or 'rademacher'");
    pr->add_option("--sigma2", project.sigma2, "Noise variance (default: law variance)");
    pr->add_option("--count", project.count, "Number of draws");
    pr->add_option("--seed", project.seed, "Seed");
    pr->add_option("--output", project.output, "CSV path");

    CompareArgs compare;
    auto* c = app.add_subcommand("compare", "Levy-Prokhorov estimate, ball vs product projections");
    c->add_option("--k", compare.k, "k (<= 3)");
    c->add_option("--p", compare.p, "p in [1, inf)");
    c->add_option("--n-list", compare.n_list, "Increasing n values")->delimiter(',');
    c->add_option("--count", compare.count, "Samples per cloud (>= 1000)");
    c->add_option("--grid", compare.grid, "Radii per centre");
    c->add_option("--seed", compare.seed, "Seed");

    std::string config_path;
    std::string verify_output;
    auto* v = app.add_subcommand("verify", "Run an LDP experiment from a JSON config");
    v->add_option("config", config_path, "ExperimentConfig JSON")->required();
    v->add_option("--output", verify_output, "Output prefix (overrides output_path)");

    int dk = 1, dm = 1, dn = 10, dsamples = 100000, doffset = 0;
    std::uint64_t dseed = 0;
    auto* dk_cmd = app.add_subcommand("dickey", "Haar corner vs Wishart construction, entry-wise KS");
    dk_cmd->add_option("--k", dk, "k");
    dk_cmd->add_option("--m", dm, "m");
    dk_cmd->add_option("--n", dn, "n");
    dk_cmd->add_option("--samples", dsamples, "Samples");
    dk_cmd->add_option("--dof-offset", doffset, "Shift of the degrees of freedom (negative control)");
    dk_cmd->add_option("--seed", dseed, "Seed");

    int ck = 1, cn = 500, csamples = 10000;
    std::string cp = "1";
    std::uint64_t cseed = 0;
    auto* clt = app.add_subcommand("clt", "Marginals of a projected l_p ball vs N(0, sigma_p^2)");
    clt->add_option("--k", ck, "k");
    clt->add_option("--p", cp, "p ('inf' for the cube)");
    clt->add_option("--n", cn, "n");
    clt->add_option("--samples", csamples, "Samples");
    clt->add_option("--seed", cseed, "Seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }
    if (threads > 0) {
        set_thread_count(threads);
    }

    try {
        if (s->parsed()) {
            return cmd_sample(sample);
        }
        if (d->parsed()) {
            return cmd_density(density);
        }
        if (r->parsed()) {
            return cmd_rate(rate);
        }
        if (pr->parsed()) {
            return cmd_project(project);
        }
        if (c->parsed()) {
            return cmd_compare(compare);
        }
        if (v->parsed()) {
            return cmd_verify(config_path, verify_output);
        }
        if (dk_cmd->parsed()) {
            return print_distribution(run_dickey_check(SeededRng(dseed), dk, dm, dn, dsamples, doffset), 0.01);
        }
        if (clt->parsed()) {
            return print_distribution(run_clt_check(SeededRng(cseed), ck, parse_p(cp), cn, csamples), 0.01);
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const InfeasibleExperiment& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const NumericalFailure& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const RecoveryFailure& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
