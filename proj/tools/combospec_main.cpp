// Command-line front end: spectrum tracking on a grid, PCA reports, and
// Pareto sweeps over the built-in problem catalog.
//
// Exit codes: 0 success / all checks passed, 1 checks failed (bound
// violation or non-convergence), 2 usage or input error.

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "combospec/combospec.hpp"

namespace {

using combospec::Matrix;
using combospec::Vector;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitChecksFailed = 1;
constexpr int kExitInputError = 2;

std::string hex_digest(std::uint64_t h) {
    char buf[19];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

/// FNV-1a over the raw bytes of a file, for the manifest.
std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return hex_digest(combospec::fnv1a64(buf.str()));
}

unsigned resolve_thread_count(std::optional<unsigned> flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("COMBOSPEC_THREADS")) {
        char* end = nullptr;
        const unsigned long v = std::strtoul(env, &end, 10);
        if (end == env || *end != '\0') {
            throw std::invalid_argument("COMBOSPEC_THREADS is not a number: '" +
                                        std::string(env) + "'");
        }
        return static_cast<unsigned>(v);
    }
    return 1;
}

void write_json(const std::string& path, const json& j) {
    auto out = combospec::open_output(path);
    out << j.dump(2) << '\n';
}

std::string out_path(const std::string& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    return (std::filesystem::path(dir) / name).string();
}

struct Stopwatch {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

int cmd_spectrum(const std::string& x1_path, const std::string& x2_path, std::size_t k,
                 std::size_t dense, const std::string& mode_name,
                 const std::vector<double>& query_alphas, const std::string& out_dir,
                 std::uint64_t seed, std::optional<unsigned> threads_flag) {
    const Stopwatch clock;
    const unsigned threads = resolve_thread_count(threads_flag);
    if (k < 1) throw std::invalid_argument("K must be >= 1");

    combospec::IntervalMode mode;
    if (mode_name == "proposition") {
        mode = combospec::IntervalMode::proposition;
    } else if (mode_name == "nearest") {
        mode = combospec::IntervalMode::nearest;
    } else {
        throw std::invalid_argument("--mode must be 'proposition' or 'nearest'");
    }

    const Matrix x1 = combospec::load_matrix_csv(x1_path);
    const Matrix x2 = combospec::load_matrix_csv(x2_path);
    const auto pair = combospec::make_combo_pair(x1, x2);

    const auto table = combospec::build_table(pair, k, threads);
    combospec::write_table_csv(out_path(out_dir, "table.csv"), table);

    const auto report = combospec::verify_bound(pair, k, dense, threads);
    combospec::write_verify_csv(out_path(out_dir, "verify.csv"), report);

    std::vector<combospec::EigenIntervals> queries;
    queries.reserve(query_alphas.size());
    for (const double alpha : query_alphas) {
        queries.push_back(combospec::predict_intervals(table, pair, alpha, mode));
    }
    combospec::write_intervals_csv(out_path(out_dir, "intervals.csv"), queries);

    write_json(out_path(out_dir, "bound.json"),
               json{{"sigma1_x1", pair.sigma1_x1},
                    {"sigma1_x2", pair.sigma1_x2},
                    {"k", k},
                    {"bound", table.bound},
                    {"dense_samples", dense},
                    {"violations", report.violations},
                    {"max_slack", report.max_slack}});

    write_json(out_path(out_dir, "manifest.json"),
               json{{"command", "spectrum"},
                    {"version", std::string(combospec::kVersion)},
                    {"config",
                     {{"x1", x1_path},
                      {"x2", x2_path},
                      {"k", k},
                      {"dense", dense},
                      {"mode", mode_name},
                      {"alpha", query_alphas},
                      {"out", out_dir},
                      {"threads", threads}}},
                    {"inputs", {{"x1", file_digest(x1_path)}, {"x2", file_digest(x2_path)}}},
                    {"seed", seed},
                    {"duration_seconds", clock.seconds()}});

    if (report.violations > 0) {
        std::cerr << "bound violated at " << report.violations << " sample(s)\n";
        return kExitChecksFailed;
    }
    return kExitOk;
}

int cmd_pca(const std::string& x_path, std::size_t d, const std::string& out_dir,
            std::uint64_t seed) {
    const Stopwatch clock;
    const Matrix x = combospec::load_matrix_csv(x_path);
    const auto model = combospec::fit(x, d);

    Matrix mean_row(1, model.mean.size());
    mean_row.set_row(0, model.mean);
    combospec::save_matrix_csv(out_path(out_dir, "mean.csv"), mean_row);
    combospec::save_matrix_csv(out_path(out_dir, "directions.csv"), model.directions);

    Matrix eig_col(model.c_eigenvalues.size(), 1);
    for (std::size_t i = 0; i < model.c_eigenvalues.size(); ++i) {
        eig_col(i, 0) = model.c_eigenvalues[i];
    }
    combospec::save_matrix_csv(out_path(out_dir, "eigenvalues.csv"), eig_col);

    const double mse = combospec::reconstruction_mse(x, d);
    double discarded = 0.0;
    for (std::size_t i = d; i < model.c_eigenvalues.size(); ++i) {
        discarded += model.c_eigenvalues[i];
    }

    json report{{"d", d},
                {"degenerate", model.degenerate},
                {"reconstruction_mse", mse},
                {"identity_residual", std::abs(mse - discarded)}};
    if (model.degenerate) {
        report["explained_variance"] = json::array();
    } else {
        report["explained_variance"] = combospec::explained_variance(model);
    }
    write_json(out_path(out_dir, "report.json"), report);

    write_json(out_path(out_dir, "manifest.json"),
               json{{"command", "pca"},
                    {"version", std::string(combospec::kVersion)},
                    {"config", {{"x", x_path}, {"d", d}, {"out", out_dir}}},
                    {"inputs", {{"x", file_digest(x_path)}}},
                    {"seed", seed},
                    {"duration_seconds", clock.seconds()}});
    return kExitOk;
}

int cmd_pareto(const std::string& config_path, const std::string& out_override,
               std::optional<std::uint64_t> seed_override,
               std::optional<unsigned> threads_flag) {
    const Stopwatch clock;
    std::ifstream in(config_path);
    if (!in) throw std::invalid_argument("cannot open '" + config_path + "'");
    json config;
    try {
        config = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("malformed config '" + config_path + "': " + e.what());
    }

    const std::string problem_name = config.value("problem", std::string());
    if (problem_name.empty()) {
        throw std::invalid_argument("config must name a \"problem\"");
    }
    const std::uint64_t seed =
        seed_override ? *seed_override : config.value("seed", std::uint64_t{0});
    const std::string mode = config.value("mode", std::string("exact"));
    if (mode != "exact" && mode != "reduced") {
        throw std::invalid_argument("config \"mode\" must be 'exact' or 'reduced'");
    }
    const std::string out_dir =
        !out_override.empty() ? out_override : config.value("out", std::string("."));
    const unsigned threads = threads_flag || !config.contains("threads")
                                 ? resolve_thread_count(threads_flag)
                                 : config.at("threads").get<unsigned>();

    Vector alphas;
    if (config.contains("alphas")) {
        alphas = config.at("alphas").get<Vector>();
        for (const double a : alphas) {
            if (!(a >= 0.0 && a <= 1.0)) {
                throw std::invalid_argument("config \"alphas\" entries must lie in [0, 1]");
            }
        }
    } else {
        const std::size_t count = config.value("alpha_count", std::size_t{11});
        if (count < 2) throw std::invalid_argument("config \"alpha_count\" must be >= 2");
        for (std::size_t i = 0; i < count; ++i) {
            alphas.push_back(static_cast<double>(i) / static_cast<double>(count - 1));
        }
    }
    if (alphas.empty()) throw std::invalid_argument("config \"alphas\" must be non-empty");

    const combospec::BenchProblem problem = combospec::make_problem(problem_name, seed);

    const json opt = config.value("optimizer", json::object());
    combospec::OptimizerConfig cfg;
    cfg.step_size = opt.value("step_size", 0.1);
    cfg.max_iters = opt.value("max_iters", std::size_t{5000});
    cfg.grad_tol = opt.value("grad_tol", 1e-8);
    cfg.n_starts = opt.value("n_starts", std::size_t{3});
    cfg.backtracking = opt.value("backtracking", true);
    cfg.seed = seed;
    const double start_lo = opt.value("start_lo", -2.0);
    const double start_hi = opt.value("start_hi", 2.0);
    cfg.start_box = combospec::uniform_box(problem.pair.dim, start_lo, start_hi);

    std::optional<combospec::ReducedGradientConfig> reduction;
    const json red = config.value("reduction", json::object());
    if (mode == "reduced") {
        combospec::ReducedGradientConfig r;
        r.m_samples = red.value("m_samples", std::size_t{16});
        r.d = red.value("d", std::size_t{1});
        r.include_mean = red.value("include_mean", true);
        const double sample_lo = red.value("sample_lo", -2.0);
        const double sample_hi = red.value("sample_hi", 2.0);
        r.sample_box = combospec::uniform_box(problem.pair.dim, sample_lo, sample_hi);
        reduction = r;
    }

    const auto sweep = combospec::pareto_sweep(problem.pair, alphas, cfg, reduction, threads);
    combospec::write_pareto_csv(out_path(out_dir, "pareto.csv"), sweep.points);

    double max_gap = 0.0;
    const bool has_oracle = problem.weighted_minimizer != nullptr && problem.minimizer_unique;
    if (has_oracle) {
        auto out = combospec::open_output(out_path(out_dir, "oracle_gap.csv"));
        out << "alpha,gap\n";
        for (const auto& pt : sweep.points) {
            const Vector target = problem.weighted_minimizer(pt.alpha);
            double sq = 0.0;
            for (std::size_t i = 0; i < target.size(); ++i) {
                const double diff = pt.p_star[i] - target[i];
                sq += diff * diff;
            }
            const double gap = std::sqrt(sq);
            max_gap = std::max(max_gap, gap);
            out << combospec::format_full(pt.alpha) << ',' << combospec::format_full(gap) << '\n';
        }
    }

    std::size_t not_converged = 0;
    for (const auto& pt : sweep.points) {
        if (!pt.converged) ++not_converged;
    }

    json resolved{{"problem", problem_name},
                  {"seed", seed},
                  {"mode", mode},
                  {"alphas", alphas},
                  {"out", out_dir},
                  {"threads", threads},
                  {"optimizer",
                   {{"step_size", cfg.step_size},
                    {"max_iters", cfg.max_iters},
                    {"grad_tol", cfg.grad_tol},
                    {"n_starts", cfg.n_starts},
                    {"backtracking", cfg.backtracking},
                    {"start_lo", start_lo},
                    {"start_hi", start_hi}}}};
    if (reduction) {
        resolved["reduction"] = {{"m_samples", reduction->m_samples},
                                 {"d", reduction->d},
                                 {"include_mean", reduction->include_mean},
                                 {"sample_lo", red.value("sample_lo", -2.0)},
                                 {"sample_hi", red.value("sample_hi", 2.0)}};
    }
    json manifest{{"command", "pareto"},
                  {"version", std::string(combospec::kVersion)},
                  {"config", resolved},
                  {"inputs", {{"config", file_digest(config_path)}}},
                  {"seed", seed},
                  {"duration_seconds", clock.seconds()}};
    if (has_oracle) manifest["max_oracle_gap"] = max_gap;
    write_json(out_path(out_dir, "manifest.json"), manifest);

    if (not_converged > 0) {
        std::cerr << not_converged << " alpha value(s) did not converge\n";
        return kExitChecksFailed;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gram-spectrum grids, PCA reports, and Pareto sweeps"};
    app.require_subcommand(1);

    // spectrum
    std::string x1_path, x2_path;
    std::size_t k = 10;
    std::size_t dense = 101;
    std::string mode = "proposition";
    std::vector<double> query_alphas;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    std::optional<unsigned> threads;

    CLI::App* spectrum = app.add_subcommand(
        "spectrum", "Track Gram eigenvalues of a matrix combination over a grid");
    spectrum->add_option("x1", x1_path, "CSV matrix X1 (the alpha = 1 endpoint)")->required();
    spectrum->add_option("x2", x2_path, "CSV matrix X2 (the alpha = 0 endpoint)")->required();
    spectrum->add_option("--k", k, "grid resolution K (nodes at j/K)");
    spectrum->add_option("--dense", dense, "dense verification samples");
    spectrum->add_option("--mode", mode, "interval mode: proposition|nearest");
    spectrum->add_option("--alpha", query_alphas, "query alphas for interval prediction")
        ->delimiter(',');
    spectrum->add_option("--out", out_dir, "output directory");
    spectrum->add_option("--seed", seed, "seed recorded in the manifest");
    spectrum->add_option("--threads", threads, "worker threads (default: COMBOSPEC_THREADS or 1)");

    // pca
    std::string x_path;
    std::size_t d = 1;
    CLI::App* pca = app.add_subcommand("pca", "Principal component report for one data matrix");
    pca->add_option("x", x_path, "CSV data matrix (rows are samples)")->required();
    pca->add_option("--d", d, "number of retained directions");
    pca->add_option("--out", out_dir, "output directory");
    pca->add_option("--seed", seed, "seed recorded in the manifest");

    // pareto
    std::string config_path;
    std::string pareto_out;
    std::optional<std::uint64_t> pareto_seed;
    CLI::App* pareto = app.add_subcommand("pareto", "Weighted-sum sweep over a catalog problem");
    pareto->add_option("config", config_path, "JSON config file")->required();
    pareto->add_option("--out", pareto_out, "output directory (overrides config)");
    pareto->add_option("--seed", pareto_seed, "seed (overrides config)");
    pareto->add_option("--threads", threads, "worker threads (default: COMBOSPEC_THREADS or 1)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitInputError;
    }

    try {
        if (spectrum->parsed()) {
            return cmd_spectrum(x1_path, x2_path, k, dense, mode, query_alphas, out_dir, seed,
                                threads);
        }
        if (pca->parsed()) {
            return cmd_pca(x_path, d, out_dir, seed);
        }
        return cmd_pareto(config_path, pareto_out, pareto_seed, threads);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInputError;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitChecksFailed;
    }
}
