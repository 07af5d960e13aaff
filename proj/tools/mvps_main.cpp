// mvps - command line front end: classify reinforcement kernels, simulate
// predictive paths, draw the directing random measure, run exact
// exchangeability checks and the Monte Carlo verification suite.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mvps/harness.hpp"
#include "mvps/io.hpp"
#include "mvps/oracle.hpp"
#include "mvps/rational.hpp"
#include "mvps/rng.hpp"
#include "mvps/samplers.hpp"

namespace {

constexpr std::uint64_t kDefaultSeed = 1729;  // fixed so repeated runs are identical

constexpr int kExitOk = 0;
constexpr int kExitVerificationFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitModelError = 3;

std::uint64_t parse_seed(const std::string& text) {
    if (text == "random") {
        std::random_device rd;
        return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    }
    return std::stoull(text);
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw mvps::Error("cannot write " + path.string());
    out << text;
}

int report_outcome(const std::vector<mvps::ExperimentReport>& reports,
                   const std::string& subcommand, std::uint64_t seed,
                   const std::string& out_dir) {
    bool all_pass = true;
    nlohmann::json bundle = nlohmann::json::array();
    std::ostringstream csv;
    csv << mvps::report_csv_header() << "\n";
    for (const auto& report : reports) {
        bundle.push_back(mvps::report_to_json(report));
        mvps::append_report_csv(csv, report);
        const bool pass = report.passed();
        all_pass = all_pass && pass;
        std::cout << report.name << ": " << (pass ? "PASS" : "FAIL") << " ("
                  << report.statistics.size() << " statistics, "
                  << report.runtime_seconds << " s)\n";
        for (const auto& stat : report.statistics)
            if (!stat.pass)
                std::cout << "  FAIL " << stat.name << ": observed " << stat.observed
                          << ", target " << stat.target << " +/- " << stat.tolerance
                          << "\n";
    }
    std::filesystem::create_directories(out_dir);
    const std::string stem = subcommand + "-" + std::to_string(seed);
    write_text_file(std::filesystem::path(out_dir) / (stem + ".json"), bundle.dump(2) + "\n");
    write_text_file(std::filesystem::path(out_dir) / (stem + ".csv"), csv.str());
    return all_pass ? kExitOk : kExitVerificationFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"measure-valued Polya urn sequences: exchangeability analysis, "
                 "sampling and Monte Carlo verification"};
    app.require_subcommand(1);

    std::string model_path;
    std::string seed_text = std::to_string(kDefaultSeed);
    std::string out_dir = ".";

    auto* classify_cmd = app.add_subcommand("classify", "print the exchangeability verdict");
    classify_cmd->add_option("model", model_path, "model JSON file")->required();

    auto* simulate_cmd = app.add_subcommand("simulate", "sample a predictive path as CSV");
    std::size_t sim_n = 100;
    simulate_cmd->add_option("model", model_path)->required();
    simulate_cmd->add_option("--n", sim_n, "path length")->check(CLI::PositiveNumber);
    simulate_cmd->add_option("--seed", seed_text, "64-bit seed, or 'random'");

    auto* prior_cmd =
        app.add_subcommand("prior", "stick-breaking draws of the directing measure");
    std::size_t prior_draws = 10;
    double prior_eps = 1e-8;
    prior_cmd->add_option("model", model_path)->required();
    prior_cmd->add_option("--draws", prior_draws)->check(CLI::PositiveNumber);
    prior_cmd->add_option("--eps", prior_eps, "stick truncation threshold")
        ->check(CLI::Range(1e-300, 0.999999));
    prior_cmd->add_option("--seed", seed_text);

    auto* oracle_cmd =
        app.add_subcommand("oracle", "exact finite-depth exchangeability check");
    std::size_t oracle_depth = 4;
    std::size_t oracle_budget = mvps::kDefaultPathBudget;
    double oracle_tol = 1e-9;
    oracle_cmd->add_option("model", model_path)->required();
    oracle_cmd->add_option("--depth", oracle_depth)->check(CLI::PositiveNumber);
    oracle_cmd->add_option("--budget", oracle_budget, "max enumerated paths");
    oracle_cmd->add_option("--tol", oracle_tol, "residual tolerance (double mode)");

    auto* verify_cmd =
        app.add_subcommand("verify", "run the Monte Carlo verification suite");
    std::string suite = "all";
    std::size_t verify_runs = 2000, verify_length = 1000, verify_draws = 2000,
                verify_tv_length = 10000;
    verify_cmd->add_option("model", model_path)->required();
    verify_cmd->add_option("--suite", suite, "all | frequency | tv | stick")
        ->check(CLI::IsMember({"all", "frequency", "tv", "stick"}));
    verify_cmd->add_option("--runs", verify_runs)->check(CLI::PositiveNumber);
    verify_cmd->add_option("--length", verify_length)->check(CLI::PositiveNumber);
    verify_cmd->add_option("--draws", verify_draws)->check(CLI::PositiveNumber);
    verify_cmd->add_option("--tv-length", verify_tv_length)->check(CLI::PositiveNumber);
    verify_cmd->add_option("--seed", seed_text);
    verify_cmd->add_option("--out-dir", out_dir, "directory for report files");

    auto* demo_cmd = app.add_subcommand(
        "demo-singular", "hybrid [0,1] demonstration of the singular/continuous split");
    double demo_theta = 1.0, demo_s = 0.5;
    std::size_t demo_length = 5000, demo_runs = 1000;
    demo_cmd->add_option("--theta", demo_theta)->check(CLI::PositiveNumber);
    demo_cmd->add_option("--s", demo_s, "split point in (0,1)")
        ->check(CLI::Range(1e-9, 1.0 - 1e-9));
    demo_cmd->add_option("--length", demo_length)->check(CLI::PositiveNumber);
    demo_cmd->add_option("--runs", demo_runs)->check(CLI::PositiveNumber);
    demo_cmd->add_option("--seed", seed_text);
    demo_cmd->add_option("--out-dir", out_dir);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        const std::uint64_t seed = parse_seed(seed_text);

        if (*classify_cmd) {
            const mvps::LoadedModel loaded = mvps::load_model_file(model_path);
            const mvps::Verdict verdict = mvps::classify(loaded.model);
            std::cout << mvps::verdict_to_json(verdict).dump(2) << "\n";
            return kExitOk;
        }

        if (*simulate_cmd) {
            const mvps::LoadedModel loaded = mvps::load_model_file(model_path);
            const mvps::ValidatedModel validated = mvps::validate_model(loaded.model);
            mvps::RngStream rng(seed, 0);
            const mvps::PathSample path = mvps::sample_path(validated.model, sim_n, rng);
            mvps::write_path_csv(std::cout, validated.model, path);
            return kExitOk;
        }

        if (*prior_cmd) {
            const mvps::LoadedModel loaded = mvps::load_model_file(model_path);
            const mvps::Verdict verdict = mvps::classify(loaded.model);
            if (verdict.kind == mvps::VerdictKind::NotExchangeable) {
                std::cerr << "model is not exchangeable; the stick-breaking "
                             "representation of the directing measure does not apply\n";
                return kExitModelError;
            }
            const mvps::UrnModel& normalized = *verdict.normalized;
            for (std::size_t d = 0; d < prior_draws; ++d) {
                mvps::RngStream rng(seed, d);
                const mvps::RandomMeasureDraw draw = mvps::stick_breaking(
                    normalized.theta, normalized, prior_eps, rng);
                std::cout << mvps::draw_to_json(draw).dump() << "\n";
            }
            return kExitOk;
        }

        if (*oracle_cmd) {
            const mvps::LoadedModel loaded = mvps::load_model_file(model_path);
            nlohmann::json out;
            if (loaded.exact) {
                const auto result = mvps::exchangeability_depth_check(
                    *loaded.exact, oracle_depth, 0.0, oracle_budget);
                out = mvps::depth_check_to_json(result, oracle_depth, true);
            } else {
                const auto result = mvps::exchangeability_depth_check(
                    mvps::to_basic(loaded.model), oracle_depth, oracle_tol, oracle_budget);
                out = mvps::depth_check_to_json(result, oracle_depth, false);
            }
            std::cout << out.dump(2) << "\n";
            return kExitOk;
        }

        if (*verify_cmd) {
            const mvps::LoadedModel loaded = mvps::load_model_file(model_path);
            std::vector<mvps::ExperimentReport> reports;
            if (suite == "all" || suite == "frequency")
                reports.push_back(mvps::limit_frequency_experiment(
                    loaded.model, verify_runs, verify_length, seed));
            if (suite == "all" || suite == "tv")
                reports.push_back(mvps::tv_convergence_experiment(loaded.model,
                                                                  verify_tv_length, {},
                                                                  seed));
            if (suite == "all" || suite == "stick")
                reports.push_back(mvps::stickbreaking_vs_frequency_test(
                    loaded.model, verify_draws, verify_runs, verify_length, seed));
            return report_outcome(reports, "verify", seed, out_dir);
        }

        if (*demo_cmd) {
            std::vector<mvps::ExperimentReport> reports;
            reports.push_back(mvps::singular_structure_experiment(demo_theta, demo_s,
                                                                  demo_length, demo_runs,
                                                                  seed));
            return report_outcome(reports, "demo-singular", seed, out_dir);
        }
    } catch (const mvps::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitModelError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
