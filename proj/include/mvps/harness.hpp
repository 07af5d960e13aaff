#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mvps/analysis.hpp"
#include "mvps/measure.hpp"
#include "mvps/parallel.hpp"

namespace mvps {

struct StatRecord {
    std::string name;
    double observed = 0.0;
    double target = 0.0;
    double tolerance = 0.0;  // pass iff |observed - target| <= tolerance
    bool pass = false;
};

struct ExperimentReport {
    std::string name;
    std::map<std::string, double> parameters;
    std::uint64_t seed = 0;
    double runtime_seconds = 0.0;
    std::vector<StatRecord> statistics;
    std::vector<std::string> notes;

    bool passed() const;
    StatRecord& add(const std::string& stat_name, double observed, double target,
                    double tolerance);
};

nlohmann::json report_to_json(const ExperimentReport& report);
std::string report_csv_header();
void append_report_csv(std::ostream& os, const ExperimentReport& report);

struct BlockTargets {
    std::vector<double> mean;      // nu(D_k)
    std::vector<double> variance;  // nu(D_k)(1-nu(D_k)) / (theta/m + 1)
};

// First two moments of the directing measure's block masses, which are
// jointly Dirichlet with concentrations (theta/m) nu(D_k).
BlockTargets dirichlet_block_targets(double theta_over_m, const FiniteMeasure& nu,
                                     const Partition& partition);

// Simulates `runs` paths and compares the empirical mean and variance of
// the per-path block occupancy frequencies against the Dirichlet targets
// (IID models: singleton blocks and binomial-scaling variance). Bands are
// 4 standard errors estimated from the replication sample.
ExperimentReport limit_frequency_experiment(const UrnModel& model, std::size_t runs,
                                            std::size_t length, std::uint64_t seed,
                                            ExecMode mode = ExecMode::Parallel);

// Simulates one long path and records the total variation distance between
// the predictive distribution at each checkpoint and the plug-in limit
// built from the final-step block frequencies. Checkpoints at or past
// `settle_step` must be below `settle_delta`; the last must be below
// `final_delta` (engineering defaults; the limit theorem gives no rate).
// An empty checkpoint list selects a default grid ending at `length`.
ExperimentReport tv_convergence_experiment(const UrnModel& model, std::size_t length,
                                           std::vector<std::size_t> checkpoints,
                                           std::uint64_t seed, double settle_delta = 0.02,
                                           double final_delta = 0.01,
                                           std::size_t settle_step = 5000);

// Compares the first two moments of the block masses under truncated
// stick-breaking draws of the directing measure against long-run path
// block frequencies; the routes must also agree with each other within
// combined 4-standard-error bands.
ExperimentReport stickbreaking_vs_frequency_test(const UrnModel& model, std::size_t draws,
                                                 std::size_t runs, std::size_t length,
                                                 std::uint64_t seed, double eps = 1e-8,
                                                 ExecMode mode = ExecMode::Parallel);

// Hybrid [0,1] demonstration: no value outside [0,s) may ever repeat, and
// the fraction of the path inside [0,s) has Beta(theta*s, theta*(1-s))
// moments.
ExperimentReport singular_structure_experiment(double theta, double s, std::size_t length,
                                               std::size_t runs, std::uint64_t seed,
                                               ExecMode mode = ExecMode::Parallel);

}  // namespace mvps
