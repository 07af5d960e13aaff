#include "mvps/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "mvps/rng.hpp"
#include "mvps/samplers.hpp"

namespace mvps {

namespace {

// Neumaier variant of Kahan summation; aggregation order is fixed, so
// results do not depend on the thread count used to fill the slots.
class CompensatedSum {
  public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

struct Moments {
    std::size_t n = 0;
    double mean = 0.0;
    double variance = 0.0;  // unbiased
    double central4 = 0.0;

    double se_mean() const { return std::sqrt(std::max(variance, 0.0) / n); }
    double se_variance() const {
        return std::sqrt(std::max(central4 - variance * variance, 0.0) / n);
    }
};

Moments compute_moments(const std::vector<double>& xs, std::size_t stride = 1,
                        std::size_t offset = 0) {
    Moments m;
    CompensatedSum s1;
    std::size_t n = 0;
    for (std::size_t i = offset; i < xs.size(); i += stride) {
        s1.add(xs[i]);
        ++n;
    }
    m.n = n;
    if (n == 0) return m;
    m.mean = s1.value() / static_cast<double>(n);
    if (n < 2) return m;
    CompensatedSum s2, s4;
    for (std::size_t i = offset; i < xs.size(); i += stride) {
        const double d = xs[i] - m.mean;
        s2.add(d * d);
        s4.add(d * d * d * d);
    }
    m.variance = s2.value() / static_cast<double>(n - 1);
    m.central4 = s4.value() / static_cast<double>(n);
    return m;
}

double band(double se) { return 4.0 * se + 1e-12; }

class Stopwatch {
  public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
            .count();
    }

  private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// Experiments need an exchangeable (or i.i.d.) model plus a partition to
// aggregate on: the verdict's blocks, or singletons / the whole space for
// i.i.d. models where no canonical partition exists.
struct ExperimentSetup {
    UrnModel model;        // pruned
    UrnModel normalized;   // rows scaled to mass 1
    Partition partition;
    double theta_over_m = 0.0;
    bool iid = false;
};

ExperimentSetup prepare(const UrnModel& model, Tolerance tol, bool iid_singletons) {
    const ValidatedModel validated = validate_model(model, tol);
    const Verdict verdict = classify(validated, tol);
    if (verdict.kind == VerdictKind::NotExchangeable)
        throw MissingPartitionError(
            "experiment: model is not exchangeable, no directing-measure targets exist");

    ExperimentSetup setup;
    setup.model = validated.model;
    setup.normalized = *verdict.normalized;
    setup.theta_over_m = verdict.normalized->theta;
    setup.iid = verdict.kind == VerdictKind::IID;
    if (verdict.kind == VerdictKind::Exchangeable) {
        setup.partition = *verdict.partition;
    } else if (iid_singletons) {
        for (std::size_t i = 0; i < setup.model.num_colors(); ++i)
            setup.partition.blocks.push_back({i});
    } else {
        setup.partition = single_block(setup.model.num_colors());
    }
    return setup;
}

std::vector<double> block_masses(const FiniteMeasure& nu, const Partition& partition) {
    std::vector<double> masses(partition.num_blocks(), 0.0);
    for (std::size_t b = 0; b < partition.num_blocks(); ++b)
        for (std::size_t i : partition.blocks[b]) masses[b] += nu.weights[i];
    return masses;
}

}  // namespace

bool ExperimentReport::passed() const {
    for (const StatRecord& s : statistics)
        if (!s.pass) return false;
    return true;
}

StatRecord& ExperimentReport::add(const std::string& stat_name, double observed,
                                  double target, double tolerance) {
    StatRecord rec;
    rec.name = stat_name;
    rec.observed = observed;
    rec.target = target;
    rec.tolerance = tolerance;
    rec.pass = std::fabs(observed - target) <= tolerance;
    statistics.push_back(std::move(rec));
    return statistics.back();
}

nlohmann::json report_to_json(const ExperimentReport& report) {
    nlohmann::json j;
    j["name"] = report.name;
    j["parameters"] = report.parameters;
    j["seed"] = report.seed;
    j["runtime_seconds"] = report.runtime_seconds;
    j["pass"] = report.passed();
    j["statistics"] = nlohmann::json::array();
    for (const StatRecord& s : report.statistics)
        j["statistics"].push_back({{"name", s.name},
                                   {"observed", s.observed},
                                   {"target", s.target},
                                   {"tolerance", s.tolerance},
                                   {"pass", s.pass}});
    j["notes"] = report.notes;
    return j;
}

std::string report_csv_header() {
    return "experiment,seed,statistic,observed,target,tolerance,pass";
}

void append_report_csv(std::ostream& os, const ExperimentReport& report) {
    os.precision(17);
    for (const StatRecord& s : report.statistics)
        os << report.name << "," << report.seed << "," << s.name << "," << s.observed << ","
           << s.target << "," << s.tolerance << "," << (s.pass ? 1 : 0) << "\n";
}

BlockTargets dirichlet_block_targets(double theta_over_m, const FiniteMeasure& nu,
                                     const Partition& partition) {
    partition.block_of(nu.size());  // validates the partition
    BlockTargets targets;
    targets.mean = block_masses(nu, partition);
    targets.variance.resize(targets.mean.size());
    for (std::size_t b = 0; b < targets.mean.size(); ++b)
        targets.variance[b] =
            targets.mean[b] * (1.0 - targets.mean[b]) / (theta_over_m + 1.0);
    return targets;
}

ExperimentReport limit_frequency_experiment(const UrnModel& model, std::size_t runs,
                                            std::size_t length, std::uint64_t seed,
                                            ExecMode mode) {
    Stopwatch timer;
    const ExperimentSetup setup = prepare(model, {}, /*iid_singletons=*/true);
    const std::size_t nblocks = setup.partition.num_blocks();
    const std::vector<std::size_t> owner =
        setup.partition.block_of(setup.model.num_colors());

    std::vector<double> freqs(runs * nblocks, 0.0);
    parallel_for(runs, mode, [&](std::size_t run) {
        RngStream rng(seed, run);
        std::vector<std::size_t> counts(nblocks, 0);
        stream_path(setup.model, length, rng,
                    [&](std::size_t, std::size_t color, const std::vector<double>&) {
                        ++counts[owner[color]];
                    });
        for (std::size_t b = 0; b < nblocks; ++b)
            freqs[run * nblocks + b] =
                static_cast<double>(counts[b]) / static_cast<double>(length);
    });

    const BlockTargets targets =
        dirichlet_block_targets(setup.theta_over_m, setup.model.nu, setup.partition);

    ExperimentReport report;
    report.name = "limit_frequency";
    report.seed = seed;
    report.parameters = {{"runs", static_cast<double>(runs)},
                         {"length", static_cast<double>(length)},
                         {"theta", setup.model.theta}};
    for (std::size_t b = 0; b < nblocks; ++b) {
        const Moments m = compute_moments(freqs, nblocks, b);
        const double var_target =
            setup.iid ? targets.mean[b] * (1.0 - targets.mean[b]) / length
                      : targets.variance[b];
        report.add("block" + std::to_string(b) + "_freq_mean", m.mean, targets.mean[b],
                   band(m.se_mean()));
        if (runs >= 2)
            report.add("block" + std::to_string(b) + "_freq_var", m.variance, var_target,
                       band(m.se_variance()));
    }
    if (setup.iid)
        report.notes.push_back(
            "i.i.d. model: frequencies concentrate at binomial scaling, no Dirichlet limit");
    report.runtime_seconds = timer.seconds();
    return report;
}

ExperimentReport tv_convergence_experiment(const UrnModel& model, std::size_t length,
                                           std::vector<std::size_t> checkpoints,
                                           std::uint64_t seed, double settle_delta,
                                           double final_delta, std::size_t settle_step) {
    Stopwatch timer;
    const ExperimentSetup setup = prepare(model, {}, /*iid_singletons=*/false);
    const std::size_t k = setup.model.num_colors();
    const std::size_t nblocks = setup.partition.num_blocks();
    const std::vector<std::size_t> owner = setup.partition.block_of(k);

    if (checkpoints.empty()) {
        for (double f : {0.01, 0.025, 0.05, 0.1, 0.25, 0.5, 0.75, 1.0}) {
            const auto step = static_cast<std::size_t>(f * static_cast<double>(length));
            if (step >= 1) checkpoints.push_back(step);
        }
    }
    std::sort(checkpoints.begin(), checkpoints.end());
    checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()),
                      checkpoints.end());
    if (checkpoints.empty() || checkpoints.back() > length)
        throw DimensionMismatchError("tv_convergence: checkpoints must lie in [1, length]");

    RngStream rng(seed, 0);
    std::vector<std::size_t> colors;
    colors.reserve(length);
    stream_path(setup.model, length, rng,
                [&](std::size_t, std::size_t color, const std::vector<double>&) {
                    colors.push_back(color);
                });

    // One incremental replay: predictive after exactly t observations,
    // captured at each checkpoint, plus final block frequencies.
    std::vector<double> urn(k);
    for (std::size_t j = 0; j < k; ++j) urn[j] = setup.model.theta * setup.model.nu.weights[j];
    double total = setup.model.theta;
    std::vector<std::vector<double>> at_checkpoint;
    std::size_t next = 0;
    for (std::size_t t = 0; t <= length; ++t) {
        if (next < checkpoints.size() && t == checkpoints[next]) {
            std::vector<double> predictive(k);
            for (std::size_t j = 0; j < k; ++j) predictive[j] = urn[j] / total;
            at_checkpoint.push_back(std::move(predictive));
            ++next;
        }
        if (t == length) break;
        const auto& row = setup.model.kernel.rows[colors[t]];
        for (std::size_t j = 0; j < k; ++j) urn[j] += row[j];
        total += setup.model.kernel.row_mass(colors[t]);
    }

    std::vector<double> block_freq(nblocks, 0.0);
    for (std::size_t c : colors) block_freq[owner[c]] += 1.0;
    for (double& f : block_freq) f /= static_cast<double>(length);

    std::vector<double> plug_in(k, 0.0);
    const std::vector<double> masses = block_masses(setup.model.nu, setup.partition);
    for (std::size_t b = 0; b < nblocks; ++b)
        for (std::size_t i : setup.partition.blocks[b])
            plug_in[i] = block_freq[b] * setup.model.nu.weights[i] / masses[b];

    ExperimentReport report;
    report.name = "tv_convergence";
    report.seed = seed;
    report.parameters = {{"length", static_cast<double>(length)},
                         {"settle_delta", settle_delta},
                         {"final_delta", final_delta},
                         {"settle_step", static_cast<double>(settle_step)}};
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
        const double tv = tv_distance(at_checkpoint[i], plug_in);
        double tolerance = 1.0;  // informational checkpoint
        if (setup.iid)
            tolerance = 1e-12;  // predictive is nu at every step, exactly
        else if (i + 1 == checkpoints.size())
            tolerance = final_delta;
        else if (checkpoints[i] >= settle_step)
            tolerance = settle_delta;
        report.add("tv_step_" + std::to_string(checkpoints[i]), tv, 0.0, tolerance);
    }
    report.notes.push_back(
        "settle/final thresholds are engineering defaults; the limit theorem asserts a.s. "
        "convergence in total variation without a rate");
    report.runtime_seconds = timer.seconds();
    return report;
}

ExperimentReport stickbreaking_vs_frequency_test(const UrnModel& model, std::size_t draws,
                                                 std::size_t runs, std::size_t length,
                                                 std::uint64_t seed, double eps,
                                                 ExecMode mode) {
    Stopwatch timer;
    const ExperimentSetup setup = prepare(model, {}, /*iid_singletons=*/false);
    const std::size_t nblocks = setup.partition.num_blocks();
    const std::vector<std::size_t> owner =
        setup.partition.block_of(setup.model.num_colors());

    std::vector<double> stick_mass(draws * nblocks, 0.0);
    parallel_for(draws, mode, [&](std::size_t d) {
        RngStream rng(seed, d);
        const RandomMeasureDraw draw =
            stick_breaking(setup.theta_over_m, setup.normalized, eps, rng);
        for (std::size_t i = 0; i < setup.model.num_colors(); ++i)
            stick_mass[d * nblocks + owner[i]] += draw.composite[i];
    });

    std::vector<double> path_freq(runs * nblocks, 0.0);
    parallel_for(runs, mode, [&](std::size_t run) {
        RngStream rng(seed, draws + run);  // disjoint streams from route (a)
        std::vector<std::size_t> counts(nblocks, 0);
        stream_path(setup.model, length, rng,
                    [&](std::size_t, std::size_t color, const std::vector<double>&) {
                        ++counts[owner[color]];
                    });
        for (std::size_t b = 0; b < nblocks; ++b)
            path_freq[run * nblocks + b] =
                static_cast<double>(counts[b]) / static_cast<double>(length);
    });

    const BlockTargets targets =
        dirichlet_block_targets(setup.theta_over_m, setup.model.nu, setup.partition);

    ExperimentReport report;
    report.name = "stickbreaking_vs_frequency";
    report.seed = seed;
    report.parameters = {{"draws", static_cast<double>(draws)},
                         {"runs", static_cast<double>(runs)},
                         {"length", static_cast<double>(length)},
                         {"eps", eps},
                         {"theta_over_m", setup.theta_over_m}};
    for (std::size_t b = 0; b < nblocks; ++b) {
        const Moments ms = compute_moments(stick_mass, nblocks, b);
        const Moments mf = compute_moments(path_freq, nblocks, b);
        const std::string tag = "block" + std::to_string(b);
        report.add(tag + "_mean_stick", ms.mean, targets.mean[b], band(ms.se_mean()));
        report.add(tag + "_mean_freq", mf.mean, targets.mean[b], band(mf.se_mean()));
        report.add(tag + "_mean_gap", ms.mean - mf.mean, 0.0,
                   band(std::hypot(ms.se_mean(), mf.se_mean())));
        if (draws >= 2 && runs >= 2) {
            const double var_target = setup.iid ? 0.0 : targets.variance[b];
            report.add(tag + "_var_stick", ms.variance, var_target,
                       band(ms.se_variance()));
            const double freq_var_target =
                setup.iid ? targets.mean[b] * (1.0 - targets.mean[b]) / length
                          : targets.variance[b];
            report.add(tag + "_var_freq", mf.variance, freq_var_target,
                       band(mf.se_variance()));
            if (!setup.iid)
                report.add(tag + "_var_gap", ms.variance - mf.variance, 0.0,
                           band(std::hypot(ms.se_variance(), mf.se_variance())));
        }
    }
    report.runtime_seconds = timer.seconds();
    return report;
}

ExperimentReport singular_structure_experiment(double theta, double s, std::size_t length,
                                               std::size_t runs, std::uint64_t seed,
                                               ExecMode mode) {
    Stopwatch timer;
    if (!(s > 0.0) || !(s < 1.0))
        throw InvalidSError("singular_structure: s must lie in (0,1)");
    if (!(theta > 0.0)) throw InvalidThetaError("singular_structure: theta must be positive");

    std::vector<double> frac_in_s(runs, 0.0);
    std::vector<double> repeats_outside(runs, 0.0);
    std::vector<double> upper_repeats(runs, 0.0);

    parallel_for(runs, mode, [&](std::size_t run) {
        RngStream rng(seed, run);
        const HybridPath path = hybrid_example_path(theta, s, length, rng);

        std::size_t in_s = 0;
        std::unordered_map<double, std::size_t> counts;
        counts.reserve(length * 2);
        for (double v : path.values) {
            if (v < s) ++in_s;
            ++counts[v];
        }
        double bad = 0.0;
        for (const auto& [value, count] : counts)
            if (count >= 2 && value >= s) bad += static_cast<double>(count - 1);

        // independent recount restricted to [s,1)
        std::unordered_set<double> seen;
        double upper_bad = 0.0;
        for (double v : path.values) {
            if (v < s) continue;
            if (!seen.insert(v).second) upper_bad += 1.0;
        }

        frac_in_s[run] = static_cast<double>(in_s) / static_cast<double>(length);
        repeats_outside[run] = bad;
        upper_repeats[run] = upper_bad;
    });

    CompensatedSum total_bad, total_upper;
    for (double b : repeats_outside) total_bad.add(b);
    for (double b : upper_repeats) total_upper.add(b);
    const Moments frac = compute_moments(frac_in_s);

    // P(S) under the directing measure is Beta(theta*s, theta*(1-s)).
    const double mean_target = s;
    const double var_target = s * (1.0 - s) / (theta + 1.0);

    ExperimentReport report;
    report.name = "singular_structure";
    report.seed = seed;
    report.parameters = {{"theta", theta},
                         {"s", s},
                         {"length", static_cast<double>(length)},
                         {"runs", static_cast<double>(runs)}};
    report.add("repeat_violations_outside_S", total_bad.value(), 0.0, 0.0);
    report.add("upper_range_exact_repeats", total_upper.value(), 0.0, 0.0);
    report.add("frac_in_S_mean", frac.mean, mean_target, band(frac.se_mean()));
    if (runs >= 2)
        report.add("frac_in_S_var", frac.variance, var_target, band(frac.se_variance()));
    report.runtime_seconds = timer.seconds();
    return report;
}

}  // namespace mvps
