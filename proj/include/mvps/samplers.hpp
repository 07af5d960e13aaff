#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "mvps/analysis.hpp"
#include "mvps/measure.hpp"
#include "mvps/rng.hpp"

namespace mvps {

// Inverse CDF of Beta(1, alpha) at u: 1 - (1-u)^(1/alpha).
double beta_stick(double u, double alpha);

struct PathSample {
    std::vector<std::size_t> colors;
    // trace[t] is the predictive distribution the (t+1)-th draw was taken
    // from; trace[0] = nu.
    std::vector<std::vector<double>> trace;
};

// Walks the predictive recursion
//   X_1 ~ nu,  X_{t+1} ~ (theta nu + sum_{i<=t} R_{X_i}) / (theta + sum_i R_{X_i}(X))
// calling on_step(t, color, predictive) with the distribution used at each
// step. The urn composition is accumulated incrementally.
template <class Rng, class F>
void stream_path(const UrnModel& model, std::size_t n, Rng& rng, F&& on_step) {
    const std::size_t k = model.num_colors();
    std::vector<double> urn(k);
    for (std::size_t j = 0; j < k; ++j) urn[j] = model.theta * model.nu.weights[j];
    double total = model.theta;

    std::vector<double> predictive(k);
    for (std::size_t t = 0; t < n; ++t) {
        for (std::size_t j = 0; j < k; ++j) predictive[j] = urn[j] / total;
        const std::size_t color = sample_categorical(predictive, rng);
        on_step(t, color, predictive);
        const auto& row = model.kernel.rows[color];
        for (std::size_t j = 0; j < k; ++j) urn[j] += row[j];
        total += model.kernel.row_mass(color);
    }
}

template <class Rng>
PathSample sample_path(const UrnModel& model, std::size_t n, Rng& rng) {
    PathSample out;
    out.colors.reserve(n);
    out.trace.reserve(n);
    stream_path(model, n, rng,
                [&](std::size_t, std::size_t color, const std::vector<double>& predictive) {
                    out.colors.push_back(color);
                    out.trace.push_back(predictive);
                });
    return out;
}

// One truncated stick-breaking realization of the directing random measure
// P~ = sum_j V_j R_{Z_j}.
struct RandomMeasureDraw {
    std::vector<double> sticks;        // W_j
    std::vector<double> weights;       // V_j = W_j prod_{i<j} (1-W_i)
    std::vector<std::size_t> sources;  // Z_j ~ nu
    double truncation_mass = 0.0;      // 1 - sum V_j
    std::vector<double> composite;     // sum_j V_j row(Z_j), renormalized
};

// Expects a model with rows normalized to mass 1; stops once the remaining
// stick mass prod(1-W_i) drops below eps and renormalizes the composite by
// sum V_j (bias O(eps)).
template <class Rng>
RandomMeasureDraw stick_breaking(double theta_over_m, const UrnModel& normalized_model,
                                 double eps, Rng& rng) {
    if (!(theta_over_m > 0.0))
        throw InvalidAlphaError("stick_breaking: theta/m must be positive");
    if (!(eps > 0.0) || !(eps < 1.0))
        throw NonPositiveEpsError("stick_breaking: eps must lie in (0,1)");

    const std::size_t k = normalized_model.num_colors();
    RandomMeasureDraw out;
    out.composite.assign(k, 0.0);

    double remaining = 1.0;
    double v_total = 0.0;
    while (remaining >= eps) {
        const double w = beta_stick(rng.next_u01(), theta_over_m);
        const double v = w * remaining;
        const std::size_t z = sample_categorical(normalized_model.nu.weights, rng);
        out.sticks.push_back(w);
        out.weights.push_back(v);
        out.sources.push_back(z);
        const auto& row = normalized_model.kernel.rows[z];
        for (std::size_t j = 0; j < k; ++j) out.composite[j] += v * row[j];
        v_total += v;
        remaining *= 1.0 - w;
    }
    out.truncation_mass = remaining;
    if (v_total > 0.0)
        for (double& c : out.composite) c /= v_total;
    return out;
}

struct MixturePath {
    std::vector<std::size_t> labels;  // block index per step
    std::vector<std::size_t> colors;
};

// Hierarchical sampler: labels follow a Blackwell-MacQueen urn over the
// blocks with parameters (theta/m, nu*), nu*(b) = nu(D_b); colors are then
// drawn from nu conditioned on the labelled block. Marginally the colors
// are distributed as sample_path on the same model.
template <class Rng>
MixturePath dp_mixture_path(const UrnModel& model, const Partition& partition,
                            double theta_over_m, std::size_t n, Rng& rng) {
    const std::size_t nblocks = partition.num_blocks();
    std::vector<double> block_nu(nblocks, 0.0);
    std::vector<std::vector<double>> block_conditionals(nblocks);
    for (std::size_t b = 0; b < nblocks; ++b) {
        for (std::size_t i : partition.blocks[b]) block_nu[b] += model.nu.weights[i];
        std::vector<double> cond;
        cond.reserve(partition.blocks[b].size());
        for (std::size_t i : partition.blocks[b])
            cond.push_back(model.nu.weights[i] / block_nu[b]);
        block_conditionals[b] = std::move(cond);
    }

    MixturePath out;
    out.labels.reserve(n);
    out.colors.reserve(n);
    std::vector<double> label_urn = block_nu;
    for (double& w : label_urn) w *= theta_over_m;
    double label_total = theta_over_m;

    for (std::size_t t = 0; t < n; ++t) {
        const std::size_t b = sample_categorical(label_urn, label_total, rng);
        const std::size_t within = sample_categorical(block_conditionals[b], rng);
        out.labels.push_back(b);
        out.colors.push_back(partition.blocks[b][within]);
        label_urn[b] += 1.0;
        label_total += 1.0;
    }
    return out;
}

// Convenience overload driven by a classifier verdict.
template <class Rng>
MixturePath dp_mixture_path(const UrnModel& model, const Verdict& verdict, std::size_t n,
                            Rng& rng) {
    if (!verdict.partition || !verdict.m)
        throw MissingPartitionError("dp_mixture_path: verdict carries no partition");
    return dp_mixture_path(model, *verdict.partition, model.theta / *verdict.m, n, rng);
}

struct HybridPath {
    std::vector<double> values;
};

// The singular-case demonstration on [0,1]: nu = Uniform[0,1], S = [0,s),
// R_x = delta_x for x in S and R_x = nu(.|S^c) = Uniform[s,1) otherwise.
// Step t+1 draws fresh from nu with probability theta/(theta+t), else picks
// a past observation uniformly and samples its reinforcement; copies are
// exact bit copies, so repeats can only occur inside S.
template <class Rng>
HybridPath hybrid_example_path(double theta, double s, std::size_t n, Rng& rng) {
    if (!(theta > 0.0)) throw InvalidThetaError("hybrid_example_path: theta must be positive");
    if (!(s > 0.0) || !(s < 1.0))
        throw InvalidSError("hybrid_example_path: s must lie in (0,1)");

    HybridPath out;
    out.values.reserve(n);
    for (std::size_t t = 0; t < n; ++t) {
        const double pick_fresh = theta / (theta + static_cast<double>(t));
        double value;
        if (t == 0 || rng.next_u01() < pick_fresh) {
            value = rng.next_u01();
        } else {
            const std::size_t i =
                static_cast<std::size_t>(rng.next_u01() * static_cast<double>(t));
            const double past = out.values[i];
            value = past < s ? past : s + (1.0 - s) * rng.next_u01();
        }
        out.values.push_back(value);
    }
    return out;
}

}  // namespace mvps
