#pragma once

// Randomized model generators for the property suites. Everything is
// driven by RngStream so a failing instance can be replayed from its seed.

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "mvps/analysis.hpp"
#include "mvps/measure.hpp"
#include "mvps/rng.hpp"

namespace gen {

inline std::vector<double> random_prob_vector(std::size_t k, mvps::RngStream& rng,
                                              double floor = 0.05) {
    std::vector<double> w(k);
    double total = 0.0;
    for (double& x : w) {
        x = floor + rng.next_u01();
        total += x;
    }
    for (double& x : w) x /= total;
    return w;
}

inline mvps::Partition random_partition(std::size_t k, mvps::RngStream& rng) {
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = k; i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.next_u01() * i);
        std::swap(order[i - 1], order[j]);
    }
    mvps::Partition p;
    p.blocks.emplace_back();
    for (std::size_t i = 0; i < k; ++i) {
        p.blocks.back().push_back(order[i]);
        if (i + 1 < k && rng.next_u01() < 0.5) p.blocks.emplace_back();
    }
    for (auto& block : p.blocks) std::sort(block.begin(), block.end());
    return p;
}

inline mvps::UrnModel assemble(double theta, const std::vector<double>& nu,
                               const std::vector<std::vector<double>>& rows) {
    mvps::UrnModel m;
    m.theta = theta;
    for (std::size_t i = 0; i < nu.size(); ++i)
        m.space.labels.push_back("c" + std::to_string(i));
    m.nu.weights = nu;
    m.kernel.rows = rows;
    return m;
}

// Exchangeable by construction: rows are m * nu(.|D_b) for the block D_b
// containing the color. A single-block partition yields an i.i.d. model.
inline mvps::UrnModel make_block_model(const std::vector<double>& nu,
                                       const mvps::Partition& partition, double m,
                                       double theta) {
    const std::size_t k = nu.size();
    std::vector<std::vector<double>> rows(k, std::vector<double>(k, 0.0));
    for (const auto& block : partition.blocks) {
        double mass = 0.0;
        for (std::size_t i : block) mass += nu[i];
        for (std::size_t i : block)
            for (std::size_t j : block) rows[i][j] = m * nu[j] / mass;
    }
    return assemble(theta, nu, rows);
}

// Rows m_i * nu: i.i.d. for any (possibly distinct) positive masses m_i.
inline mvps::UrnModel make_iid_model(const std::vector<double>& nu,
                                     const std::vector<double>& masses, double theta) {
    const std::size_t k = nu.size();
    std::vector<std::vector<double>> rows(k, std::vector<double>(k, 0.0));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) rows[i][j] = masses[i] * nu[j];
    return assemble(theta, nu, rows);
}

// Arbitrary strictly positive kernel; almost never exchangeable.
inline mvps::UrnModel random_kernel_model(std::size_t k, mvps::RngStream& rng) {
    const std::vector<double> nu = random_prob_vector(k, rng);
    std::vector<std::vector<double>> rows(k);
    for (auto& row : rows) {
        row.resize(k);
        for (double& a : row) a = 0.05 + 2.0 * rng.next_u01();
    }
    return assemble(0.25 + 3.0 * rng.next_u01(), nu, rows);
}

// Multiplies one positive kernel entry by (1 + magnitude); large enough
// magnitudes knock a model out of the exchangeable class.
inline mvps::UrnModel perturb(const mvps::UrnModel& model, double magnitude,
                              mvps::RngStream& rng) {
    mvps::UrnModel out = model;
    const std::size_t k = model.num_colors();
    for (int attempt = 0; attempt < 64; ++attempt) {
        const std::size_t i = static_cast<std::size_t>(rng.next_u01() * k);
        const std::size_t j = static_cast<std::size_t>(rng.next_u01() * k);
        if (out.kernel.rows[i][j] > 0.0) {
            out.kernel.rows[i][j] *= 1.0 + magnitude;
            return out;
        }
    }
    out.kernel.rows[0][0] += magnitude;
    return out;
}

inline mvps::UrnModel relabel(const mvps::UrnModel& model,
                              const std::vector<std::size_t>& perm) {
    // perm[i] = new position of color i
    const std::size_t k = model.num_colors();
    mvps::UrnModel out;
    out.theta = model.theta;
    out.space.labels.resize(k);
    out.nu.weights.resize(k);
    out.kernel.rows.assign(k, std::vector<double>(k, 0.0));
    for (std::size_t i = 0; i < k; ++i) {
        out.space.labels[perm[i]] = model.space.labels[i];
        out.nu.weights[perm[i]] = model.nu.weights[i];
        for (std::size_t j = 0; j < k; ++j)
            out.kernel.rows[perm[i]][perm[j]] = model.kernel.rows[i][j];
    }
    return out;
}

inline std::vector<std::size_t> random_permutation(std::size_t k, mvps::RngStream& rng) {
    std::vector<std::size_t> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = k; i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.next_u01() * i);
        std::swap(perm[i - 1], perm[j]);
    }
    return perm;
}

inline mvps::UrnModel scale(const mvps::UrnModel& model, double c) {
    mvps::UrnModel out = model;
    out.theta *= c;
    for (auto& row : out.kernel.rows)
        for (double& a : row) a *= c;
    return out;
}

// The mixed population used by the classifier/oracle agreement suites:
// block kernels, i.i.d. kernels (balanced and not), their perturbations,
// and fully random kernels.
inline mvps::UrnModel agreement_case(std::size_t index, mvps::RngStream& rng) {
    const std::size_t k = 2 + static_cast<std::size_t>(rng.next_u01() * 3);  // 2..4
    const std::vector<double> nu = random_prob_vector(k, rng);
    const double theta = 0.25 + 2.0 * rng.next_u01();
    const double m = 0.25 + 2.0 * rng.next_u01();

    switch (index % 6) {
        case 0:
            return make_block_model(nu, random_partition(k, rng), m, theta);
        case 1: {
            std::vector<double> masses(k);
            for (double& x : masses) x = 0.25 + 2.0 * rng.next_u01();
            return make_iid_model(nu, masses, theta);
        }
        case 2:
            return perturb(make_block_model(nu, random_partition(k, rng), m, theta),
                           0.05 + rng.next_u01(), rng);
        case 3: {
            std::vector<double> masses(k, m);
            return perturb(make_iid_model(nu, masses, theta), 0.05 + rng.next_u01(), rng);
        }
        case 4:
            return make_block_model(nu, random_partition(k, rng), m, 1.0);
        default:
            return random_kernel_model(k, rng);
    }
}

}  // namespace gen
