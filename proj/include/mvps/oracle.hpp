#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <type_traits>
#include <vector>

#include "mvps/errors.hpp"
#include "mvps/measure.hpp"
#include "mvps/parallel.hpp"

namespace mvps {

// Raw model parameterization the oracle enumerates; T is double or an
// exact rational type. The oracle deliberately works on the model as
// given (no pruning, no classifier machinery) so it remains an
// independent cross-check of the classifier.
template <class T>
struct BasicModel {
    T theta{};
    std::vector<T> nu;  // normalized to total 1
    std::vector<std::vector<T>> rows;

    std::size_t num_colors() const { return nu.size(); }
};

// Specialized to true for exact scalar types; equality is then tested
// exactly instead of against a tolerance.
template <class T>
struct exact_arithmetic : std::false_type {};

BasicModel<double> to_basic(const UrnModel& model);

template <class T>
std::vector<T> predictive_exact(const BasicModel<T>& model,
                                const std::vector<std::size_t>& history) {
    const std::size_t k = model.num_colors();
    std::vector<T> urn(k);
    for (std::size_t j = 0; j < k; ++j) urn[j] = model.theta * model.nu[j];
    T total = model.theta;
    for (std::size_t h : history) {
        if (h >= k) throw UnknownColorError("predictive_exact: color index out of range");
        for (std::size_t j = 0; j < k; ++j) {
            urn[j] += model.rows[h][j];
            total += model.rows[h][j];
        }
    }
    for (std::size_t j = 0; j < k; ++j) urn[j] /= total;
    return urn;
}

std::vector<double> predictive_exact(const UrnModel& model,
                                     const std::vector<std::size_t>& history);

inline constexpr std::size_t kDefaultPathBudget = 1000000;

// Returns k^depth, throwing BudgetExceededError past the budget.
std::size_t path_count(std::size_t k, std::size_t depth, std::size_t budget);

// Joint law of (X_1,...,X_n): probability of every color sequence of
// length `depth`, stored big-endian (the first draw is the most
// significant digit) so first-color branches fill disjoint slices.
template <class T>
struct JointPmf {
    std::size_t depth = 0;
    std::size_t k = 0;
    std::vector<T> p;

    std::size_t encode(const std::vector<std::size_t>& seq) const {
        std::size_t idx = 0;
        for (std::size_t c : seq) idx = idx * k + c;
        return idx;
    }
    std::vector<std::size_t> decode(std::size_t idx) const {
        std::vector<std::size_t> seq(depth);
        for (std::size_t t = depth; t-- > 0;) {
            seq[t] = idx % k;
            idx /= k;
        }
        return seq;
    }
};

namespace detail {

// Depth-first walk over all continuations, pushing/popping one
// reinforcement row per level; `stride` is k^(levels remaining - 1).
template <class T>
void enumerate_paths(const BasicModel<T>& model, std::size_t levels, std::vector<T>& urn,
                     T total, const T& prob, std::size_t base, std::size_t stride,
                     std::vector<T>& out) {
    const std::size_t k = model.num_colors();
    if (levels == 0) {
        out[base] = prob;
        return;
    }
    for (std::size_t c = 0; c < k; ++c) {
        const std::size_t child = base + c * stride;
        const T step = T(urn[c] / total);
        if (step == T(0)) continue;  // whole branch has probability zero
        T row_total = T(0);
        for (std::size_t j = 0; j < k; ++j) {
            urn[j] += model.rows[c][j];
            row_total += model.rows[c][j];
        }
        const T child_total = T(total + row_total);
        const T child_prob = T(prob * step);
        enumerate_paths(model, levels - 1, urn, child_total, child_prob, child, stride / k,
                        out);
        for (std::size_t j = 0; j < k; ++j) urn[j] -= model.rows[c][j];
    }
}

}  // namespace detail

template <class T>
JointPmf<T> joint_pmf(const BasicModel<T>& model, std::size_t depth,
                      std::size_t budget = kDefaultPathBudget,
                      ExecMode mode = ExecMode::Parallel) {
    const std::size_t k = model.num_colors();
    if (depth == 0) throw BudgetExceededError("joint_pmf: depth must be at least 1");
    const std::size_t total_paths = path_count(k, depth, budget);

    JointPmf<T> pmf;
    pmf.depth = depth;
    pmf.k = k;
    pmf.p.assign(total_paths, T(0));
    const std::size_t stride = total_paths / k;

    // First-coordinate branches are independent and write disjoint slices,
    // so the merge is deterministic in color order.
    parallel_for(k, depth >= 2 ? mode : ExecMode::Serial, [&](std::size_t c) {
        const T first = model.nu[c];
        if (first == T(0)) return;
        std::vector<T> urn(k);
        T total = model.theta;
        for (std::size_t j = 0; j < k; ++j) {
            urn[j] = model.theta * model.nu[j] + model.rows[c][j];
            total += model.rows[c][j];
        }
        detail::enumerate_paths(model, depth - 1, urn, total, first, c * stride, stride / k,
                                pmf.p);
    });
    return pmf;
}

struct PermutationViolation {
    std::vector<std::size_t> sequence;
    std::vector<std::size_t> representative;  // sorted copy of `sequence`
    double delta = 0.0;
    std::size_t depth = 0;
};

struct DepthCheckResult {
    bool pass = false;
    std::size_t max_depth_checked = 0;
    double max_residual = 0.0;
    std::optional<PermutationViolation> violation;
};

namespace detail {

double residual_as_double(double diff);

template <class T>
double residual_as_double(const T& diff) {
    return std::abs(static_cast<double>(diff));
}

}  // namespace detail

// Verifies the joint pmf at every depth <= n is invariant under all
// permutations by comparing each sequence against its sorted
// representative. Depths are scanned in increasing order so a returned
// violation sits at the shallowest depth where one exists; within a depth
// the maximal-residual sequence is reported (lowest index on ties).
template <class T>
DepthCheckResult exchangeability_depth_check(const BasicModel<T>& model, std::size_t n,
                                             double tol,
                                             std::size_t budget = kDefaultPathBudget,
                                             ExecMode mode = ExecMode::Parallel) {
    if (n == 0) throw BudgetExceededError("exchangeability_depth_check: depth must be >= 1");
    path_count(model.num_colors(), n, budget);  // fail fast before any work

    DepthCheckResult result;
    result.pass = true;
    result.max_depth_checked = std::min<std::size_t>(n, 1);

    for (std::size_t d = 2; d <= n; ++d) {
        const JointPmf<T> pmf = joint_pmf(model, d, budget, mode);
        T worst_diff = T(0);
        std::size_t worst_index = 0;
        bool violated = false;

        std::vector<std::size_t> seq;
        for (std::size_t idx = 0; idx < pmf.p.size(); ++idx) {
            seq = pmf.decode(idx);
            std::vector<std::size_t> rep = seq;
            std::sort(rep.begin(), rep.end());
            const std::size_t rep_idx = pmf.encode(rep);
            if (rep_idx == idx) continue;
            T diff = pmf.p[idx] - pmf.p[rep_idx];
            if (diff < T(0)) diff = -diff;
            if (diff > worst_diff) {
                worst_diff = diff;
                worst_index = idx;
            }
        }

        const double residual = detail::residual_as_double(worst_diff);
        result.max_residual = std::max(result.max_residual, residual);
        if constexpr (exact_arithmetic<T>::value)
            violated = worst_diff != T(0);
        else
            violated = residual > tol;

        result.max_depth_checked = d;
        if (violated) {
            PermutationViolation v;
            v.sequence = pmf.decode(worst_index);
            v.representative = v.sequence;
            std::sort(v.representative.begin(), v.representative.end());
            v.delta = residual;
            v.depth = d;
            result.pass = false;
            result.violation = std::move(v);
            return result;
        }
    }
    return result;
}

}  // namespace mvps
