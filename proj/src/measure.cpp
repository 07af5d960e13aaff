#include "mvps/measure.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace mvps {

bool Tolerance::close(double a, double b) const {
    const double scale = std::max(std::fabs(a), std::fabs(b));
    return std::fabs(a - b) <= abs + rel * scale;
}

double FiniteMeasure::total() const {
    double t = 0.0;
    for (double w : weights) t += w;
    return t;
}

FiniteMeasure normalize(const FiniteMeasure& m) {
    const double t = m.total();
    if (!(t > 0.0)) throw ZeroMassError("normalize: measure has zero total mass");
    FiniteMeasure out = m;
    for (double& w : out.weights) w /= t;
    return out;
}

double ReinforcementKernel::row_mass(std::size_t i) const {
    double t = 0.0;
    for (double w : rows[i]) t += w;
    return t;
}

double tv_distance(const std::vector<double>& p, const std::vector<double>& q) {
    if (p.size() != q.size())
        throw DimensionMismatchError("tv_distance: vectors of different length");
    double l1 = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) l1 += std::fabs(p[i] - q[i]);
    return 0.5 * l1;
}

namespace {

void check_structure(const UrnModel& model) {
    const std::size_t k = model.space.size();
    if (k < 1) throw DimensionMismatchError("model: empty color space");
    std::set<std::string> seen(model.space.labels.begin(), model.space.labels.end());
    if (seen.size() != k)
        throw DimensionMismatchError("model: duplicate color labels");
    if (!(model.theta > 0.0))
        throw InvalidThetaError("model: theta must be positive");
    if (model.nu.size() != k)
        throw DimensionMismatchError("model: nu length does not match color count");
    if (model.kernel.size() != k)
        throw DimensionMismatchError("model: kernel row count does not match color count");
    for (std::size_t i = 0; i < k; ++i) {
        if (model.kernel.rows[i].size() != k)
            throw DimensionMismatchError("model: kernel row " + std::to_string(i) +
                                         " has wrong length");
        for (double a : model.kernel.rows[i])
            if (a < 0.0)
                throw InvalidMeasureError("model: negative kernel entry in row " +
                                          std::to_string(i));
    }
    for (double w : model.nu.weights)
        if (w < 0.0) throw InvalidMeasureError("model: negative nu weight");
}

}  // namespace

ValidatedModel validate_model(const UrnModel& model, Tolerance tol) {
    check_structure(model);

    const std::size_t k = model.space.size();
    const double nu_total = model.nu.total();
    if (!(nu_total > 0.0)) throw ZeroMassError("model: nu has zero total mass");
    if (!tol.close(nu_total, 1.0))
        throw DimensionMismatchError("model: nu is not normalized");

    ValidatedModel out;
    for (std::size_t i = 0; i < k; ++i)
        if (model.nu.weights[i] > 0.0) out.kept.push_back(i);
    if (out.kept.empty()) throw ZeroMassError("model: nu has empty support");

    std::vector<bool> keep(k, false);
    for (std::size_t i : out.kept) keep[i] = true;

    // Mass a surviving row assigns to a pruned color can never reach the urn
    // of an exchangeable process; record it instead of dropping it silently.
    for (std::size_t i : out.kept)
        for (std::size_t j = 0; j < k; ++j)
            if (!keep[j] && model.kernel.rows[i][j] > tol.abs)
                out.leaks.push_back({i, j, model.kernel.rows[i][j]});

    // Pruned colors carry exactly zero mass, so the surviving weights still
    // sum to nu_total; no renormalization, keeping validation an exact fixed
    // point.
    UrnModel& pruned = out.model;
    pruned.theta = model.theta;
    for (std::size_t i : out.kept) {
        pruned.space.labels.push_back(model.space.labels[i]);
        pruned.nu.weights.push_back(model.nu.weights[i]);
    }
    for (std::size_t i : out.kept) {
        std::vector<double> row;
        row.reserve(out.kept.size());
        for (std::size_t j : out.kept) row.push_back(model.kernel.rows[i][j]);
        pruned.kernel.rows.push_back(std::move(row));
    }

    for (std::size_t i = 0; i < pruned.num_colors(); ++i)
        if (!(pruned.kernel.row_mass(i) > 0.0))
            throw ZeroMassError("model: reinforcement row for surviving color '" +
                                pruned.space.labels[i] + "' has zero total mass");
    return out;
}

}  // namespace mvps
