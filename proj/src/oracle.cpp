#include "mvps/oracle.hpp"

#include <cmath>

#include "mvps/rational.hpp"

namespace mvps {

BasicModel<double> to_basic(const UrnModel& model) {
    BasicModel<double> out;
    out.theta = model.theta;
    out.nu = model.nu.weights;
    out.rows = model.kernel.rows;
    return out;
}

std::vector<double> predictive_exact(const UrnModel& model,
                                     const std::vector<std::size_t>& history) {
    return predictive_exact(to_basic(model), history);
}

std::size_t path_count(std::size_t k, std::size_t depth, std::size_t budget) {
    std::size_t n = 1;
    for (std::size_t d = 0; d < depth; ++d) {
        if (n > budget / k)
            throw BudgetExceededError("oracle: k^depth exceeds the path budget");
        n *= k;
    }
    if (n > budget) throw BudgetExceededError("oracle: k^depth exceeds the path budget");
    return n;
}

namespace detail {

double residual_as_double(double diff) { return std::fabs(diff); }

}  // namespace detail

RationalValidated validate_rational_model(const RationalModel& model) {
    const std::size_t k = model.num_colors();
    if (k == 0) throw DimensionMismatchError("rational model: empty color space");
    if (model.rows.size() != k)
        throw DimensionMismatchError("rational model: kernel row count mismatch");
    for (const auto& row : model.rows)
        if (row.size() != k)
            throw DimensionMismatchError("rational model: kernel row length mismatch");
    if (!(model.theta > 0)) throw InvalidThetaError("rational model: theta must be positive");

    Rational nu_total = 0;
    for (const auto& w : model.nu) {
        if (w < 0) throw InvalidMeasureError("rational model: negative nu weight");
        nu_total += w;
    }
    if (nu_total == 0) throw ZeroMassError("rational model: nu has zero total mass");

    RationalValidated out;
    for (std::size_t i = 0; i < k; ++i)
        if (model.nu[i] > 0) out.kept.push_back(i);

    std::vector<bool> keep(k, false);
    for (std::size_t i : out.kept) keep[i] = true;
    for (std::size_t i : out.kept)
        for (std::size_t j = 0; j < k; ++j)
            if (!keep[j] && model.rows[i][j] > 0)
                out.leaks.push_back(
                    {i, j, static_cast<double>(model.rows[i][j])});

    out.model.theta = model.theta;
    for (std::size_t i : out.kept) out.model.nu.push_back(model.nu[i] / nu_total);
    for (std::size_t i : out.kept) {
        std::vector<Rational> row;
        row.reserve(out.kept.size());
        for (std::size_t j : out.kept) row.push_back(model.rows[i][j]);
        Rational row_total = 0;
        for (const auto& a : row) {
            if (a < 0) throw InvalidMeasureError("rational model: negative kernel entry");
            row_total += a;
        }
        if (row_total == 0)
            throw ZeroMassError("rational model: zero reinforcement row on the support");
        out.model.rows.push_back(std::move(row));
    }
    return out;
}

BasicModel<double> to_double_model(const RationalModel& model) {
    BasicModel<double> out;
    out.theta = static_cast<double>(model.theta);
    out.nu.reserve(model.nu.size());
    for (const auto& w : model.nu) out.nu.push_back(static_cast<double>(w));
    out.rows.reserve(model.rows.size());
    for (const auto& row : model.rows) {
        std::vector<double> r;
        r.reserve(row.size());
        for (const auto& a : row) r.push_back(static_cast<double>(a));
        out.rows.push_back(std::move(r));
    }
    return out;
}

UrnModel to_urn_model(const RationalModel& model, const std::vector<std::string>& labels) {
    const BasicModel<double> dbl = to_double_model(model);
    UrnModel out;
    out.theta = dbl.theta;
    out.space.labels = labels;
    out.nu.weights = dbl.nu;
    out.kernel.rows = dbl.rows;
    return out;
}

}  // namespace mvps
