#include "mvps/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace mvps {

BalanceProfile balance_profile(const UrnModel& model, Tolerance tol) {
    BalanceProfile out;
    const std::size_t k = model.num_colors();
    out.row_masses.resize(k);
    for (std::size_t i = 0; i < k; ++i) out.row_masses[i] = model.kernel.row_mass(i);

    out.balanced = true;
    for (std::size_t i = 1; i < k && out.balanced; ++i)
        if (!tol.close(out.row_masses[i], out.row_masses[0])) out.balanced = false;

    if (out.balanced) {
        double sum = std::accumulate(out.row_masses.begin(), out.row_masses.end(), 0.0);
        out.m = sum / static_cast<double>(k);
    }
    return out;
}

namespace {

std::vector<double> normalized_row(const UrnModel& model, std::size_t i) {
    std::vector<double> row = model.kernel.rows[i];
    const double mass = model.kernel.row_mass(i);
    for (double& a : row) a /= mass;
    return row;
}

}  // namespace

bool is_iid(const UrnModel& model, Tolerance tol) {
    const std::size_t k = model.num_colors();
    for (std::size_t i = 0; i < k; ++i) {
        if (tv_distance(normalized_row(model, i), model.nu.weights) > tol.rel) return false;
    }
    return true;
}

UrnModel normalize_model(const UrnModel& model, Tolerance tol) {
    const BalanceProfile profile = balance_profile(model, tol);
    if (!profile.balanced)
        throw UnbalancedInputError("normalize_model: row masses differ");
    UrnModel out = model;
    out.theta = model.theta / profile.m;
    for (auto& row : out.kernel.rows)
        for (double& a : row) a /= profile.m;
    return out;
}

std::vector<std::size_t> Partition::block_of(std::size_t k) const {
    const std::size_t npos = static_cast<std::size_t>(-1);
    std::vector<std::size_t> owner(k, npos);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        if (blocks[b].empty()) throw DimensionMismatchError("partition: empty block");
        for (std::size_t i : blocks[b]) {
            if (i >= k || owner[i] != npos)
                throw DimensionMismatchError("partition: blocks are not a partition");
            owner[i] = b;
        }
    }
    for (std::size_t i = 0; i < k; ++i)
        if (owner[i] == npos)
            throw DimensionMismatchError("partition: color " + std::to_string(i) +
                                         " not covered");
    return owner;
}

Partition single_block(std::size_t k) {
    Partition p;
    p.blocks.emplace_back();
    for (std::size_t i = 0; i < k; ++i) p.blocks.back().push_back(i);
    return p;
}

SymmetryReport symmetry_checks(const UrnModel& model, Tolerance tol) {
    const BalanceProfile profile = balance_profile(model, tol);
    if (!profile.balanced)
        throw UnbalancedInputError("symmetry_checks: row masses differ");

    const std::size_t k = model.num_colors();
    const auto& R = model.kernel.rows;
    const auto& nu = model.nu.weights;

    SymmetryReport rep;
    std::vector<std::size_t> worst1, worst2;

    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) {
            const double r = std::fabs(nu[i] * R[i][j] - nu[j] * R[j][i]);
            if (r > rep.max_residual_detailed_balance) {
                rep.max_residual_detailed_balance = r;
                worst1 = {i, j};
            }
        }

    for (std::size_t x = 0; x < k; ++x)
        for (std::size_t y = 0; y < k; ++y)
            for (std::size_t z = 0; z < k; ++z) {
                const double r = std::fabs(R[x][y] * R[y][z] - R[x][z] * R[z][y]);
                if (r > rep.max_residual_triple_product) {
                    rep.max_residual_triple_product = r;
                    worst2 = {x, y, z};
                }
            }

    rep.detailed_balance_ok = rep.max_residual_detailed_balance <= tol.rel;
    rep.triple_product_ok = rep.max_residual_triple_product <= tol.rel;

    if (!rep.detailed_balance_ok &&
        rep.max_residual_detailed_balance >= rep.max_residual_triple_product) {
        std::ostringstream msg;
        msg << "nu_" << worst1[0] << " R_" << worst1[0] << "(" << worst1[1] << ") != nu_"
            << worst1[1] << " R_" << worst1[1] << "(" << worst1[0] << ")";
        rep.worst = Witness{Witness::Kind::DetailedBalance, worst1,
                            rep.max_residual_detailed_balance, msg.str()};
    } else if (!rep.triple_product_ok) {
        std::ostringstream msg;
        msg << "R_" << worst2[0] << "(" << worst2[1] << ") R_" << worst2[1] << "("
            << worst2[2] << ") != R_" << worst2[0] << "(" << worst2[2] << ") R_"
            << worst2[2] << "(" << worst2[1] << ")";
        rep.worst = Witness{Witness::Kind::TripleProduct, worst2,
                            rep.max_residual_triple_product, msg.str()};
    }
    return rep;
}

PartitionResult detect_partition(const UrnModel& model, Tolerance tol) {
    const std::size_t k = model.num_colors();
    const auto& nu = model.nu.weights;

    std::vector<std::vector<double>> rows(k);
    for (std::size_t i = 0; i < k; ++i) rows[i] = normalized_row(model, i);

    // Group colors whose normalized rows coincide; the representative is the
    // first member, so grouping commutes with color relabeling.
    std::vector<std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < k; ++i) {
        bool placed = false;
        for (auto& g : groups)
            if (tv_distance(rows[i], rows[g.front()]) <= tol.rel) {
                g.push_back(i);
                placed = true;
                break;
            }
        if (!placed) groups.push_back({i});
    }

    // Each group's common row must equal nu conditioned on the row's
    // support, and that support must be the group itself.
    auto conditioned_on = [&](const std::vector<std::size_t>& set) {
        double mass = 0.0;
        for (std::size_t j : set) mass += nu[j];
        std::vector<double> cond(k, 0.0);
        for (std::size_t j : set) cond[j] = nu[j] / mass;
        return cond;
    };

    double worst_residual = -1.0;
    std::size_t worst_color = 0;
    std::string worst_detail;

    for (const auto& g : groups) {
        const auto& row = rows[g.front()];
        std::vector<std::size_t> support;
        for (std::size_t j = 0; j < k; ++j)
            if (row[j] > tol.abs) support.push_back(j);

        const double row_residual = tv_distance(row, conditioned_on(support));
        const bool support_matches = support == g;
        if (row_residual <= tol.rel && support_matches) continue;

        double residual;
        std::ostringstream msg;
        if (row_residual > tol.rel) {
            residual = row_residual;
            msg << "row " << g.front() << " differs from nu conditioned on its support";
        } else {
            residual = tv_distance(row, conditioned_on(g));
            msg << "support of row " << g.front()
                << " is not the set of colors sharing that row";
        }
        if (residual > worst_residual) {
            worst_residual = residual;
            worst_color = g.front();
            worst_detail = msg.str();
        }
    }

    PartitionResult out;
    if (worst_residual >= 0.0) {
        out.witness = Witness{Witness::Kind::PartitionMismatch, {worst_color},
                              std::max(worst_residual, 0.0), worst_detail};
        return out;
    }
    Partition p;
    p.blocks = std::move(groups);
    out.partition = std::move(p);
    return out;
}

namespace {

UrnModel iid_normal_form(const UrnModel& model) {
    UrnModel out = model;
    for (auto& row : out.kernel.rows) row = model.nu.weights;
    return out;
}

}  // namespace

Verdict classify(const ValidatedModel& validated, Tolerance tol) {
    const UrnModel& model = validated.model;
    Verdict verdict;
    verdict.leaks = validated.leaks;

    if (!validated.leaks.empty()) {
        const MassLeak& leak = validated.leaks.front();
        std::ostringstream msg;
        msg << "row " << leak.row << " reinforces nu-null color " << leak.pruned_color
            << "; an exchangeable process never leaves the support of nu";
        verdict.kind = VerdictKind::NotExchangeable;
        verdict.witness = Witness{Witness::Kind::MassLeak,
                                  {leak.row, leak.pruned_color},
                                  leak.mass,
                                  msg.str()};
        return verdict;
    }

    if (is_iid(model, tol)) {
        verdict.kind = VerdictKind::IID;
        verdict.m = 1.0;
        verdict.normalized = iid_normal_form(model);
        return verdict;
    }

    const BalanceProfile profile = balance_profile(model, tol);
    if (!profile.balanced) {
        // Unbalanced exchangeable sequences are i.i.d.; this one is not.
        auto [lo, hi] = std::minmax_element(profile.row_masses.begin(),
                                            profile.row_masses.end());
        const std::size_t ilo = static_cast<std::size_t>(lo - profile.row_masses.begin());
        const std::size_t ihi = static_cast<std::size_t>(hi - profile.row_masses.begin());
        std::ostringstream msg;
        msg << "row masses " << *lo << " (color " << ilo << ") and " << *hi << " (color "
            << ihi << ") differ on a non-i.i.d. model";
        verdict.kind = VerdictKind::NotExchangeable;
        verdict.witness =
            Witness{Witness::Kind::UnbalancedRows, {ilo, ihi}, *hi - *lo, msg.str()};
        return verdict;
    }

    const UrnModel normalized = normalize_model(model, tol);
    verdict.normalized = normalized;
    verdict.m = profile.m;

    const PartitionResult partition = detect_partition(normalized, tol);
    const SymmetryReport symmetry = symmetry_checks(normalized, tol);

    if (partition.found() && symmetry.all_ok()) {
        verdict.kind = VerdictKind::Exchangeable;
        verdict.partition = partition.partition;
        return verdict;
    }

    verdict.kind = VerdictKind::NotExchangeable;
    if (partition.witness && symmetry.worst)
        verdict.witness = partition.witness->residual >= symmetry.worst->residual
                              ? partition.witness
                              : symmetry.worst;
    else if (partition.witness)
        verdict.witness = partition.witness;
    else
        verdict.witness = symmetry.worst;
    return verdict;
}

Verdict classify(const UrnModel& model, Tolerance tol) {
    return classify(validate_model(model, tol), tol);
}

std::string to_string(VerdictKind kind) {
    switch (kind) {
        case VerdictKind::IID: return "IID";
        case VerdictKind::Exchangeable: return "Exchangeable";
        case VerdictKind::NotExchangeable: return "NotExchangeable";
    }
    return "NotExchangeable";
}

std::string to_string(Witness::Kind kind) {
    switch (kind) {
        case Witness::Kind::MassLeak: return "mass_leak";
        case Witness::Kind::UnbalancedRows: return "unbalanced_rows";
        case Witness::Kind::PartitionMismatch: return "partition_mismatch";
        case Witness::Kind::DetailedBalance: return "detailed_balance";
        case Witness::Kind::TripleProduct: return "triple_product";
    }
    return "unknown";
}

}  // namespace mvps
