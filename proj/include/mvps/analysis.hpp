#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mvps/measure.hpp"

namespace mvps {

// Row totals R_x(X) over the surviving colors. The process is balanced
// when they are all equal; m is then the common value.
struct BalanceProfile {
    std::vector<double> row_masses;
    bool balanced = false;
    double m = 0.0;
};

BalanceProfile balance_profile(const UrnModel& model, Tolerance tol = {});

// True iff every normalized row equals nu, i.e. the sequence is i.i.d.(nu).
bool is_iid(const UrnModel& model, Tolerance tol = {});

// Rescale a balanced model to row mass 1: (theta/m, nu, R/m). Predictive
// distributions are unchanged. Throws UnbalancedInputError.
UrnModel normalize_model(const UrnModel& model, Tolerance tol = {});

// Disjoint non-empty blocks of color indices covering all surviving colors.
struct Partition {
    std::vector<std::vector<std::size_t>> blocks;

    std::size_t num_blocks() const { return blocks.size(); }
    // block index of each color; throws DimensionMismatchError if the
    // blocks do not partition {0,...,k-1}.
    std::vector<std::size_t> block_of(std::size_t k) const;
};

Partition single_block(std::size_t k);

// A concrete failed identity: which check, at which indices, and how big
// the residual is.
struct Witness {
    enum class Kind {
        MassLeak,          // surviving row reinforces a pruned color
        UnbalancedRows,    // distinct row masses on a non-i.i.d. model
        PartitionMismatch, // no block structure: row differs from nu(.|support)
        DetailedBalance,   // nu_i R_i(j) != nu_j R_j(i)
        TripleProduct      // R_x(y)R_y(z) != R_x(z)R_z(y)
    };

    Kind kind;
    std::vector<std::size_t> indices;
    double residual = 0.0;
    std::string detail;
};

struct SymmetryReport {
    bool detailed_balance_ok = false;
    bool triple_product_ok = false;
    double max_residual_detailed_balance = 0.0;
    double max_residual_triple_product = 0.0;
    std::optional<Witness> worst;  // set when either identity fails

    bool all_ok() const { return detailed_balance_ok && triple_product_ok; }
};

// Evaluates the two symmetry identities
//   (i)  nu_i R_i({j}) = nu_j R_j({i})             for all i,j
//   (ii) R_x({y}) R_y({z}) = R_x({z}) R_z({y})     for all x,y,z
// on a balanced model with rows normalized to mass 1. Together with
// balance these characterize exchangeability on finite spaces.
// Throws UnbalancedInputError when called with distinct row masses.
SymmetryReport symmetry_checks(const UrnModel& normalized_model, Tolerance tol = {});

struct PartitionResult {
    std::optional<Partition> partition;
    std::optional<Witness> witness;

    bool found() const { return partition.has_value(); }
};

// Groups colors by identical normalized rows and verifies each group's
// common row equals nu conditioned on that row's support (which must be
// the group itself). Expects a balanced, row-normalized, non-i.i.d. model.
PartitionResult detect_partition(const UrnModel& normalized_model, Tolerance tol = {});

enum class VerdictKind { IID, Exchangeable, NotExchangeable };

struct Verdict {
    VerdictKind kind = VerdictKind::NotExchangeable;
    std::optional<Partition> partition;       // Exchangeable only
    std::optional<double> m;                  // common row mass (1 for IID form)
    std::optional<Witness> witness;           // NotExchangeable only
    std::optional<UrnModel> normalized;       // (theta/m, nu, R/m); (theta, nu, nu-rows) for IID
    std::vector<MassLeak> leaks;              // carried over from validation

    double theta_over_m(double fallback_theta) const {
        if (normalized) return normalized->theta;
        return fallback_theta;
    }
};

// Exact trichotomy: IID / Exchangeable(partition, m) / NotExchangeable(witness).
Verdict classify(const ValidatedModel& validated, Tolerance tol = {});
Verdict classify(const UrnModel& model, Tolerance tol = {});

std::string to_string(VerdictKind kind);
std::string to_string(Witness::Kind kind);

}  // namespace mvps
