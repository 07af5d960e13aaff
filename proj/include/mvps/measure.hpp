#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mvps/errors.hpp"

namespace mvps {

// Comparison tolerance used throughout: a and b are "equal" when
// |a-b| <= abs_tol + rel_tol * max(|a|,|b|).
struct Tolerance {
    double rel = 1e-9;
    double abs = 1e-12;

    bool close(double a, double b) const;
};

struct ColorSpace {
    std::vector<std::string> labels;

    std::size_t size() const { return labels.size(); }
};

// Non-negative mass per color; houses the base measure, kernel rows and
// intermediate urn compositions.
struct FiniteMeasure {
    std::vector<double> weights;

    std::size_t size() const { return weights.size(); }
    double total() const;
};

// Rescale to total mass 1. Throws ZeroMassError when the total vanishes.
FiniteMeasure normalize(const FiniteMeasure& m);

// k x k matrix; rows[i][j] is the mass of color j added after observing
// color i.
struct ReinforcementKernel {
    std::vector<std::vector<double>> rows;

    std::size_t size() const { return rows.size(); }
    double row_mass(std::size_t i) const;
};

struct UrnModel {
    double theta = 1.0;
    ColorSpace space;
    FiniteMeasure nu;  // normalized to total 1
    ReinforcementKernel kernel;

    std::size_t num_colors() const { return space.size(); }
};

// Total variation distance between two probability vectors of equal
// length: max_B |p(B)-q(B)| = (1/2) sum_i |p_i - q_i|.
double tv_distance(const std::vector<double>& p, const std::vector<double>& q);

// A surviving row placing mass on a pruned (nu-null) color. Indices refer
// to the original (unpruned) model.
struct MassLeak {
    std::size_t row = 0;
    std::size_t pruned_color = 0;
    double mass = 0.0;
};

struct ValidatedModel {
    UrnModel model;                 // pruned; nu strictly positive everywhere
    std::vector<std::size_t> kept;  // original index of each surviving color
    std::vector<MassLeak> leaks;    // nonempty: not exchangeable as given
};

// Checks structural invariants, removes nu-null colors from the space, nu
// and kernel, and records any mass a surviving row places on a pruned
// color. Throws InvalidThetaError, DimensionMismatchError, ZeroMassError.
ValidatedModel validate_model(const UrnModel& model, Tolerance tol = {});

}  // namespace mvps
