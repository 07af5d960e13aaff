#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include "mvps/measure.hpp"
#include "mvps/oracle.hpp"

namespace mvps {

using Rational = boost::multiprecision::cpp_rational;

template <>
struct exact_arithmetic<Rational> : std::true_type {};

using RationalModel = BasicModel<Rational>;

struct RationalValidated {
    RationalModel model;  // pruned, nu strictly positive and normalized
    std::vector<std::size_t> kept;
    std::vector<MassLeak> leaks;  // leaked masses reported at double precision
};

// Exact counterpart of validate_model: normalizes nu, drops nu-null colors
// and records leaked reinforcement mass, all in rational arithmetic.
RationalValidated validate_rational_model(const RationalModel& model);

BasicModel<double> to_double_model(const RationalModel& model);
UrnModel to_urn_model(const RationalModel& model, const std::vector<std::string>& labels);

}  // namespace mvps
