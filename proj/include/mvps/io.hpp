#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "mvps/analysis.hpp"
#include "mvps/measure.hpp"
#include "mvps/oracle.hpp"
#include "mvps/rational.hpp"
#include "mvps/samplers.hpp"

namespace mvps {

// Model file schema:
//   { "theta": w, "colors": [string], "nu": [w], "R": [[w]] }
// where every weight w is a JSON number or an exact {"num": int, "den": int}
// pair. "nu" may be unnormalized; the loader normalizes it and keeps the
// original total. When every input is exact (integers or num/den pairs) an
// exact rational copy of the model is carried along for the oracle.
struct LoadedModel {
    UrnModel model;        // nu normalized
    double nu_total = 1.0; // total mass of nu as given in the file
    std::optional<RationalModel> exact;
};

LoadedModel load_model(const nlohmann::json& j);
LoadedModel load_model_file(const std::string& path);

nlohmann::json model_to_json(const UrnModel& model);

nlohmann::json witness_to_json(const Witness& witness);
nlohmann::json verdict_to_json(const Verdict& verdict);

nlohmann::json draw_to_json(const RandomMeasureDraw& draw);

nlohmann::json depth_check_to_json(const DepthCheckResult& result, std::size_t requested_depth,
                                   bool rational_mode);

// CSV with one row per step: step, color label, then the predictive
// probability of each color at that step.
void write_path_csv(std::ostream& os, const UrnModel& model, const PathSample& path);

// CSV for the hybrid [0,1] demonstration: step, value.
void write_hybrid_csv(std::ostream& os, const HybridPath& path);

}  // namespace mvps
