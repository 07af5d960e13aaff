#include "mvps/io.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace mvps {

namespace {

using nlohmann::json;

// A weight entry is exact when it is a JSON integer or a {"num","den"} pair.
bool parse_weight(const json& j, double& value, Rational& exact, bool& is_exact,
                  const char* where) {
    if (j.is_object()) {
        if (!j.contains("num") || !j.contains("den") || !j["num"].is_number_integer() ||
            !j["den"].is_number_integer())
            throw DimensionMismatchError(std::string(where) +
                                         ": rational entries need integer num/den");
        const long long num = j["num"].get<long long>();
        const long long den = j["den"].get<long long>();
        if (den == 0)
            throw DimensionMismatchError(std::string(where) + ": zero denominator");
        exact = Rational(num, den);
        value = static_cast<double>(exact);
        is_exact = true;
        return true;
    }
    if (j.is_number_integer() || j.is_number_unsigned()) {
        const long long num = j.get<long long>();
        exact = Rational(num);
        value = static_cast<double>(num);
        is_exact = true;
        return true;
    }
    if (j.is_number()) {
        value = j.get<double>();
        exact = 0;
        is_exact = false;
        return true;
    }
    throw DimensionMismatchError(std::string(where) + ": weight is not a number");
}

json weight_to_json(double v) { return json(v); }

}  // namespace

LoadedModel load_model(const nlohmann::json& j) {
    if (!j.is_object()) throw DimensionMismatchError("model file: not a JSON object");
    for (const char* field : {"theta", "colors", "nu", "R"})
        if (!j.contains(field))
            throw DimensionMismatchError(std::string("model file: missing field '") + field +
                                         "'");

    LoadedModel out;
    RationalModel exact;
    bool all_exact = true;
    bool entry_exact = false;

    parse_weight(j["theta"], out.model.theta, exact.theta, entry_exact, "theta");
    all_exact &= entry_exact;

    if (!j["colors"].is_array() || j["colors"].empty())
        throw DimensionMismatchError("model file: 'colors' must be a non-empty array");
    for (const auto& c : j["colors"]) {
        if (!c.is_string())
            throw DimensionMismatchError("model file: color labels must be strings");
        out.model.space.labels.push_back(c.get<std::string>());
    }
    const std::size_t k = out.model.space.size();

    if (!j["nu"].is_array() || j["nu"].size() != k)
        throw DimensionMismatchError("model file: 'nu' length does not match 'colors'");
    for (const auto& w : j["nu"]) {
        double v;
        Rational q;
        parse_weight(w, v, q, entry_exact, "nu");
        all_exact &= entry_exact;
        out.model.nu.weights.push_back(v);
        exact.nu.push_back(q);
    }

    if (!j["R"].is_array() || j["R"].size() != k)
        throw DimensionMismatchError("model file: 'R' must have one row per color");
    for (const auto& row : j["R"]) {
        if (!row.is_array() || row.size() != k)
            throw DimensionMismatchError("model file: 'R' rows must have one entry per color");
        std::vector<double> r;
        std::vector<Rational> rq;
        for (const auto& a : row) {
            double v;
            Rational q;
            parse_weight(a, v, q, entry_exact, "R");
            all_exact &= entry_exact;
            r.push_back(v);
            rq.push_back(q);
        }
        out.model.kernel.rows.push_back(std::move(r));
        exact.rows.push_back(std::move(rq));
    }

    out.nu_total = out.model.nu.total();
    if (!(out.nu_total > 0.0)) throw ZeroMassError("model file: nu has zero total mass");
    out.model.nu = normalize(out.model.nu);

    if (all_exact) {
        Rational total = 0;
        for (const auto& w : exact.nu) total += w;
        for (auto& w : exact.nu) w /= total;
        out.exact = std::move(exact);
    }
    return out;
}

LoadedModel load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open model file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw Error("model file '" + path + "' is not valid JSON: " + e.what());
    }
    return load_model(j);
}

nlohmann::json model_to_json(const UrnModel& model) {
    json j;
    j["theta"] = weight_to_json(model.theta);
    j["colors"] = model.space.labels;
    j["nu"] = model.nu.weights;
    j["R"] = model.kernel.rows;
    return j;
}

nlohmann::json witness_to_json(const Witness& witness) {
    json j;
    j["type"] = to_string(witness.kind);
    j["indices"] = witness.indices;
    j["residual"] = witness.residual;
    j["detail"] = witness.detail;
    return j;
}

nlohmann::json verdict_to_json(const Verdict& verdict) {
    json j;
    j["kind"] = to_string(verdict.kind);
    if (verdict.kind == VerdictKind::Exchangeable) {
        j["partition"] = verdict.partition->blocks;
        j["m"] = *verdict.m;
    }
    if (verdict.witness) j["witness"] = witness_to_json(*verdict.witness);
    if (verdict.normalized) j["normalized"] = model_to_json(*verdict.normalized);
    if (!verdict.leaks.empty()) {
        json leaks = json::array();
        for (const MassLeak& leak : verdict.leaks)
            leaks.push_back({{"row", leak.row},
                             {"pruned_color", leak.pruned_color},
                             {"mass", leak.mass}});
        j["mass_leaks"] = leaks;
    }
    return j;
}

nlohmann::json draw_to_json(const RandomMeasureDraw& draw) {
    json j;
    j["weights"] = draw.weights;
    j["sources"] = draw.sources;
    j["composite"] = draw.composite;
    j["truncation_mass"] = draw.truncation_mass;
    return j;
}

nlohmann::json depth_check_to_json(const DepthCheckResult& result, std::size_t requested_depth,
                                   bool rational_mode) {
    json j;
    j["depth"] = requested_depth;
    j["max_depth_checked"] = result.max_depth_checked;
    j["mode"] = rational_mode ? "rational" : "double";
    j["pass"] = result.pass;
    j["max_residual"] = result.max_residual;
    if (result.violation) {
        j["witness"] = {{"sequence", result.violation->sequence},
                        {"representative", result.violation->representative},
                        {"delta", result.violation->delta},
                        {"depth", result.violation->depth}};
    }
    return j;
}

void write_path_csv(std::ostream& os, const UrnModel& model, const PathSample& path) {
    os << "step,color";
    for (const std::string& label : model.space.labels) os << ",p_" << label;
    os << "\n";
    os.precision(17);
    for (std::size_t t = 0; t < path.colors.size(); ++t) {
        os << (t + 1) << "," << model.space.labels[path.colors[t]];
        for (double p : path.trace[t]) os << "," << p;
        os << "\n";
    }
}

void write_hybrid_csv(std::ostream& os, const HybridPath& path) {
    os << "step,value\n";
    os.precision(17);
    for (std::size_t t = 0; t < path.values.size(); ++t)
        os << (t + 1) << "," << path.values[t] << "\n";
}

}  // namespace mvps
