#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

#include <json.hpp>

#include "tinj/amplitude.hpp"
#include "tinj/layout.hpp"
#include "tinj/noise_sim.hpp"
#include "tinj/postselect.hpp"
#include "tinj/trajectory.hpp"

namespace tinj {

inline constexpr std::string_view kToolVersion = "0.1.0";

using ojson = nlohmann::ordered_json;

/// 17 significant digits: enough for a double round trip.
inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string digest_hex(std::string_view data) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a64(data)));
    return buf;
}

// ---------------------------------------------------------------------------
// layout JSON — the interchange format consumed by every subcommand
// ---------------------------------------------------------------------------

inline ojson layout_to_json(const CodeLayout& lay) {
    ojson j;
    j["distance"] = lay.distance;
    j["variant"] = lay.variant == Variant::unrotated ? "unrotated" : "rotated";
    j["n_data"] = lay.n_data;
    j["x_stabilizers"] = lay.x_stabilizers;
    j["z_stabilizers"] = lay.z_stabilizers;
    j["logical_z"] = lay.logical_z;
    j["logical_x"] = lay.logical_x;
    return j;
}

inline CodeLayout layout_from_json(const nlohmann::json& j) {
    CodeLayout lay;
    lay.distance = j.at("distance").get<int>();
    const std::string variant = j.at("variant").get<std::string>();
    if (variant == "unrotated")
        lay.variant = Variant::unrotated;
    else if (variant == "rotated")
        lay.variant = Variant::rotated;
    else
        throw std::invalid_argument("unknown layout variant: " + variant);
    lay.n_data = j.at("n_data").get<int>();
    lay.x_stabilizers = j.at("x_stabilizers").get<std::vector<std::vector<int>>>();
    lay.z_stabilizers = j.at("z_stabilizers").get<std::vector<std::vector<int>>>();
    lay.logical_z = j.at("logical_z").get<std::vector<int>>();
    lay.logical_x = j.at("logical_x").get<std::vector<int>>();
    validate_layout(lay);
    return lay;
}

// ---------------------------------------------------------------------------
// logical state form JSON
// ---------------------------------------------------------------------------

inline ojson form_to_json(const LogicalStateForm& form) {
    ojson j;
    j["trajectory"]["x_bits"] = form.trajectory.x_string();
    j["trajectory"]["z_bits"] = form.trajectory.z_string();
    j["n"] = form.alpha_poly.n;
    j["alpha_coeffs"] = form.alpha_poly.coeffs;
    j["beta_coeffs"] = form.beta_poly.coeffs;
    return j;
}

inline LogicalStateForm form_from_json(const nlohmann::json& j) {
    LogicalStateForm form;
    const std::string xb = j.at("trajectory").at("x_bits").get<std::string>();
    const std::string zb = j.at("trajectory").at("z_bits").get<std::string>();
    form.trajectory.n_x = static_cast<int>(xb.size());
    form.trajectory.n_z = static_cast<int>(zb.size());
    form.trajectory.x_bits = Trajectory::parse_bits(xb, form.trajectory.n_x);
    form.trajectory.z_bits = Trajectory::parse_bits(zb, form.trajectory.n_z);
    form.alpha_poly.n = j.at("n").get<int>();
    form.beta_poly.n = form.alpha_poly.n;
    form.alpha_poly.coeffs = j.at("alpha_coeffs").get<std::vector<std::int64_t>>();
    form.beta_poly.coeffs = j.at("beta_coeffs").get<std::vector<std::int64_t>>();
    if (form.alpha_poly.coeffs.size() != static_cast<std::size_t>(form.alpha_poly.n) + 1 ||
        form.beta_poly.coeffs.size() != form.alpha_poly.coeffs.size())
        throw std::invalid_argument("coefficient list length must be n+1");
    return form;
}

// ---------------------------------------------------------------------------
// experiment JSON
// ---------------------------------------------------------------------------

inline ojson config_to_json(const ExperimentConfig& cfg) {
    ojson j;
    j["distance"] = cfg.distance;
    j["theta"] = cfg.rotation.theta;
    j["phi"] = cfg.rotation.phi;
    j["p1"] = cfg.noise.p1;
    j["p2"] = cfg.noise.p2;
    j["p_meas"] = cfg.noise.p_meas;
    j["rounds"] = cfg.effective_rounds();
    j["shots"] = cfg.shots;
    j["seed"] = cfg.seed;
    return j;
}

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
    ExperimentConfig cfg;
    cfg.distance = j.at("distance").get<int>();
    cfg.rotation.theta = j.at("theta").get<double>();
    cfg.rotation.phi = j.at("phi").get<double>();
    cfg.noise.p1 = j.at("p1").get<double>();
    cfg.noise.p2 = j.at("p2").get<double>();
    cfg.noise.p_meas = j.at("p_meas").get<double>();
    cfg.rounds = j.at("rounds").get<int>();
    cfg.shots = j.at("shots").get<long long>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
    return cfg;
}

inline ojson experiment_to_json(const ExperimentConfig& cfg, const ExperimentResult& res,
                                bool with_records = false) {
    ojson j;
    j["config"] = config_to_json(cfg);
    ojson stats = ojson::array();
    for (const TrajectoryStats& s : res.stats) {
        ojson e;
        e["trajectory"] = s.trajectory.to_compact_string();
        e["count"] = s.count;
        e["mean_fidelity"] = s.mean_fidelity;
        e["frequency"] = s.frequency;
        stats.push_back(std::move(e));
    }
    j["stats"] = std::move(stats);
    j["logical_error_rate"] = res.logical_error_rate;
    j["discard_rate"] = res.discard_rate;
    j["mean_fidelity"] = res.mean_fidelity;
    j["shots"] = res.shots;
    j["stable_shots"] = res.stable_shots;
    if (with_records) {
        ojson recs = ojson::array();
        for (const ShotRecord& r : res.records) {
            ojson e;
            e["trajectory"] = r.trajectory.to_compact_string();
            e["stable"] = r.stable;
            e["fidelity"] = r.fidelity;
            e["logical_error"] = r.logical_error;
            recs.push_back(std::move(e));
        }
        j["records"] = std::move(recs);
    }
    return j;
}

inline Trajectory trajectory_from_compact(const std::string& s) {
    auto zpos = s.find('z', 1);
    if (s.empty() || s[0] != 'x' || zpos == std::string::npos)
        throw std::invalid_argument("bad trajectory token: " + s);
    return Trajectory::parse(s, static_cast<int>(zpos - 1), static_cast<int>(s.size() - zpos - 1));
}

inline std::vector<TrajectoryStats> stats_from_json(const nlohmann::json& j) {
    std::vector<TrajectoryStats> out;
    for (const auto& e : j.at("stats")) {
        TrajectoryStats s;
        s.trajectory = trajectory_from_compact(e.at("trajectory").get<std::string>());
        s.count = e.at("count").get<long long>();
        s.mean_fidelity = e.at("mean_fidelity").get<double>();
        s.frequency = e.at("frequency").get<double>();
        out.push_back(std::move(s));
    }
    return out;
}

inline std::vector<ShotRecord> records_from_json(const nlohmann::json& j) {
    std::vector<ShotRecord> out;
    if (!j.contains("records")) return out;
    for (const auto& e : j.at("records")) {
        ShotRecord r;
        r.trajectory = trajectory_from_compact(e.at("trajectory").get<std::string>());
        r.stable = e.at("stable").get<bool>();
        r.fidelity = e.at("fidelity").get<double>();
        r.logical_error = e.at("logical_error").get<bool>();
        out.push_back(std::move(r));
    }
    return out;
}

// ---------------------------------------------------------------------------
// lookup table JSON
// ---------------------------------------------------------------------------

inline ojson table_to_json(const LookupTable& table) {
    ojson j;
    j["budget"] = table.budget;
    j["whitelist_frequency"] = table.whitelist_frequency;
    ojson wl = ojson::array();
    for (const Trajectory& t : table.whitelist) wl.push_back(t.to_compact_string());
    j["whitelist"] = std::move(wl);
    ojson entries = ojson::array();
    for (const LookupEntry& e : table.entries) {
        ojson row;
        row["trajectory"] = e.trajectory.to_compact_string();
        row["mean_fidelity"] = e.mean_fidelity;
        row["frequency"] = e.frequency;
        entries.push_back(std::move(row));
    }
    j["entries"] = std::move(entries);
    return j;
}

// ---------------------------------------------------------------------------
// run manifest
// ---------------------------------------------------------------------------

inline ojson make_manifest(const std::string& command_line, const std::vector<std::string>& inputs,
                           const ojson& parameters, const std::string& output_bytes) {
    ojson j;
    j["command"] = command_line;
    j["inputs"] = inputs;
    j["parameters"] = parameters;
    j["tool_version"] = std::string(kToolVersion);
    j["output_digest"] = digest_hex(output_bytes);
    return j;
}

}  // namespace tinj
