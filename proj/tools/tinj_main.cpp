// Command-line front end: layout/derive/enumerate/spans/verify/simulate/
// postselect/pipeline subcommands over the library, with JSON/CSV file
// interchange and a reproducibility manifest next to every file output.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tinj/amplitude.hpp"
#include "tinj/derive.hpp"
#include "tinj/io.hpp"
#include "tinj/layout.hpp"
#include "tinj/noise_sim.hpp"
#include "tinj/oracle.hpp"
#include "tinj/postselect.hpp"
#include "tinj/rng.hpp"

namespace {

using namespace tinj;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitTooLarge = 3;
constexpr int kExitVerifyMismatch = 4;

struct VerifyMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

/// Emit to stdout, or to a file plus a <file>.manifest.json sidecar.
void emit_output(const std::string& content, const std::string& out_path,
                 const std::string& command_line, const std::vector<std::string>& inputs,
                 const ojson& parameters) {
    if (out_path.empty()) {
        std::cout << content;
        return;
    }
    write_file(out_path, content);
    const ojson manifest = make_manifest(command_line, inputs, parameters, content);
    write_file(out_path + ".manifest.json", manifest.dump(2) + "\n");
}

CodeLayout load_layout(const std::string& path) {
    return layout_from_json(nlohmann::json::parse(read_file(path)));
}

CodeLayout build_layout(int distance, const std::string& variant) {
    if (variant == "unrotated") return build_unrotated_layout(distance);
    if (variant == "rotated") return build_rotated_layout(distance);
    throw std::invalid_argument("variant must be unrotated or rotated");
}

std::vector<Trajectory> all_trajectories(const CodeLayout& lay) {
    std::vector<Trajectory> out;
    const std::uint64_t nx = std::uint64_t{1} << lay.n_x();
    const std::uint64_t nz = std::uint64_t{1} << lay.n_z();
    out.reserve(nx * nz);
    for (std::uint64_t x = 0; x < nx; ++x)
        for (std::uint64_t z = 0; z < nz; ++z) out.push_back({x, z, lay.n_x(), lay.n_z()});
    return out;
}

std::string join_args(int argc, char** argv) {
    std::string s;
    for (int i = 0; i < argc; ++i) {
        if (i) s.push_back(' ');
        s += argv[i];
    }
    return s;
}

// ---------------------------------------------------------------------------

struct CommonOut {
    std::string out_path;
    std::string command_line;
};

void add_output_flag(CLI::App* cmd, std::string& out_path) {
    cmd->add_option("-o,--output", out_path, "output file (default: stdout)");
}

int run_layout(const CommonOut& common, int distance, const std::string& variant) {
    const CodeLayout lay = build_layout(distance, variant);
    ojson params;
    params["distance"] = distance;
    params["variant"] = variant;
    emit_output(layout_to_json(lay).dump(2) + "\n", common.out_path, common.command_line, {}, params);
    return kExitOk;
}

int run_derive(const CommonOut& common, const std::string& layout_path,
               const std::string& trajectory_text) {
    const CodeLayout lay = load_layout(layout_path);
    const Trajectory traj = Trajectory::parse(trajectory_text, lay.n_x(), lay.n_z());
    const LogicalStateForm form = derive_state(lay, traj);
    ojson params;
    params["trajectory"] = trajectory_text;
    emit_output(form_to_json(form).dump(2) + "\n", common.out_path, common.command_line,
                {layout_path}, params);
    return kExitOk;
}

int run_enumerate(const CommonOut& common, const std::string& layout_path, bool trivial_x) {
    const CodeLayout lay = load_layout(layout_path);
    const auto forms = enumerate_all_states(
        lay, trivial_x ? XRestriction::trivial_only : XRestriction::all);
    std::string body;
    for (const auto& [traj, form] : forms) body += form_to_json(form).dump() + "\n";
    ojson params;
    params["trivial_x"] = trivial_x;
    emit_output(body, common.out_path, common.command_line, {layout_path}, params);
    return kExitOk;
}

int run_spans(const CommonOut& common, const std::string& layout_path, const RotationGrid& grid,
              bool trivial_x) {
    const CodeLayout lay = load_layout(layout_path);
    const auto forms = enumerate_all_states(
        lay, trivial_x ? XRestriction::trivial_only : XRestriction::all);
    std::string body = "theta,phi,trajectory,theta_L,phi_L,probability\n";
    for (const PhysicalRotation& rot : grid.points()) {
        for (const auto& [traj, form] : forms) {
            const double prob = trajectory_probability(form, rot);
            body += format_double(rot.theta) + "," + format_double(rot.phi) + "," +
                    traj.to_compact_string() + ",";
            try {
                const BlochPoint p = to_bloch(form, rot);
                body += format_double(p.theta_l) + "," + format_double(p.phi_l);
            } catch (const ZeroStateError&) {
                body += ",";  // impossible here; angles undefined
            }
            body += "," + format_double(prob) + "\n";
        }
    }
    ojson params;
    params["theta"] = {grid.theta_min, grid.theta_max, grid.theta_count};
    params["phi"] = {grid.phi_min, grid.phi_max, grid.phi_count};
    params["trivial_x"] = trivial_x;
    emit_output(body, common.out_path, common.command_line, {layout_path}, params);
    return kExitOk;
}

int run_verify(const CommonOut& common, const std::string& layout_path, double theta, double phi,
               int rotations, int trajectories, std::uint64_t seed, bool seed_set) {
    const CodeLayout lay = load_layout(layout_path);
    if (lay.n_data > kMaxOracleQubits)
        throw TooLargeError("oracle verification needs n_data <= 20");
    const bool sampled = rotations > 0 || trajectories > 0;
    if (sampled && !seed_set)
        throw std::invalid_argument("--seed is required when sampling rotations or trajectories");
    std::vector<PhysicalRotation> rots;
    SplitMix64 rng(seed);
    if (rotations > 0) {
        for (int k = 0; k < rotations; ++k)
            rots.push_back({0.15 + (std::numbers::pi - 0.3) * rng.uniform(),
                            2 * std::numbers::pi * rng.uniform()});
    } else {
        rots.push_back({theta, phi});
    }
    std::vector<Trajectory> trajs;
    if (trajectories > 0) {
        for (int k = 0; k < trajectories; ++k)
            trajs.push_back({rng.next() & ((std::uint64_t{1} << lay.n_x()) - 1),
                             rng.next() & ((std::uint64_t{1} << lay.n_z()) - 1), lay.n_x(),
                             lay.n_z()});
    } else {
        if (lay.n_stabilizers() > 12)
            throw TooLargeError("full trajectory sweep capped at 12 stabilisers; use --trajectories");
        trajs = all_trajectories(lay);
    }
    std::string body = "trajectory,fidelity,probability,max_residual\n";
    bool mismatch = false;
    for (const Trajectory& traj : trajs) {
        for (const PhysicalRotation& rot : rots) {
            const LogicalStateForm form = derive_state(lay, traj);
            const double p_derived = trajectory_probability(form, rot);
            double fid = 1.0, prob = 0.0, residual = 0.0;
            try {
                const OracleResult r = oracle_state(lay, traj, rot);
                const auto [a, b] = normalize(form, rot);
                fid = std::norm(std::conj(r.a) * a + std::conj(r.b) * b);
                prob = r.probability;
                residual = std::max(r.residual, std::abs(prob - p_derived));
            } catch (const ImpossibleTrajectoryError&) {
                prob = 0.0;
                residual = p_derived;  // derived must agree that it is impossible
            }
            if (fid < 1.0 - 1e-9 || residual > 1e-9) mismatch = true;
            body += traj.to_compact_string() + "," + format_double(fid) + "," +
                    format_double(prob) + "," + format_double(residual) + "\n";
        }
    }
    ojson params;
    params["rotations"] = rotations;
    params["trajectories"] = trajectories;
    if (seed_set) params["seed"] = seed;
    emit_output(body, common.out_path, common.command_line, {layout_path}, params);
    if (mismatch) throw VerifyMismatch("derived states disagree with the oracle");
    return kExitOk;
}

ExperimentConfig make_config(int distance, double theta, double phi, double p1, double p2,
                             double pmeas, long long shots, std::uint64_t seed, int rounds) {
    ExperimentConfig cfg;
    cfg.distance = distance;
    cfg.rotation = {theta, phi};
    cfg.noise = {p1, p2, pmeas};
    cfg.shots = shots;
    cfg.seed = seed;
    cfg.rounds = rounds;
    return cfg;
}

int run_simulate(const CommonOut& common, const ExperimentConfig& cfg, bool with_records,
                 const std::string& shots_csv) {
    const CodeLayout lay = build_rotated_layout(cfg.distance);
    const ExperimentResult res = run_experiment(lay, cfg, with_records || !shots_csv.empty());
    if (!shots_csv.empty()) {
        std::string body = "shot,trajectory,stable,fidelity,logical_error\n";
        for (std::size_t s = 0; s < res.records.size(); ++s) {
            const ShotRecord& r = res.records[s];
            body += std::to_string(s) + "," + r.trajectory.to_compact_string() + "," +
                    std::to_string(int(r.stable)) + "," + format_double(r.fidelity) + "," +
                    std::to_string(int(r.logical_error)) + "\n";
        }
        write_file(shots_csv, body);
    }
    const ojson j = experiment_to_json(cfg, res, with_records);
    emit_output(j.dump(2) + "\n", common.out_path, common.command_line, {}, config_to_json(cfg));
    return kExitOk;
}

int run_postselect(const CommonOut& common, const std::string& experiment_path, double budget,
                   const std::string& apply_path, const std::string& table_out) {
    const nlohmann::json train = nlohmann::json::parse(read_file(experiment_path));
    const LookupTable table = build_lookup(stats_from_json(train), budget);
    std::vector<std::string> inputs{experiment_path};
    ojson out;
    out["table"] = table_to_json(table);
    std::vector<ShotRecord> records;
    if (!apply_path.empty()) {
        const nlohmann::json eval = nlohmann::json::parse(read_file(apply_path));
        records = records_from_json(eval);
        if (records.empty())
            throw std::invalid_argument(
                "apply target has no records; rerun simulate with --with-records");
        inputs.push_back(apply_path);
    } else {
        records = records_from_json(train);
    }
    if (!records.empty()) {
        const PostselectionSummary s = apply_postselection(records, table);
        ojson filtered;
        filtered["considered"] = s.considered;
        filtered["accepted"] = s.accepted;
        filtered["accepted_fraction"] = s.accepted_fraction;
        filtered["logical_error_rate"] = s.logical_error_rate;
        filtered["mean_fidelity"] = s.mean_fidelity;
        out["postselected"] = std::move(filtered);
    }
    if (!table_out.empty()) write_file(table_out, table_to_json(table).dump(2) + "\n");
    ojson params;
    params["budget"] = budget;
    emit_output(out.dump(2) + "\n", common.out_path, common.command_line, inputs, params);
    return kExitOk;
}

int run_pipeline(const CommonOut& common, ExperimentConfig train_cfg, std::uint64_t eval_seed,
                 double budget) {
    const CodeLayout lay = build_rotated_layout(train_cfg.distance);
    const ExperimentResult train = run_experiment(lay, train_cfg, false);
    const LookupTable table = build_lookup(train.stats, budget);
    ExperimentConfig eval_cfg = train_cfg;
    eval_cfg.seed = eval_seed;
    const ExperimentResult eval = run_experiment(lay, eval_cfg, true);
    const PostselectionSummary ps = apply_postselection(eval.records, table);
    ojson out;
    out["train"] = experiment_to_json(train_cfg, train, false);
    out["table"] = table_to_json(table);
    out["eval"] = experiment_to_json(eval_cfg, eval, false);
    ojson filtered;
    filtered["considered"] = ps.considered;
    filtered["accepted"] = ps.accepted;
    filtered["accepted_fraction"] = ps.accepted_fraction;
    filtered["logical_error_rate"] = ps.logical_error_rate;
    filtered["mean_fidelity"] = ps.mean_fidelity;
    out["postselected"] = std::move(filtered);
    ojson params = config_to_json(train_cfg);
    params["eval_seed"] = eval_seed;
    params["budget"] = budget;
    emit_output(out.dump(2) + "\n", common.out_path, common.command_line, {}, params);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"transversal-injection state derivation and simulation"};
    app.require_subcommand(1);
    const std::string command_line = join_args(argc, argv);

    // layout
    auto* layout_cmd = app.add_subcommand("layout", "emit a surface-code layout as JSON");
    int distance = 2;
    std::string variant = "unrotated";
    std::string out_path;
    layout_cmd->add_option("-d,--distance", distance, "code distance")->required();
    layout_cmd->add_option("--variant", variant, "unrotated|rotated");
    add_output_flag(layout_cmd, out_path);

    // derive
    auto* derive_cmd = app.add_subcommand("derive", "derive the logical state of one trajectory");
    std::string layout_path, trajectory_text;
    derive_cmd->add_option("--layout", layout_path, "layout JSON path")->required();
    derive_cmd->add_option("-t,--trajectory", trajectory_text, "e.g. \"x=00 z=01\"")->required();
    add_output_flag(derive_cmd, out_path);

    // enumerate
    auto* enum_cmd = app.add_subcommand("enumerate", "stream every trajectory's form as NDJSON");
    bool trivial_x = false;
    enum_cmd->add_option("--layout", layout_path, "layout JSON path")->required();
    enum_cmd->add_flag("--trivial-x", trivial_x, "restrict to the trivial X syndrome");
    add_output_flag(enum_cmd, out_path);

    // spans
    auto* spans_cmd = app.add_subcommand("spans", "Bloch point cloud over a rotation grid (CSV)");
    RotationGrid grid;
    spans_cmd->add_option("--layout", layout_path, "layout JSON path")->required();
    spans_cmd->add_option("--theta-start", grid.theta_min)->required();
    spans_cmd->add_option("--theta-stop", grid.theta_max)->required();
    spans_cmd->add_option("--theta-count", grid.theta_count)->required();
    spans_cmd->add_option("--phi-start", grid.phi_min)->required();
    spans_cmd->add_option("--phi-stop", grid.phi_max)->required();
    spans_cmd->add_option("--phi-count", grid.phi_count)->required();
    spans_cmd->add_flag("--trivial-x", trivial_x, "restrict to the trivial X syndrome");
    add_output_flag(spans_cmd, out_path);

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "compare derived states against the oracle");
    double theta = 1.0, phi = 0.3;
    int rotations = 0, trajectories = 0;
    std::uint64_t seed = 0;
    verify_cmd->add_option("--layout", layout_path, "layout JSON path")->required();
    verify_cmd->add_option("--theta", theta, "single rotation theta");
    verify_cmd->add_option("--phi", phi, "single rotation phi");
    verify_cmd->add_option("--rotations", rotations, "number of random rotations");
    verify_cmd->add_option("--trajectories", trajectories, "number of random trajectories");
    auto* verify_seed = verify_cmd->add_option("--seed", seed, "RNG seed for sampling");
    add_output_flag(verify_cmd, out_path);

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "noisy encoding Monte Carlo on the rotated code");
    double p1 = 0, p2 = 0, pmeas = 0;
    long long shots = 1;
    int rounds = 0;
    bool with_records = false;
    std::string shots_csv;
    sim_cmd->add_option("-d,--distance", distance)->required();
    sim_cmd->add_option("--theta", theta)->required();
    sim_cmd->add_option("--phi", phi)->required();
    sim_cmd->add_option("--p1", p1, "single-qubit depolarising rate");
    sim_cmd->add_option("--p2", p2, "two-qubit depolarising rate");
    sim_cmd->add_option("--pmeas", pmeas, "measurement flip rate");
    sim_cmd->add_option("--shots", shots)->required();
    sim_cmd->add_option("--seed", seed)->required();
    sim_cmd->add_option("--rounds", rounds, "noisy rounds (default: distance)");
    sim_cmd->add_flag("--with-records", with_records, "embed per-shot records in the JSON");
    sim_cmd->add_option("--shots-csv", shots_csv, "also write a per-shot CSV");
    add_output_flag(sim_cmd, out_path);

    // postselect
    auto* post_cmd = app.add_subcommand("postselect", "build and apply a trajectory whitelist");
    std::string experiment_path, apply_path, table_out;
    double budget = 0.2;
    post_cmd->add_option("--experiment", experiment_path, "training experiment JSON")->required();
    post_cmd->add_option("--budget", budget, "acceptance budget in (0,1]")->required();
    post_cmd->add_option("--apply-to", apply_path, "experiment JSON with records to filter");
    post_cmd->add_option("--table-out", table_out, "also write the table JSON here");
    add_output_flag(post_cmd, out_path);

    // pipeline
    auto* pipe_cmd = app.add_subcommand("pipeline", "simulate -> postselect -> report, seeded");
    std::uint64_t eval_seed = 0;
    bool eval_seed_set = false;
    pipe_cmd->add_option("-d,--distance", distance)->required();
    pipe_cmd->add_option("--theta", theta)->required();
    pipe_cmd->add_option("--phi", phi)->required();
    pipe_cmd->add_option("--p1", p1);
    pipe_cmd->add_option("--p2", p2);
    pipe_cmd->add_option("--pmeas", pmeas);
    pipe_cmd->add_option("--shots", shots)->required();
    pipe_cmd->add_option("--seed", seed)->required();
    pipe_cmd->add_option("--eval-seed", eval_seed)->each([&](const std::string&) { eval_seed_set = true; });
    pipe_cmd->add_option("--budget", budget)->required();
    pipe_cmd->add_option("--rounds", rounds);
    add_output_flag(pipe_cmd, out_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }

    const CommonOut common{out_path, command_line};
    try {
        if (*layout_cmd) return run_layout(common, distance, variant);
        if (*derive_cmd) return run_derive(common, layout_path, trajectory_text);
        if (*enum_cmd) return run_enumerate(common, layout_path, trivial_x);
        if (*spans_cmd) return run_spans(common, layout_path, grid, trivial_x);
        if (*verify_cmd)
            return run_verify(common, layout_path, theta, phi, rotations, trajectories, seed,
                              verify_seed->count() > 0);
        if (*sim_cmd)
            return run_simulate(common,
                                make_config(distance, theta, phi, p1, p2, pmeas, shots, seed, rounds),
                                with_records, shots_csv);
        if (*post_cmd) return run_postselect(common, experiment_path, budget, apply_path, table_out);
        if (*pipe_cmd)
            return run_pipeline(common,
                                make_config(distance, theta, phi, p1, p2, pmeas, shots, seed, rounds),
                                eval_seed_set ? eval_seed : seed + 1, budget);
    } catch (const TooLargeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitTooLarge;
    } catch (const VerifyMismatch& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitVerifyMismatch;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitUsage;
}
