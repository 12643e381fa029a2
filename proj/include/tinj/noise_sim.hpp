#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "tinj/amplitude.hpp"
#include "tinj/derive.hpp"
#include "tinj/errors.hpp"
#include "tinj/layout.hpp"
#include "tinj/oracle.hpp"
#include "tinj/rng.hpp"
#include "tinj/trajectory.hpp"

namespace tinj {

inline constexpr double kLogicalErrorFidelityThreshold = 0.5;

/// Balanced circuit-level Pauli noise: X/Y/Z each p1/3 after single-qubit
/// gates, the 15 non-identity pairs each p2/15 after CNOTs, and a
/// measurement record flip with probability p_meas.
struct NoiseModel {
    double p1 = 0.0;
    double p2 = 0.0;
    double p_meas = 0.0;

    bool is_zero() const { return p1 == 0.0 && p2 == 0.0 && p_meas == 0.0; }

    void validate() const {
        for (double p : {p1, p2, p_meas})
            if (!(p >= 0.0 && p < 0.5)) throw std::invalid_argument("noise probabilities must be in [0, 0.5)");
    }

    static NoiseModel uniform(double p) { return {p, p, p}; }
};

struct ExperimentConfig {
    int distance = 2;
    PhysicalRotation rotation;
    NoiseModel noise;
    int rounds = 0;  // 0 -> distance
    long long shots = 1;
    std::uint64_t seed = 0;

    int effective_rounds() const { return rounds > 0 ? rounds : distance; }
};

enum class OpKind { rotate_data, hadamard, cnot, measure_reset };

struct CircuitOp {
    OpKind kind;
    int q0 = -1;
    int q1 = -1;       // CNOT target
    int stab = -1;     // measure_reset: stabiliser slot
    int round = -1;    // measure_reset: sweep index
    bool noisy = true;
};

/// Gate list for transversal injection with one shared, reused measurement
/// ancilla: transversal rotation on all data, then `rounds` noisy sweeps
/// plus one final noiseless sweep over all stabilisers. Within each
/// stabiliser the CNOTs run in ascending data-qubit order; slots are the X
/// stabilisers first, then the Z stabilisers, both in layout order.
struct EncodingCircuit {
    int n_data = 0;
    int ancilla = 0;
    int n_slots = 0;
    int noisy_rounds = 0;  // total sweeps = noisy_rounds + 1
    std::vector<CircuitOp> ops;

    int total_rounds() const { return noisy_rounds + 1; }
};

inline EncodingCircuit build_encoding_circuit(const CodeLayout& lay, int rounds) {
    if (lay.variant != Variant::rotated)
        throw UnsupportedLayoutError("noise simulation targets the rotated code");
    if (rounds < 1) throw std::invalid_argument("rounds must be >= 1");
    if (lay.n_data + 1 > kMaxOracleQubits)
        throw TooLargeError("simulation needs n_data + 1 <= 20 qubits");
    EncodingCircuit c;
    c.n_data = lay.n_data;
    c.ancilla = lay.n_data;
    c.n_slots = lay.n_stabilizers();
    c.noisy_rounds = rounds;
    for (int q = 0; q < lay.n_data; ++q)
        c.ops.push_back({OpKind::rotate_data, q, -1, -1, -1, true});
    for (int r = 0; r <= rounds; ++r) {
        const bool noisy = r < rounds;
        for (int s = 0; s < c.n_slots; ++s) {
            const bool is_x = s < lay.n_x();
            const auto& support = is_x ? lay.x_stabilizers[s] : lay.z_stabilizers[s - lay.n_x()];
            if (is_x) c.ops.push_back({OpKind::hadamard, c.ancilla, -1, -1, -1, noisy});
            for (int q : support) {
                const int ctrl = is_x ? c.ancilla : q;
                const int tgt = is_x ? q : c.ancilla;
                c.ops.push_back({OpKind::cnot, ctrl, tgt, -1, -1, noisy});
            }
            if (is_x) c.ops.push_back({OpKind::hadamard, c.ancilla, -1, -1, -1, noisy});
            c.ops.push_back({OpKind::measure_reset, c.ancilla, -1, s, r, noisy});
        }
    }
    return c;
}

/// Deterministic fault injection for tests: Pauli faults applied after a
/// given op index, and forced measurement-record flips.
struct FaultPlan {
    struct Fault {
        std::size_t after_op;
        int qubit;
        char pauli;  // 'X', 'Y', 'Z'
    };
    struct MeasureFlip {
        int round;
        int stab;
    };
    std::vector<Fault> faults;
    std::vector<MeasureFlip> flips;
};

struct ShotRecord {
    Trajectory trajectory;
    std::vector<std::uint64_t> syndrome_history;  // per sweep, bit s = slot s
    bool stable = false;
    double fidelity = 0.0;
    bool logical_error = false;
};

struct TrajectoryStats {
    Trajectory trajectory;
    long long count = 0;
    double mean_fidelity = 0.0;
    double frequency = 0.0;
};

struct ExperimentResult {
    std::vector<TrajectoryStats> stats;  // stable shots only, sorted by trajectory
    double logical_error_rate = 0.0;     // over stable shots, fidelity < 1/2
    double discard_rate = 0.0;
    double mean_fidelity = 0.0;  // over stable shots
    long long shots = 0;
    long long stable_shots = 0;
    std::vector<ShotRecord> records;  // filled when keep_records
};

namespace detail {

struct DenseSim {
    int n;  // qubits including ancilla
    std::vector<complexd> amps;

    explicit DenseSim(int n_qubits) : n(n_qubits), amps(std::size_t{1} << n_qubits, 0.0) {
        amps[0] = 1.0;
    }

    void apply_1q(int q, const complexd m00, const complexd m01, const complexd m10,
                  const complexd m11) {
        const std::uint64_t bit = std::uint64_t{1} << q;
        for (std::uint64_t base = 0; base < amps.size(); ++base) {
            if (base & bit) continue;
            const complexd a0 = amps[base];
            const complexd a1 = amps[base | bit];
            amps[base] = m00 * a0 + m01 * a1;
            amps[base | bit] = m10 * a0 + m11 * a1;
        }
    }

    void apply_pauli(int q, char p) {
        const std::uint64_t bit = std::uint64_t{1} << q;
        switch (p) {
            case 'X':
                for (std::uint64_t base = 0; base < amps.size(); ++base)
                    if (!(base & bit)) std::swap(amps[base], amps[base | bit]);
                break;
            case 'Y':
                for (std::uint64_t base = 0; base < amps.size(); ++base)
                    if (!(base & bit)) {
                        const complexd a0 = amps[base];
                        amps[base] = complexd{0, -1} * amps[base | bit];
                        amps[base | bit] = complexd{0, 1} * a0;
                    }
                break;
            case 'Z':
                for (std::uint64_t m = 0; m < amps.size(); ++m)
                    if (m & bit) amps[m] = -amps[m];
                break;
            default:
                throw std::invalid_argument("unknown Pauli");
        }
    }

    void apply_cnot(int ctrl, int tgt) {
        const std::uint64_t cb = std::uint64_t{1} << ctrl;
        const std::uint64_t tb = std::uint64_t{1} << tgt;
        for (std::uint64_t m = 0; m < amps.size(); ++m)
            if ((m & cb) && !(m & tb)) std::swap(amps[m], amps[m | tb]);
    }

    /// Z-basis measurement with collapse + renormalisation, then reset to |0>.
    int measure_reset(int q, SplitMix64& rng) {
        const std::uint64_t bit = std::uint64_t{1} << q;
        double p_one = 0;
        for (std::uint64_t m = 0; m < amps.size(); ++m)
            if (m & bit) p_one += std::norm(amps[m]);
        const int outcome = rng.uniform() < p_one ? 1 : 0;
        const double keep = outcome ? p_one : 1.0 - p_one;
        const double inv = 1.0 / std::sqrt(std::max(keep, 1e-300));
        for (std::uint64_t m = 0; m < amps.size(); ++m) {
            if (((m & bit) != 0) != (outcome != 0))
                amps[m] = 0.0;
            else
                amps[m] *= inv;
        }
        if (outcome) apply_pauli(q, 'X');  // reset
        return outcome;
    }
};

struct KahanSum {
    double sum = 0.0, c = 0.0;
    void add(double x) {
        const double y = x - c;
        const double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
};

}  // namespace detail

/// Runs shots of the noisy encoding circuit for one rotated layout,
/// caching the heralded reference state per trajectory.
class InjectionSimulator {
  public:
    InjectionSimulator(const CodeLayout& lay, const ExperimentConfig& config)
        : layout_(lay), config_(config), circuit_(build_encoding_circuit(lay, config.effective_rounds())) {
        config_.noise.validate();
        if (config_.shots < 1) throw std::invalid_argument("shots must be >= 1");
    }

    const EncodingCircuit& circuit() const { return circuit_; }

    ShotRecord run_shot(std::uint64_t shot_index, const FaultPlan* plan = nullptr) const {
        SplitMix64 rng = SplitMix64::substream(config_.seed, shot_index);
        detail::DenseSim sim(circuit_.n_data + 1);
        const int sweeps = circuit_.total_rounds();
        std::vector<std::uint64_t> history(sweeps, 0);
        const double c = std::cos(config_.rotation.theta / 2);
        const double s = std::sin(config_.rotation.theta / 2);
        const complexd eip = std::polar(1.0, config_.rotation.phi);
        for (std::size_t k = 0; k < circuit_.ops.size(); ++k) {
            const CircuitOp& op = circuit_.ops[k];
            switch (op.kind) {
                case OpKind::rotate_data:
                    sim.apply_1q(op.q0, c, -s * std::conj(eip), s * eip, c);
                    if (op.noisy) maybe_fault1(sim, op.q0, rng);
                    break;
                case OpKind::hadamard:
                    sim.apply_1q(op.q0, std::numbers::sqrt2 / 2, std::numbers::sqrt2 / 2,
                                 std::numbers::sqrt2 / 2, -std::numbers::sqrt2 / 2);
                    if (op.noisy) maybe_fault1(sim, op.q0, rng);
                    break;
                case OpKind::cnot:
                    sim.apply_cnot(op.q0, op.q1);
                    if (op.noisy) maybe_fault2(sim, op.q0, op.q1, rng);
                    break;
                case OpKind::measure_reset: {
                    int recorded = sim.measure_reset(op.q0, rng);
                    if (op.noisy && config_.noise.p_meas > 0 && rng.uniform() < config_.noise.p_meas)
                        recorded ^= 1;
                    if (plan)
                        for (const auto& f : plan->flips)
                            if (f.round == op.round && f.stab == op.stab) recorded ^= 1;
                    history[op.round] |= static_cast<std::uint64_t>(recorded) << op.stab;
                    break;
                }
            }
            if (plan)
                for (const auto& f : plan->faults)
                    if (f.after_op == k) sim.apply_pauli(f.qubit, f.pauli);
        }
        ShotRecord rec;
        rec.syndrome_history = std::move(history);
        rec.trajectory = trajectory_from_word(rec.syndrome_history[0]);
        rec.stable = std::all_of(rec.syndrome_history.begin(), rec.syndrome_history.end(),
                                 [&](std::uint64_t w) { return w == rec.syndrome_history[0]; });
        rec.fidelity = fidelity_against_heralded(sim, rec.trajectory);
        rec.logical_error = rec.fidelity < kLogicalErrorFidelityThreshold;
        return rec;
    }

    ExperimentResult run_experiment(bool keep_records = false) const {
        const long long shots = config_.shots;
        constexpr long long kChunk = 1024;
        const long long n_chunks = (shots + kChunk - 1) / kChunk;
        struct ChunkAgg {
            std::map<Trajectory, std::pair<long long, detail::KahanSum>> per_traj;
            long long stable = 0, errors = 0;
            detail::KahanSum fid;
            std::vector<ShotRecord> records;
        };
        std::vector<ChunkAgg> chunks(static_cast<std::size_t>(n_chunks));
        const unsigned workers =
            std::max(1u, std::min(std::thread::hardware_concurrency(), 16u));
        std::atomic<long long> next_chunk{0};
        auto work = [&]() {
            for (;;) {
                const long long ci = next_chunk.fetch_add(1);
                if (ci >= n_chunks) return;
                ChunkAgg& agg = chunks[static_cast<std::size_t>(ci)];
                const long long begin = ci * kChunk;
                const long long end = std::min(shots, begin + kChunk);
                for (long long s = begin; s < end; ++s) {
                    ShotRecord rec = run_shot(static_cast<std::uint64_t>(s));
                    if (rec.stable) {
                        ++agg.stable;
                        agg.fid.add(rec.fidelity);
                        if (rec.logical_error) ++agg.errors;
                        auto& slot = agg.per_traj[rec.trajectory];
                        ++slot.first;
                        slot.second.add(rec.fidelity);
                    }
                    if (keep_records) agg.records.push_back(std::move(rec));
                }
            }
        };
        std::vector<std::thread> pool;
        for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
        work();
        for (auto& t : pool) t.join();

        ExperimentResult res;
        res.shots = shots;
        std::map<Trajectory, std::pair<long long, double>> merged;
        long long errors = 0;
        double fid_total = 0;
        for (const ChunkAgg& agg : chunks) {
            res.stable_shots += agg.stable;
            errors += agg.errors;
            fid_total += agg.fid.sum;
            for (const auto& [traj, cs] : agg.per_traj) {
                auto& slot = merged[traj];
                slot.first += cs.first;
                slot.second += cs.second.sum;
            }
            if (keep_records)
                res.records.insert(res.records.end(), agg.records.begin(), agg.records.end());
        }
        res.discard_rate = shots == 0 ? 0.0 : double(shots - res.stable_shots) / double(shots);
        if (res.stable_shots > 0) {
            res.logical_error_rate = double(errors) / double(res.stable_shots);
            res.mean_fidelity = fid_total / double(res.stable_shots);
            for (const auto& [traj, cs] : merged)
                res.stats.push_back({traj, cs.first, cs.second / double(cs.first),
                                     double(cs.first) / double(res.stable_shots)});
        }
        return res;
    }

  private:
    void maybe_fault1(detail::DenseSim& sim, int q, SplitMix64& rng) const {
        if (config_.noise.p1 <= 0) return;
        if (rng.uniform() < config_.noise.p1) sim.apply_pauli(q, "XYZ"[rng.below(3)]);
    }

    void maybe_fault2(detail::DenseSim& sim, int q0, int q1, SplitMix64& rng) const {
        if (config_.noise.p2 <= 0) return;
        if (rng.uniform() >= config_.noise.p2) return;
        const int k = static_cast<int>(rng.below(15)) + 1;  // IX .. ZZ
        const char table[4] = {'I', 'X', 'Y', 'Z'};
        if (table[k / 4] != 'I') sim.apply_pauli(q0, table[k / 4]);
        if (table[k % 4] != 'I') sim.apply_pauli(q1, table[k % 4]);
    }

    Trajectory trajectory_from_word(std::uint64_t w) const {
        Trajectory t;
        t.n_x = layout_.n_x();
        t.n_z = layout_.n_z();
        t.x_bits = w & ((std::uint64_t{1} << t.n_x) - 1);
        t.z_bits = (w >> t.n_x) & ((std::uint64_t{1} << t.n_z) - 1);
        return t;
    }

    /// Overlap with the exact state heralded by the round-1 outcomes. The
    /// ancilla ends in |0>, so the data amplitudes are the low slice.
    double fidelity_against_heralded(const detail::DenseSim& sim, const Trajectory& traj) const {
        const StateVector* expected = heralded_state(traj);
        if (expected == nullptr) return 0.0;  // ideally impossible trajectory
        complexd ov = 0;
        for (std::size_t m = 0; m < expected->amps.size(); ++m)
            ov += std::conj(expected->amps[m]) * sim.amps[m];
        return std::norm(ov);
    }

    const StateVector* heralded_state(const Trajectory& traj) const {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        auto it = expected_.find(traj);
        if (it == expected_.end()) {
            std::optional<StateVector> entry;
            try {
                const LogicalStateForm form = derive_state(layout_, traj);
                const auto [a, b] = normalize(form, config_.rotation);
                auto [c0, c1] = codewords(layout_, traj);
                StateVector sv = StateVector::zeros(layout_.n_data);
                for (std::size_t m = 0; m < sv.amps.size(); ++m)
                    sv.amps[m] = a * c0.amps[m] + b * c1.amps[m];
                entry = std::move(sv);
            } catch (const ZeroStateError&) {
                entry = std::nullopt;
            }
            it = expected_.emplace(traj, std::move(entry)).first;
        }
        return it->second ? &*it->second : nullptr;
    }

    CodeLayout layout_;
    ExperimentConfig config_;
    EncodingCircuit circuit_;
    mutable std::mutex cache_mutex_;
    mutable std::map<Trajectory, std::optional<StateVector>> expected_;
};

inline ShotRecord run_shot(const CodeLayout& lay, const ExperimentConfig& config,
                           std::uint64_t shot_index, const FaultPlan* plan = nullptr) {
    return InjectionSimulator(lay, config).run_shot(shot_index, plan);
}

inline ExperimentResult run_experiment(const CodeLayout& lay, const ExperimentConfig& config,
                                       bool keep_records = false) {
    return InjectionSimulator(lay, config).run_experiment(keep_records);
}

}  // namespace tinj
