#include "tinj/noise_sim.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "tinj/derive.hpp"
#include "tinj/layout.hpp"

using namespace tinj;

namespace {

constexpr double kPi = std::numbers::pi;

ExperimentConfig base_config(int distance, double theta, double phi) {
    ExperimentConfig cfg;
    cfg.distance = distance;
    cfg.rotation = {theta, phi};
    cfg.shots = 1;
    cfg.seed = 42;
    return cfg;
}

int count_ops(const EncodingCircuit& c, OpKind kind) {
    int n = 0;
    for (const CircuitOp& op : c.ops) n += op.kind == kind;
    return n;
}

}  // namespace

TEST(EncodingCircuit, DistanceTwoStructure) {
    const CodeLayout lay = build_rotated_layout(2);
    const EncodingCircuit c = build_encoding_circuit(lay, 2);
    EXPECT_EQ(c.n_data, 4);
    EXPECT_EQ(c.ancilla, 4);
    EXPECT_EQ(c.n_slots, 3);
    EXPECT_EQ(c.total_rounds(), 3);
    EXPECT_EQ(count_ops(c, OpKind::rotate_data), 4);
    // per sweep: two weight-2 X stabilisers (2 CNOTs each) + one weight-4 Z
    EXPECT_EQ(count_ops(c, OpKind::cnot), 3 * (2 + 2 + 4));
    EXPECT_EQ(count_ops(c, OpKind::hadamard), 3 * 4);
    EXPECT_EQ(count_ops(c, OpKind::measure_reset), 3 * 3);
    // final sweep is flagged noiseless
    for (const CircuitOp& op : c.ops) {
        if (op.kind == OpKind::measure_reset) {
            EXPECT_EQ(op.noisy, op.round < 2);
        }
    }
}

TEST(EncodingCircuit, DistanceOneIsRotationOnly) {
    const EncodingCircuit c = build_encoding_circuit(build_rotated_layout(1), 1);
    EXPECT_EQ(count_ops(c, OpKind::rotate_data), 1);
    EXPECT_EQ(count_ops(c, OpKind::cnot), 0);
    EXPECT_EQ(count_ops(c, OpKind::measure_reset), 0);
}

TEST(EncodingCircuit, RejectsUnrotatedLayouts) {
    EXPECT_THROW(build_encoding_circuit(build_unrotated_layout(2), 1), UnsupportedLayoutError);
}

TEST(RunShot, NoiselessShotsAreExact) {
    SplitMix64 rot_rng(271828);
    for (int d : {1, 2, 3}) {
        const CodeLayout lay = build_rotated_layout(d);
        for (int r = 0; r < 5; ++r) {
            ExperimentConfig cfg = base_config(d, 0.15 + 2.8 * rot_rng.uniform(),
                                               6.28 * rot_rng.uniform());
            const InjectionSimulator sim(lay, cfg);
            for (std::uint64_t s = 0; s < 20; ++s) {
                const ShotRecord rec = sim.run_shot(s);
                EXPECT_TRUE(rec.stable);
                EXPECT_NEAR(rec.fidelity, 1.0, 1e-9) << "d=" << d << " shot=" << s;
                EXPECT_FALSE(rec.logical_error);
            }
        }
    }
}

TEST(RunShot, MeasurementFlipIsDiscarded) {
    const CodeLayout lay = build_rotated_layout(2);
    const ExperimentConfig cfg = base_config(2, 1.1, 0.4);
    const InjectionSimulator sim(lay, cfg);
    FaultPlan plan;
    plan.flips.push_back({0, 1});  // flip one recorded outcome in round 1
    const ShotRecord rec = sim.run_shot(3, &plan);
    EXPECT_FALSE(rec.stable);
    EXPECT_NE(rec.syndrome_history[0], rec.syndrome_history[1]);
}

TEST(RunShot, DataPauliBeforeRoundOneReheraldsStably) {
    // A single data-qubit Pauli before the first sweep changes which state
    // is heralded but leaves later sweeps consistent with round 1.
    const CodeLayout lay = build_rotated_layout(2);
    const ExperimentConfig cfg = base_config(2, 1.1, 0.7);
    const InjectionSimulator sim(lay, cfg);
    const std::size_t last_rotation = lay.n_data - 1;  // rotations come first
    for (char pauli : {'X', 'Z'}) {
        for (int q = 0; q < lay.n_data; ++q) {
            FaultPlan plan;
            plan.faults.push_back({last_rotation, q, pauli});
            for (std::uint64_t s = 0; s < 5; ++s)
                EXPECT_TRUE(sim.run_shot(s, &plan).stable) << pauli << q;
        }
    }
}

TEST(RunShot, InjectionEquivalentFaultKeepsFidelityOne) {
    // At theta = pi/2, phi = 0 each qubit sits in |+>, so an X fault is a
    // valid injection of the same state: the heralded form stays exact.
    const CodeLayout lay = build_rotated_layout(2);
    const ExperimentConfig cfg = base_config(2, kPi / 2, 0.0);
    const InjectionSimulator sim(lay, cfg);
    FaultPlan plan;
    plan.faults.push_back({lay.n_data - 1u, 2, 'X'});
    for (std::uint64_t s = 0; s < 10; ++s) {
        const ShotRecord rec = sim.run_shot(s, &plan);
        EXPECT_TRUE(rec.stable);
        EXPECT_NEAR(rec.fidelity, 1.0, 1e-9);
    }
}

TEST(RunShot, FullStabiliserSupportFaultIsInvisible) {
    const CodeLayout lay = build_rotated_layout(2);
    const ExperimentConfig cfg = base_config(2, 1.3, 2.1);
    const InjectionSimulator sim(lay, cfg);
    FaultPlan plan;
    for (int q : lay.x_stabilizers[0]) plan.faults.push_back({lay.n_data - 1u, q, 'X'});
    for (std::uint64_t s = 0; s < 8; ++s) {
        const ShotRecord with = sim.run_shot(s, &plan);
        const ShotRecord without = sim.run_shot(s);
        EXPECT_EQ(with.trajectory, without.trajectory);
        EXPECT_TRUE(with.stable);
        EXPECT_NEAR(with.fidelity, 1.0, 1e-9);
    }
}

TEST(RunExperiment, NoiselessAggregate) {
    ExperimentConfig cfg = base_config(2, 1.0, 0.5);
    cfg.shots = 400;
    const ExperimentResult res = run_experiment(build_rotated_layout(2), cfg);
    EXPECT_EQ(res.stable_shots, 400);
    EXPECT_EQ(res.discard_rate, 0.0);
    EXPECT_EQ(res.logical_error_rate, 0.0);
    EXPECT_NEAR(res.mean_fidelity, 1.0, 1e-9);
    double freq = 0.0;
    for (const TrajectoryStats& s : res.stats) freq += s.frequency;
    EXPECT_NEAR(freq, 1.0, 1e-12);
}

TEST(RunExperiment, HeraldFrequenciesMatchDerivedProbabilities) {
    const CodeLayout lay = build_rotated_layout(2);
    ExperimentConfig cfg = base_config(2, 1.9, 4.2);
    cfg.shots = 10000;
    const ExperimentResult res = run_experiment(lay, cfg);
    const auto forms = enumerate_all_states(lay);
    for (const TrajectoryStats& s : res.stats) {
        const double p = trajectory_probability(forms.at(s.trajectory), cfg.rotation);
        const double sigma = std::sqrt(p * (1 - p) / double(cfg.shots));
        EXPECT_NEAR(s.frequency, p, 3 * sigma + 1e-12) << s.trajectory.to_string();
    }
}

TEST(RunExperiment, DeterministicAcrossRuns) {
    ExperimentConfig cfg = base_config(2, 1.4, 0.9);
    cfg.shots = 2000;
    cfg.noise = NoiseModel{1e-2, 1e-2, 1e-2};
    const CodeLayout lay = build_rotated_layout(2);
    const ExperimentResult a = run_experiment(lay, cfg);
    const ExperimentResult b = run_experiment(lay, cfg);
    ASSERT_EQ(a.stats.size(), b.stats.size());
    for (std::size_t i = 0; i < a.stats.size(); ++i) {
        EXPECT_EQ(a.stats[i].trajectory, b.stats[i].trajectory);
        EXPECT_EQ(a.stats[i].count, b.stats[i].count);
        EXPECT_EQ(a.stats[i].mean_fidelity, b.stats[i].mean_fidelity);  // bit-exact
    }
    EXPECT_EQ(a.logical_error_rate, b.logical_error_rate);
    EXPECT_EQ(a.discard_rate, b.discard_rate);
}

TEST(RunExperiment, MeasurementNoiseCausesDiscards) {
    ExperimentConfig cfg = base_config(2, 1.2, 0.3);
    cfg.shots = 3000;
    cfg.noise = NoiseModel{0.0, 0.0, 0.05};
    const ExperimentResult res = run_experiment(build_rotated_layout(2), cfg, true);
    EXPECT_GT(res.discard_rate, 0.0);
    for (const ShotRecord& rec : res.records)
        if (!rec.stable) {
            bool changed = false;
            for (std::size_t r = 1; r < rec.syndrome_history.size(); ++r)
                changed |= rec.syndrome_history[r] != rec.syndrome_history[0];
            EXPECT_TRUE(changed);
        }
}

TEST(RunExperiment, DiscardRateGrowsWithMeasurementNoise) {
    const CodeLayout lay = build_rotated_layout(2);
    double previous = -1.0;
    for (double pm : {0.0, 0.02, 0.08}) {
        ExperimentConfig cfg = base_config(2, 1.2, 0.3);
        cfg.shots = 4000;
        cfg.noise = NoiseModel{0.0, 0.0, pm};
        const double rate = run_experiment(lay, cfg).discard_rate;
        EXPECT_GE(rate, previous);
        previous = rate;
    }
}

TEST(NoiseModelChecks, ValidationAndDefaults) {
    EXPECT_THROW((NoiseModel{0.6, 0.0, 0.0}).validate(), std::invalid_argument);
    EXPECT_THROW((NoiseModel{0.0, -0.1, 0.0}).validate(), std::invalid_argument);
    EXPECT_TRUE(NoiseModel{}.is_zero());
    ExperimentConfig cfg;
    cfg.distance = 3;
    EXPECT_EQ(cfg.effective_rounds(), 3);
    cfg.rounds = 5;
    EXPECT_EQ(cfg.effective_rounds(), 5);
}
