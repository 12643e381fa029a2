#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "tinj/amplitude.hpp"
#include "tinj/errors.hpp"
#include "tinj/gf2.hpp"
#include "tinj/layout.hpp"
#include "tinj/trajectory.hpp"

namespace tinj {

inline constexpr int kMaxOracleQubits = 20;
inline constexpr double kImpossibleTrajectoryProb = 1e-14;

/// Dense amplitudes, little-endian: bit q of the basis index is qubit q.
struct StateVector {
    int n = 0;
    std::vector<complexd> amps;

    static StateVector zeros(int n) {
        if (n > kMaxOracleQubits) throw TooLargeError("oracle state vectors cap at 20 qubits");
        return StateVector{n, std::vector<complexd>(std::size_t{1} << n, 0.0)};
    }

    double squared_norm() const {
        double s = 0;
        for (const complexd& a : amps) s += std::norm(a);
        return s;
    }

    void scale(double f) {
        for (complexd& a : amps) a *= f;
    }
};

/// |chi>^{(x)n}: amplitude of |m> is alpha^(n-H(m)) beta^H(m).
inline StateVector product_state(const PhysicalRotation& rot, int n) {
    StateVector sv = StateVector::zeros(n);
    const double a = rot.alpha();
    const complexd b = rot.beta();
    std::vector<double> apow(static_cast<std::size_t>(n) + 1, 1.0);
    std::vector<complexd> bpow(static_cast<std::size_t>(n) + 1, 1.0);
    for (int k = 1; k <= n; ++k) {
        apow[k] = apow[k - 1] * a;
        bpow[k] = bpow[k - 1] * b;
    }
    for (std::size_t m = 0; m < sv.amps.size(); ++m) {
        const int h = std::popcount(m);
        sv.amps[m] = apow[n - h] * bpow[h];
    }
    return sv;
}

/// Apply (I + (-1)^outcome P)/2 for a tensor-product Pauli on `support`.
/// Returns the unnormalised result and its squared norm.
inline std::pair<StateVector, double> apply_projector(const StateVector& sv,
                                                      std::span<const int> support,
                                                      PauliAxis pauli, int outcome) {
    const std::uint64_t mask = support_word(support);
    StateVector out = sv;
    if (pauli == PauliAxis::z) {
        for (std::size_t m = 0; m < out.amps.size(); ++m)
            if (parity(m & mask) != (outcome & 1)) out.amps[m] = 0.0;
    } else {
        const double s = outcome & 1 ? -1.0 : 1.0;
        for (std::size_t m = 0; m < out.amps.size(); ++m)
            out.amps[m] = (sv.amps[m] + s * sv.amps[m ^ mask]) * 0.5;
    }
    const double prob = out.squared_norm();
    return {std::move(out), prob};
}

/// Codeword pair for one trajectory frame: |0_L> is the normalised
/// X-projection of the canonical logical-0 coset representative, |1_L> is
/// the logical X chain applied to it. Orthonormal, stabilised by every
/// trajectory-signed stabiliser.
inline std::pair<StateVector, StateVector> codewords(const CodeLayout& lay, const Trajectory& traj) {
    const int n = lay.n_data;
    std::vector<std::uint64_t> zw, xw;
    for (const auto& s : lay.z_stabilizers) zw.push_back(support_word(s));
    for (const auto& s : lay.x_stabilizers) xw.push_back(support_word(s));
    const Gf2Echelon ech(xw);
    const std::uint64_t lzw = support_word(lay.logical_z);
    std::uint64_t g0 = 0;
    bool found = false;
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << n) && !found; ++v) {
        if (parity(v & lzw) != 0) continue;
        bool ok = true;
        for (int i = 0; i < lay.n_z() && ok; ++i) ok = parity(v & zw[i]) == traj.z_bit(i);
        if (ok) {
            g0 = ech.reduce(v).residue;
            found = true;
        }
    }
    StateVector zero_l = StateVector::zeros(n);
    zero_l.amps[g0] = 1.0;
    for (int i = 0; i < lay.n_x(); ++i)
        zero_l = apply_projector(zero_l, lay.x_stabilizers[i], PauliAxis::x, traj.x_bit(i)).first;
    zero_l.scale(1.0 / std::sqrt(zero_l.squared_norm()));
    StateVector one_l = StateVector::zeros(n);
    const std::uint64_t lxw = support_word(lay.logical_x);
    for (std::size_t m = 0; m < zero_l.amps.size(); ++m) one_l.amps[m ^ lxw] = zero_l.amps[m];
    return {std::move(zero_l), std::move(one_l)};
}

inline complexd inner(const StateVector& a, const StateVector& b) {
    complexd s = 0;
    for (std::size_t m = 0; m < a.amps.size(); ++m) s += std::conj(a.amps[m]) * b.amps[m];
    return s;
}

struct OracleResult {
    complexd a;          // <0_L|state>
    complexd b;          // <1_L|state>
    double probability;  // product of projector branch probabilities
    double residual;     // norm of the component outside the codespace
};

/// Ground truth: project |chi>^N through every X then Z stabiliser
/// projector with the trajectory's outcomes and decompose the result in
/// the trajectory-frame codeword basis.
inline OracleResult oracle_state(const CodeLayout& lay, const Trajectory& traj,
                                 const PhysicalRotation& rot) {
    StateVector psi = product_state(rot, lay.n_data);
    for (int i = 0; i < lay.n_x(); ++i)
        psi = apply_projector(psi, lay.x_stabilizers[i], PauliAxis::x, traj.x_bit(i)).first;
    for (int i = 0; i < lay.n_z(); ++i)
        psi = apply_projector(psi, lay.z_stabilizers[i], PauliAxis::z, traj.z_bit(i)).first;
    const double prob = psi.squared_norm();
    if (prob < kImpossibleTrajectoryProb)
        throw ImpossibleTrajectoryError("projector chain annihilated trajectory " + traj.to_string());
    psi.scale(1.0 / std::sqrt(prob));
    auto [zero_l, one_l] = codewords(lay, traj);
    OracleResult r;
    r.a = inner(zero_l, psi);
    r.b = inner(one_l, psi);
    r.probability = prob;
    double leak = 0;
    for (std::size_t m = 0; m < psi.amps.size(); ++m)
        leak += std::norm(psi.amps[m] - r.a * zero_l.amps[m] - r.b * one_l.amps[m]);
    r.residual = std::sqrt(leak);
    return r;
}

}  // namespace tinj
