#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "tinj/amplitude.hpp"
#include "tinj/errors.hpp"
#include "tinj/gf2.hpp"
#include "tinj/layout.hpp"
#include "tinj/trajectory.hpp"

namespace tinj {

// Exact-mode guards: basis strings live in one machine word and the coset
// expansion is exponential in the Z-stabiliser count.
inline constexpr int kMaxExactQubits = 64;
inline constexpr int kMaxExactZStabilizers = 24;
inline constexpr int kMaxEnumerateQubits = 25;
inline constexpr int kMaxProjectXStabilizers = 20;

inline int hamming(std::uint64_t bits) { return std::popcount(bits); }

/// All subsets of `unseen` whose size has the given parity, in subset
/// bit-counting order. 2^(n-1) subsets for nonempty input; for empty input
/// one subset (empty) at parity 0 and none at parity 1.
inline std::vector<std::vector<int>> parity_combinations(std::span<const int> unseen, int parity) {
    std::vector<std::vector<int>> out;
    const int k = static_cast<int>(unseen.size());
    if (k > 24) throw TooLargeError("combination pool capped at 24 indices");
    for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
        if ((std::popcount(mask) & 1) != (parity & 1)) continue;
        std::vector<int> subset;
        for (int i = 0; i < k; ++i)
            if ((mask >> i) & 1) subset.push_back(unseen[i]);
        out.push_back(std::move(subset));
    }
    return out;
}

/// One signed basis term. hamming_origin is the Hamming weight at Z-coset
/// expansion time and is deliberately preserved across X projection.
struct Term {
    std::uint64_t basis = 0;
    std::int8_t sign = 1;
    std::uint8_t hamming_origin = 0;
};

/// Flat term collection, kept sorted by (basis, hamming_origin) so merges
/// and comparisons are deterministic.
struct TermSet {
    int n = 0;
    std::vector<Term> terms;

    void sort() {
        std::sort(terms.begin(), terms.end(), [](const Term& l, const Term& r) {
            if (l.basis != r.basis) return l.basis < r.basis;
            return l.hamming_origin < r.hamming_origin;
        });
    }
};

namespace detail {

inline void check_exact_guards(const CodeLayout& lay) {
    if (lay.n_data > kMaxExactQubits)
        throw TooLargeError("exact mode supports at most 64 data qubits");
    if (lay.n_z() > kMaxExactZStabilizers)
        throw TooLargeError("exact mode supports at most 24 Z-stabilisers");
}

// Subset masks of the bits set in `pool`, split by subset-size parity.
inline std::pair<std::vector<std::uint64_t>, std::vector<std::uint64_t>> subset_masks_by_parity(
    std::uint64_t pool) {
    std::vector<int> bits;
    for (int i = 0; i < 64; ++i)
        if ((pool >> i) & 1) bits.push_back(i);
    std::vector<std::uint64_t> even, odd;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << bits.size()); ++mask) {
        std::uint64_t w = 0;
        for (std::size_t i = 0; i < bits.size(); ++i)
            if ((mask >> i) & 1) w |= std::uint64_t{1} << bits[i];
        (std::popcount(mask) & 1 ? odd : even).push_back(w);
    }
    return {std::move(even), std::move(odd)};
}

}  // namespace detail

/// All N-bit strings consistent with the measured Z-sector parities, built
/// stabiliser by stabiliser: for each new stabiliser the parity target is
/// XORed with the bits already fixed on its seen qubits, then every
/// odd/even combination of its unseen qubits is branched. Qubits outside
/// every Z support are expanded over both values at the end.
inline TermSet expand_z_sector(const CodeLayout& lay, std::uint64_t z_bits) {
    detail::check_exact_guards(lay);
    TermSet out;
    out.n = lay.n_data;
    std::vector<std::uint64_t> bases{0};
    std::uint64_t seen = 0;
    for (int i = 0; i < lay.n_z(); ++i) {
        const std::uint64_t sw = support_word(lay.z_stabilizers[i]);
        const std::uint64_t seen_part = sw & seen;
        auto [even, odd] = detail::subset_masks_by_parity(sw & ~seen);
        std::vector<std::uint64_t> next;
        next.reserve(bases.size() * std::max(even.size(), odd.size()));
        const int target = (z_bits >> i) & 1;
        for (std::uint64_t v : bases) {
            const int t = target ^ parity(v & seen_part);
            for (std::uint64_t mask : (t ? odd : even)) next.push_back(v | mask);
        }
        if (next.empty())
            throw InconsistentTrajectoryError("no basis string satisfies the Z-sector parities");
        bases = std::move(next);
        seen |= sw;
    }
    const std::uint64_t all = lay.n_data == 64 ? ~std::uint64_t{0}
                                               : (std::uint64_t{1} << lay.n_data) - 1;
    for (std::uint64_t free_bits = all & ~seen; free_bits;) {
        const std::uint64_t bit = free_bits & (~free_bits + 1);
        free_bits ^= bit;
        const std::size_t sz = bases.size();
        bases.reserve(2 * sz);
        for (std::size_t k = 0; k < sz; ++k) bases.push_back(bases[k] | bit);
    }
    out.terms.reserve(bases.size());
    for (std::uint64_t v : bases)
        out.terms.push_back({v, 1, static_cast<std::uint8_t>(hamming(v))});
    out.sort();
    return out;
}

/// Signed X projection: every input term fans out over all X-stabiliser
/// subsets S as (basis XOR support(S), sign * (-1)^(sum of x bits over S)).
/// The stored Hamming weight is not recomputed.
inline TermSet project_x_sector(const CodeLayout& lay, const TermSet& terms, std::uint64_t x_bits) {
    if (lay.n_x() > kMaxProjectXStabilizers)
        throw TooLargeError("X projection supports at most 20 X-stabilisers");
    const std::size_t subsets = std::size_t{1} << lay.n_x();
    std::vector<std::uint64_t> xor_word(subsets, 0);
    std::vector<std::int8_t> subset_sign(subsets, 1);
    for (std::size_t s = 1; s < subsets; ++s) {
        const int low = std::countr_zero(s);
        xor_word[s] = xor_word[s & (s - 1)] ^ support_word(lay.x_stabilizers[low]);
        subset_sign[s] = static_cast<std::int8_t>(
            subset_sign[s & (s - 1)] * (((x_bits >> low) & 1) ? -1 : 1));
    }
    TermSet out;
    out.n = terms.n;
    out.terms.reserve(terms.terms.size() * subsets);
    for (const Term& t : terms.terms)
        for (std::size_t s = 0; s < subsets; ++s)
            out.terms.push_back({t.basis ^ xor_word[s],
                                 static_cast<std::int8_t>(t.sign * subset_sign[s]),
                                 t.hamming_origin});
    out.sort();
    return out;
}

/// Sign bookkeeping implied by the measured eigenvalues. The logical-0
/// codeword is anchored at g0, the canonical (reduced-row-echelon)
/// representative of the logical-0 half of the Z-coset; the logical-1
/// reference is g0 XOR logical_x. A basis string w located at
/// w = ref XOR support(S) contributes with sign (-1)^(x_bits . S).
struct PauliFrame {
    Trajectory trajectory;
    std::uint64_t logical_z_word = 0;
    std::uint64_t logical_x_word = 0;
    std::uint64_t g0 = 0;
    Gf2Echelon x_echelon;

    static PauliFrame for_trajectory(const CodeLayout& lay, const Trajectory& traj,
                                     const TermSet& expanded) {
        PauliFrame f;
        f.trajectory = traj;
        f.logical_z_word = support_word(lay.logical_z);
        f.logical_x_word = support_word(lay.logical_x);
        std::vector<std::uint64_t> xw;
        xw.reserve(lay.x_stabilizers.size());
        for (const auto& s : lay.x_stabilizers) xw.push_back(support_word(s));
        f.x_echelon = Gf2Echelon(xw);
        for (const Term& t : expanded.terms)
            if (parity(t.basis & f.logical_z_word) == 0) {
                f.g0 = f.x_echelon.reduce(t.basis).residue;
                break;
            }
        return f;
    }

    int logical_parity(std::uint64_t basis) const { return parity(basis & logical_z_word); }

    int sign_for(std::uint64_t basis) const {
        const std::uint64_t ref = logical_parity(basis) ? (g0 ^ logical_x_word) : g0;
        const auto red = x_echelon.reduce(basis ^ ref);
        return parity(red.combo & trajectory.x_bits) ? -1 : 1;
    }
};

/// Fold a projected TermSet into the exact (alpha_L, beta_L) coefficient
/// lists: term w adds sign(w) * frame_sign(w) to coefficient j of the
/// polynomial selected by the logical parity of w. The projection emits
/// each coset branch once per X-subset, so the accumulated integers carry
/// a uniform 2^n_x factor that is divided out (exactly) at the end.
inline LogicalStateForm collect_logical(const CodeLayout& lay, const TermSet& projected,
                                        const PauliFrame& frame) {
    LogicalStateForm form;
    form.trajectory = frame.trajectory;
    form.alpha_poly = AmplitudePoly::zero(lay.n_data);
    form.beta_poly = AmplitudePoly::zero(lay.n_data);
    for (const Term& t : projected.terms) {
        const std::int64_t w = static_cast<std::int64_t>(t.sign) * frame.sign_for(t.basis);
        auto& poly = frame.logical_parity(t.basis) ? form.beta_poly : form.alpha_poly;
        poly.coeffs[t.hamming_origin] += w;
    }
    const std::int64_t fold = std::int64_t{1} << frame.trajectory.n_x;
    for (auto* poly : {&form.alpha_poly, &form.beta_poly})
        for (auto& c : poly->coeffs) {
            if (c % fold != 0)
                throw std::logic_error("projected collection is not 2^n_x divisible");
            c /= fold;
        }
    return form;
}

namespace detail {

// Coset-side collection: algebraically equal to projecting then collecting,
// but each expanded term is visited once with its frame sign applied
// directly, so the cost stays exponential in the Z-stabiliser count only.
inline LogicalStateForm collect_expanded(const CodeLayout& lay, const TermSet& expanded,
                                         const PauliFrame& frame) {
    LogicalStateForm form;
    form.trajectory = frame.trajectory;
    form.alpha_poly = AmplitudePoly::zero(lay.n_data);
    form.beta_poly = AmplitudePoly::zero(lay.n_data);
    for (const Term& t : expanded.terms) {
        const std::int64_t w = static_cast<std::int64_t>(t.sign) * frame.sign_for(t.basis);
        auto& poly = frame.logical_parity(t.basis) ? form.beta_poly : form.alpha_poly;
        poly.coeffs[t.hamming_origin] += w;
    }
    return form;
}

}  // namespace detail

/// Exact logical state heralded by one trajectory.
inline LogicalStateForm derive_state(const CodeLayout& lay, const Trajectory& traj) {
    TermSet expanded = expand_z_sector(lay, traj.z_bits);
    PauliFrame frame = PauliFrame::for_trajectory(lay, traj, expanded);
    return detail::collect_expanded(lay, expanded, frame);
}

enum class XRestriction { all, trivial_only };

/// Full enumeration over eigenstates: one pass over every basis string,
/// accumulating into the form of the trajectory it belongs to. Agrees
/// trajectory-by-trajectory with derive_state.
inline std::map<Trajectory, LogicalStateForm> enumerate_all_states(
    const CodeLayout& lay, XRestriction restriction = XRestriction::all) {
    detail::check_exact_guards(lay);
    if (lay.n_data > kMaxEnumerateQubits)
        throw TooLargeError("full enumeration supports at most 25 data qubits");
    const int n = lay.n_data;
    const int nx = lay.n_x();
    const int nz = lay.n_z();
    std::vector<std::uint64_t> zw;
    zw.reserve(nz);
    for (const auto& s : lay.z_stabilizers) zw.push_back(support_word(s));
    std::vector<std::uint64_t> xw;
    xw.reserve(nx);
    for (const auto& s : lay.x_stabilizers) xw.push_back(support_word(s));
    const Gf2Echelon ech(xw);
    const std::uint64_t lzw = support_word(lay.logical_z);
    const std::uint64_t lxw = support_word(lay.logical_x);
    const std::uint64_t combo_lx = ech.reduce(lxw).combo;

    const std::size_t x_patterns = restriction == XRestriction::all ? (std::size_t{1} << nx) : 1;
    const std::size_t z_patterns = std::size_t{1} << nz;
    struct Acc {
        std::vector<std::int64_t> a, b;
    };
    std::vector<Acc> acc(x_patterns * z_patterns);
    for (auto& slot : acc) {
        slot.a.assign(static_cast<std::size_t>(n) + 1, 0);
        slot.b.assign(static_cast<std::size_t>(n) + 1, 0);
    }
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v) {
        std::uint64_t zkey = 0;
        for (int i = 0; i < nz; ++i) zkey |= static_cast<std::uint64_t>(parity(v & zw[i])) << i;
        const int l = parity(v & lzw);
        const int j = hamming(v);
        const std::uint64_t combo = ech.reduce(v).combo ^ (l ? combo_lx : 0);
        for (std::size_t x = 0; x < x_patterns; ++x) {
            const std::int64_t s = parity(combo & x) ? -1 : 1;
            auto& slot = acc[x * z_patterns + zkey];
            (l ? slot.b : slot.a)[j] += s;
        }
    }
    std::map<Trajectory, LogicalStateForm> out;
    for (std::size_t x = 0; x < x_patterns; ++x)
        for (std::size_t z = 0; z < z_patterns; ++z) {
            Trajectory t{x, z, nx, nz};
            LogicalStateForm form;
            form.trajectory = t;
            form.alpha_poly = AmplitudePoly{n, std::move(acc[x * z_patterns + z].a)};
            form.beta_poly = AmplitudePoly{n, std::move(acc[x * z_patterns + z].b)};
            out.emplace(t, std::move(form));
        }
    return out;
}

inline Trajectory trivial_trajectory(const CodeLayout& lay) {
    return Trajectory{0, 0, lay.n_x(), lay.n_z()};
}

}  // namespace tinj
