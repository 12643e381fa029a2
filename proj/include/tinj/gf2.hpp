#pragma once

#include <bit>
#include <cassert>
#include <cstdint>
#include <span>
#include <vector>

namespace tinj {

inline int parity(std::uint64_t w) { return std::popcount(w) & 1; }

/// Pack a set of qubit indices into a word, bit i <-> qubit i.
inline std::uint64_t support_word(std::span<const int> indices) {
    std::uint64_t w = 0;
    for (int q : indices) {
        assert(q >= 0 && q < 64);
        w |= std::uint64_t{1} << q;
    }
    return w;
}

/// Reduced row echelon form over GF(2) with combination tracking.
///
/// Rows are bitmasks over qubits; pivots sit at the lowest set bit so the
/// canonical coset representative produced by reduce() has zeros in every
/// pivot position. `combo` records which input rows were folded in, bit k
/// of the combo word <-> input row k.
class Gf2Echelon {
  public:
    struct Reduction {
        std::uint64_t residue;
        std::uint64_t combo;
    };

    Gf2Echelon() = default;

    explicit Gf2Echelon(std::span<const std::uint64_t> words) {
        for (std::size_t k = 0; k < words.size(); ++k) insert(words[k], k);
    }

    int rank() const { return static_cast<int>(rows_.size()); }

    Reduction reduce(std::uint64_t v) const {
        std::uint64_t combo = 0;
        for (const Row& r : rows_) {
            if ((v >> r.pivot) & 1) {
                v ^= r.value;
                combo ^= r.combo;
            }
        }
        return {v, combo};
    }

    bool in_span(std::uint64_t v) const { return reduce(v).residue == 0; }

  private:
    struct Row {
        std::uint64_t value;
        std::uint64_t combo;
        int pivot;
    };

    void insert(std::uint64_t v, std::size_t index) {
        assert(index < 64);
        std::uint64_t combo = std::uint64_t{1} << index;
        for (const Row& r : rows_) {
            if ((v >> r.pivot) & 1) {
                v ^= r.value;
                combo ^= r.combo;
            }
        }
        if (v == 0) return;  // dependent row, rank-deficient
        Row fresh{v, combo, std::countr_zero(v)};
        for (Row& r : rows_) {
            if ((r.value >> fresh.pivot) & 1) {
                r.value ^= fresh.value;
                r.combo ^= fresh.combo;
            }
        }
        rows_.push_back(fresh);
    }

    std::vector<Row> rows_;
};

/// Rank over GF(2) of arbitrary binary rows (allows dependent rows).
inline int gf2_rank(std::span<const std::uint64_t> words) {
    return Gf2Echelon(words).rank();
}

}  // namespace tinj
