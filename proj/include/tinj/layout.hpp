#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "tinj/gf2.hpp"

namespace tinj {

enum class Variant { unrotated, rotated };

enum class PauliAxis { x, z };

/// Data-qubit supports of a planar surface code, both logical chains, and
/// the geometry metadata. Immutable after construction; validated by the
/// builders and by layout_from_json.
struct CodeLayout {
    int distance = 0;
    Variant variant = Variant::unrotated;
    int n_data = 0;
    std::vector<std::vector<int>> x_stabilizers;
    std::vector<std::vector<int>> z_stabilizers;
    std::vector<int> logical_z;  // left-right chain
    std::vector<int> logical_x;  // top-bottom chain

    int n_x() const { return static_cast<int>(x_stabilizers.size()); }
    int n_z() const { return static_cast<int>(z_stabilizers.size()); }
    int n_stabilizers() const { return n_x() + n_z(); }
};

namespace detail {

inline int overlap(const std::vector<int>& a, const std::vector<int>& b) {
    int n = 0;
    for (int q : a)
        if (std::find(b.begin(), b.end(), q) != b.end()) ++n;
    return n;
}

}  // namespace detail

/// Check every structural invariant; throws std::invalid_argument with the
/// first violation found.
inline void validate_layout(const CodeLayout& lay) {
    auto fail = [](const std::string& msg) { throw std::invalid_argument("invalid layout: " + msg); };
    if (lay.distance < 1) fail("distance must be >= 1");
    const int d = lay.distance;
    const int expected_n =
        lay.variant == Variant::unrotated ? d * d + (d - 1) * (d - 1) : d * d;
    if (lay.n_data != expected_n) fail("data-qubit count does not match distance");
    if (lay.variant == Variant::unrotated) {
        if (lay.n_x() != (lay.n_data - 1) / 2 || lay.n_z() != (lay.n_data - 1) / 2)
            fail("unrotated code needs (N-1)/2 stabilisers of each type");
    } else {
        if (lay.n_stabilizers() != lay.n_data - 1) fail("rotated code needs N-1 stabilisers");
    }
    auto check_support = [&](const std::vector<int>& s) {
        std::set<int> seen;
        for (int q : s) {
            if (q < 0 || q >= lay.n_data) fail("qubit index out of range");
            if (!seen.insert(q).second) fail("duplicate qubit in support");
        }
        if (!std::is_sorted(s.begin(), s.end())) fail("support not ascending");
    };
    for (const auto& s : lay.x_stabilizers) check_support(s);
    for (const auto& s : lay.z_stabilizers) check_support(s);
    check_support(lay.logical_z);
    check_support(lay.logical_x);
    for (const auto& x : lay.x_stabilizers)
        for (const auto& z : lay.z_stabilizers)
            if (detail::overlap(x, z) % 2) fail("X/Z stabiliser pair anticommutes");
    for (const auto& x : lay.x_stabilizers)
        if (detail::overlap(x, lay.logical_z) % 2) fail("logical_z anticommutes with an X-stabiliser");
    for (const auto& z : lay.z_stabilizers)
        if (detail::overlap(z, lay.logical_x) % 2) fail("logical_x anticommutes with a Z-stabiliser");
    if (detail::overlap(lay.logical_z, lay.logical_x) % 2 == 0)
        fail("logical_z and logical_x must anticommute");
}

/// Unrotated planar code, N = d^2 + (d-1)^2. Data qubits are numbered
/// row-major, interleaving the d-length and (d-1)-length rows; vertex
/// (X) and plaquette (Z) stabilisers are emitted row-major as well. For
/// d=2 this reproduces the D1..D5 ordering with Z supports {0,2,3} and
/// {1,2,4}.
inline CodeLayout build_unrotated_layout(int d) {
    if (d < 1) throw std::invalid_argument("distance must be >= 1");
    auto h = [d](int i, int j) { return i * (2 * d - 1) + j; };          // long rows
    auto v = [d](int i, int j) { return i * (2 * d - 1) + d + j; };      // short rows
    CodeLayout lay;
    lay.distance = d;
    lay.variant = Variant::unrotated;
    lay.n_data = d * d + (d - 1) * (d - 1);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j + 1 < d; ++j) {
            std::vector<int> s{h(i, j), h(i, j + 1)};
            if (i > 0) s.push_back(v(i - 1, j));
            if (i < d - 1) s.push_back(v(i, j));
            std::sort(s.begin(), s.end());
            lay.x_stabilizers.push_back(std::move(s));
        }
    for (int i = 0; i + 1 < d; ++i)
        for (int j = 0; j < d; ++j) {
            std::vector<int> s{h(i, j), h(i + 1, j)};
            if (j > 0) s.push_back(v(i, j - 1));
            if (j < d - 1) s.push_back(v(i, j));
            std::sort(s.begin(), s.end());
            lay.z_stabilizers.push_back(std::move(s));
        }
    for (int j = 0; j < d; ++j) lay.logical_z.push_back(h(0, j));
    for (int i = 0; i < d; ++i) lay.logical_x.push_back(h(i, 0));
    validate_layout(lay);
    return lay;
}

// Rotated-code role assignment: bulk plaquette (r,c) is Z-type when r+c is
// even, weight-2 X-stabilisers live on the top/bottom boundary and weight-2
// Z-stabilisers on the left/right. At d=2 this yields two X and one Z
// ancilla. Flipping kRotatedZParity transposes the convention.
inline constexpr int kRotatedZParity = 0;

/// Rotated planar code, N = d^2, data qubit (r,c) -> r*d + c.
inline CodeLayout build_rotated_layout(int d) {
    if (d < 1) throw std::invalid_argument("distance must be >= 1");
    auto q = [d](int r, int c) { return r * d + c; };
    CodeLayout lay;
    lay.distance = d;
    lay.variant = Variant::rotated;
    lay.n_data = d * d;
    for (int r = 0; r + 1 < d; ++r)
        for (int c = 0; c + 1 < d; ++c) {
            std::vector<int> s{q(r, c), q(r, c + 1), q(r + 1, c), q(r + 1, c + 1)};
            std::sort(s.begin(), s.end());
            if ((r + c) % 2 == kRotatedZParity)
                lay.z_stabilizers.push_back(std::move(s));
            else
                lay.x_stabilizers.push_back(std::move(s));
        }
    for (int c = 0; c + 1 < d; ++c) {
        if (((-1 + c) % 2 + 2) % 2 != kRotatedZParity)  // top boundary, X side
            lay.x_stabilizers.push_back({q(0, c), q(0, c + 1)});
        if ((d - 1 + c) % 2 != kRotatedZParity)         // bottom boundary, X side
            lay.x_stabilizers.push_back({q(d - 1, c), q(d - 1, c + 1)});
    }
    for (int r = 0; r + 1 < d; ++r) {
        if (((r - 1) % 2 + 2) % 2 == kRotatedZParity)   // left boundary, Z side
            lay.z_stabilizers.push_back({q(r, 0), q(r + 1, 0)});
        if ((r + d - 1) % 2 == kRotatedZParity)         // right boundary, Z side
            lay.z_stabilizers.push_back({q(r, d - 1), q(r + 1, d - 1)});
    }
    auto by_support = [](const std::vector<int>& a, const std::vector<int>& b) { return a < b; };
    std::sort(lay.x_stabilizers.begin(), lay.x_stabilizers.end(), by_support);
    std::sort(lay.z_stabilizers.begin(), lay.z_stabilizers.end(), by_support);
    for (int c = 0; c < d; ++c) lay.logical_z.push_back(q(0, c));
    for (int r = 0; r < d; ++r) lay.logical_x.push_back(q(r, 0));
    validate_layout(lay);
    return lay;
}

enum class MatrixSector { z_with_logical, x_with_logical, full };

/// Binary stabiliser rows plus one logical row, in layout order.
struct StabilizerMatrix {
    int n_columns = 0;
    std::vector<std::vector<std::uint8_t>> rows;
    std::vector<std::string> row_labels;
};

inline StabilizerMatrix stabilizer_matrix(const CodeLayout& lay, MatrixSector sector) {
    StabilizerMatrix m;
    m.n_columns = lay.n_data;
    auto add = [&](const std::vector<int>& support, std::string label) {
        std::vector<std::uint8_t> row(lay.n_data, 0);
        for (int q : support) row[q] = 1;
        m.rows.push_back(std::move(row));
        m.row_labels.push_back(std::move(label));
    };
    if (sector != MatrixSector::z_with_logical)
        for (int i = 0; i < lay.n_x(); ++i)
            add(lay.x_stabilizers[i], "X" + std::to_string(i + 1));
    if (sector != MatrixSector::x_with_logical)
        for (int i = 0; i < lay.n_z(); ++i)
            add(lay.z_stabilizers[i], "Z" + std::to_string(i + 1));
    // full and z_with_logical carry the Z chain; x_with_logical carries the
    // X chain so each sector pairs stabilisers with the operator they track.
    if (sector == MatrixSector::x_with_logical)
        add(lay.logical_x, "XL");
    else
        add(lay.logical_z, "ZL");
    return m;
}

/// Per-stabiliser directory of impacted data qubits, ascending.
inline std::vector<std::vector<int>> aux_index_directory(const CodeLayout& lay, PauliAxis sector) {
    return sector == PauliAxis::z ? lay.z_stabilizers : lay.x_stabilizers;
}

}  // namespace tinj
