#include "tinj/layout.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <set>

#include "tinj/gf2.hpp"

using namespace tinj;

namespace {

int overlap(const std::vector<int>& a, const std::vector<int>& b) {
    std::set<int> sa(a.begin(), a.end());
    int n = 0;
    for (int q : b) n += sa.count(q);
    return n;
}

std::string row_string(const std::vector<std::uint8_t>& row) {
    std::string s;
    for (auto b : row) s.push_back(b ? '1' : '0');
    return s;
}

}  // namespace

TEST(UnrotatedLayout, DistanceTwoMatchesReference) {
    const CodeLayout lay = build_unrotated_layout(2);
    EXPECT_EQ(lay.n_data, 5);
    EXPECT_EQ(lay.x_stabilizers, (std::vector<std::vector<int>>{{0, 1, 2}, {2, 3, 4}}));
    EXPECT_EQ(lay.z_stabilizers, (std::vector<std::vector<int>>{{0, 2, 3}, {1, 2, 4}}));
    EXPECT_EQ(lay.logical_z, (std::vector<int>{0, 1}));
    EXPECT_EQ(lay.logical_x, (std::vector<int>{0, 3}));
}

TEST(UnrotatedLayout, DistanceOneIsDegenerate) {
    const CodeLayout lay = build_unrotated_layout(1);
    EXPECT_EQ(lay.n_data, 1);
    EXPECT_TRUE(lay.x_stabilizers.empty());
    EXPECT_TRUE(lay.z_stabilizers.empty());
    EXPECT_EQ(lay.logical_z, (std::vector<int>{0}));
}

TEST(UnrotatedLayout, DistanceThreeCounts) {
    const CodeLayout lay = build_unrotated_layout(3);
    EXPECT_EQ(lay.n_data, 13);
    EXPECT_EQ(lay.n_x(), 6);
    EXPECT_EQ(lay.n_z(), 6);
}

TEST(RotatedLayout, DistanceTwoMatchesCircuit) {
    const CodeLayout lay = build_rotated_layout(2);
    EXPECT_EQ(lay.n_data, 4);
    EXPECT_EQ(lay.n_stabilizers(), 3);
    ASSERT_EQ(lay.n_x(), 2);
    ASSERT_EQ(lay.n_z(), 1);
    EXPECT_EQ(lay.x_stabilizers[0].size(), 2u);
    EXPECT_EQ(lay.x_stabilizers[1].size(), 2u);
    EXPECT_EQ(lay.z_stabilizers[0].size(), 4u);
}

TEST(RotatedLayout, SmallDistances) {
    EXPECT_EQ(build_rotated_layout(1).n_data, 1);
    EXPECT_TRUE(build_rotated_layout(1).x_stabilizers.empty());
    const CodeLayout d3 = build_rotated_layout(3);
    EXPECT_EQ(d3.n_data, 9);
    EXPECT_EQ(d3.n_stabilizers(), 8);
}

TEST(Layout, RejectsDistanceZero) {
    EXPECT_THROW(build_unrotated_layout(0), std::invalid_argument);
    EXPECT_THROW(build_rotated_layout(0), std::invalid_argument);
}

TEST(Layout, InvariantsHoldThroughDistanceSix) {
    for (int d = 1; d <= 6; ++d) {
        for (const CodeLayout& lay : {build_unrotated_layout(d), build_rotated_layout(d)}) {
            const int expected = lay.variant == Variant::unrotated ? d * d + (d - 1) * (d - 1) : d * d;
            EXPECT_EQ(lay.n_data, expected);
            for (const auto& x : lay.x_stabilizers) {
                for (const auto& z : lay.z_stabilizers) EXPECT_EQ(overlap(x, z) % 2, 0);
                EXPECT_EQ(overlap(x, lay.logical_z) % 2, 0);
            }
            for (const auto& z : lay.z_stabilizers) EXPECT_EQ(overlap(z, lay.logical_x) % 2, 0);
            EXPECT_EQ(overlap(lay.logical_z, lay.logical_x) % 2, 1);
        }
    }
}

TEST(Layout, ValidateRejectsBrokenCommutation) {
    CodeLayout lay = build_unrotated_layout(2);
    lay.z_stabilizers[0] = {0, 2};  // odd overlap against {0,1,2}
    EXPECT_THROW(validate_layout(lay), std::invalid_argument);
}

TEST(StabilizerMatrixOp, DistanceTwoFullIsGolden) {
    const StabilizerMatrix m = stabilizer_matrix(build_unrotated_layout(2), MatrixSector::full);
    ASSERT_EQ(m.rows.size(), 5u);
    EXPECT_EQ(row_string(m.rows[0]), "11100");
    EXPECT_EQ(row_string(m.rows[1]), "00111");
    EXPECT_EQ(row_string(m.rows[2]), "10110");
    EXPECT_EQ(row_string(m.rows[3]), "01101");
    EXPECT_EQ(row_string(m.rows[4]), "11000");
    EXPECT_EQ(m.row_labels, (std::vector<std::string>{"X1", "X2", "Z1", "Z2", "ZL"}));
}

TEST(StabilizerMatrixOp, DistanceOneFull) {
    const StabilizerMatrix m = stabilizer_matrix(build_unrotated_layout(1), MatrixSector::full);
    ASSERT_EQ(m.rows.size(), 1u);
    EXPECT_EQ(row_string(m.rows[0]), "1");
}

TEST(StabilizerMatrixOp, DistanceThreeZSector) {
    const StabilizerMatrix m =
        stabilizer_matrix(build_unrotated_layout(3), MatrixSector::z_with_logical);
    ASSERT_EQ(m.rows.size(), 7u);
    for (std::size_t r = 0; r + 1 < m.rows.size(); ++r) {
        const int w = std::accumulate(m.rows[r].begin(), m.rows[r].end(), 0);
        EXPECT_TRUE(w == 3 || w == 4) << "row " << r;
    }
    EXPECT_EQ(std::accumulate(m.rows.back().begin(), m.rows.back().end(), 0), 3);
}

TEST(StabilizerMatrixOp, FullRankThroughDistanceFour) {
    // Rank of the generating set as Pauli operators: X-type rows and Z-type
    // rows occupy different halves of the symplectic tableau.
    for (int d = 1; d <= 4; ++d) {
        for (const CodeLayout& lay : {build_unrotated_layout(d), build_rotated_layout(d)}) {
            const StabilizerMatrix m = stabilizer_matrix(lay, MatrixSector::full);
            std::vector<std::uint64_t> words;
            for (std::size_t r = 0; r < m.rows.size(); ++r) {
                const int shift = m.row_labels[r][0] == 'X' ? 0 : lay.n_data;
                std::uint64_t w = 0;
                for (std::size_t q = 0; q < m.rows[r].size(); ++q)
                    if (m.rows[r][q]) w |= std::uint64_t{1} << (q + shift);
                words.push_back(w);
            }
            EXPECT_EQ(gf2_rank(words), lay.n_stabilizers() + 1) << "d=" << d;
        }
    }
}

TEST(AuxIndexDirectory, MatchesSupports) {
    EXPECT_EQ(aux_index_directory(build_unrotated_layout(2), PauliAxis::z),
              (std::vector<std::vector<int>>{{0, 2, 3}, {1, 2, 4}}));
    EXPECT_TRUE(aux_index_directory(build_unrotated_layout(1), PauliAxis::z).empty());
    const auto xs = aux_index_directory(build_unrotated_layout(3), PauliAxis::x);
    ASSERT_EQ(xs.size(), 6u);
    std::set<int> covered;
    for (const auto& s : xs) covered.insert(s.begin(), s.end());
    EXPECT_EQ(covered.size(), 13u);
}
