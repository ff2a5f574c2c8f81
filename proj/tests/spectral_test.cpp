#include <cmath>

#include <gtest/gtest.h>

#include "ptensor/generate.hpp"
#include "ptensor/spectral.hpp"
#include "test_support.hpp"

using namespace ptensor;
using testsup::diag_tensor;
using testsup::matrix_tensor;

TEST(SpectralTest, DiagonalTensorDeltaH) {
    // Sub-tensors of a diagonal tensor are diagonal; the only H-eigenvalues
    // are the diagonal entries, so delta_H is the smallest one, attained on
    // a singleton.
    Tensor a = diag_tensor(4, {2.0, 3.0});
    DeltaReport r = delta_h(a);
    ASSERT_TRUE(r.delta_h.has_value());
    EXPECT_NEAR(*r.delta_h, 2.0, 1e-9);
    ASSERT_TRUE(r.argmin_subset_h.has_value());
    EXPECT_EQ(r.argmin_subset_h->members(), std::vector<int>({1}));
    EXPECT_EQ(r.per_subset.size(), 3u);
}

TEST(SpectralTest, DiagonalTensorDeltaZDipsBelowTheDiagonal) {
    // The full sub-tensor contributes the mixed Z-eigenvalue 6/5 < 2, so
    // delta_Z < delta_H here.
    Tensor a = diag_tensor(4, {2.0, 3.0});
    DeltaReport r = delta_z(a);
    ASSERT_TRUE(r.delta_z.has_value());
    EXPECT_NEAR(*r.delta_z, 1.2, 1e-9);
    ASSERT_TRUE(r.argmin_subset_z.has_value());
    EXPECT_EQ(r.argmin_subset_z->members(), std::vector<int>({1, 2}));
}

TEST(SpectralTest, MatrixExample) {
    Tensor a = matrix_tensor(2, {2.0, 1.0, 1.0, 2.0});
    DeltaReport r = delta_report(a);
    EXPECT_NEAR(*r.delta_h, 1.0, 1e-9);
    EXPECT_NEAR(*r.delta_z, 1.0, 1e-9);
    EXPECT_FALSE(r.heuristic);
}

TEST(SpectralTest, IdentityTensor) {
    Tensor id = unit_tensor(4, 3);
    DeltaReport r = delta_report(id);
    EXPECT_NEAR(*r.delta_h, 1.0, 1e-8);
    // smallest Z-eigenvalue of the full sub-tensor is 1/3
    EXPECT_NEAR(*r.delta_z, 1.0 / 3.0, 1e-7);
    EXPECT_EQ(r.per_subset.size(), 7u);
}

TEST(SpectralTest, DeltaIsAtMostEverySingleton) {
    for (int trial = 0; trial < 6; ++trial) {
        Tensor a = gen_random(GenKind::diagonally_dominant, 4, 3, 400 + trial, GenParams{});
        DeltaReport r = delta_report(a);
        ASSERT_TRUE(r.delta_h.has_value());
        for (int i = 0; i < 3; ++i) {
            EXPECT_LE(*r.delta_h, a.diagonal(i) + 1e-9);
            EXPECT_LE(*r.delta_z, a.diagonal(i) + 1e-9);
        }
    }
}

TEST(SpectralTest, DiagonalFixturesMatchTheClosedForm) {
    // For positive diagonal tensors of even order, delta_H equals the
    // smallest diagonal entry exactly.
    for (int trial = 0; trial < 8; ++trial) {
        const int n = 2 + trial % 2;
        Tensor a = gen_random(GenKind::diagonal_positive, 4, n, 1000 + trial, GenParams{});
        DeltaReport r = delta_h(a);
        ASSERT_TRUE(r.delta_h.has_value());
        EXPECT_NEAR(*r.delta_h, a.min_diagonal(), 1e-6) << "trial=" << trial;
    }
}

TEST(SpectralTest, PerSubsetCoversEveryNonemptySubset) {
    Tensor a = unit_tensor(4, 2);
    DeltaReport r = delta_report(a);
    ASSERT_EQ(r.per_subset.size(), 3u);
    EXPECT_EQ(r.per_subset[0].subset.members(), std::vector<int>({1}));
    EXPECT_EQ(r.per_subset[1].subset.members(), std::vector<int>({2}));
    EXPECT_EQ(r.per_subset[2].subset.members(), std::vector<int>({1, 2}));
    for (const auto& e : r.per_subset) {
        ASSERT_TRUE(e.smallest_h.has_value());
        EXPECT_NEAR(*e.smallest_h, 1.0, 1e-9);
    }
}

TEST(SpectralTest, SingletonEntriesAreExactDiagonalValues) {
    Tensor a = gen_random(GenKind::symmetric_gaussian, 3, 3, 5150, GenParams{});
    DeltaReport r = delta_report(a);
    for (const auto& e : r.per_subset) {
        if (e.subset.size() != 1) continue;
        const int i = e.subset.members()[0];  // 1-based member
        ASSERT_TRUE(e.smallest_h.has_value());
        EXPECT_NEAR(*e.smallest_h, a.diagonal(i - 1), 1e-12);
    }
}

TEST(SpectralTest, RefusesLargeDimensions) {
    Tensor a = Tensor::zeros(2, 7);
    EXPECT_THROW(delta_report(a), InputError);
}

TEST(SpectralTest, DeterministicAcrossRuns) {
    Tensor a = gen_random(GenKind::diagonally_dominant, 4, 3, 808, GenParams{});
    DeltaReport r1 = delta_report(a);
    DeltaReport r2 = delta_report(a);
    EXPECT_EQ(r1.delta_h.has_value(), r2.delta_h.has_value());
    if (r1.delta_h) EXPECT_EQ(*r1.delta_h, *r2.delta_h);
    if (r1.delta_z) EXPECT_EQ(*r1.delta_z, *r2.delta_z);
}
