#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "gammadep/kernels.hpp"
#include "helpers.hpp"

using namespace gammadep;
using gammadep::testing::gaussian_matrix;

namespace {

double naive_distance(const Matrix& z, std::size_t i, std::size_t j) {
    double s = 0.0;
    for (std::size_t k = 0; k < z.cols(); ++k) s += (z(i, k) - z(j, k)) * (z(i, k) - z(j, k));
    return std::sqrt(s);
}

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorCode::bad_argument;
}

}  // namespace

TEST(PairwiseDcov, ThreeFourFive) {
    const Matrix d = pairwise_dcov(Matrix{{0, 0}, {3, 4}});
    EXPECT_EQ(d, (Matrix{{0, 5}, {5, 0}}));
}

TEST(PairwiseDcov, SingleRow) { EXPECT_EQ(pairwise_dcov(Matrix{{1.5, 2.5}}), (Matrix{{0.0}})); }

TEST(PairwiseDcov, MatchesNaiveLoop) {
    const Matrix z = gaussian_matrix(8, 3, 1);
    const Matrix d = pairwise_dcov(z);
    for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = 0; j < 8; ++j) EXPECT_NEAR(d(i, j), naive_distance(z, i, j), 1e-12);
}

TEST(PairwiseDcov, ThreadCountDoesNotChangeBits) {
    const Matrix z = gaussian_matrix(77, 6, 2);
    EXPECT_EQ(pairwise_dcov(z, 1), pairwise_dcov(z, 4));
}

TEST(PairwiseGhsic, IdenticalRowsGiveOnes) {
    const Matrix k = pairwise_ghsic(Matrix(4, 3, 0.7), 0.5);
    for (double v : k.values()) EXPECT_EQ(v, 1.0);
}

TEST(PairwiseGhsic, UnsquaredNorm) {
    const Matrix k = pairwise_ghsic(Matrix{{0, 0}, {3, 4}}, 1.0);
    EXPECT_NEAR(k(0, 1), std::exp(-2.5), 1e-15);
    EXPECT_NEAR(k(0, 1), 0.082085, 1e-6);
    EXPECT_EQ(k(0, 0), 1.0);
}

TEST(PairwiseGhsic, MatchesNaiveLoopWithMedianBandwidth) {
    const Matrix z = gaussian_matrix(8, 3, 3);
    const double sigma = median_bandwidth(z);
    const Matrix k = pairwise_ghsic(z, sigma);
    for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = 0; j < 8; ++j)
            EXPECT_NEAR(k(i, j), std::exp(-naive_distance(z, i, j) / (2 * sigma * sigma)), 1e-12);
}

TEST(PairwiseGhsic, RejectsBadBandwidth) {
    EXPECT_EQ(code_of([] { pairwise_ghsic(Matrix{{0.0}}, 0.0); }), ErrorCode::bad_bandwidth);
    EXPECT_EQ(code_of([] { pairwise_ghsic(Matrix{{0.0}}, -1.0); }), ErrorCode::bad_bandwidth);
}

TEST(MedianBandwidth, SmallEnumeration) { EXPECT_EQ(median_bandwidth(Matrix{{0}, {1}, {2}}), 1.0); }

TEST(MedianBandwidth, Degenerate) {
    EXPECT_EQ(code_of([] { median_bandwidth(Matrix(5, 2, 3.0)); }), ErrorCode::degenerate);
}

TEST(MedianBandwidth, MatchesBruteForceList) {
    const Matrix z = gaussian_matrix(10, 2, 4);
    std::vector<double> all;
    for (std::size_t i = 0; i < 10; ++i)
        for (std::size_t j = i + 1; j < 10; ++j) all.push_back(naive_distance(z, i, j));
    std::sort(all.begin(), all.end());
    ASSERT_EQ(all.size(), 45u);
    EXPECT_NEAR(median_bandwidth(z), all[22], 1e-12);
}

TEST(GenericKernel, DcovUsesFirstTwoArguments) {
    const std::vector<double> z1{0, 0}, z2{3, 4}, z3{9, 9}, z4{-1, 7};
    const std::vector<std::span<const double>> args{z1, z2, z3, z4};
    EXPECT_EQ(eval_generic_kernel(KernelPairSpec::dcov(), KernelSide::f1, args), 5.0);
}

TEST(GenericKernel, PcovAngles) {
    const std::vector<double> z1{1, 0}, z2{0, 1}, z3{5, 5}, z4{2, 2}, z5{0, 0};
    const std::vector<std::span<const double>> orth{z1, z2, z3, z4, z5};
    EXPECT_NEAR(eval_generic_kernel(KernelPairSpec::pcov(), KernelSide::f1, orth), M_PI / 2, 1e-15);
    const std::vector<double> w{2, 0};
    const std::vector<std::span<const double>> same{z1, w, z3, z4, z5};
    EXPECT_EQ(eval_generic_kernel(KernelPairSpec::pcov(), KernelSide::f2, same), 0.0);
}

TEST(GenericKernel, Errors) {
    const std::vector<double> a{1, 0}, b{0, 1}, c{1};
    const std::vector<std::span<const double>> three{a, b, a};
    EXPECT_EQ(code_of([&] { eval_generic_kernel(KernelPairSpec::dcov(), KernelSide::f1, three); }), ErrorCode::arity);
    const std::vector<std::span<const double>> ragged{a, b, a, c};
    EXPECT_EQ(code_of([&] { eval_generic_kernel(KernelPairSpec::dcov(), KernelSide::f1, ragged); }),
              ErrorCode::dim_mismatch);
    const std::vector<std::span<const double>> singular{a, b, a, b, a};
    EXPECT_EQ(code_of([&] { eval_generic_kernel(KernelPairSpec::pcov(), KernelSide::f1, singular); }),
              ErrorCode::pcov_singular);
}

TEST(KernelProperties, SymmetryAndDiagonal) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const Matrix z = gaussian_matrix(3 + seed % 11, 1 + seed % 4, seed);
        const Matrix d = pairwise_dcov(z);
        const Matrix k = pairwise_ghsic(z, 0.3 + 0.1 * static_cast<double>(seed % 5));
        for (std::size_t i = 0; i < z.rows(); ++i) {
            EXPECT_EQ(d(i, i), 0.0);
            EXPECT_EQ(k(i, i), 1.0);
            for (std::size_t j = 0; j < z.rows(); ++j) {
                EXPECT_EQ(d(i, j), d(j, i));
                EXPECT_EQ(k(i, j), k(j, i));
                EXPECT_GE(d(i, j), 0.0);
                EXPECT_GT(k(i, j), 0.0);
                EXPECT_LE(k(i, j), 1.0);
            }
        }
    }
}

TEST(KernelProperties, DcovTranslationInvariantAndHomogeneous) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Matrix z = gaussian_matrix(9, 3, seed);
        Matrix shifted = z;
        Matrix scaled = z;
        const double c = 0.5 + static_cast<double>(seed);
        for (std::size_t i = 0; i < z.rows(); ++i)
            for (std::size_t j = 0; j < z.cols(); ++j) {
                shifted(i, j) += 1.7 - 0.3 * static_cast<double>(j);
                scaled(i, j) *= c;
            }
        const Matrix d = pairwise_dcov(z);
        const Matrix ds = pairwise_dcov(shifted);
        const Matrix dc = pairwise_dcov(scaled);
        for (std::size_t i = 0; i < d.values().size(); ++i) {
            EXPECT_NEAR(ds.values()[i], d.values()[i], 1e-12);
            EXPECT_NEAR(dc.values()[i], c * d.values()[i], 1e-12 * c);
        }
    }
}

TEST(KernelProperties, GhsicRigidMotionInvariant) {
    const Matrix z = gaussian_matrix(12, 2, 9);
    const double th = 0.83;
    Matrix moved(12, 2);
    for (std::size_t i = 0; i < 12; ++i) {
        moved(i, 0) = std::cos(th) * z(i, 0) - std::sin(th) * z(i, 1) + 3.0;
        moved(i, 1) = std::sin(th) * z(i, 0) + std::cos(th) * z(i, 1) - 1.0;
    }
    const Matrix a = pairwise_ghsic(z, 0.9);
    const Matrix b = pairwise_ghsic(moved, 0.9);
    for (std::size_t i = 0; i < a.values().size(); ++i) EXPECT_NEAR(a.values()[i], b.values()[i], 1e-10);
}

TEST(KernelChoice, MedianDefaultForGhsic) {
    const Sample s = gammadep::testing::gaussian_sample(15, 2, 3, 5);
    const auto spec = KernelChoice{KernelId::ghsic, std::nullopt}.resolve(s);
    ASSERT_TRUE(spec.bandwidths());
    EXPECT_EQ((*spec.bandwidths())[0], median_bandwidth(s.x()));
    EXPECT_EQ((*spec.bandwidths())[1], median_bandwidth(s.y()));
    EXPECT_EQ(KernelChoice{}.resolve(s), KernelPairSpec::dcov());
}
