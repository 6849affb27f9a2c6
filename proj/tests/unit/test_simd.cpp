#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "gammadep/kernels.hpp"
#include "gammadep/rng.hpp"
#include "gammadep/simd.hpp"
#include "gammadep/ustat.hpp"
#include "helpers.hpp"

using namespace gammadep;

namespace {

std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
    Engine e = make_engine(seed, 1);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    std::vector<double> v(n);
    for (auto& x : v) x = u(e);
    return v;
}

void require_avx2() {
    if (simd::avx2_kernels() == nullptr) GTEST_SKIP() << "AVX2 not available";
}

}  // namespace

TEST(Simd, DetectedIsaIsActiveByDefault) {
    if (std::getenv("GAMMADEP_SIMD") == nullptr) {
        EXPECT_EQ(simd::active_isa(), simd::detected_isa());
    }
}

TEST(Simd, DistanceRowBitIdentical) {
    require_avx2();
    const auto& s = simd::scalar_kernels();
    const auto& v = *simd::avx2_kernels();
    for (std::size_t n : {1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 16u, 31u, 100u})
        for (std::size_t d : {1u, 2u, 5u, 17u}) {
            const Matrix z = gammadep::testing::gaussian_matrix(n, d, n * 131 + d);
            const Matrix cols = z.transposed();
            const simd::ColumnView view{cols.data(), n, d};
            for (std::size_t i = 0; i < n; ++i) {
                std::vector<double> a(n), b(n);
                s.distance_row(view, i, 0, n, a.data());
                v.distance_row(view, i, 0, n, b.data());
                for (std::size_t j = 0; j < n; ++j) ASSERT_EQ(a[j], b[j]) << "n=" << n << " d=" << d;
                if (i + 1 < n) {
                    s.distance_row(view, i, i + 1, n, a.data());
                    v.distance_row(view, i, i + 1, n, b.data());
                    for (std::size_t j = 0; j + i + 1 < n; ++j) ASSERT_EQ(a[j], b[j]);
                }
            }
        }
}

TEST(Simd, ReductionsAgreeToRounding) {
    require_avx2();
    const auto& s = simd::scalar_kernels();
    const auto& v = *simd::avx2_kernels();
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 8u, 13u, 64u, 257u, 1000u}) {
        const auto a = random_vector(n, n);
        const auto b = random_vector(n, n + 7);
        std::vector<std::uint32_t> idx(n);
        std::iota(idx.begin(), idx.end(), 0u);
        Engine e = make_engine(n, 2);
        std::shuffle(idx.begin(), idx.end(), e);
        double mag_dot = 0.0, mag_sum = 0.0, mag_gather = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            mag_dot += std::fabs(a[i] * b[i]);
            mag_sum += std::fabs(a[i]);
            mag_gather += std::fabs(a[i] * b[idx[i]]);
        }
        EXPECT_NEAR(s.dot(a.data(), b.data(), n), v.dot(a.data(), b.data(), n), 1e-13 * (1 + mag_dot));
        EXPECT_NEAR(s.sum(a.data(), n), v.sum(a.data(), n), 1e-13 * (1 + mag_sum));
        EXPECT_NEAR(s.gather_dot(a.data(), b.data(), idx.data(), n), v.gather_dot(a.data(), b.data(), idx.data(), n),
                    1e-13 * (1 + mag_gather));
    }
}

TEST(Simd, PairwiseMatricesIdenticalAcrossIsa) {
    require_avx2();
    const Matrix z = gammadep::testing::gaussian_matrix(53, 7, 11);
    Matrix scalar, vector;
    {
        simd::ScopedIsa guard(simd::Isa::scalar);
        scalar = pairwise_dcov(z);
    }
    {
        simd::ScopedIsa guard(simd::Isa::avx2);
        vector = pairwise_dcov(z);
    }
    EXPECT_EQ(scalar, vector);
}

TEST(Simd, FastTripleAgreesAcrossIsa) {
    require_avx2();
    const Sample s = gammadep::testing::gaussian_sample(120, 4, 3, 12);
    const auto mats = pair_kernel_matrices(s, KernelPairSpec::dcov());
    StatTriple a, b;
    {
        simd::ScopedIsa guard(simd::Isa::scalar);
        a = fast_triple_pair(mats);
    }
    {
        simd::ScopedIsa guard(simd::Isa::avx2);
        b = fast_triple_pair(mats);
    }
    EXPECT_NEAR(a.s1, b.s1, 1e-13 * std::fabs(a.s1));
    EXPECT_NEAR(a.s2, b.s2, 1e-13 * std::fabs(a.s2));
    EXPECT_NEAR(a.s3, b.s3, 1e-13 * std::fabs(a.s3));
}

TEST(Simd, ScalarAlwaysSelectable) {
    simd::ScopedIsa guard(simd::Isa::scalar);
    EXPECT_EQ(simd::active_isa(), simd::Isa::scalar);
}
