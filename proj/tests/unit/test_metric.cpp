#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gammadep/metric.hpp"
#include "gammadep/rng.hpp"

using namespace gammadep;

namespace {
const Gamma inf = Gamma::infinity();
Gamma g(int k) { return Gamma::finite(k); }
}  // namespace

TEST(Aggregate, TableInputs) {
    EXPECT_EQ(aggregate(0.073, -0.012, inf), 0.073);
    EXPECT_NEAR(aggregate(0.073, -0.012, g(2)), 0.0739797, 5e-8);
    EXPECT_NEAR(aggregate(-0.025, 0.025, g(1)), 0.0, 1e-18);
}

TEST(Aggregate, ZeroAtIndependence) {
    for (int k = 1; k <= 9; ++k) EXPECT_EQ(aggregate(0, 0, g(k)), 0.0);
    EXPECT_EQ(aggregate(0, 0, inf), 0.0);
}

TEST(Aggregate, OddRootKeepsSign) {
    EXPECT_NEAR(aggregate(-2.0, 1.0, g(3)), -std::cbrt(7.0), 1e-14);
    EXPECT_NEAR(aggregate(-1.0, -1.0, g(5)), -std::pow(2.0, 0.2), 1e-14);
}

TEST(Aggregate, LargeGammaUsesPow) {
    EXPECT_NEAR(aggregate(0.5, 0.25, g(12)), 0.5 * std::pow(1.0 + std::pow(0.5, 12), 1.0 / 12), 1e-15);
}

TEST(Aggregate, TinyDifferencesDoNotUnderflow) {
    EXPECT_NEAR(aggregate(1e-80, 1e-80, g(6)), 1e-80 * std::pow(2.0, 1.0 / 6), 1e-94);
}

TEST(RateW, Values) {
    EXPECT_DOUBLE_EQ(rate_w(100, g(1)), 100.0);
    EXPECT_DOUBLE_EQ(rate_w(100, g(2)), 10.0);
    EXPECT_NEAR(rate_w(100, g(3)), 21.5443469, 1e-7);
    EXPECT_DOUBLE_EQ(rate_w(100, inf), 10.0);
    EXPECT_DOUBLE_EQ(rate_w(1, g(5)), 1.0);
}

TEST(GammaStats, ZeroTriple) {
    const StatTriple t{0, 0, 0, 50, KernelPairSpec::dcov()};
    for (const auto& s : gamma_stats(t, GammaSet::standard())) {
        EXPECT_EQ(s.mu_hat, 0.0);
        EXPECT_EQ(s.scaled, 0.0);
    }
}

TEST(GammaStats, GammaOneIsEquationOne) {
    const StatTriple t{0.31, 0.17, 0.22, 64, KernelPairSpec::dcov()};
    const auto s = gamma_stats(t, GammaSet::standard());
    EXPECT_EQ(s[0].mu_hat, t.s1 + t.s2 - 2 * t.s3);
    EXPECT_EQ(s[0].scaled, 64 * (t.s1 + t.s2 - 2 * t.s3));
    EXPECT_EQ(s[6].mu_hat, std::max(t.u(), t.v()));
    EXPECT_EQ(s[6].scaled, 8 * std::max(t.u(), t.v()));
}

TEST(GammaStats, OrderingSweep) {
    Engine e = make_engine(42, 0);
    std::uniform_real_distribution<double> mag(0.01, 1.0);
    for (int r = 0; r < 2000; ++r) {
        const double a = mag(e), b = mag(e);
        if (a == b) continue;
        // u + v > 0 with v < 0
        const double u = std::max(a, b), v = -std::min(a, b);
        const StatTriple t{u + 1.0, v + 1.0, 1.0, 10, KernelPairSpec::dcov()};
        const auto s = gamma_stats(t, GammaSet::parse("1,2,3,4,5,6,inf"));
        const double m1 = s[0].mu_hat, m2 = s[1].mu_hat, m3 = s[2].mu_hat, m4 = s[3].mu_hat, m5 = s[4].mu_hat,
                     m6 = s[5].mu_hat, mi = s[6].mu_hat;
        EXPECT_GT(m2, m4);
        EXPECT_GT(m4, m6);
        EXPECT_GT(m6, mi);
        EXPECT_GT(mi, m5);
        EXPECT_GT(m5, m3);
        EXPECT_GT(m3, m1);
        EXPECT_GT(m1, 0.0);
    }
}

TEST(Aggregate, Symmetric) {
    Engine e = make_engine(43, 0);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int r = 0; r < 1000; ++r) {
        const double a = u(e), b = u(e);
        for (int k = 1; k <= 7; ++k) EXPECT_EQ(aggregate(a, b, g(k)), aggregate(b, a, g(k)));
        EXPECT_EQ(aggregate(a, b, inf), aggregate(b, a, inf));
    }
}

TEST(Aggregate, NonnegativeForEvenAndInfinity) {
    Engine e = make_engine(44, 0);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int r = 0; r < 1000; ++r) {
        double a = u(e), b = u(e);
        if (a + b < 0) {
            a = -a;
            b = -b;
        }
        for (int k : {2, 4, 6, 8}) EXPECT_GE(aggregate(a, b, g(k)), 0.0);
        EXPECT_GE(aggregate(a, b, inf), 0.0);
    }
}

TEST(Aggregate, OneZeroGivesSameValueForAllGamma) {
    for (double w : {0.1, 0.5, 3.0}) {
        for (int k = 1; k <= 9; ++k) {
            EXPECT_NEAR(aggregate(w, 0.0, g(k)), w, 1e-15);
            EXPECT_NEAR(aggregate(0.0, w, g(k)), w, 1e-15);
        }
        EXPECT_EQ(aggregate(w, 0.0, inf), w);
    }
}
