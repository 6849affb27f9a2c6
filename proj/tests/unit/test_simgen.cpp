#include <gtest/gtest.h>

#include <cmath>

#include "gammadep/simgen.hpp"

using namespace gammadep;

namespace {

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorCode::bad_argument;
}

SimConfig model(Model m, std::size_t n, std::size_t d, std::optional<double> kappa, std::uint64_t seed,
                ErrorFamily e = ErrorFamily::normal_banded) {
    SimConfig c;
    c.model = m;
    c.n = n;
    c.d1 = c.d2 = d;
    c.kappa = kappa;
    c.seed = seed;
    c.error = e;
    return c;
}

}  // namespace

TEST(GenNull, BandedCovariance) {
    const Matrix z = gen_null(Model::null_a, 100000, 2, 1);
    double s00 = 0, s01 = 0, s11 = 0, m0 = 0, m1 = 0;
    for (std::size_t i = 0; i < z.rows(); ++i) {
        m0 += z(i, 0);
        m1 += z(i, 1);
        s00 += z(i, 0) * z(i, 0);
        s01 += z(i, 0) * z(i, 1);
        s11 += z(i, 1) * z(i, 1);
    }
    const double n = static_cast<double>(z.rows());
    m0 /= n;
    m1 /= n;
    EXPECT_NEAR(s00 / n - m0 * m0, 1.0, 0.02);
    EXPECT_NEAR(s11 / n - m1 * m1, 1.0, 0.02);
    EXPECT_NEAR(s01 / n - m0 * m1, 0.5, 0.02);
}

TEST(GenNull, BandIsTridiagonal) {
    const Matrix z = gen_null(Model::null_a, 100000, 4, 2);
    double s02 = 0, s13 = 0;
    for (std::size_t i = 0; i < z.rows(); ++i) {
        s02 += z(i, 0) * z(i, 2);
        s13 += z(i, 1) * z(i, 3);
    }
    EXPECT_NEAR(s02 / 100000, 0.0, 0.02);
    EXPECT_NEAR(s13 / 100000, 0.0, 0.02);
}

TEST(GenNull, HeavyTails) {
    const Matrix z = gen_null(Model::null_b, 1000000, 1, 3);
    std::size_t big = 0;
    for (double v : z.values())
        if (std::fabs(v) > 3.0) ++big;
    EXPECT_GT(static_cast<double>(big) / 1e6, 5 * 0.0027);
}

TEST(GenNull, Deterministic) {
    EXPECT_EQ(gen_null(Model::null_a, 20, 3, 9), gen_null(Model::null_a, 20, 3, 9));
    EXPECT_EQ(gen_null(Model::null_b, 20, 3, 9), gen_null(Model::null_b, 20, 3, 9));
    EXPECT_NE(gen_null(Model::null_a, 20, 3, 9), gen_null(Model::null_a, 20, 3, 10));
    EXPECT_EQ(code_of([] { gen_null(Model::m1, 5, 2, 1); }), ErrorCode::bad_model);
}

TEST(GenModel, NoiselessLinear) {
    const Sample s = gen_model(model(Model::m1, 50, 4, 0.0, 1));
    EXPECT_EQ(s.x(), s.y());
    for (double v : s.x().values()) {
        EXPECT_GE(v, -1.0);
        EXPECT_LE(v, 1.0);
    }
}

TEST(GenModel, NoiselessCircle) {
    const Sample s = gen_model(model(Model::m3, 200, 3, 0.0, 2));
    for (std::size_t i = 0; i < 200; ++i)
        for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(s.x()(i, j) * s.x()(i, j) + s.y()(i, j) * s.y()(i, j), 1.0, 1e-12);
}

TEST(GenModel, RotationPreservesNorm) {
    const Sample s = gen_model(model(Model::m4, 100, 2, 0.0, 3));
    for (std::size_t i = 0; i < 100; ++i)
        for (std::size_t j = 0; j < 2; ++j) EXPECT_LE(std::fabs(s.y()(i, j)), std::sqrt(2.0) + 1e-12);
}

TEST(GenModel, LabelledModelSymmetricAboutZero) {
    const Sample s = gen_model(model(Model::m5, 100000, 1, std::nullopt, 4));
    double positive = 0, mean = 0, third = 0;
    for (double v : s.y().values()) {
        positive += v > 0;
        mean += v;
        third += v * v * v;
    }
    const double n = 1e5;
    EXPECT_NEAR(positive / n, 0.5, 3 * 0.5 / std::sqrt(n));
    EXPECT_NEAR(mean / n, 0.0, 0.005);
    EXPECT_NEAR(third / n, 0.0, 0.005);
}

TEST(GenModel, Errors) {
    SimConfig c = model(Model::m2, 10, 3, std::nullopt, 1);
    c.d2 = 2;
    EXPECT_EQ(code_of([&] { gen_model(c); }), ErrorCode::bad_dim);
    EXPECT_EQ(code_of([] { gen_model(model(Model::null_a, 10, 2, std::nullopt, 1)); }), ErrorCode::bad_model);
    EXPECT_EQ(code_of([] { parse_model("m9"); }), ErrorCode::bad_model);
}

TEST(GenModel, DefaultKappa) {
    EXPECT_EQ(default_kappa(Model::m1, ErrorFamily::normal_banded), 1.5);
    EXPECT_EQ(default_kappa(Model::m1, ErrorFamily::t3), 0.4);
    EXPECT_EQ(default_kappa(Model::m2, ErrorFamily::normal_banded), 0.1);
    EXPECT_EQ(default_kappa(Model::m2, ErrorFamily::t3), 0.05);
    EXPECT_EQ(default_kappa(Model::m3, ErrorFamily::normal_banded), 0.5);
    EXPECT_EQ(default_kappa(Model::m3, ErrorFamily::t3), 0.15);
    EXPECT_EQ(default_kappa(Model::m4, ErrorFamily::normal_banded), 0.05);
    EXPECT_EQ(default_kappa(Model::m4, ErrorFamily::t3), 0.05);
    EXPECT_EQ(default_kappa(Model::m5, ErrorFamily::normal_banded), 0.5);
    EXPECT_EQ(default_kappa(Model::m5, ErrorFamily::t3), 0.1);
}

TEST(GenModel, Deterministic) {
    for (Model m : {Model::m1, Model::m2, Model::m3, Model::m4, Model::m5}) {
        EXPECT_EQ(gen_model(model(m, 30, 2, std::nullopt, 5)), gen_model(model(m, 30, 2, std::nullopt, 5)));
    }
}

TEST(Population, IndependenceGivesZero) {
    const auto p = mc_population_triple(model(Model::null_a, 0, 3, std::nullopt, 0), KernelPairSpec::dcov(), 200000, 6);
    EXPECT_LT(std::fabs(p.u), 3 * p.se_u);
    EXPECT_LT(std::fabs(p.v), 3 * p.se_v);
    EXPECT_LT(std::fabs(p.sum), 3 * p.se_sum);
    EXPECT_EQ(p.sum, p.u + p.v);
    EXPECT_EQ(p.n_mc, 200000u);
}

TEST(Population, SignPatterns) {
    for (auto e : {ErrorFamily::normal_banded, ErrorFamily::t3}) {
        for (Model m : {Model::m1, Model::m2, Model::m3, Model::m4, Model::m5}) {
            const auto p = mc_population_triple(model(m, 0, 5, std::nullopt, 0, e), KernelPairSpec::dcov(), 200000, 7);
            const bool cancel_up = m == Model::m3 || m == Model::m4;
            SCOPED_TRACE(std::string(to_string(m)) + " " + std::string(to_string(e)));
            EXPECT_EQ(p.sum, p.u + p.v);
            if (cancel_up) {
                EXPECT_LT(p.u + 3 * p.se_u, 0.0);
                EXPECT_GT(p.v - 3 * p.se_v, 0.0);
            } else {
                EXPECT_GT(p.u - 3 * p.se_u, 0.0);
                EXPECT_LT(p.v + 3 * p.se_v, 0.0);
            }
        }
    }
}

TEST(Population, ThreadsDoNotMatter) {
    const SimConfig c = model(Model::m2, 0, 3, std::nullopt, 0);
    const auto a = mc_population_triple(c, KernelPairSpec::dcov(), 50000, 8, 1);
    const auto b = mc_population_triple(c, KernelPairSpec::dcov(), 50000, 8, 3);
    EXPECT_EQ(a.u, b.u);
    EXPECT_EQ(a.v, b.v);
    EXPECT_EQ(a.se_sum, b.se_sum);
}

TEST(Experiment, RowsAndDeterminism) {
    SimConfig c = model(Model::m1, 40, 2, std::nullopt, 11);
    c.reps = 20;
    c.b_count = 50;
    const std::vector<Combiner> comb{Combiner::fisher, Combiner::min};
    const auto a = size_power_experiment(c, GammaSet::parse("1,2,inf"), comb, {}, TieMode::strict, 1);
    const auto b = size_power_experiment(c, GammaSet::parse("1,2,inf"), comb, {}, TieMode::strict, 4);
    ASSERT_EQ(a.rows.size(), 7u);  // T1 T2 Tinf fisher min asym-T2 asym-Tinf
    EXPECT_EQ(a.rows[0].method, "T1");
    EXPECT_EQ(a.rows[2].method, "Tinf");
    EXPECT_EQ(a.rows[4].method, "min");
    EXPECT_EQ(a.rows[6].method, "asym-Tinf");
    EXPECT_EQ(a.pvalues, b.pvalues);
    for (const auto& r : a.rows) {
        EXPECT_EQ(r.reps, 20u);
        EXPECT_DOUBLE_EQ(r.rate, r.rejections / 20.0);
        EXPECT_NEAR(r.se, std::sqrt(r.rate * (1 - r.rate) / 20), 1e-15);
    }
}
