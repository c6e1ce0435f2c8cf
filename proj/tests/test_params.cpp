#include <rmat/params.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace rmat;

TEST(Params, AcceptsGraph500AndUniform) {
    const RmatParams g = validate(0.57, 0.19, 0.19, 0.05, 20);
    EXPECT_DOUBLE_EQ(g.a, 0.57);
    EXPECT_EQ(g.k, 20);
    const RmatParams u = validate(0.25, 0.25, 0.25, 0.25, 4);
    EXPECT_EQ(u.a, 0.25);
    EXPECT_EQ(u.d, 0.25);
}

TEST(Params, RejectsBadInput) {
    auto code = [](auto&& f) {
        try {
            f();
        } catch (const error& e) {
            return e.code();
        }
        ADD_FAILURE() << "no error thrown";
        return errc::io_error;
    };
    EXPECT_EQ(code([] { validate(0.5, 0.5, 0.1, 0.1, 4); }), errc::sum_out_of_tolerance);
    EXPECT_EQ(code([] { validate(0.5, 0.5, 0.0, 0.0, 4); }), errc::negative_or_zero_weight);
    EXPECT_EQ(code([] { validate(0.6, 0.5, -0.1, 0.0, 4); }), errc::negative_or_zero_weight);
    EXPECT_EQ(code([] { validate(0.25, 0.25, 0.25, 0.25, 0); }), errc::bad_exponent);
    EXPECT_EQ(code([] { validate(0.25, 0.25, 0.25, 0.25, 63); }), errc::bad_exponent);
    EXPECT_NO_THROW(validate(0.25, 0.25, 0.25, 0.25, 62));
    EXPECT_NO_THROW(validate(1 - 3e-12, 1e-12, 1e-12, 1e-12, 8));
}

TEST(Params, RenormalizesToExactSumAndIsIdempotent) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> w(0.01, 1.0);
    for (int i = 0; i < 1000; ++i) {
        double a = w(rng), b = w(rng), c = w(rng), d = w(rng);
        const double s = a + b + c + d;
        a /= s, b /= s, c /= s, d /= s;
        const RmatParams p = validate(a, b, c, d, 10);
        EXPECT_EQ(((p.a + p.b) + p.c) + p.d, 1.0);
        EXPECT_EQ(validate(p), p);
    }
}

TEST(Params, Entropy) {
    EXPECT_NEAR(entropy(graph500_params(20)), 1.59, 0.01);
    // high-precision reference: 1.588800021847891...
    EXPECT_NEAR(entropy(graph500_params(20)), 1.5888000218478913, 1e-12);
    EXPECT_EQ(entropy(validate(0.25, 0.25, 0.25, 0.25, 4)), 2.0);
    // 0.618995593589281...
    EXPECT_NEAR(entropy(validate(0.9, 0.025, 0.025, 0.05, 4)), 0.6191, 1e-3);
    EXPECT_NEAR(entropy(validate(0.9, 0.025, 0.025, 0.05, 4)), 0.6189955935892812, 1e-12);
}

TEST(Params, SpeedupBound) {
    EXPECT_NEAR(speedup_bound(graph500_params(20)), 1.26, 0.01);
    EXPECT_EQ(speedup_bound(validate(0.25, 0.25, 0.25, 0.25, 4)), 1.0);
    EXPECT_NEAR(speedup_bound(validate(0.9, 0.025, 0.025, 0.05, 4)), 3.23, 0.02);
    EXPECT_NEAR(speedup_bound(validate(0.9, 0.025, 0.025, 0.05, 4)), 3.2310407710705759, 1e-10);
}

TEST(Params, EntropyRangeProperty) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> w(1e-6, 1.0);
    for (int i = 0; i < 2000; ++i) {
        double q[4];
        double s = 0;
        for (double& x : q)
            s += (x = w(rng));
        const RmatParams p = validate(q[0] / s, q[1] / s, q[2] / s, q[3] / s, 5);
        const double h = entropy(p);
        EXPECT_GT(h, 0.0);
        EXPECT_LT(h, 2.0);
        EXPECT_GT(speedup_bound(p), 1.0);
    }
}
