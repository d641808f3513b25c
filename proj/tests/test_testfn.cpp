#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "lowzero/testfn.hpp"
#include "oracles.hpp"

using namespace lowzero;

TEST(Fejer, TransformValues) {
    const auto tf = fejer(Rational(1, 2));
    EXPECT_EQ(evaluate(tf.fhat, 0), 2);
    EXPECT_EQ(fhat_at_zero(tf), 2);
    EXPECT_EQ(evaluate(tf.fhat, Rational(1, 2)), 0);
    EXPECT_EQ(evaluate(fejer(Rational(3, 7)).fhat, Rational(3, 7)), 0);
    EXPECT_EQ(tf.label, "fejer:1/2");
}

TEST(Fejer, RejectsNonPositiveSupport) {
    EXPECT_THROW(fejer(0), DomainError);
    EXPECT_THROW(fejer(Rational(-1, 2)), DomainError);
}

TEST(Fejer, PhiValues) {
    const auto tf = fejer(Rational(1, 2));
    EXPECT_DOUBLE_EQ(tf.phi_at(0.0), 1.0);
    const double half_pi = std::numbers::pi / 2;
    const double expected = std::pow(std::sin(half_pi) / half_pi, 2);
    EXPECT_NEAR(tf.phi_at(1.0), expected, 1e-15);
    EXPECT_NEAR(tf.phi_at(1.0), 4 / (std::numbers::pi * std::numbers::pi), 1e-15);
    EXPECT_LT(tf.phi_at(1e3), 1e-5);
    EXPECT_EQ(phi_at_zero(tf), 1);
}

TEST(Fejer, NumericInversionMatchesClosedForm) {
    auto tf = fejer(Rational(3, 5));
    auto numeric = tf;
    numeric.phi_at = nullptr;
    for (double x : {0.0, 0.3, 1.0, 2.7, 10.0}) EXPECT_NEAR(phi_value_numeric(numeric, x), tf.phi_at(x), 1e-10) << x;
    EXPECT_NEAR(phi_value_numeric(numeric, 0.0), phi_at_zero(tf).get_d(), 1e-10);
}

TEST(Fejer, StructuralChecks) {
    EXPECT_NO_THROW(check_test_function(fejer(Rational(2, 9))));
    auto lopsided = fejer(Rational(1, 2));
    lopsided.fhat = PiecewisePoly::constant(0, Rational(1, 2), 2);
    lopsided.phi_at = nullptr;
    EXPECT_THROW(check_test_function(lopsided), InvariantError);
    auto leaky = fejer(Rational(1, 4));
    leaky.fhat = fejer(Rational(1, 2)).fhat;
    leaky.phi_at = nullptr;
    EXPECT_THROW(check_test_function(leaky), InvariantError);
}

TEST(Fejer, ParsesFromCommandLineName) {
    EXPECT_EQ(parse_test_function("fejer:3/5").sigma, Rational(3, 5));
    EXPECT_THROW(parse_test_function("gauss:1/2"), UsageError);
    EXPECT_THROW(parse_test_function("fejer:0.5"), UsageError);
    EXPECT_THROW(parse_test_function("fejer:-1/2"), UsageError);
}

TEST(PhiPowerHat, IdentityMassAndTail) {
    const auto tf = fejer(Rational(3, 5));
    EXPECT_EQ(phi_power_hat(tf, 1), tf.fhat);
    for (unsigned m = 1; m <= 5; ++m) {
        const auto p = phi_power_hat(tf, m);
        EXPECT_EQ(total_integral(p), 1) << m;
        EXPECT_EQ(p.support_hi(), m * tf.sigma);
    }
    EXPECT_EQ(definite_integral(phi_power_hat(tf, 2), Rational(3, 5), Rational(6, 5)), Rational(1, 24));
    EXPECT_THROW(phi_power_hat(tf, 0), DomainError);
}

TEST(PhiPowerHat, Additive) {
    const auto tf = fejer(Rational(2, 5));
    EXPECT_EQ(phi_power_hat(tf, 3), convolve(phi_power_hat(tf, 1), phi_power_hat(tf, 2)));
}

TEST(Parseval, ExactMatchesNumeric) {
    for (const Rational& s : {Rational(1, 2), Rational(1, 5), Rational(7, 4)}) {
        const auto tf = fejer(s);
        const double sd = s.get_d();
        const double numeric = 4 * oracle_ref::simpson([&](double y) {
            const double v = oracle_ref::triangle(sd, y);
            return y * v * v;
        }, 0, sd, 2000);
        const auto t = tf.fhat;
        const auto abs_y = PiecewisePoly({-s, 0, s}, {Poly{0, -1}, Poly{0, 1}});
        const Rational exact = total_integral(multiply(multiply(t, t), abs_y)) * 2;
        EXPECT_NEAR(exact.get_d(), numeric, 1e-9);
    }
}
