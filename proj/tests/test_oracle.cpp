#include <gtest/gtest.h>

#include "lowzero/moments.hpp"
#include "lowzero/oracle.hpp"

using namespace lowzero;
using oracle::Descriptor;
using oracle::Functional;

TEST(NumericOracle, SigmaPhiSq) {
    EXPECT_NEAR(oracle::oracle_numeric(fejer(Rational(1, 2)), {Functional::sigma_phi_sq}), 1.0 / 3, 1e-8);
}

TEST(NumericOracle, RMoment) {
    const double v = oracle::oracle_numeric(fejer(Rational(1, 2)), {Functional::R_moment, 4, 2});
    EXPECT_NEAR(v, 4.0 / 105, 1e-7);
    EXPECT_NEAR(oracle::oracle_numeric(fejer(Rational(3, 5)), {Functional::R_moment, 2, 1}), 1.0 / 972, 1e-7);
}

TEST(NumericOracle, XXiAndI) {
    const auto tf = fejer(Rational(3, 5));
    for (unsigned ell = 0; ell <= 2; ++ell)
        EXPECT_NEAR(oracle::oracle_numeric(tf, {Functional::X_xi, 2, ell}), X_xi(tf, 2, ell).get_d(), 1e-7) << ell;
    const auto h = fejer(Rational(1, 2));
    EXPECT_NEAR(oracle::oracle_numeric(h, {Functional::I_integral, 3, 1, 1}), I_integral(h, 3, 1, 1).get_d(), 1e-7);
    EXPECT_NEAR(oracle::oracle_numeric(h, {Functional::I_integral, 3, 0, 2}), I_integral(h, 3, 0, 2).get_d(), 1e-7);
}
