#include <gtest/gtest.h>

#include "lowzero/vanishing.hpp"

using namespace lowzero;
using namespace lowzero::vanishing;

TEST(Vanishing, RFiveReproducesPublishedBound) {
    const auto r = vanishing_bound({5, 4, Rational(1, 2), Sign::minus});
    EXPECT_EQ(r.moment, Rational(31, 105));
    EXPECT_EQ(r.threshold, Rational(5, 2));
    EXPECT_EQ(r.bound, Rational(496, 65625));
    EXPECT_LT(r.bound, prior_bound_strong);
    EXPECT_LT(prior_bound_strong, prior_bound_weak);
}

TEST(Vanishing, RNineteenAtTwenty) {
    const auto r = vanishing_bound({19, 20, Rational(1, 10), Sign::minus});
    EXPECT_GE(r.bound, Rational(28, 10) * Rational(mpz_class(1), mpz_class("1000000000000000")));
    EXPECT_LE(r.bound, Rational(287, 100) * Rational(mpz_class(1), mpz_class("1000000000000000")));
}

TEST(Vanishing, SecondMomentIsWeaker) {
    const auto two = vanishing_bound({5, 2, Rational(1, 2), Sign::minus});
    const Rational s = S_correction(fejer(Rational(1, 2)), 2, minimal_a(Rational(1, 2), 2));
    EXPECT_EQ(two.bound, Rational(4, 25) * (Rational(1, 3) - s));
    EXPECT_GT(two.bound, vanishing_bound({5, 4, Rational(1, 2), Sign::minus}).bound);
}

TEST(Vanishing, RejectsBadQueries) {
    EXPECT_THROW(vanishing_bound({5, 3, Rational(1, 2), Sign::minus}), DomainError);
    EXPECT_THROW(vanishing_bound({5, 0, Rational(1, 2), Sign::minus}), DomainError);
    EXPECT_THROW(vanishing_bound({2, 4, Rational(1, 2), Sign::minus}), DomainError);
    EXPECT_THROW(vanishing_bound({5, 4, Rational(3, 5), Sign::minus}), DomainError);
    EXPECT_THROW(vanishing_bound({0, 4, Rational(1, 2), Sign::minus}), DomainError);
}

TEST(Vanishing, AssumptionFlags) {
    const auto low = vanishing_bound({3, 4, Rational(1, 2), Sign::minus});
    EXPECT_EQ(low.assumptions.size(), 2u);
    const auto plus = vanishing_bound({5, 4, Rational(1, 2), Sign::plus});
    EXPECT_EQ(plus.assumptions.size(), 2u);
    EXPECT_EQ(plus.moment, Rational(1, 3) + Rational(4, 105));
    EXPECT_EQ(vanishing_bound({5, 4, Rational(1, 2), Sign::minus}).assumptions.size(), 1u);
}

TEST(Sweep, MinimumAtPublishedPoint) {
    const auto t = bound_sweep(5, {2, 4}, {Rational(1, 4), Rational(1, 3), Rational(1, 2)}, Sign::minus);
    ASSERT_TRUE(t.best.has_value());
    const auto& best = t.rows[*t.best];
    EXPECT_EQ(best.n, 4u);
    EXPECT_EQ(best.sigma, Rational(1, 2));
    EXPECT_EQ(best.result->bound, Rational(496, 65625));
    for (const auto& row : t.rows) {
        ASSERT_TRUE(row.result.has_value()) << row.skip_reason;
        EXPECT_GT(row.result->bound, 0);
    }
}

TEST(Sweep, SkipsInvalidPoints) {
    const auto t = bound_sweep(5, {4}, {Rational(1, 5), Rational(3, 5)}, Sign::minus);
    ASSERT_EQ(t.rows.size(), 2u);
    EXPECT_FALSE(t.rows[0].result.has_value());
    EXPECT_FALSE(t.rows[1].result.has_value());
    EXPECT_FALSE(t.best.has_value());
}

TEST(Vanishing, MonotoneInR) {
    Rational prev = vanishing_bound({5, 4, Rational(1, 2), Sign::minus}).bound;
    for (unsigned r = 6; r <= 30; ++r) {
        const Rational b = vanishing_bound({r, 4, Rational(1, 2), Sign::minus}).bound;
        EXPECT_LT(b, prev);
        prev = b;
    }
}
