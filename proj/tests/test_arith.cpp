#include <gtest/gtest.h>

#include <cmath>

#include "lowzero/arith.hpp"
#include "oracles.hpp"

using namespace lowzero;
using namespace lowzero::arith;

TEST(NumberTheory, Basics) {
    EXPECT_EQ(euler_phi(12), 4);
    EXPECT_EQ(euler_phi(1), 1);
    EXPECT_EQ(mobius(30), -1);
    EXPECT_EQ(mobius(12), 0);
    EXPECT_EQ(divisor_count(36), 9);
    for (Int q = 1; q <= 60; ++q) EXPECT_EQ(euler_phi(q), oracle_ref::phi_brute(q));
    EXPECT_THROW(factorize(factor_cap + 1), ResourceError);
}

TEST(Ramanujan, Examples) {
    for (Int p : {2, 3, 5, 7, 11, 97}) EXPECT_EQ(ramanujan(1, p), -1);
    for (Int q = 1; q <= 40; ++q) EXPECT_EQ(ramanujan(q, q), euler_phi(q));
    EXPECT_EQ(oracle_ref::ramanujan_direct(6, 4), -2);
    EXPECT_EQ(ramanujan(6, 4), oracle_ref::ramanujan_direct(6, 4));
}

TEST(Ramanujan, MethodsAgreeWithDefinition) {
    for (Int q = 1; q <= 60; ++q)
        for (Int n = 0; n <= 60; ++n) {
            const long want = oracle_ref::ramanujan_direct(n, q);
            EXPECT_EQ(ramanujan_divisor(n, q), want);
            EXPECT_EQ(ramanujan_von_sterneck(n, q), want);
            EXPECT_EQ(ramanujan_exponential(n, q), want);
        }
}

TEST(Characters, CountsAndStructure) {
    EXPECT_EQ(enumerate_characters(1)->size(), 1u);
    const auto five = enumerate_characters(5);
    EXPECT_EQ(five->size(), 4u);
    EXPECT_EQ(std::count_if(five->begin(), five->end(), [](const DirichletCharacter& c) { return c.is_primitive; }), 3);
    const auto eight = enumerate_characters(8);
    ASSERT_EQ(eight->size(), 4u);
    for (const auto& chi : *eight)
        for (Int a = 0; a < 8; ++a) EXPECT_NEAR(chi(a).imag(), 0.0, 1e-12);
    EXPECT_EQ(enumerate_characters(5).get(), five.get());
}

TEST(Characters, MultiplicativeAndRootsOfUnity) {
    for (Int q : {7, 9, 12, 16, 20, 45}) {
        const Int phi = euler_phi(q);
        for (const auto& chi : *enumerate_characters(q)) {
            EXPECT_NEAR(std::abs(chi(1) - Complex(1.0)), 0.0, 1e-12);
            for (Int a = 0; a < q; ++a) {
                if (std::gcd(a, q) != 1) {
                    EXPECT_EQ(chi(a), Complex(0.0));
                    continue;
                }
                EXPECT_NEAR(std::abs(std::pow(chi(a), static_cast<int>(phi)) - Complex(1.0)), 0.0, 1e-9);
                for (Int b = 0; b < q; ++b) EXPECT_NEAR(std::abs(chi(a * b) - chi(a) * chi(b)), 0.0, 1e-9);
            }
        }
    }
}

TEST(Characters, Orthogonality) {
    for (Int q : {5, 8, 15, 24}) {
        const auto chars = enumerate_characters(q);
        for (std::size_t i = 0; i < chars->size(); ++i)
            for (std::size_t k = 0; k < chars->size(); ++k) {
                Complex s = 0;
                for (Int a = 0; a < q; ++a) s += (*chars)[i](a) * (*chars)[k].conj(a);
                EXPECT_NEAR(std::abs(s - Complex(i == k ? static_cast<double>(euler_phi(q)) : 0.0)), 0.0, 1e-9);
            }
    }
}

TEST(Gauss, Examples) {
    for (Int q = 1; q <= 30; ++q) {
        const auto chars = enumerate_characters(q);
        const auto& chi0 = chars->front();
        EXPECT_TRUE(chi0.is_principal);
        for (Int n = 0; n <= 30; ++n) EXPECT_NEAR(std::abs(gauss_sum_raw(chi0, n) - Complex(oracle_ref::ramanujan_direct(n, q))), 0, 1e-9);
        for (std::size_t i = 1; i < chars->size(); ++i) EXPECT_NEAR(std::abs(gauss_sum((*chars)[i], 0).value), 0.0, 1e-9);
    }
    for (const auto& chi : *enumerate_characters(5))
        if (chi.is_primitive) {
            EXPECT_NEAR(std::abs(gauss_sum(chi, 1).value), std::sqrt(5.0), 1e-9);
        }
}

TEST(Gauss, ImprimitiveExceedsSquareRootBound) {
    const auto& chi0 = enumerate_characters(12)->front();
    EXPECT_FALSE(gauss_bound_applies(chi0, 12));
    EXPECT_NEAR(std::abs(gauss_sum(chi0, 12).value), 4.0, 1e-9);
    EXPECT_GT(4.0, std::sqrt(12.0));
}

TEST(Kloosterman, Examples) {
    for (Int q = 1; q <= 30; ++q) EXPECT_NEAR(kloosterman(0, 0, q).value.real(), static_cast<double>(euler_phi(q)), 1e-9);
    EXPECT_NEAR(kloosterman(1, 1, 2).value.real(), 1.0, 1e-12);
    for (Int q = 1; q <= 25; ++q)
        for (Int m = 0; m <= 6; ++m)
            for (Int n = 0; n <= 6; ++n) {
                const double v = kloosterman(m, n, q).value.real();
                EXPECT_NEAR(v, kloosterman(n, m, q).value.real(), 1e-9);
                EXPECT_NEAR(v, oracle_ref::kloosterman_direct(m, n, q), 1e-9);
            }
    EXPECT_THROW(kloosterman(1, 1, 0), DomainError);
}

TEST(Kloosterman, FactorizationExamples) {
    EXPECT_TRUE(verify_kloosterman_factorization(3, 4, 5, 1));
    EXPECT_TRUE(verify_kloosterman_factorization(5, 6, 14, 2));
    const auto c = kloosterman_factorization(3, 4, 5, 1);
    EXPECT_NEAR(c.lhs, oracle_ref::kloosterman_direct(1, 15, 12), 1e-9);
    EXPECT_THROW(kloosterman_factorization(4, 3, 5, 1), DomainError);
    EXPECT_THROW(kloosterman_factorization(3, 6, 5, 1), DomainError);
    EXPECT_THROW(kloosterman_factorization(3, 4, 6, 1), DomainError);
    EXPECT_THROW(kloosterman_factorization(3, 4, 5, 3), DomainError);
}

TEST(GcdSaturate, Examples) {
    EXPECT_EQ(gcd_saturate(12, 2), 4);
    for (Int x = 1; x <= 50; ++x) EXPECT_EQ(gcd_saturate(x, 1), 1);
    for (Int p : {2, 3, 13}) EXPECT_EQ(gcd_saturate(p, p), p);
    EXPECT_EQ(gcd_saturate(360, 6), 72);
}

TEST(VerifyArithmetic, SmallRangesPass) {
    ArithOptions opt;
    opt.ramanujan_max = 40;
    opt.gauss_qmax = 20;
    opt.kloosterman_qmax = 30;
    opt.kloosterman_mnmax = 6;
    opt.factorization_sweep = false;
    opt.shards = 2;
    const auto rep = verify_arithmetic(opt);
    EXPECT_TRUE(rep.all_pass());
    for (const auto& v : rep.verdicts) {
        EXPECT_GT(v.checked, 0) << v.name;
        if (!v.informational) {
            EXPECT_TRUE(v.pass) << v.name;
        }
    }
}
