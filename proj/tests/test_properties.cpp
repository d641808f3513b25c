#include <gtest/gtest.h>

#include "properties.hpp"

namespace {

void expect_suite(const props::SuiteResult& r) {
    EXPECT_GE(r.cases, props::default_cases) << r.name;
    EXPECT_EQ(r.failures, 0) << r.name << ": " << r.first_failure;
}

}  // namespace

TEST(Properties, ConvolveCommutative) { expect_suite(props::convolve_commutative()); }
TEST(Properties, ConvolveAssociative) { expect_suite(props::convolve_associative()); }
TEST(Properties, ConvolveMass) { expect_suite(props::convolve_mass()); }
TEST(Properties, ConvolveNumeric) { expect_suite(props::convolve_numeric()); }
TEST(Properties, MultiplyPointwise) { expect_suite(props::multiply_pointwise()); }
TEST(Properties, CanonicalSplit) { expect_suite(props::canonical_split()); }
TEST(Properties, DoubleEvaluation) { expect_suite(props::horner_agreement()); }
TEST(Properties, Antiderivative) { expect_suite(props::antiderivative_consistency()); }
TEST(Properties, FejerStructure) { expect_suite(props::fejer_structure()); }
TEST(Properties, VarianceQuadrature) { expect_suite(props::parseval()); }
TEST(Properties, PowerAdditivity) { expect_suite(props::power_additivity()); }
TEST(Properties, AIndependence) { expect_suite(props::a_independence()); }
TEST(Properties, ClassesEqualR) { expect_suite(props::cross_path()); }
TEST(Properties, IRecursion) { expect_suite(props::i_recursion()); }
TEST(Properties, SignSymmetry) { expect_suite(props::sign_symmetry()); }
TEST(Properties, ExactVsQuadrature) { expect_suite(props::oracle_agreement()); }
TEST(Properties, SignCondition) { expect_suite(props::sign_condition()); }
TEST(Properties, BlockCriterion) { expect_suite(props::block_minimality()); }
TEST(Properties, ClassCanonical) { expect_suite(props::canonical_orbits()); }
TEST(Properties, FeasibilityWitness) { expect_suite(props::feasibility_witness()); }
TEST(Properties, HaarStructure) { expect_suite(props::haar_structure()); }
TEST(Properties, ZRoutes) { expect_suite(props::z_routes()); }
TEST(Properties, RmtReproducible) { expect_suite(props::rmt_reproducible()); }
TEST(Properties, RmtMockGaussian) { expect_suite(props::rmt_mock_gaussian()); }
TEST(Properties, RamanujanMethods) { expect_suite(props::ramanujan_methods()); }
TEST(Properties, CharacterLaws) { expect_suite(props::character_laws()); }
TEST(Properties, GaussBound) { expect_suite(props::gauss_bound()); }
TEST(Properties, KloostermanLaws) { expect_suite(props::kloosterman_laws()); }
TEST(Properties, Factorization) { expect_suite(props::factorization()); }
TEST(Properties, Saturation) { expect_suite(props::saturation()); }
TEST(Properties, VanishingMonotone) { expect_suite(props::vanishing_monotone()); }
TEST(Properties, ConfigRoundTrip) { expect_suite(props::config_round_trip()); }
TEST(Properties, ExactSerialization) { expect_suite(props::exact_serialization()); }
