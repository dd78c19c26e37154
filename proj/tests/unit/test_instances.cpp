#include <gtest/gtest.h>

#include <cmath>

#include "oracle/oracle.hpp"
#include "rqbm/axioms.hpp"
#include "rqbm/instances.hpp"
#include "rqbm/io.hpp"

using namespace rqbm;

namespace {

ScanOptions exhaustive() {
    ScanOptions o;
    o.random = 0;
    return o;
}

void expect_same_distances(const Space& a, const Space& b) {
    const auto ca = a.carrier(11), cb = b.carrier(11);
    ASSERT_EQ(ca.size(), cb.size());
    for (std::size_t i = 0; i < ca.size(); ++i) {
        EXPECT_EQ(a.label(ca[i]), b.label(cb[i]));
        for (std::size_t j = 0; j < ca.size(); ++j) EXPECT_EQ(a.distance(ca[i], ca[j]), b.distance(cb[i], cb[j]));
    }
    EXPECT_EQ(a.claimed_s(), b.claimed_s());
}

} // namespace

TEST(Builders, Example23) {
    const auto b = build_example_2_3();
    const auto& f = *b.space.finite();
    EXPECT_EQ(f.size(), 17u);
    EXPECT_EQ(f.resolve("1/2", "1/3"), 0.05);
    EXPECT_EQ(f.resolve("1/3", "1/2"), 0.04);
    EXPECT_EQ(b.s, 3.0);
    for (const auto& [k, v] : oracle::table_2_3())
        EXPECT_EQ(f.resolve(f.index_of("1/" + std::to_string(k.first)), f.index_of("1/" + std::to_string(k.second))), v)
            << k.first << "," << k.second;
    EXPECT_THROW(build_example_2_3(1), PreconditionError);
}

TEST(Builders, Example23PassesAtThree) {
    const auto b = build_example_2_3();
    EXPECT_TRUE(check_b_rectangular(b.space, 3.0, exhaustive()).passed);
    EXPECT_TRUE(check_identity_axiom(b.space, exhaustive()).passed);
}

TEST(Builders, FinalExample) {
    const auto b = build_example_final();
    const auto& f = *b.space.finite();
    EXPECT_EQ(f.resolve("1/5", "1/6"), 0.5);
    EXPECT_EQ(f.resolve("1/3", "1/6"), 0.5);
    EXPECT_EQ(f.resolve("1/3", "1/4"), 0.1);
    EXPECT_EQ(f.resolve("1/4", "1/3"), 0.05);
    const auto map = SelfMap::parse(b.space, *b.map);
    EXPECT_EQ(map.apply(b.space, b.space.parse_element("1/4")).value, 1.0);
    EXPECT_EQ(map.apply(b.space, b.space.element_at(1.0)).value, 1.0);
    EXPECT_EQ(b.expected_fixed_point, 1.0);
    for (const auto& [k, v] : oracle::table_final())
        EXPECT_EQ(f.resolve(f.index_of("1/" + std::to_string(k.first)), f.index_of("1/" + std::to_string(k.second))), v);
}

TEST(Builders, SqrtVariants) {
    const auto a = build_example_sqrt(SqrtVariant::sqrt);
    const auto c = build_example_sqrt(SqrtVariant::fourth_root);
    EXPECT_FALSE(a.space.is_finite());
    EXPECT_EQ(*a.map, "sqrt(x)");
    EXPECT_EQ(a.s, 2.0);
    EXPECT_EQ(a.r, 0.5);
    EXPECT_NE(*a.map, *c.map);
    EXPECT_EQ(a.space.distance(a.space.element_at(2.0), a.space.element_at(1.0)), 1.0);
    EXPECT_EQ(a.space.distance(a.space.element_at(1.0), a.space.element_at(2.0)), 0.5);
}

TEST(Builders, LookupByName) {
    for (const auto& n : instance_names()) EXPECT_EQ(build_instance(n).name, n);
    EXPECT_EQ(build_instance("example-2-3", 5).space.finite()->size(), 11u);
    EXPECT_THROW(build_instance("nope"), PreconditionError);
}

TEST(Builders, BundlesRoundTripThroughJson) {
    for (const auto& n : instance_names()) {
        const auto b = build_instance(n);
        const Space again = parse_space(space_to_json(b.space).dump());
        expect_same_distances(b.space, again);
        EXPECT_EQ(space_to_json(again).dump(), space_to_json(b.space).dump()) << n;
    }
}

TEST(Generators, MetricSeedOne) {
    const Space sp = random_space(4, 1, RandomProfile::metric);
    const auto c = classify(sp, exhaustive());
    EXPECT_TRUE(c.is_metric);
    EXPECT_TRUE(c.is_symmetric);
}

TEST(Generators, QuasiSeedOnePinned) {
    const Space sp = random_space(4, 1, RandomProfile::quasi);
    const auto c = classify(sp, exhaustive());
    EXPECT_FALSE(c.is_symmetric);
    EXPECT_EQ(c.asymmetric_pairs, 6u);
    EXPECT_TRUE(c.is_quasi_identity);
    EXPECT_TRUE(c.is_rqb);
}

TEST(Generators, TwoPointsAreVacuous) {
    for (auto p : {RandomProfile::metric, RandomProfile::quasi, RandomProfile::adversarial}) {
        const Space sp = random_space(2, 4, p);
        const auto r = check_b_rectangular(sp, 1.0, exhaustive());
        EXPECT_TRUE(r.vacuous);
        EXPECT_TRUE(r.passed);
        EXPECT_THROW(perturb(*sp.finite(), Perturbation::break_quadrilateral, 0), PreconditionError);
    }
    EXPECT_THROW(random_space(1, 0, RandomProfile::metric), PreconditionError);
}

TEST(Generators, SeededAndReproducible) {
    const auto a = random_space(6, 42, RandomProfile::adversarial);
    const auto b = random_space(6, 42, RandomProfile::adversarial);
    EXPECT_EQ(space_to_json(a).dump(), space_to_json(b).dump());
    EXPECT_NE(space_to_json(a).dump(), space_to_json(random_space(6, 43, RandomProfile::adversarial)).dump());
}

TEST(Perturb, Example23BreakIdentitySeedThree) {
    const auto b = build_example_2_3();
    const Space sp = perturb(*b.space.finite(), Perturbation::break_identity, 3);
    const auto r = check_identity_axiom(sp, exhaustive());
    EXPECT_FALSE(r.passed);
    EXPECT_EQ(r.violation_count, 1u);
    EXPECT_EQ(r.violations.size(), 1u);
}

TEST(Perturb, MetricFiveBreakQuadrilateralSeedNine) {
    const Space sp = perturb(random_space(5, 0, RandomProfile::metric), Perturbation::break_quadrilateral, 9);
    EXPECT_FALSE(check_b_rectangular(sp, 1.0, exhaustive()).passed);
}

TEST(Perturb, AllZeroSpaceCannotBreakIdentity) {
    const FiniteSpace f({{"a", 0.0}, {"b", 1.0}}, std::nullopt, {{"a", "b", 0.0}, {"b", "a", 0.0}});
    EXPECT_THROW(perturb(f, Perturbation::break_identity, 0), PreconditionError);
}

TEST(InstancesProperty, MetricProfileIsMetric) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const Space sp = random_space(5, seed, RandomProfile::metric);
        EXPECT_TRUE(classify(sp, exhaustive()).is_metric) << seed;
    }
}

TEST(InstancesProperty, PerturbationsAreDetected) {
    for (auto profile : {RandomProfile::metric, RandomProfile::quasi, RandomProfile::adversarial}) {
        for (std::uint64_t seed = 0; seed < 40; ++seed) {
            const auto base = random_space(5, seed, profile);
            const Space bi = perturb(base, Perturbation::break_identity, seed);
            EXPECT_FALSE(check_identity_axiom(bi, exhaustive()).passed) << seed;
            const Space bq = perturb(base, Perturbation::break_quadrilateral, seed);
            EXPECT_FALSE(check_b_rectangular(bq, profile_s(profile), exhaustive()).passed) << seed;
        }
    }
}

TEST(InstancesProperty, ProfileCoefficientHolds) {
    for (auto profile : {RandomProfile::metric, RandomProfile::quasi}) {
        for (std::uint64_t seed = 0; seed < 40; ++seed) {
            const Space sp = random_space(6, seed, profile);
            EXPECT_TRUE(check_b_rectangular(sp, profile_s(profile), exhaustive()).passed) << seed;
        }
    }
}

TEST(InstancesProperty, AffineMapStaysInside) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto f = random_space(7, seed, RandomProfile::quasi);
        const Space sp = f;
        const auto m = affine_toward_map(f, 7, seed);
        EXPECT_TRUE(m.is_table());
        for (const auto& e : sp.carrier(0)) EXPECT_TRUE(m.apply(sp, e).index.has_value());
    }
    EXPECT_THROW(affine_toward_map(random_space(3, 0, RandomProfile::metric), 4, 0), PreconditionError);
}
