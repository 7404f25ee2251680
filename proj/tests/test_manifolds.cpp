#include "apstruct/manifolds.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace apstruct;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

std::vector<SubmanifoldSpec> sample_specs() {
    return {
        SubmanifoldSpec::hypersphere(1, 1, 1.0),
        SubmanifoldSpec::hypersphere(2, 3, 1.7),
        SubmanifoldSpec::double_product(1, 2, 1.0, 2.0),
        SubmanifoldSpec::double_product(3, 3, 0.6, 1.3),
        SubmanifoldSpec::triple_product(2, 2, 1.0, 2.0, 1.0),
        SubmanifoldSpec::triple_product(3, 3, 0.4, 1.1, 2.5),
    };
}

double max_dev(const AmbientVector& a, const AmbientVector& b) { return (a - b).max_abs(); }

}  // namespace

TEST(Spec, DerivedRadii) {
    const auto d = SubmanifoldSpec::double_product(1, 2, 3.0, 4.0);
    EXPECT_DOUBLE_EQ(d.R(), 5.0);
    const auto t = SubmanifoldSpec::triple_product(2, 2, 3.0, 4.0, 12.0);
    EXPECT_DOUBLE_EQ(t.r(), 5.0);
    EXPECT_DOUBLE_EQ(t.R(), 13.0);
    EXPECT_EQ(t.codimension(), 3);
}

TEST(Spec, RejectsInvalidDimensionsAndRadii) {
    EXPECT_THROW(SubmanifoldSpec::hypersphere(0, 1, 1.0), ConfigError);
    EXPECT_THROW(SubmanifoldSpec::hypersphere(1, 1, 0.0), ConfigError);
    EXPECT_THROW(SubmanifoldSpec::double_product(1, 1, 1.0, 1.0), ConfigError);
    EXPECT_THROW(SubmanifoldSpec::triple_product(1, 2, 1.0, 1.0, 1.0), ConfigError);
    EXPECT_THROW(SubmanifoldSpec::double_product(1, 2, -1.0, 1.0), ConfigError);
}

TEST(Spec, MakeChecksDeclaredDerivedRadius) {
    RadiiInput ok;
    ok.r = 3.0;
    ok.r3 = 4.0;
    ok.R = 5.0;
    EXPECT_NO_THROW(SubmanifoldSpec::make(Family::DoubleProduct, Shape{1, 2}, ok));
    RadiiInput bad = ok;
    bad.R = 5.1;
    EXPECT_THROW(SubmanifoldSpec::make(Family::DoubleProduct, Shape{1, 2}, bad), ConfigError);
}

TEST(Spec, FamilyNamesRoundTrip) {
    for (auto f : {Family::Hypersphere, Family::DoubleProduct, Family::TripleProduct}) {
        EXPECT_EQ(family_from_string(to_string(f)), f);
    }
    EXPECT_THROW(family_from_string("torus"), ConfigError);
}

TEST(Contains, DoubleProductExamples) {
    const auto spec = SubmanifoldSpec::double_product(1, 2, 1.0, 1.0);
    EXPECT_TRUE(contains(spec, AmbientVector(Shape{1, 2}, {1, 0, 1, 0}), 1e-12));
    EXPECT_FALSE(contains(spec, AmbientVector(Shape{1, 2}, {1, 0, 1, 1}), 1e-12));
}

TEST(Contains, TripleProductExample) {
    const auto spec = SubmanifoldSpec::triple_product(2, 2, 1.0, 1.0, 1.0);
    EXPECT_TRUE(contains(spec, AmbientVector(Shape{2, 2}, {1, 0, 0, 1, 1, 0}), 1e-12));
    EXPECT_FALSE(contains(spec, AmbientVector(Shape{2, 2}, {1, 0, 0, 2, 1, 0}), 1e-12));
}

TEST(Sample, PointsLieOnManifold) {
    for (const auto& spec : sample_specs()) {
        Rng rng(5);
        for (int i = 0; i < 200; ++i) {
            const AmbientVector pt = sample_point(spec, rng);
            ASSERT_TRUE(contains(spec, pt, 1e-12)) << spec.describe();
            ASSERT_EQ(pt.shape(), spec.shape());
        }
    }
}

TEST(Sample, FixedSeedIsReproducible) {
    const auto spec = SubmanifoldSpec::triple_product(2, 3, 1.0, 2.0, 1.0);
    Rng a(99), b(99);
    for (int i = 0; i < 10; ++i) {
        EXPECT_EQ(sample_point(spec, a), sample_point(spec, b));
    }
}

TEST(Frame, DoubleProductExample) {
    const auto spec = SubmanifoldSpec::double_product(1, 2, 1.0, 1.0);
    const AmbientVector pt(Shape{1, 2}, {1, 0, 1, 0});
    const auto frame = normal_frame(spec, pt);
    ASSERT_EQ(frame.size(), 2u);
    EXPECT_LE(max_dev(frame[0], AmbientVector(Shape{1, 2}, {kInvSqrt2, 0, kInvSqrt2, 0})), 1e-15);
    EXPECT_LE(max_dev(frame[1], AmbientVector(Shape{1, 2}, {kInvSqrt2, 0, -kInvSqrt2, 0})), 1e-15);
}

TEST(Frame, TripleProductExample) {
    const auto spec = SubmanifoldSpec::triple_product(2, 2, 1.0, 1.0, 1.0);
    const AmbientVector pt(Shape{2, 2}, {1, 0, 0, 1, 1, 0});
    const auto frame = normal_frame(spec, pt);
    ASSERT_EQ(frame.size(), 3u);
    EXPECT_LE(max_dev(frame[2], AmbientVector(Shape{2, 2}, {kInvSqrt2, 0, 0, -kInvSqrt2, 0, 0})), 1e-15);
}

TEST(Frame, OffManifoldThrows) {
    const auto spec = SubmanifoldSpec::hypersphere(1, 1, 1.0);
    EXPECT_THROW(normal_frame(spec, AmbientVector(Shape{1, 1}, {2, 0, 0})), DomainError);
}

TEST(Frame, OrthonormalAndNormal) {
    for (const auto& spec : sample_specs()) {
        Rng rng(11);
        for (int i = 0; i < 100; ++i) {
            const AmbientVector pt = sample_point(spec, rng);
            const auto frame = normal_frame(spec, pt);
            ASSERT_EQ(static_cast<int>(frame.size()), spec.codimension());
            for (std::size_t a = 0; a < frame.size(); ++a) {
                for (std::size_t b = 0; b < frame.size(); ++b) {
                    ASSERT_NEAR(inner(frame[a], frame[b]), a == b ? 1.0 : 0.0, 1e-12);
                }
                const AmbientVector X = sample_tangent(spec, pt, rng);
                ASSERT_NEAR(inner(frame[a], X), 0.0, 1e-12);
            }
        }
    }
}

TEST(Frame, NestedFamiliesExtendEachOther) {
    // A triple-product point lies on the matching double product and
    // hypersphere, and the smaller frames are prefixes of the larger one.
    const auto triple = SubmanifoldSpec::triple_product(2, 2, 0.8, 1.5, 1.2);
    const auto dbl = SubmanifoldSpec::double_product(2, 2, triple.r(), triple.r3());
    const auto sphere = SubmanifoldSpec::hypersphere(2, 2, triple.R());
    Rng rng(3);
    for (int i = 0; i < 50; ++i) {
        const AmbientVector pt = sample_point(triple, rng);
        ASSERT_TRUE(contains(dbl, pt, 1e-12));
        ASSERT_TRUE(contains(sphere, pt, 1e-12));
        const auto f3 = normal_frame(triple, pt);
        const auto f2 = normal_frame(dbl, pt);
        const auto f1 = normal_frame(sphere, pt);
        EXPECT_LE(max_dev(f1[0], f3[0]), 1e-14);
        EXPECT_LE(max_dev(f2[1], f3[1]), 1e-14);
        // Tangent to the triple product implies tangent to the larger manifolds.
        const AmbientVector X = sample_tangent(triple, pt, rng);
        EXPECT_TRUE(is_tangent(dbl, pt, X, 1e-12));
        EXPECT_TRUE(is_tangent(sphere, pt, X, 1e-12));
    }
}

TEST(Projection, IdempotentAndReconstructs) {
    std::normal_distribution<double> n;
    for (const auto& spec : sample_specs()) {
        Rng rng(21);
        for (int i = 0; i < 100; ++i) {
            const AmbientVector pt = sample_point(spec, rng);
            AmbientVector v(spec.shape());
            for (int k = 0; k < v.dim(); ++k) v[k] = n(rng);
            const AmbientVector t = tangent_project(spec, pt, v);
            ASSERT_LE(max_dev(tangent_project(spec, pt, t), t), 1e-12);
            ASSERT_TRUE(is_tangent(spec, pt, t, 1e-12));
            AmbientVector rebuilt = t;
            for (const auto& N : normal_frame(spec, pt)) rebuilt += inner(v, N) * N;
            ASSERT_LE(max_dev(rebuilt, v), 1e-12);
        }
    }
}

TEST(Tangent, Examples) {
    const auto spec = SubmanifoldSpec::double_product(1, 2, 1.0, 1.0);
    const AmbientVector pt(Shape{1, 2}, {1, 0, 1, 0});
    EXPECT_TRUE(is_tangent(spec, pt, AmbientVector(Shape{1, 2}, {0, 1, 0, 1}), 1e-12));
    EXPECT_FALSE(is_tangent(spec, pt, AmbientVector(Shape{1, 2}, {1, 0, 0, 0}), 1e-12));
    EXPECT_FALSE(is_tangent(spec, pt, AmbientVector(Shape{1, 2}, {0, 0, 1, 0}), 1e-12));
    // Tangent to the hypersphere through pt but not to the product.
    EXPECT_FALSE(is_tangent(spec, pt, AmbientVector(Shape{1, 2}, {1, 0, -1, 0}), 1e-12));
}

TEST(Tangent, SamplesAreUnitTangentAndSeedDependent) {
    for (const auto& spec : sample_specs()) {
        Rng prng(8);
        const AmbientVector pt = sample_point(spec, prng);
        Rng a(1), b(2);
        const AmbientVector X = sample_tangent(spec, pt, a);
        const AmbientVector Y = sample_tangent(spec, pt, b);
        EXPECT_NEAR(X.norm(), 1.0, 1e-14);
        EXPECT_TRUE(is_tangent(spec, pt, X, 1e-12));
        EXPECT_GT(max_dev(X, Y), 1e-3);
    }
}

TEST(Through, ReadsRadiiFromPoint) {
    const AmbientVector pt(Shape{2, 2}, {3, 0, 0, 4, 0, 12});
    const auto t = SubmanifoldSpec::through(Family::TripleProduct, pt);
    EXPECT_DOUBLE_EQ(t.r1(), 3.0);
    EXPECT_DOUBLE_EQ(t.r2(), 4.0);
    EXPECT_DOUBLE_EQ(t.R(), 13.0);
    EXPECT_THROW(SubmanifoldSpec::through(Family::TripleProduct, AmbientVector(Shape{2, 2}, {0, 0, 0, 4, 0, 1})),
                 DomainError);
}

TEST(Shape, MismatchedVectorThrows) {
    const auto spec = SubmanifoldSpec::hypersphere(1, 1, 1.0);
    EXPECT_THROW(require_shape(spec, AmbientVector(Shape{1, 2}), "test"), DimensionError);
}
