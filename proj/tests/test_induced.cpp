#include "apstruct/induced.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace apstruct;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

double max_dev(const AmbientVector& a, const AmbientVector& b) { return (a - b).max_abs(); }

// Independent decomposition: project Ptilde N_a onto a frame assembled from
// the gradients of the defining functions by Gram-Schmidt.
std::vector<AmbientVector> gradient_frame(const SubmanifoldSpec& spec, const AmbientVector& pt) {
    const Shape sh = pt.shape();
    std::vector<AmbientVector> grads;
    grads.push_back(pt);
    if (spec.codimension() >= 2) {
        AmbientVector g(sh);
        g.z() = -pt.z();
        grads.push_back(g);
    }
    if (spec.codimension() >= 3) {
        AmbientVector g(sh);
        g.x() = pt.x();
        grads.push_back(g);
    }
    std::vector<AmbientVector> out;
    for (AmbientVector g : grads) {
        for (const auto& e : out) g -= inner(g, e) * e;
        out.push_back(g / g.norm());
    }
    return out;
}

}  // namespace

TEST(Oracle, HypersphereExample) {
    const auto spec = SubmanifoldSpec::hypersphere(1, 1, 1.0);
    const AmbientVector pt(Shape{1, 1}, {1, 0, 0});
    const auto s = oracle_structure(spec, pt, SignPattern::uniform(1, 1));
    EXPECT_NEAR(s.a(0, 0), 0.0, 1e-15);
    EXPECT_LE(max_dev(s.xi[0], AmbientVector(Shape{1, 1}, {0, 1, 0})), 1e-15);
}

TEST(Oracle, DoubleProductExample) {
    const auto spec = SubmanifoldSpec::double_product(1, 2, 1.0, 1.0);
    const AmbientVector pt(Shape{1, 2}, {1, 0, 1, 0});
    const auto s = oracle_structure(spec, pt, SignPattern::uniform(2, 1));
    Eigen::Matrix2d expected;
    expected << 0.5, -0.5, -0.5, 0.5;
    EXPECT_LE((s.a - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Oracle, TripleProductSigmaZeroAnchors) {
    const auto spec = SubmanifoldSpec::triple_product(2, 2, 1.0, 1.0, 1.0);
    const AmbientVector pt(Shape{2, 2}, {1, 0, 0, 1, 1, 0});
    for (const auto prov : {Provenance::Oracle, Provenance::ClosedForm}) {
        const auto s = make_structure(prov, spec, pt, SignPattern::uniform(2, 1));
        EXPECT_NEAR(s.a(0, 0), 1.0 / 3.0, 1e-15);
        EXPECT_NEAR(s.a(0, 2), 0.0, 1e-15);
        EXPECT_NEAR(s.a(1, 2), 0.0, 1e-15);
        EXPECT_NEAR(s.a(2, 2), 0.0, 1e-15);
        const AmbientVector xi3(Shape{2, 2}, {0, -kInvSqrt2, kInvSqrt2, 0, 0, 0});
        EXPECT_LE(max_dev(s.xi[2], xi3), 1e-15) << to_string(prov);
    }
}

TEST(UForm, DoubleProductExample) {
    const auto spec = SubmanifoldSpec::double_product(1, 2, 1.0, 1.0);
    const AmbientVector pt(Shape{1, 2}, {1, 0, 1, 0});
    const AmbientVector X = AmbientVector(Shape{1, 2}, {0, 1, 0, 1}) * kInvSqrt2;
    for (const auto prov : {Provenance::Oracle, Provenance::ClosedForm}) {
        const auto s = make_structure(prov, spec, pt, SignPattern::uniform(2, 1));
        const Eigen::VectorXd u = u_form(s, X);
        EXPECT_NEAR(u[0], 0.5, 1e-15);
        EXPECT_NEAR(u[1], 0.5, 1e-15);
    }
}

TEST(PApply, HypersphereExample) {
    const auto spec = SubmanifoldSpec::hypersphere(1, 1, 1.0);
    const AmbientVector pt(Shape{1, 1}, {1, 0, 0});
    const AmbientVector X(Shape{1, 1}, {0, 0, 1});
    for (const auto prov : {Provenance::Oracle, Provenance::ClosedForm}) {
        const auto s = make_structure(prov, spec, pt, SignPattern::uniform(1, 1));
        EXPECT_LE(max_dev(p_apply(s, X), X), 1e-15);
    }
}

TEST(ClosedForm, RejectsNonUniformSigns) {
    const auto spec = SubmanifoldSpec::hypersphere(1, 2, 1.0);
    const AmbientVector pt(Shape{1, 2}, {1, 0, 0, 0});
    EXPECT_THROW(closed_form_structure(spec, pt, SignPattern({1, -1})), ConfigError);
    EXPECT_NO_THROW(oracle_structure(spec, pt, SignPattern({1, -1})));
}

TEST(ClosedForm, OffManifoldThrows) {
    const auto spec = SubmanifoldSpec::hypersphere(1, 1, 1.0);
    EXPECT_THROW(closed_form_structure(spec, AmbientVector(Shape{1, 1}, {1, 1, 0}), SignPattern::uniform(1, 1)),
                 DomainError);
}

TEST(Guards, NonTangentVectorThrows) {
    const auto spec = SubmanifoldSpec::hypersphere(1, 1, 1.0);
    const AmbientVector pt(Shape{1, 1}, {1, 0, 0});
    const auto s = oracle_structure(spec, pt, SignPattern::uniform(1, 1));
    const AmbientVector N(Shape{1, 1}, {1, 0, 0});
    EXPECT_THROW(u_form(s, N), DomainError);
    EXPECT_THROW(p_apply(s, N), DomainError);
    EXPECT_THROW(p_apply(s, AmbientVector(Shape{1, 2})), DimensionError);
}

class Agreement : public ::testing::TestWithParam<std::tuple<SubmanifoldSpec, int>> {};

TEST_P(Agreement, ClosedFormMatchesOracle) {
    const auto& [spec, eps] = GetParam();
    const SignPattern signs = SignPattern::uniform(spec.shape().q, eps);
    Rng rng(42);
    for (int i = 0; i < 200; ++i) {
        const AmbientVector pt = sample_point(spec, rng);
        const auto cf = closed_form_structure(spec, pt, signs);
        const auto orc = oracle_structure(spec, pt, signs);
        ASSERT_LE((cf.a - orc.a).cwiseAbs().maxCoeff(), 1e-12);
        for (int al = 0; al < spec.codimension(); ++al) {
            ASSERT_LE(max_dev(cf.xi[al], orc.xi[al]), 1e-12);
        }
        for (int k = 0; k < 5; ++k) {
            const AmbientVector X = sample_tangent(spec, pt, rng);
            ASSERT_LE((u_form(cf, X) - u_form(orc, X)).cwiseAbs().maxCoeff(), 1e-12);
            ASSERT_LE(max_dev(p_apply(cf, X), p_apply(orc, X)), 1e-12);
        }
    }
}

TEST_P(Agreement, OracleMatchesGradientFrameDecomposition) {
    const auto& [spec, eps] = GetParam();
    const SignPattern signs = SignPattern::uniform(spec.shape().q, eps);
    Rng rng(7);
    for (int i = 0; i < 100; ++i) {
        const AmbientVector pt = sample_point(spec, rng);
        const auto s = oracle_structure(spec, pt, signs);
        const auto frame = gradient_frame(spec, pt);
        for (int al = 0; al < spec.codimension(); ++al) {
            ASSERT_LE(max_dev(frame[al], s.frame[al]), 1e-12);
            const AmbientVector img = ptilde(frame[al], signs);
            AmbientVector tangential = img;
            for (int be = 0; be < spec.codimension(); ++be) {
                ASSERT_NEAR(s.a(al, be), inner(img, frame[be]), 1e-12);
                tangential -= inner(img, frame[be]) * frame[be];
            }
            ASSERT_LE(max_dev(tangential, s.xi[al]), 1e-12);
        }
    }
}

INSTANTIATE_TEST_SUITE_P(
    Families, Agreement,
    ::testing::Combine(::testing::Values(SubmanifoldSpec::hypersphere(1, 1, 1.0), SubmanifoldSpec::hypersphere(3, 2, 2.5),
                                         SubmanifoldSpec::double_product(1, 2, 1.0, 2.0),
                                         SubmanifoldSpec::double_product(2, 3, 0.7, 1.9),
                                         SubmanifoldSpec::triple_product(2, 2, 1.0, 2.0, 1.0),
                                         SubmanifoldSpec::triple_product(3, 3, 0.5, 1.5, 0.8)),
                       ::testing::Values(1, -1)),
    [](const ::testing::TestParamInfo<Agreement::ParamType>& info) {
        const auto& spec = std::get<0>(info.param);
        std::string name = std::string(to_string(spec.family())) + "_p" + std::to_string(spec.shape().p) + "_q" +
                           std::to_string(spec.shape().q) + (std::get<1>(info.param) > 0 ? "_plus" : "_minus");
        return name;
    });

TEST(Consistency, DoubleProductFormsAreHypersphereFormOnSubmanifold) {
    // On the double product, u_1 coincides with the hypersphere's u restricted
    // to the smaller tangent space (z.Z = 0 there).
    const auto dbl = SubmanifoldSpec::double_product(2, 2, 1.0, 2.0);
    const auto sphere = SubmanifoldSpec::hypersphere(2, 2, dbl.R());
    const SignPattern signs = SignPattern::uniform(2, 1);
    Rng rng(13);
    for (int i = 0; i < 100; ++i) {
        const AmbientVector pt = sample_point(dbl, rng);
        const auto sd = closed_form_structure(dbl, pt, signs);
        const auto ss = closed_form_structure(sphere, pt, signs);
        const AmbientVector X = sample_tangent(dbl, pt, rng);
        EXPECT_NEAR(u_form(sd, X)[0], u_form(ss, X)[0], 1e-12);
        EXPECT_NEAR(sd.a(0, 0), ss.a(0, 0), 1e-12);
    }
}

TEST(NonUniformSigns, OracleDecompositionReconstructsPtilde) {
    const auto spec = SubmanifoldSpec::double_product(2, 3, 1.0, 1.5);
    const SignPattern signs({1, -1, 1});
    Rng rng(23);
    for (int i = 0; i < 100; ++i) {
        const AmbientVector pt = sample_point(spec, rng);
        const auto s = oracle_structure(spec, pt, signs);
        const AmbientVector X = sample_tangent(spec, pt, rng);
        AmbientVector rebuilt = p_apply(s, X);
        const Eigen::VectorXd u = u_form(s, X);
        for (int al = 0; al < s.codimension(); ++al) rebuilt += u[al] * s.frame[al];
        ASSERT_LE(max_dev(rebuilt, ptilde(X, signs)), 1e-12);
        ASSERT_TRUE(is_tangent(spec, pt, p_apply(s, X), 1e-12));
    }
}
