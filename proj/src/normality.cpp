#include "apstruct/normality.hpp"

#include <Eigen/LU>

#include <cmath>
#include <utility>

namespace apstruct {

namespace {

constexpr std::uint64_t kNormalityStreamSalt = 0x6e6f726d616c6974ULL;

void require_on_manifold(const SubmanifoldSpec& spec, const AmbientVector& pt) {
    require_shape(spec, pt, "finite differences");
    if (!contains(spec, pt, kOnManifoldTol)) {
        throw DomainError("finite-difference evaluation point is not on " + spec.describe());
    }
}

template <class Value, class Fn>
Value central_difference(const Fn& f, const AmbientVector& pt, const AmbientVector& dir, double h) {
    const AmbientVector step = h * dir;
    return (f(pt + step) - f(pt - step)) * (0.5 / h);
}

template <class Value, class Fn>
Value derivative(const Fn& f, const AmbientVector& pt, const AmbientVector& dir, const FDConfig& cfg) {
    cfg.validate();
    Value d = central_difference<Value>(f, pt, dir, cfg.h);
    if (cfg.richardson) {
        const Value half = central_difference<Value>(f, pt, dir, 0.5 * cfg.h);
        d = (4.0 * half - d) * (1.0 / 3.0);
    }
    return d;
}

VectorField normal_field(Family family, int alpha) {
    return [family, alpha](const AmbientVector& y) {
        return normal_frame(SubmanifoldSpec::through(family, y), y)[static_cast<std::size_t>(alpha)];
    };
}

// Uniformly distributed unit generator. Unit length keeps the truncation error,
// which grows with |c|^3, from being dominated by the tail of |c|.
AmbientVector generator_sample(Shape shape, Rng& rng) {
    std::normal_distribution<double> normal;
    AmbientVector c(shape);
    do {
        for (int i = 0; i < c.dim(); ++i) {
            c[i] = normal(rng);
        }
    } while (c.norm() < 1e-8);
    return c / c.norm();
}

struct NormalityTerms {
    AmbientVector torsion;
    Eigen::VectorXd du;  // unhalved convention
};

NormalityTerms normality_terms(const SubmanifoldSpec& spec, const SignPattern& signs, const VectorField& F,
                               const VectorField& G, const AmbientVector& pt, const FDConfig& cfg) {
    FDConfig unhalved = cfg;
    unhalved.du_half = false;
    NormalityTerms t{nijenhuis(spec, signs, F, G, pt, cfg), Eigen::VectorXd(spec.codimension())};
    for (int al = 0; al < spec.codimension(); ++al) {
        t.du[al] = du(spec, signs, al, F, G, pt, unhalved);
    }
    return t;
}

double normality_residual(const NormalityTerms& t, const InducedStructure& s, double du_scale) {
    AmbientVector r = t.torsion;
    for (int al = 0; al < s.codimension(); ++al) {
        r -= (2.0 * du_scale * t.du[al]) * s.xi[static_cast<std::size_t>(al)];
    }
    return r.max_abs();
}

}  // namespace

void FDConfig::validate() const {
    if (!(h >= 1e-8 && h <= 1e-2)) {
        throw ConfigError("finite-difference step h must lie in [1e-8, 1e-2]");
    }
}

VectorField tangent_field(Family family, const TangentFieldSpec& f) {
    return [family, c = f.generator](const AmbientVector& y) {
        return tangent_project(SubmanifoldSpec::through(family, y), y, c);
    };
}

InducedStructure structure_through(Family family, const AmbientVector& y, const SignPattern& signs) {
    const auto spec = SubmanifoldSpec::through(family, y);
    return signs.is_uniform() ? closed_form_structure(spec, y, signs) : oracle_structure(spec, y, signs);
}

VectorField p_field(Family family, const SignPattern& signs, VectorField F) {
    return [family, signs, F = std::move(F)](const AmbientVector& y) {
        return p_apply(structure_through(family, y, signs), F(y));
    };
}

AmbientVector directional_derivative(const VectorField& F, const AmbientVector& pt, const AmbientVector& dir,
                                     const FDConfig& cfg) {
    return derivative<AmbientVector>(F, pt, dir, cfg);
}

double directional_derivative(const ScalarField& f, const AmbientVector& pt, const AmbientVector& dir,
                              const FDConfig& cfg) {
    return derivative<double>(f, pt, dir, cfg);
}

AmbientVector lie_bracket(const SubmanifoldSpec& spec, const VectorField& F, const VectorField& G,
                          const AmbientVector& pt, const FDConfig& cfg) {
    cfg.validate();
    require_on_manifold(spec, pt);
    return directional_derivative(G, pt, F(pt), cfg) - directional_derivative(F, pt, G(pt), cfg);
}

AmbientVector nijenhuis(const SubmanifoldSpec& spec, const SignPattern& signs, const VectorField& F,
                        const VectorField& G, const AmbientVector& pt, const FDConfig& cfg) {
    cfg.validate();
    require_on_manifold(spec, pt);
    const InducedStructure s = structure_through(spec.family(), pt, signs);
    const VectorField PF = p_field(spec.family(), signs, F);
    const VectorField PG = p_field(spec.family(), signs, G);

    auto bracket = [&](const VectorField& A, const VectorField& B) {
        return tangent_project(spec, pt, lie_bracket(spec, A, B, pt, cfg));
    };
    const AmbientVector PF_PG = bracket(PF, PG);
    const AmbientVector F_G = bracket(F, G);
    const AmbientVector PF_G = bracket(PF, G);
    const AmbientVector F_PG = bracket(F, PG);

    return PF_PG + p_apply(s, p_apply(s, F_G)) - p_apply(s, PF_G) - p_apply(s, F_PG);
}

double du(const SubmanifoldSpec& spec, const SignPattern& signs, int alpha, const VectorField& F,
          const VectorField& G, const AmbientVector& pt, const FDConfig& cfg) {
    cfg.validate();
    require_on_manifold(spec, pt);
    if (alpha < 0 || alpha >= spec.codimension()) {
        throw ConfigError("form index out of range");
    }
    const Family family = spec.family();
    auto u_of = [&](const VectorField& V) -> ScalarField {
        return [&, family, alpha](const AmbientVector& y) {
            return u_form(structure_through(family, y, signs), V(y))[alpha];
        };
    };
    const InducedStructure s = structure_through(family, pt, signs);
    const AmbientVector bracket = tangent_project(spec, pt, lie_bracket(spec, F, G, pt, cfg));
    const double value = directional_derivative(u_of(G), pt, F(pt), cfg) -
                         directional_derivative(u_of(F), pt, G(pt), cfg) - u_form(s, bracket)[alpha];
    return cfg.du_half ? 0.5 * value : value;
}

double det_i_minus_a2(const InducedStructure& s) {
    const int c = s.codimension();
    return (Eigen::MatrixXd::Identity(c, c) - s.a * s.a).determinant();
}

NormalityResult check_normality(const SubmanifoldSpec& spec, const SignPattern& signs, const AmbientVector& pt,
                                const FDConfig& cfg, int n_fields, std::uint64_t seed) {
    cfg.validate();
    require_on_manifold(spec, pt);
    const InducedStructure s = structure_through(spec.family(), pt, signs);
    NormalityResult out;
    out.det_i_minus_a2 = det_i_minus_a2(s);

    Rng rng = point_stream(seed, 0);
    for (int k = 0; k < n_fields; ++k) {
        const VectorField F = tangent_field(spec.family(), {generator_sample(spec.shape(), rng)});
        const VectorField G = tangent_field(spec.family(), {generator_sample(spec.shape(), rng)});
        const NormalityTerms t = normality_terms(spec, signs, F, G, pt, cfg);
        out.residual = std::max(out.residual, normality_residual(t, s, cfg.du_half ? 0.5 : 1.0));
        out.max_torsion = std::max(out.max_torsion, t.torsion.max_abs());
    }
    return out;
}

AmbientVector weingarten(const SubmanifoldSpec& spec, int alpha, const AmbientVector& pt, const AmbientVector& X,
                         const FDConfig& cfg) {
    cfg.validate();
    require_on_manifold(spec, pt);
    if (alpha < 0 || alpha >= spec.codimension()) {
        throw ConfigError("normal index out of range");
    }
    require_shape(spec, X, "weingarten");
    if (!is_tangent(spec, pt, X, 1e-9 * std::max(1.0, pt.norm() * X.norm()))) {
        throw DomainError("weingarten: vector is not tangent");
    }
    const AmbientVector dN = directional_derivative(normal_field(spec.family(), alpha), pt, X, cfg);
    return -tangent_project(spec, pt, dN);
}

Eigen::MatrixXd normal_connection_residual(const SubmanifoldSpec& spec, const AmbientVector& pt,
                                           const AmbientVector& X, const FDConfig& cfg) {
    cfg.validate();
    require_on_manifold(spec, pt);
    const int c = spec.codimension();
    const auto frame = normal_frame(spec, pt);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(c, c);
    for (int al = 0; al < c; ++al) {
        if (c == 1) break;
        const AmbientVector dN = directional_derivative(normal_field(spec.family(), al), pt, X, cfg);
        for (int be = 0; be < c; ++be) {
            if (be != al) m(al, be) = inner(dN, frame[static_cast<std::size_t>(be)]);
        }
    }
    return m;
}

void run_normality_suite(const SubmanifoldSpec& spec, const SignPattern& signs, const NormalitySuiteOptions& opts,
                         ResidualReport& report) {
    opts.fd.validate();
    if (opts.n_points < 1 || opts.n_fields < 1 || opts.n_probes < 1) {
        throw ConfigError("normality sweep sizes must be at least 1");
    }
    const bool sphere = spec.family() == Family::Hypersphere;
    const double du_scale = opts.fd.du_half ? 0.5 : 1.0;
    const double alt_du_scale = opts.fd.du_half ? 1.0 : 0.5;

    struct Tallies {
        ResidualTally normality, normality_alt, det, scalar, commute, self_adjoint, connection;
    };
    std::vector<Tallies> per_point(static_cast<std::size_t>(opts.n_points));

    parallel_for(per_point.size(), opts.threads, [&](std::size_t i) {
        Rng rng = point_stream(opts.seed ^ kNormalityStreamSalt, i);
        const AmbientVector pt = sample_point(spec, rng);
        const InducedStructure s = structure_through(spec.family(), pt, signs);
        Tallies& t = per_point[i];

        const double det = det_i_minus_a2(s);
        t.det.add(det);
        // The threshold guards the asserted statistic only; the products have
        // det(I - a^2) = 0 identically and are measured everywhere.
        if (!sphere || std::abs(det) > opts.det_threshold) {
            for (int k = 0; k < opts.n_fields; ++k) {
                const VectorField F = tangent_field(spec.family(), {generator_sample(spec.shape(), rng)});
                const VectorField G = tangent_field(spec.family(), {generator_sample(spec.shape(), rng)});
                const NormalityTerms terms = normality_terms(spec, signs, F, G, pt, opts.fd);
                t.normality.add(normality_residual(terms, s, du_scale));
                t.normality_alt.add(normality_residual(terms, s, alt_du_scale));
            }
        }

        for (int k = 0; k < opts.n_probes; ++k) {
            const AmbientVector X = sample_tangent(spec, pt, rng);
            const AmbientVector Y = sample_tangent(spec, pt, rng);
            const AmbientVector PX = p_apply(s, X);
            double commute = 0;
            double self_adjoint = 0;
            for (int al = 0; al < spec.codimension(); ++al) {
                const AmbientVector AX = weingarten(spec, al, pt, X, opts.fd);
                const AmbientVector AY = weingarten(spec, al, pt, Y, opts.fd);
                const AmbientVector APX = weingarten(spec, al, pt, PX, opts.fd);
                commute = std::max(commute, (p_apply(s, AX) - APX).max_abs());
                self_adjoint = std::max(self_adjoint, std::abs(inner(AX, Y) - inner(X, AY)));
                if (sphere) {
                    t.scalar.add((AX + X / spec.R()).max_abs());
                }
            }
            t.commute.add(commute);
            t.self_adjoint.add(self_adjoint);
            const Eigen::MatrixXd conn = normal_connection_residual(spec, pt, X, opts.fd);
            t.connection.add(conn.size() == 0 ? 0.0 : conn.cwiseAbs().maxCoeff());
        }
    });

    Tallies total;
    for (const auto& t : per_point) {
        total.normality.merge(t.normality);
        total.normality_alt.merge(t.normality_alt);
        total.det.merge(t.det);
        total.scalar.merge(t.scalar);
        total.commute.merge(t.commute);
        total.self_adjoint.merge(t.self_adjoint);
        total.connection.merge(t.connection);
    }

    const ToleranceMap& tols = opts.tols;
    report.append("normality.residual", total.normality, tols, sphere ? tols.normality : kInfTol, sphere);
    report.append("normality.residual_alt_du", total.normality_alt, tols, kInfTol, false);
    report.append("normality.det_i_minus_a2", total.det, tols, kInfTol, false);
    if (sphere) {
        report.append("weingarten.scalar", total.scalar, tols, tols.weingarten_scalar, true);
    }
    report.append("weingarten.commute", total.commute, tols, sphere ? tols.weingarten_commute : kInfTol, sphere);
    report.append("weingarten.self_adjoint", total.self_adjoint, tols, tols.weingarten_self_adjoint, true);
    report.append("normal_connection", total.connection, tols, tols.normal_connection, true);
}

}  // namespace apstruct
