#pragma once

// Finite-difference differential checks on the induced structure: Lie brackets,
// the Nijenhuis torsion of P, exterior derivatives of the u_a, the normality
// residual N_P(X,Y) - 2 sum du_a(X,Y) xi_a, Weingarten operators and the normal
// connection.
//
// Fields are extended off the manifold by evaluating every formula on the level
// set through the evaluation point (SubmanifoldSpec::through). Differences are
// taken along straight ambient lines; for tangent fields the bracket and the
// torsion at on-manifold points do not depend on the extension.

#include "apstruct/induced.hpp"
#include "apstruct/verify.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <functional>

namespace apstruct {

using VectorField = std::function<AmbientVector(const AmbientVector&)>;
using ScalarField = std::function<double(const AmbientVector&)>;

struct FDConfig {
    double h = 1e-5;
    /// Combine steps h and h/2 as (4 D(h/2) - D(h)) / 3.
    bool richardson = false;
    /// Use du(X,Y) = (X u(Y) - Y u(X) - u([X,Y])) / 2 instead of the unhalved form.
    bool du_half = false;

    /// Throws ConfigError unless h lies in [1e-8, 1e-2].
    void validate() const;
};

/// X_c(y) = tangent projection of the constant vector c onto the level set through y.
struct TangentFieldSpec {
    AmbientVector generator;
};

VectorField tangent_field(Family family, const TangentFieldSpec& f);

/// Induced structure on the level set through y, closed form for uniform signs
/// and oracle otherwise.
InducedStructure structure_through(Family family, const AmbientVector& y, const SignPattern& signs);

/// y -> P_y F(y).
VectorField p_field(Family family, const SignPattern& signs, VectorField F);

/// Central difference of F at pt along dir.
AmbientVector directional_derivative(const VectorField& F, const AmbientVector& pt, const AmbientVector& dir,
                                     const FDConfig& cfg);
double directional_derivative(const ScalarField& f, const AmbientVector& pt, const AmbientVector& dir,
                              const FDConfig& cfg);

/// [F,G](pt) = D_{F(pt)} G - D_{G(pt)} F.
AmbientVector lie_bracket(const SubmanifoldSpec& spec, const VectorField& F, const VectorField& G,
                          const AmbientVector& pt, const FDConfig& cfg);

/// N_P(F,G) = [PF,PG] + P^2[F,G] - P[PF,G] - P[F,PG] at pt. Brackets are
/// projected onto the tangent space before P is applied.
AmbientVector nijenhuis(const SubmanifoldSpec& spec, const SignPattern& signs, const VectorField& F,
                        const VectorField& G, const AmbientVector& pt, const FDConfig& cfg);

/// du_alpha(F,G) = F(u_alpha(G)) - G(u_alpha(F)) - u_alpha([F,G]), halved when cfg.du_half.
double du(const SubmanifoldSpec& spec, const SignPattern& signs, int alpha, const VectorField& F,
          const VectorField& G, const AmbientVector& pt, const FDConfig& cfg);

struct NormalityResult {
    /// max over field pairs of |N_P(F,G) - 2 sum du_a(F,G) xi_a|_inf
    double residual = 0;
    /// largest |N_P(F,G)|_inf seen, for scale
    double max_torsion = 0;
    double det_i_minus_a2 = 0;
};

/// Draws n_fields pairs of uniformly distributed unit generators from `seed`
/// and measures the normality residual at pt.
NormalityResult check_normality(const SubmanifoldSpec& spec, const SignPattern& signs, const AmbientVector& pt,
                                const FDConfig& cfg, int n_fields, std::uint64_t seed);

/// det(I - a^2) of the structure at pt.
double det_i_minus_a2(const InducedStructure& s);

/// A_alpha X = -(tangential part of D_X N_alpha). alpha is zero-based.
AmbientVector weingarten(const SubmanifoldSpec& spec, int alpha, const AmbientVector& pt, const AmbientVector& X,
                         const FDConfig& cfg);

/// c x c matrix of <D_X N_a, N_b> for a != b; the diagonal is zero.
Eigen::MatrixXd normal_connection_residual(const SubmanifoldSpec& spec, const AmbientVector& pt,
                                           const AmbientVector& X, const FDConfig& cfg);

struct NormalitySuiteOptions {
    int n_points = 20;
    int n_fields = 5;
    int n_probes = 5;  // tangent probes per point for the Weingarten checks
    std::uint64_t seed = 0;
    FDConfig fd;
    ToleranceMap tols;
    unsigned threads = 0;
    /// Hypersphere points with |det(I - a^2)| at or below this are excluded
    /// from the normality statistic.
    double det_threshold = 1e-3;
};

/// Sweeps random points and appends these entries to `report`:
///   normality.residual          asserted on the hypersphere, reported otherwise
///   normality.residual_alt_du   the other du convention, reported only
///   normality.det_i_minus_a2    |det(I - a^2)| at every sampled point, reported only
///   weingarten.scalar           |A_1 X + X/R|, hypersphere only, asserted
///   weingarten.commute          |P A_a X - A_a P X|, asserted on the hypersphere
///   weingarten.self_adjoint     |<A_a X, Y> - <X, A_a Y>|, asserted
///   normal_connection           max |<D_X N_a, N_b>|, asserted
void run_normality_suite(const SubmanifoldSpec& spec, const SignPattern& signs, const NormalitySuiteOptions& opts,
                         ResidualReport& report);

}  // namespace apstruct
