#pragma once

// Induced (a,1)f structure on a submanifold of E^{2p+q}. At a point with normal
// frame (N_1..N_c), the ambient operator splits as
//
//   Ptilde X   = P X + sum_a u_a(X) N_a              (X tangent)
//   Ptilde N_a = xi_a + sum_b a_ab N_b
//
// Two independent constructions are provided. The oracle reads a and xi off
// that decomposition directly; the closed forms evaluate the per-family
// formulas in sigma, tau and the radii. Tests treat the oracle as ground truth.

#include "apstruct/ambient.hpp"
#include "apstruct/manifolds.hpp"

#include <Eigen/Core>

#include <string_view>
#include <vector>

namespace apstruct {

enum class Provenance { ClosedForm, Oracle };

std::string_view to_string(Provenance p);

struct InducedStructure {
    SubmanifoldSpec spec;
    AmbientVector pt;
    SignPattern signs;
    Provenance provenance = Provenance::Oracle;

    Eigen::MatrixXd a;                // c x c
    std::vector<AmbientVector> xi;    // c tangent vectors
    std::vector<AmbientVector> frame; // N_1..N_c at pt

    [[nodiscard]] int codimension() const { return static_cast<int>(xi.size()); }
};

/// Decomposes Ptilde N_a against the normal frame. Works for any sign pattern.
InducedStructure oracle_structure(const SubmanifoldSpec& spec, const AmbientVector& pt, const SignPattern& signs);

/// Evaluates the per-family closed forms. Requires a uniform sign pattern;
/// throws ConfigError otherwise and DomainError off the manifold.
InducedStructure closed_form_structure(const SubmanifoldSpec& spec, const AmbientVector& pt, const SignPattern& signs);

InducedStructure make_structure(Provenance provenance, const SubmanifoldSpec& spec, const AmbientVector& pt,
                                const SignPattern& signs);

/// (u_1(X), .., u_c(X)). Closed-form structures use the scalar formulas in tau
/// and z.Z; oracle structures use <X, xi_a>. Throws DomainError for non-tangent X.
Eigen::VectorXd u_form(const InducedStructure& s, const AmbientVector& X);

/// (<X, xi_a>)_a regardless of provenance.
Eigen::VectorXd u_form_gram(const InducedStructure& s, const AmbientVector& X);

/// Tangential part of Ptilde X. Throws DomainError for non-tangent X.
AmbientVector p_apply(const InducedStructure& s, const AmbientVector& X);

/// Tangency tolerance used to guard u_form and p_apply.
double tangent_guard_tol(const InducedStructure& s, const AmbientVector& X);

}  // namespace apstruct
