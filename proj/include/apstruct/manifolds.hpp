#pragma once

// The three submanifold families of E^{2p+q}:
//
//   Hypersphere     S^{2p+q-1}(R)                              codimension 1
//   DoubleProduct   S^{2p-1}(r) x S^{q-1}(r3)                  codimension 2
//   TripleProduct   S^{p-1}(r1) x S^{p-1}(r2) x S^{q-1}(r3)    codimension 3
//
// with r^2 = r1^2 + r2^2 and R^2 = r^2 + r3^2. Each family is nested in the
// previous one, and their normal frames extend each other: (N1), (N1, N2),
// (N1, N2, N3).

#include "apstruct/ambient.hpp"

#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace apstruct {

using Rng = std::mt19937_64;

enum class Family { Hypersphere, DoubleProduct, TripleProduct };

std::string_view to_string(Family f);
/// Accepts "hypersphere", "double_product", "triple_product".
Family family_from_string(std::string_view name);

/// Tolerance used by operations that require an on-manifold point.
inline constexpr double kOnManifoldTol = 1e-9;
/// Smallest factor radius at which frames and structures may be evaluated.
inline constexpr double kMinRadius = 1e-8;

/// Radii as they may be declared by a caller. Unset entries are derived.
struct RadiiInput {
    std::optional<double> R;
    std::optional<double> r;
    std::optional<double> r1;
    std::optional<double> r2;
    std::optional<double> r3;
};

class SubmanifoldSpec {
public:
    static SubmanifoldSpec hypersphere(int p, int q, double R);
    static SubmanifoldSpec double_product(int p, int q, double r, double r3);
    static SubmanifoldSpec triple_product(int p, int q, double r1, double r2, double r3);

    /// Builds a spec from the defining radii of `family` and checks any declared
    /// derived radius (r, R) against its computed value to 1e-12 relative.
    static SubmanifoldSpec make(Family family, Shape shape, const RadiiInput& radii);

    /// The member of `family` whose radii are read off `pt`, i.e. the level set
    /// through pt. Throws DomainError when a defining radius is below kMinRadius.
    static SubmanifoldSpec through(Family family, const AmbientVector& pt);

    [[nodiscard]] Family family() const { return family_; }
    [[nodiscard]] const Shape& shape() const { return shape_; }
    [[nodiscard]] int codimension() const;

    // Radii. r1, r2 are meaningful only for TripleProduct; r for the products.
    [[nodiscard]] double R() const { return R_; }
    [[nodiscard]] double r() const { return r_; }
    [[nodiscard]] double r1() const { return r1_; }
    [[nodiscard]] double r2() const { return r2_; }
    [[nodiscard]] double r3() const { return r3_; }

    /// Same family and shape with new defining radii (used by parameter sweeps).
    [[nodiscard]] SubmanifoldSpec with_radii(const RadiiInput& radii) const;

    [[nodiscard]] std::string describe() const;

    friend bool operator==(const SubmanifoldSpec&, const SubmanifoldSpec&) = default;

private:
    SubmanifoldSpec(Family family, Shape shape) : family_(family), shape_(shape) {}
    void validate() const;

    Family family_ = Family::Hypersphere;
    Shape shape_;
    double R_ = 0;
    double r_ = 0;
    double r1_ = 0;
    double r2_ = 0;
    double r3_ = 0;
};

/// Point-dependent scalars shared by every closed form.
struct RadiiAtPoint {
    double r1sq = 0;
    double r2sq = 0;
    double r3sq = 0;
    double rsq = 0;
    double Rsq = 0;
    double sigma = 0;  // sum_i x^i y^i
};

RadiiAtPoint radii_at(const AmbientVector& pt);

/// tau = sum_i (x^i Y^i + y^i X^i) for a point (x, y, z) and a vector (X, Y, Z).
double tau(const AmbientVector& pt, const AmbientVector& v);

bool contains(const SubmanifoldSpec& spec, const AmbientVector& pt, double tol);

/// Uniform sample per factor sphere (Gaussian normalization). Each factor draws
/// from its own stream seeded from `rng`.
AmbientVector sample_point(const SubmanifoldSpec& spec, Rng& rng);

/// Orthonormal normal frame (N1), (N1, N2) or (N1, N2, N3).
/// Throws DomainError when pt is off the manifold.
std::vector<AmbientVector> normal_frame(const SubmanifoldSpec& spec, const AmbientVector& pt);

/// v minus its components along the normal frame.
AmbientVector tangent_project(const SubmanifoldSpec& spec, const AmbientVector& pt, const AmbientVector& v);

/// Checks the family's tangency equations. They do not involve the radii, so
/// this holds equally for the level sets through off-manifold points.
bool is_tangent(const SubmanifoldSpec& spec, const AmbientVector& pt, const AmbientVector& v, double tol);

/// Unit tangent vector: projected standard Gaussian, renormalized.
AmbientVector sample_tangent(const SubmanifoldSpec& spec, const AmbientVector& pt, Rng& rng);

/// Throws DimensionError unless v has the spec's shape.
void require_shape(const SubmanifoldSpec& spec, const AmbientVector& v, const char* what);

}  // namespace apstruct
