#include "apstruct/manifolds.hpp"

#include <cmath>
#include <sstream>

namespace apstruct {

namespace {

constexpr double kDerivedRadiusTol = 1e-12;

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

void check_declared(std::optional<double> declared, double computed, const char* name) {
    if (declared && std::abs(*declared - computed) > kDerivedRadiusTol * std::max(1.0, computed)) {
        std::ostringstream os;
        os.precision(17);
        os << "declared " << name << "=" << *declared << " is inconsistent with the defining radii ("
           << name << "=" << computed << ")";
        throw ConfigError(os.str());
    }
}

double require_radius(std::optional<double> v, const char* name, Family f) {
    if (!v) {
        throw ConfigError(std::string(to_string(f)) + " requires radius " + name);
    }
    return *v;
}

Eigen::VectorXd gaussian_on_sphere(int n, double radius, Rng& rng) {
    std::normal_distribution<double> normal;
    Eigen::VectorXd v(n);
    for (;;) {
        for (int i = 0; i < n; ++i) {
            v[i] = normal(rng);
        }
        const double nv = v.norm();
        if (nv > 1e-12) {
            return v * (radius / nv);
        }
    }
}

}  // namespace

std::string_view to_string(Family f) {
    switch (f) {
    case Family::Hypersphere:
        return "hypersphere";
    case Family::DoubleProduct:
        return "double_product";
    case Family::TripleProduct:
        return "triple_product";
    }
    return "unknown";
}

Family family_from_string(std::string_view name) {
    if (name == "hypersphere") return Family::Hypersphere;
    if (name == "double_product") return Family::DoubleProduct;
    if (name == "triple_product") return Family::TripleProduct;
    throw ConfigError("unknown family '" + std::string(name) + "'");
}

SubmanifoldSpec SubmanifoldSpec::hypersphere(int p, int q, double R) {
    SubmanifoldSpec s(Family::Hypersphere, Shape{p, q});
    s.R_ = R;
    s.validate();
    return s;
}

SubmanifoldSpec SubmanifoldSpec::double_product(int p, int q, double r, double r3) {
    SubmanifoldSpec s(Family::DoubleProduct, Shape{p, q});
    s.r_ = r;
    s.r3_ = r3;
    s.R_ = std::hypot(r, r3);
    s.validate();
    return s;
}

SubmanifoldSpec SubmanifoldSpec::triple_product(int p, int q, double r1, double r2, double r3) {
    SubmanifoldSpec s(Family::TripleProduct, Shape{p, q});
    s.r1_ = r1;
    s.r2_ = r2;
    s.r3_ = r3;
    s.r_ = std::hypot(r1, r2);
    s.R_ = std::hypot(s.r_, r3);
    s.validate();
    return s;
}

SubmanifoldSpec SubmanifoldSpec::make(Family family, Shape shape, const RadiiInput& in) {
    switch (family) {
    case Family::Hypersphere: {
        if (in.r || in.r1 || in.r2 || in.r3) {
            throw ConfigError("hypersphere takes only radius R");
        }
        return hypersphere(shape.p, shape.q, require_radius(in.R, "R", family));
    }
    case Family::DoubleProduct: {
        if (in.r1 || in.r2) {
            throw ConfigError("double_product takes radii r, r3 (and optionally R)");
        }
        auto s = double_product(shape.p, shape.q, require_radius(in.r, "r", family),
                                require_radius(in.r3, "r3", family));
        check_declared(in.R, s.R(), "R");
        return s;
    }
    case Family::TripleProduct: {
        auto s = triple_product(shape.p, shape.q, require_radius(in.r1, "r1", family),
                                require_radius(in.r2, "r2", family), require_radius(in.r3, "r3", family));
        check_declared(in.r, s.r(), "r");
        check_declared(in.R, s.R(), "R");
        return s;
    }
    }
    throw ConfigError("unknown family");
}

SubmanifoldSpec SubmanifoldSpec::through(Family family, const AmbientVector& pt) {
    const RadiiAtPoint rad = radii_at(pt);
    const Shape shape = pt.shape();
    auto guard = [](double v, const char* name) {
        if (!(v > kMinRadius)) {
            throw DomainError(std::string("radius ") + name + " at point is below the evaluation threshold");
        }
        return v;
    };
    switch (family) {
    case Family::Hypersphere:
        return hypersphere(shape.p, shape.q, guard(std::sqrt(rad.Rsq), "R"));
    case Family::DoubleProduct:
        return double_product(shape.p, shape.q, guard(std::sqrt(rad.rsq), "r"), guard(std::sqrt(rad.r3sq), "r3"));
    case Family::TripleProduct:
        return triple_product(shape.p, shape.q, guard(std::sqrt(rad.r1sq), "r1"), guard(std::sqrt(rad.r2sq), "r2"),
                              guard(std::sqrt(rad.r3sq), "r3"));
    }
    throw ConfigError("unknown family");
}

SubmanifoldSpec SubmanifoldSpec::with_radii(const RadiiInput& radii) const {
    return make(family_, shape_, radii);
}

int SubmanifoldSpec::codimension() const {
    switch (family_) {
    case Family::Hypersphere:
        return 1;
    case Family::DoubleProduct:
        return 2;
    case Family::TripleProduct:
        return 3;
    }
    return 0;
}

void SubmanifoldSpec::validate() const {
    if (shape_.p < 1 || shape_.q < 1) {
        throw ConfigError("p and q must be positive, got " + apstruct::to_string(shape_));
    }
    switch (family_) {
    case Family::Hypersphere:
        if (!positive_finite(R_)) throw ConfigError("hypersphere radius R must be positive");
        break;
    case Family::DoubleProduct:
        if (shape_.q < 2) throw ConfigError("double_product requires q >= 2");
        if (!positive_finite(r_) || !positive_finite(r3_)) {
            throw ConfigError("double_product radii r, r3 must be positive");
        }
        break;
    case Family::TripleProduct:
        if (shape_.p < 2 || shape_.q < 2) throw ConfigError("triple_product requires p >= 2 and q >= 2");
        if (!positive_finite(r1_) || !positive_finite(r2_) || !positive_finite(r3_)) {
            throw ConfigError("triple_product radii r1, r2, r3 must be positive");
        }
        break;
    }
}

std::string SubmanifoldSpec::describe() const {
    std::ostringstream os;
    os.precision(17);
    os << to_string(family_) << " p=" << shape_.p << " q=" << shape_.q;
    switch (family_) {
    case Family::Hypersphere:
        os << " R=" << R_;
        break;
    case Family::DoubleProduct:
        os << " r=" << r_ << " r3=" << r3_ << " R=" << R_;
        break;
    case Family::TripleProduct:
        os << " r1=" << r1_ << " r2=" << r2_ << " r3=" << r3_ << " r=" << r_ << " R=" << R_;
        break;
    }
    return os.str();
}

RadiiAtPoint radii_at(const AmbientVector& pt) {
    RadiiAtPoint r;
    r.r1sq = pt.x().squaredNorm();
    r.r2sq = pt.y().squaredNorm();
    r.r3sq = pt.z().squaredNorm();
    r.rsq = r.r1sq + r.r2sq;
    r.Rsq = r.rsq + r.r3sq;
    r.sigma = pt.x().dot(pt.y());
    return r;
}

double tau(const AmbientVector& pt, const AmbientVector& v) {
    require_same_shape(pt, v, "tau");
    return pt.x().dot(v.y()) + pt.y().dot(v.x());
}

void require_shape(const SubmanifoldSpec& spec, const AmbientVector& v, const char* what) {
    if (!(v.shape() == spec.shape())) {
        throw DimensionError(std::string(what) + ": vector shape " + to_string(v.shape()) +
                             " does not match manifold shape " + to_string(spec.shape()));
    }
}

bool contains(const SubmanifoldSpec& spec, const AmbientVector& pt, double tol) {
    require_shape(spec, pt, "contains");
    const RadiiAtPoint rad = radii_at(pt);
    switch (spec.family()) {
    case Family::Hypersphere:
        return std::abs(std::sqrt(rad.Rsq) - spec.R()) <= tol;
    case Family::DoubleProduct:
        return std::abs(std::sqrt(rad.rsq) - spec.r()) <= tol && std::abs(std::sqrt(rad.r3sq) - spec.r3()) <= tol;
    case Family::TripleProduct:
        return std::abs(std::sqrt(rad.r1sq) - spec.r1()) <= tol &&
               std::abs(std::sqrt(rad.r2sq) - spec.r2()) <= tol && std::abs(std::sqrt(rad.r3sq) - spec.r3()) <= tol;
    }
    return false;
}

AmbientVector sample_point(const SubmanifoldSpec& spec, Rng& rng) {
    const Shape s = spec.shape();
    AmbientVector pt(s);
    switch (spec.family()) {
    case Family::Hypersphere: {
        Rng stream(rng());
        pt.coords() = gaussian_on_sphere(s.dim(), spec.R(), stream);
        break;
    }
    case Family::DoubleProduct: {
        Rng xy_stream(rng());
        Rng z_stream(rng());
        pt.coords().head(2 * s.p) = gaussian_on_sphere(2 * s.p, spec.r(), xy_stream);
        pt.z() = gaussian_on_sphere(s.q, spec.r3(), z_stream);
        break;
    }
    case Family::TripleProduct: {
        Rng x_stream(rng());
        Rng y_stream(rng());
        Rng z_stream(rng());
        pt.x() = gaussian_on_sphere(s.p, spec.r1(), x_stream);
        pt.y() = gaussian_on_sphere(s.p, spec.r2(), y_stream);
        pt.z() = gaussian_on_sphere(s.q, spec.r3(), z_stream);
        break;
    }
    }
    return pt;
}

std::vector<AmbientVector> normal_frame(const SubmanifoldSpec& spec, const AmbientVector& pt) {
    if (!contains(spec, pt, kOnManifoldTol)) {
        throw DomainError("point is not on " + spec.describe());
    }
    const RadiiAtPoint rad = radii_at(pt);
    const double R = std::sqrt(rad.Rsq);

    std::vector<AmbientVector> frame;
    frame.reserve(static_cast<std::size_t>(spec.codimension()));
    frame.push_back(pt / R);
    if (spec.family() == Family::Hypersphere) {
        return frame;
    }

    const double r = std::sqrt(rad.rsq);
    const double r3 = std::sqrt(rad.r3sq);
    AmbientVector n2(pt.shape());
    n2.x() = (r3 / (r * R)) * pt.x();
    n2.y() = (r3 / (r * R)) * pt.y();
    n2.z() = (-r / (r3 * R)) * pt.z();
    frame.push_back(std::move(n2));
    if (spec.family() == Family::DoubleProduct) {
        return frame;
    }

    const double r1 = std::sqrt(rad.r1sq);
    const double r2 = std::sqrt(rad.r2sq);
    AmbientVector n3(pt.shape());
    n3.x() = (r2 / (r1 * r)) * pt.x();
    n3.y() = (-r1 / (r2 * r)) * pt.y();
    frame.push_back(std::move(n3));
    return frame;
}

AmbientVector tangent_project(const SubmanifoldSpec& spec, const AmbientVector& pt, const AmbientVector& v) {
    require_shape(spec, v, "tangent_project");
    AmbientVector out = v;
    for (const auto& n : normal_frame(spec, pt)) {
        out -= inner(v, n) * n;
    }
    return out;
}

bool is_tangent(const SubmanifoldSpec& spec, const AmbientVector& pt, const AmbientVector& v, double tol) {
    require_shape(spec, pt, "is_tangent");
    require_shape(spec, v, "is_tangent");
    const double xx = pt.x().dot(v.x());
    const double yy = pt.y().dot(v.y());
    const double zz = pt.z().dot(v.z());
    switch (spec.family()) {
    case Family::Hypersphere:
        return std::abs(xx + yy + zz) <= tol;
    case Family::DoubleProduct:
        return std::abs(xx + yy) <= tol && std::abs(zz) <= tol;
    case Family::TripleProduct:
        return std::abs(xx) <= tol && std::abs(yy) <= tol && std::abs(zz) <= tol;
    }
    return false;
}

AmbientVector sample_tangent(const SubmanifoldSpec& spec, const AmbientVector& pt, Rng& rng) {
    std::normal_distribution<double> normal;
    AmbientVector g(spec.shape());
    for (;;) {
        for (int i = 0; i < g.dim(); ++i) {
            g[i] = normal(rng);
        }
        AmbientVector t = tangent_project(spec, pt, g);
        const double n = t.norm();
        if (n >= 1e-8) {
            return t / n;
        }
    }
}

}  // namespace apstruct
