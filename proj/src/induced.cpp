#include "apstruct/induced.hpp"

#include <cmath>

namespace apstruct {

namespace {

// Radii at a point in the form the closed formulas use. Squares are taken from
// RadiiAtPoint directly rather than by squaring the roots.
struct PointScalars {
    double sigma;
    double R, r, r1, r2, r3;
    double Rsq, rsq, r1sq, r2sq, r3sq;
};

PointScalars scalars_at(const AmbientVector& pt) {
    const RadiiAtPoint rad = radii_at(pt);
    return {rad.sigma,          std::sqrt(rad.Rsq), std::sqrt(rad.rsq), std::sqrt(rad.r1sq),
            std::sqrt(rad.r2sq), std::sqrt(rad.r3sq), rad.Rsq,           rad.rsq,
            rad.r1sq,           rad.r2sq,           rad.r3sq};
}

void require_tangent(const InducedStructure& s, const AmbientVector& X, const char* what) {
    require_shape(s.spec, X, what);
    if (!is_tangent(s.spec, s.pt, X, tangent_guard_tol(s, X))) {
        throw DomainError(std::string(what) + ": vector is not tangent at the structure's point");
    }
}

void fill_hypersphere(InducedStructure& s, double eps, const PointScalars& k) {
    const AmbientVector& pt = s.pt;
    const double R2 = k.Rsq;
    const double a11 = (2 * k.sigma + eps * k.r3sq) / R2;
    s.a(0, 0) = a11;

    AmbientVector xi(pt.shape());
    xi.x() = (pt.y() - a11 * pt.x()) / k.R;
    xi.y() = (pt.x() - a11 * pt.y()) / k.R;
    xi.z() = ((eps * k.rsq - 2 * k.sigma) / (R2 * k.R)) * pt.z();
    s.xi.push_back(std::move(xi));
}

// xi-hat direction shared by the double and triple families:
//   (y - c_x x, x - c_y y, 0)
AmbientVector swapped_direction(const AmbientVector& pt, double cx, double cy) {
    AmbientVector v(pt.shape());
    v.x() = pt.y() - cx * pt.x();
    v.y() = pt.x() - cy * pt.y();
    return v;
}

void fill_double(InducedStructure& s, double eps, const PointScalars& k) {
    const double R2 = k.Rsq;
    const double r2 = k.rsq;
    const double r3 = k.r3;
    const double sg = k.sigma;

    s.a(0, 0) = (2 * sg + eps * k.r3sq) / R2;
    s.a(0, 1) = (2 * sg - eps * r2) * r3 / (k.r * R2);
    s.a(1, 0) = s.a(0, 1);
    s.a(1, 1) = (2 * sg * k.r3sq + eps * r2 * r2) / (r2 * R2);

    const AmbientVector dir = swapped_direction(s.pt, 2 * sg / r2, 2 * sg / r2);
    s.xi.push_back(dir / k.R);
    s.xi.push_back((r3 / (k.r * k.R)) * dir);
}

void fill_triple(InducedStructure& s, double eps, const PointScalars& k) {
    const AmbientVector& pt = s.pt;
    const double R2 = k.Rsq;
    const double r2 = k.rsq;
    const double r3 = k.r3;
    const double sg = k.sigma;
    const double r1sq = k.r1sq;
    const double r2sq = k.r2sq;
    const double r1r2 = k.r1 * k.r2;

    s.a(0, 0) = (2 * sg + eps * k.r3sq) / R2;
    s.a(0, 1) = (2 * sg - eps * r2) * r3 / (k.r * R2);
    s.a(1, 1) = (2 * sg * k.r3sq + eps * r2 * r2) / (r2 * R2);
    s.a(0, 2) = (r2sq - r1sq) / (r1r2 * k.r * k.R) * sg;
    s.a(1, 2) = (r2sq - r1sq) * r3 / (r1r2 * r2 * k.R) * sg;
    s.a(2, 2) = -2 * sg / r2;
    s.a(1, 0) = s.a(0, 1);
    s.a(2, 0) = s.a(0, 2);
    s.a(2, 1) = s.a(1, 2);

    const AmbientVector dir = swapped_direction(pt, sg / r1sq, sg / r2sq);
    s.xi.push_back(dir / k.R);
    s.xi.push_back((r3 / (k.r * k.R)) * dir);

    AmbientVector xi3(pt.shape());
    xi3.x() = (sg / r1r2 * pt.x() - (k.r1 / k.r2) * pt.y()) / k.r;
    xi3.y() = ((k.r2 / k.r1) * pt.x() - sg / r1r2 * pt.y()) / k.r;
    s.xi.push_back(std::move(xi3));
}

Eigen::VectorXd u_closed(const InducedStructure& s, const AmbientVector& X) {
    const PointScalars k = scalars_at(s.pt);
    const double eps = s.signs.uniform_value();
    const double t = tau(s.pt, X);
    Eigen::VectorXd u(s.codimension());
    switch (s.spec.family()) {
    case Family::Hypersphere:
        u[0] = (t + eps * s.pt.z().dot(X.z())) / k.R;
        break;
    case Family::DoubleProduct:
        u[0] = t / k.R;
        u[1] = k.r3 * t / (k.r * k.R);
        break;
    case Family::TripleProduct:
        u[0] = t / k.R;
        u[1] = k.r3 * t / (k.r * k.R);
        u[2] = ((k.r2 / k.r1) * s.pt.x().dot(X.y()) - (k.r1 / k.r2) * s.pt.y().dot(X.x())) / k.r;
        break;
    }
    return u;
}

AmbientVector p_closed(const InducedStructure& s, const AmbientVector& X) {
    const AmbientVector& pt = s.pt;
    const PointScalars k = scalars_at(pt);
    const double eps = s.signs.uniform_value();
    AmbientVector out(pt.shape());
    switch (s.spec.family()) {
    case Family::Hypersphere: {
        const double c = u_closed(s, X)[0] / k.R;
        out.x() = X.y() - c * pt.x();
        out.y() = X.x() - c * pt.y();
        out.z() = eps * X.z() - c * pt.z();
        break;
    }
    case Family::DoubleProduct: {
        const double c = tau(pt, X) / k.rsq;
        out.x() = X.y() - c * pt.x();
        out.y() = X.x() - c * pt.y();
        out.z() = eps * X.z();
        break;
    }
    case Family::TripleProduct: {
        out.x() = X.y() - (pt.x().dot(X.y()) / k.r1sq) * pt.x();
        out.y() = X.x() - (pt.y().dot(X.x()) / k.r2sq) * pt.y();
        out.z() = eps * X.z();
        break;
    }
    }
    return out;
}

}  // namespace

std::string_view to_string(Provenance p) {
    return p == Provenance::ClosedForm ? "closed_form" : "oracle";
}

InducedStructure oracle_structure(const SubmanifoldSpec& spec, const AmbientVector& pt, const SignPattern& signs) {
    require_shape(spec, pt, "oracle_structure");
    InducedStructure s{spec, pt, signs, Provenance::Oracle, {}, {}, normal_frame(spec, pt)};
    const int c = spec.codimension();
    s.a.resize(c, c);

    std::vector<AmbientVector> image;
    image.reserve(static_cast<std::size_t>(c));
    for (const auto& n : s.frame) {
        image.push_back(ptilde(n, signs));
    }
    for (int al = 0; al < c; ++al) {
        for (int be = 0; be < c; ++be) {
            s.a(al, be) = inner(image[al], s.frame[be]);
        }
    }
    for (int al = 0; al < c; ++al) {
        AmbientVector xi = image[al];
        for (int be = 0; be < c; ++be) {
            xi -= s.a(al, be) * s.frame[be];
        }
        s.xi.push_back(std::move(xi));
    }
    return s;
}

InducedStructure closed_form_structure(const SubmanifoldSpec& spec, const AmbientVector& pt,
                                       const SignPattern& signs) {
    require_shape(spec, pt, "closed_form_structure");
    if (signs.size() != spec.shape().q) {
        throw DimensionError("sign pattern length does not match q");
    }
    if (!signs.is_uniform()) {
        throw ConfigError("closed forms are available only for uniform sign patterns");
    }
    InducedStructure s{spec, pt, signs, Provenance::ClosedForm, {}, {}, normal_frame(spec, pt)};
    const int c = spec.codimension();
    s.a = Eigen::MatrixXd::Zero(c, c);
    s.xi.reserve(static_cast<std::size_t>(c));

    const double eps = signs.uniform_value();
    const PointScalars k = scalars_at(pt);
    switch (spec.family()) {
    case Family::Hypersphere:
        fill_hypersphere(s, eps, k);
        break;
    case Family::DoubleProduct:
        fill_double(s, eps, k);
        break;
    case Family::TripleProduct:
        fill_triple(s, eps, k);
        break;
    }
    return s;
}

InducedStructure make_structure(Provenance provenance, const SubmanifoldSpec& spec, const AmbientVector& pt,
                                const SignPattern& signs) {
    return provenance == Provenance::ClosedForm ? closed_form_structure(spec, pt, signs)
                                                : oracle_structure(spec, pt, signs);
}

double tangent_guard_tol(const InducedStructure& s, const AmbientVector& X) {
    return 1e-9 * std::max(1.0, s.pt.norm() * X.norm());
}

Eigen::VectorXd u_form_gram(const InducedStructure& s, const AmbientVector& X) {
    require_shape(s.spec, X, "u_form");
    Eigen::VectorXd u(s.codimension());
    for (int al = 0; al < s.codimension(); ++al) {
        u[al] = inner(X, s.xi[static_cast<std::size_t>(al)]);
    }
    return u;
}

Eigen::VectorXd u_form(const InducedStructure& s, const AmbientVector& X) {
    require_tangent(s, X, "u_form");
    return s.provenance == Provenance::ClosedForm ? u_closed(s, X) : u_form_gram(s, X);
}

AmbientVector p_apply(const InducedStructure& s, const AmbientVector& X) {
    require_tangent(s, X, "p_apply");
    if (s.provenance == Provenance::ClosedForm) {
        return p_closed(s, X);
    }
    AmbientVector out = ptilde(X, s.signs);
    const Eigen::VectorXd u = u_form_gram(s, X);
    for (int al = 0; al < s.codimension(); ++al) {
        out -= u[al] * s.frame[static_cast<std::size_t>(al)];
    }
    return out;
}

}  // namespace apstruct
