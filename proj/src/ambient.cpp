#include "apstruct/ambient.hpp"

#include <algorithm>
#include <functional>

namespace apstruct {

std::string to_string(const Shape& s) {
    return "(p=" + std::to_string(s.p) + ", q=" + std::to_string(s.q) + ")";
}

AmbientVector::AmbientVector(Shape shape) : shape_(shape), coords_(Eigen::VectorXd::Zero(shape.dim())) {
    if (shape.p < 0 || shape.q < 0) {
        throw DimensionError("negative block size " + to_string(shape));
    }
}

AmbientVector::AmbientVector(Shape shape, Eigen::VectorXd coords) : shape_(shape), coords_(std::move(coords)) {
    if (shape.p < 0 || shape.q < 0 || coords_.size() != shape.dim()) {
        throw DimensionError("coordinate count " + std::to_string(coords_.size()) +
                             " does not match shape " + to_string(shape));
    }
}

AmbientVector::AmbientVector(Shape shape, std::initializer_list<double> coords)
    : AmbientVector(shape, Eigen::Map<const Eigen::VectorXd>(coords.begin(),
                                                             static_cast<Eigen::Index>(coords.size()))) {}

AmbientVector AmbientVector::from_blocks(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                                         const Eigen::VectorXd& z) {
    if (x.size() != y.size()) {
        throw DimensionError("x- and y-blocks must have equal length");
    }
    Shape shape{static_cast<int>(x.size()), static_cast<int>(z.size())};
    AmbientVector v(shape);
    v.x() = x;
    v.y() = y;
    v.z() = z;
    return v;
}

double AmbientVector::max_abs() const {
    return coords_.size() == 0 ? 0.0 : coords_.cwiseAbs().maxCoeff();
}

AmbientVector& AmbientVector::operator+=(const AmbientVector& o) {
    require_same_shape(*this, o, "addition");
    coords_ += o.coords_;
    return *this;
}

AmbientVector& AmbientVector::operator-=(const AmbientVector& o) {
    require_same_shape(*this, o, "subtraction");
    coords_ -= o.coords_;
    return *this;
}

AmbientVector& AmbientVector::operator*=(double s) {
    coords_ *= s;
    return *this;
}

void require_same_shape(const AmbientVector& a, const AmbientVector& b, const char* what) {
    if (!(a.shape() == b.shape())) {
        throw DimensionError(std::string(what) + ": shape mismatch " + to_string(a.shape()) + " vs " +
                             to_string(b.shape()));
    }
}

SignPattern::SignPattern(std::vector<int> signs) : signs_(std::move(signs)) {
    for (int s : signs_) {
        if (s != 1 && s != -1) {
            throw ConfigError("sign pattern entries must be +1 or -1, got " + std::to_string(s));
        }
    }
}

SignPattern SignPattern::uniform(int q, int eps) {
    return SignPattern(std::vector<int>(static_cast<std::size_t>(q), eps));
}

bool SignPattern::is_uniform() const {
    return std::adjacent_find(signs_.begin(), signs_.end(), std::not_equal_to<>()) == signs_.end();
}

int SignPattern::uniform_value() const {
    if (signs_.empty() || !is_uniform()) {
        throw ConfigError("sign pattern is not uniform");
    }
    return signs_.front();
}

AmbientVector ptilde(const AmbientVector& v, const SignPattern& s) {
    if (s.size() != v.shape().q) {
        throw DimensionError("sign pattern length " + std::to_string(s.size()) + " does not match q=" +
                             std::to_string(v.shape().q));
    }
    AmbientVector out(v.shape());
    out.x() = v.y();
    out.y() = v.x();
    for (int j = 0; j < s.size(); ++j) {
        out.z()[j] = s[j] == 1 ? v.z()[j] : -v.z()[j];
    }
    return out;
}

double inner(const AmbientVector& u, const AmbientVector& v) {
    require_same_shape(u, v, "inner product");
    return u.coords().dot(v.coords());
}

}  // namespace apstruct
