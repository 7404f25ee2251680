#pragma once

// Flat ambient space E^{2p+q} split into (x, y, z) coordinate blocks, with the
// Euclidean inner product and the almost product operator that swaps the x- and
// y-blocks and flips z-coordinates by a sign pattern.

#include <Eigen/Core>

#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace apstruct {

/// Raised when two objects disagree on (p, q) block sizes.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a point or vector lies outside an operation's domain.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Raised for configurations the library does not support.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Block sizes of E^{2p+q}.
struct Shape {
    int p = 0;
    int q = 0;

    [[nodiscard]] int dim() const { return 2 * p + q; }
    friend bool operator==(const Shape&, const Shape&) = default;
};

std::string to_string(const Shape& s);

/// A point of E^{2p+q} or, equivalently, a tangent vector of it.
///
/// Storage is one contiguous vector ordered (x^1..x^p, y^1..y^p, z^1..z^q).
/// Binary operations throw DimensionError when shapes differ.
class AmbientVector {
public:
    AmbientVector() = default;
    explicit AmbientVector(Shape shape);
    AmbientVector(Shape shape, Eigen::VectorXd coords);
    AmbientVector(Shape shape, std::initializer_list<double> coords);

    static AmbientVector zero(Shape shape) { return AmbientVector(shape); }
    static AmbientVector from_blocks(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                                     const Eigen::VectorXd& z);

    [[nodiscard]] const Shape& shape() const { return shape_; }
    [[nodiscard]] int dim() const { return shape_.dim(); }

    [[nodiscard]] const Eigen::VectorXd& coords() const { return coords_; }
    Eigen::VectorXd& coords() { return coords_; }

    [[nodiscard]] auto x() const { return coords_.head(shape_.p); }
    [[nodiscard]] auto y() const { return coords_.segment(shape_.p, shape_.p); }
    [[nodiscard]] auto z() const { return coords_.tail(shape_.q); }
    auto x() { return coords_.head(shape_.p); }
    auto y() { return coords_.segment(shape_.p, shape_.p); }
    auto z() { return coords_.tail(shape_.q); }

    double operator[](int i) const { return coords_[i]; }
    double& operator[](int i) { return coords_[i]; }

    [[nodiscard]] double norm() const { return coords_.norm(); }
    [[nodiscard]] double max_abs() const;

    AmbientVector& operator+=(const AmbientVector& o);
    AmbientVector& operator-=(const AmbientVector& o);
    AmbientVector& operator*=(double s);

    friend AmbientVector operator+(AmbientVector a, const AmbientVector& b) { return a += b; }
    friend AmbientVector operator-(AmbientVector a, const AmbientVector& b) { return a -= b; }
    friend AmbientVector operator*(double s, AmbientVector a) { return a *= s; }
    friend AmbientVector operator*(AmbientVector a, double s) { return a *= s; }
    friend AmbientVector operator/(AmbientVector a, double s) { return a *= 1.0 / s; }
    friend AmbientVector operator-(AmbientVector a) { return a *= -1.0; }

    friend bool operator==(const AmbientVector& a, const AmbientVector& b) {
        return a.shape_ == b.shape_ && a.coords_ == b.coords_;
    }

private:
    Shape shape_;
    Eigen::VectorXd coords_;
};

/// Throws DimensionError unless a and b share a shape.
void require_same_shape(const AmbientVector& a, const AmbientVector& b, const char* what);

/// Per-coordinate signs applied to the z-block. Entries are exactly +1 or -1.
class SignPattern {
public:
    SignPattern() = default;
    explicit SignPattern(std::vector<int> signs);

    static SignPattern uniform(int q, int eps);

    [[nodiscard]] int size() const { return static_cast<int>(signs_.size()); }
    [[nodiscard]] int operator[](int j) const { return signs_[static_cast<std::size_t>(j)]; }
    [[nodiscard]] const std::vector<int>& values() const { return signs_; }

    /// True when every entry is equal; the common value is returned by uniform_value().
    [[nodiscard]] bool is_uniform() const;
    [[nodiscard]] int uniform_value() const;

    friend bool operator==(const SignPattern&, const SignPattern&) = default;

private:
    std::vector<int> signs_;
};

/// The almost product operator: (x, y, z) -> (y, x, s*z).
AmbientVector ptilde(const AmbientVector& v, const SignPattern& s);

/// Euclidean inner product over all 2p+q coordinates.
double inner(const AmbientVector& u, const AmbientVector& v);

}  // namespace apstruct
