#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace admit {

// Norm below which a vector is treated as having no direction.
inline constexpr double kZeroNormThreshold = 1e-12;
// Slack allowed on |‖u‖ - 1| for a stored UnitVector.
inline constexpr double kUnitNormTolerance = 1e-9;

/// A point on the unit sphere S^{d-1}, d >= 2. Only the direction carries
/// meaning, so every constructor normalizes or validates the norm.
class UnitVector {
public:
    // Accepts a vector already on the sphere (within kUnitNormTolerance) and
    // stores it without rescaling, so serialized coordinates round-trip bitwise.
    static UnitVector from_unit(const Eigen::VectorXd& coords);
    static UnitVector from_unit(std::span<const double> coords);

    // Standard basis vector e_i in dimension d.
    static UnitVector basis(std::size_t d, std::size_t i);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(coords_.size()); }
    const Eigen::VectorXd& coords() const noexcept { return coords_; }
    double operator[](std::size_t i) const { return coords_[static_cast<Eigen::Index>(i)]; }
    double dot(const UnitVector& other) const;

    UnitVector operator-() const;

    std::vector<double> to_vector() const;

    friend bool operator==(const UnitVector& a, const UnitVector& b) noexcept;
    // Lexicographic order on coordinates (then dimension); used for deterministic tie-breaks.
    friend bool lexicographic_less(const UnitVector& a, const UnitVector& b) noexcept;

private:
    friend UnitVector normalize(const Eigen::VectorXd& v);
    explicit UnitVector(Eigen::VectorXd coords) : coords_(std::move(coords)) {}

    Eigen::VectorXd coords_;
};

// v / ‖v‖. Throws ZeroVectorError when ‖v‖ <= 1e-12 and PreconditionError when d < 2.
UnitVector normalize(const Eigen::VectorXd& v);
UnitVector normalize(std::span<const double> v);
UnitVector normalize(std::initializer_list<double> v);

/// Great-circle distance in [0, pi]. Evaluated as 2·atan2(‖u−v‖, ‖u+v‖), which
/// equals arccos(u·v) but stays accurate near 0 and pi and is exactly 0 for
/// identical inputs.
double geodesic_distance(const UnitVector& u, const UnitVector& v);

// arccos(u·v) with the argument clamped to [-1, 1].
double arccos_distance(const UnitVector& u, const UnitVector& v);

/// Proper rotation of R^d (orthogonal, det = +1).
class Rotation {
public:
    static Rotation identity(std::size_t d);
    // Validates orthogonality (‖RᵀR − I‖∞ < 1e-9) and det = +1.
    static Rotation from_matrix(const Eigen::MatrixXd& m);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }
    const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }

    UnitVector apply(const UnitVector& u) const;
    UnitVector apply_inverse(const UnitVector& u) const;
    Rotation inverse() const;
    Rotation compose(const Rotation& inner) const;  // this ∘ inner

    // max |(RᵀR − I)_ij|
    double orthogonality_error() const;

private:
    friend Rotation random_rotation(std::size_t d, std::uint64_t seed);
    explicit Rotation(Eigen::MatrixXd m) : matrix_(std::move(m)) {}
    Eigen::MatrixXd matrix_;
};

// Uniform samples on S^{d-1} by normalizing standard Gaussians. Sample i
// depends only on (seed, i), so any partition of the index range reproduces
// the same points.
std::vector<UnitVector> sample_uniform_sphere(std::size_t d, std::size_t n, std::uint64_t seed);
// Single sample with explicit (seed, stream) addressing.
UnitVector sample_uniform_point(std::size_t d, std::uint64_t seed, std::uint64_t stream);

// Haar-distributed rotation: QR of a Gaussian matrix, column signs fixed by
// diag(R), then one column flipped if needed to land in SO(d).
Rotation random_rotation(std::size_t d, std::uint64_t seed);

}  // namespace admit
