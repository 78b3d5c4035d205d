#include "admit/sphere.hpp"

#include "admit/errors.hpp"
#include "admit/random.hpp"

#include <Eigen/QR>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>

namespace admit {

namespace {

void require_dimension(Eigen::Index d) {
    if (d < 2) throw PreconditionError("sphere dimension must be >= 2, got " + std::to_string(d));
}

Eigen::VectorXd to_eigen(std::span<const double> v) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[i];
    return out;
}

constexpr std::uint64_t kRotationTag = 0x524f544154494f4eull;  // "ROTATION"

}  // namespace

UnitVector normalize(const Eigen::VectorXd& v) {
    require_dimension(v.size());
    const double norm = v.norm();
    if (!(norm > kZeroNormThreshold)) throw ZeroVectorError();
    return UnitVector(v / norm);
}

UnitVector normalize(std::span<const double> v) { return normalize(to_eigen(v)); }

UnitVector normalize(std::initializer_list<double> v) {
    return normalize(std::span<const double>(v.begin(), v.size()));
}

UnitVector UnitVector::from_unit(const Eigen::VectorXd& coords) {
    require_dimension(coords.size());
    const double norm = coords.norm();
    if (!(std::abs(norm - 1.0) <= kUnitNormTolerance)) {
        throw PreconditionError("vector is not unit length (norm " + std::to_string(norm) + ")");
    }
    return UnitVector(coords);
}

UnitVector UnitVector::from_unit(std::span<const double> coords) { return from_unit(to_eigen(coords)); }

UnitVector UnitVector::basis(std::size_t d, std::size_t i) {
    require_dimension(static_cast<Eigen::Index>(d));
    if (i >= d) throw PreconditionError("basis index out of range");
    Eigen::VectorXd e = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));
    e[static_cast<Eigen::Index>(i)] = 1.0;
    return UnitVector(std::move(e));
}

double UnitVector::dot(const UnitVector& other) const {
    if (other.dim() != dim()) throw DimensionMismatch(dim(), other.dim());
    return coords_.dot(other.coords_);
}

UnitVector UnitVector::operator-() const { return UnitVector(-coords_); }

std::vector<double> UnitVector::to_vector() const {
    return std::vector<double>(coords_.data(), coords_.data() + coords_.size());
}

bool operator==(const UnitVector& a, const UnitVector& b) noexcept {
    return a.coords_.size() == b.coords_.size() &&
           std::equal(a.coords_.data(), a.coords_.data() + a.coords_.size(), b.coords_.data());
}

bool lexicographic_less(const UnitVector& a, const UnitVector& b) noexcept {
    const auto* ab = a.coords_.data();
    const auto* bb = b.coords_.data();
    return std::lexicographical_compare(ab, ab + a.coords_.size(), bb, bb + b.coords_.size());
}

double geodesic_distance(const UnitVector& u, const UnitVector& v) {
    if (u.dim() != v.dim()) throw DimensionMismatch(u.dim(), v.dim());
    const double chord_minus = (u.coords() - v.coords()).norm();
    const double chord_plus = (u.coords() + v.coords()).norm();
    return 2.0 * std::atan2(chord_minus, chord_plus);
}

double arccos_distance(const UnitVector& u, const UnitVector& v) {
    return std::acos(std::clamp(u.dot(v), -1.0, 1.0));
}

// ---------------------------------------------------------------------------

Rotation Rotation::identity(std::size_t d) {
    require_dimension(static_cast<Eigen::Index>(d));
    const auto n = static_cast<Eigen::Index>(d);
    return Rotation(Eigen::MatrixXd::Identity(n, n));
}

Rotation Rotation::from_matrix(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols()) throw PreconditionError("rotation matrix must be square");
    require_dimension(m.rows());
    Rotation r(m);
    if (r.orthogonality_error() >= 1e-9) throw PreconditionError("matrix is not orthogonal");
    if (m.determinant() <= 0.0) throw PreconditionError("matrix is a reflection, not a rotation");
    return r;
}

UnitVector Rotation::apply(const UnitVector& u) const {
    if (u.dim() != dim()) throw DimensionMismatch(dim(), u.dim());
    return normalize(Eigen::VectorXd(matrix_ * u.coords()));
}

UnitVector Rotation::apply_inverse(const UnitVector& u) const {
    if (u.dim() != dim()) throw DimensionMismatch(dim(), u.dim());
    return normalize(Eigen::VectorXd(matrix_.transpose() * u.coords()));
}

Rotation Rotation::inverse() const { return Rotation(matrix_.transpose()); }

Rotation Rotation::compose(const Rotation& inner) const {
    if (inner.dim() != dim()) throw DimensionMismatch(dim(), inner.dim());
    return Rotation(matrix_ * inner.matrix_);
}

double Rotation::orthogonality_error() const {
    const auto n = matrix_.rows();
    return (matrix_.transpose() * matrix_ - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------

UnitVector sample_uniform_point(std::size_t d, std::uint64_t seed, std::uint64_t stream) {
    require_dimension(static_cast<Eigen::Index>(d));
    CounterRng rng(seed, stream);
    Eigen::VectorXd g(static_cast<Eigen::Index>(d));
    for (;;) {
        for (Eigen::Index k = 0; k < g.size(); ++k) g[k] = rng.normal();
        if (g.norm() > kZeroNormThreshold) return normalize(g);
    }
}

std::vector<UnitVector> sample_uniform_sphere(std::size_t d, std::size_t n, std::uint64_t seed) {
    require_dimension(static_cast<Eigen::Index>(d));
    if (n < 1) throw PreconditionError("sample count must be >= 1");
    std::vector<UnitVector> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(sample_uniform_point(d, seed, i));
    return out;
}

Rotation random_rotation(std::size_t d, std::uint64_t seed) {
    require_dimension(static_cast<Eigen::Index>(d));
    const auto n = static_cast<Eigen::Index>(d);
    CounterRng rng(seed, kRotationTag);
    Eigen::MatrixXd g(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i) g(i, j) = rng.normal();

    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < n; ++j) {
        if (r(j, j) < 0.0) q.col(j) = -q.col(j);
    }
    if (q.determinant() < 0.0) q.col(0) = -q.col(0);
    return Rotation(std::move(q));
}

}  // namespace admit
