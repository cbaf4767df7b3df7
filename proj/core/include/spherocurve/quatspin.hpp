#pragma once

#include <Eigen/Dense>

#include <array>
#include <iosfwd>
#include <span>
#include <vector>

namespace spherocurve {

/// a + b i + c j + d k, with i^2 = j^2 = k^2 = ijk = -1.
struct Quaternion {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double d = 0.0;

    static constexpr Quaternion one() { return {1.0, 0.0, 0.0, 0.0}; }
    static constexpr Quaternion i() { return {0.0, 1.0, 0.0, 0.0}; }
    static constexpr Quaternion j() { return {0.0, 0.0, 1.0, 0.0}; }
    static constexpr Quaternion k() { return {0.0, 0.0, 0.0, 1.0}; }

    static Quaternion from_vector(const Eigen::Vector4d& v) { return {v[0], v[1], v[2], v[3]}; }
    /// Imaginary quaternion x i + y j + z k.
    static Quaternion imaginary(const Eigen::Vector3d& v) { return {0.0, v[0], v[1], v[2]}; }

    Eigen::Vector4d vector() const { return {a, b, c, d}; }
    Eigen::Vector3d imaginary_part() const { return {b, c, d}; }

    Quaternion conj() const { return {a, -b, -c, -d}; }
    double norm() const;
    double dot(const Quaternion& o) const { return a * o.a + b * o.b + c * o.c + d * o.d; }

    friend Quaternion operator+(const Quaternion& x, const Quaternion& y) {
        return {x.a + y.a, x.b + y.b, x.c + y.c, x.d + y.d};
    }
    friend Quaternion operator-(const Quaternion& x, const Quaternion& y) {
        return {x.a - y.a, x.b - y.b, x.c - y.c, x.d - y.d};
    }
    friend Quaternion operator-(const Quaternion& x) { return {-x.a, -x.b, -x.c, -x.d}; }
    friend Quaternion operator*(double s, const Quaternion& x) {
        return {s * x.a, s * x.b, s * x.c, s * x.d};
    }
    friend Quaternion operator*(const Quaternion& x, const Quaternion& y);
    friend bool operator==(const Quaternion&, const Quaternion&) = default;
};

Quaternion quat_mul(const Quaternion& x, const Quaternion& y);

std::ostream& operator<<(std::ostream& os, const Quaternion& q);

/// A point of S^3 = Spin_3. Construction enforces |q| = 1 within 1e-12.
class UnitQuaternion {
public:
    UnitQuaternion() = default;
    explicit UnitQuaternion(const Quaternion& q);

    /// Divides by the norm; the input must be non-zero.
    static UnitQuaternion normalized(const Quaternion& q);

    const Quaternion& quaternion() const { return q_; }
    Eigen::Vector4d vector() const { return q_.vector(); }

    UnitQuaternion operator-() const { return UnitQuaternion::trusted(-q_); }
    friend UnitQuaternion operator*(const UnitQuaternion& x, const UnitQuaternion& y);

    double distance(const UnitQuaternion& o) const { return (q_ - o.q_).norm(); }

private:
    static UnitQuaternion trusted(const Quaternion& q) {
        UnitQuaternion u;
        u.q_ = q;
        return u;
    }
    Quaternion q_ = Quaternion::one();
};

/// A point (z_l, z_r) of Spin_4 = S^3 x S^3.
struct SpinPair {
    UnitQuaternion left;
    UnitQuaternion right;

    SpinPair operator-() const { return {-left, -right}; }
    friend SpinPair operator*(const SpinPair& x, const SpinPair& y) {
        return {x.left * y.left, x.right * y.right};
    }
    /// Larger of the two factor distances.
    double distance(const SpinPair& o) const;
};

/// Special-orthogonal matrix validated at construction (1e-9).
template <int N>
class Rotation {
public:
    using Matrix = Eigen::Matrix<double, N, N>;

    Rotation() : m_(Matrix::Identity()) {}
    /// Throws CoverError if m is not in SO_N within 1e-9.
    explicit Rotation(const Matrix& m);

    const Matrix& matrix() const { return m_; }
    double operator()(int r, int c) const { return m_(r, c); }

    friend Rotation operator*(const Rotation& x, const Rotation& y) {
        return Rotation(x.m_ * y.m_);
    }

    /// Largest principal rotation angle of x^T y, in [0, pi].
    static double angle_between(const Rotation& x, const Rotation& y);

private:
    Matrix m_;
};

using Rotation3 = Rotation<3>;
using Rotation4 = Rotation<4>;

inline constexpr double kRotationTolerance = 1e-9;

/// Pi_3(z) h = z h conj(z) on imaginary quaternions, basis (i, j, k).
Rotation3 project_spin3(const UnitQuaternion& z);

/// Pi_4(z_l, z_r) q = z_l q conj(z_r) on H, basis (1, i, j, k).
Rotation4 project_spin4(const SpinPair& p);

/// cos|w| + sin|w| w/|w| for imaginary w (PreconditionError otherwise).
UnitQuaternion quat_exp(const Quaternion& w);

/// One of the two preimages of a rotation under Pi_3 / Pi_4.
UnitQuaternion spin3_preimage(const Rotation3& r);
SpinPair spin4_preimage(const Rotation4& r);

/// Continuous lift of a densely sampled frame path, starting at `base`.
/// Consecutive frames must differ by less than pi/2 (DensityError).
std::vector<UnitQuaternion> lift_path_spin3(std::span<const Rotation3> frames,
                                            const UnitQuaternion& base = {});
std::vector<SpinPair> lift_path_spin4(std::span<const Rotation4> frames,
                                      const SpinPair& base = {});

/// Matrix of x -> q x (left) and x -> x q (right) on H in basis (1, i, j, k).
Eigen::Matrix4d left_mult_matrix(const Quaternion& q);
Eigen::Matrix4d right_mult_matrix(const Quaternion& q);

} // namespace spherocurve
