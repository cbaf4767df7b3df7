#include "spherocurve/quatspin.hpp"

#include "spherocurve/errors.hpp"
#include "spherocurve/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

namespace spherocurve {

namespace {

constexpr std::array<Quaternion, 4> kBasis4 = {Quaternion::one(), Quaternion::i(),
                                               Quaternion::j(), Quaternion::k()};

// Largest principal angle from the half-angles of the two factors.
double fold_angle(double theta) {
    theta = std::fmod(std::abs(theta), 2.0 * std::numbers::pi);
    return theta > std::numbers::pi ? 2.0 * std::numbers::pi - theta : theta;
}

double safe_acos(double x) { return std::acos(std::clamp(x, -1.0, 1.0)); }

} // namespace

double Quaternion::norm() const { return std::sqrt(dot(*this)); }

Quaternion operator*(const Quaternion& x, const Quaternion& y) {
    return {x.a * y.a - x.b * y.b - x.c * y.c - x.d * y.d,
            x.a * y.b + x.b * y.a + x.c * y.d - x.d * y.c,
            x.a * y.c - x.b * y.d + x.c * y.a + x.d * y.b,
            x.a * y.d + x.b * y.c - x.c * y.b + x.d * y.a};
}

Quaternion quat_mul(const Quaternion& x, const Quaternion& y) { return x * y; }

std::ostream& operator<<(std::ostream& os, const Quaternion& q) {
    return os << '(' << q.a << ", " << q.b << ", " << q.c << ", " << q.d << ')';
}

UnitQuaternion::UnitQuaternion(const Quaternion& q) : q_(q) {
    if (!(std::abs(q.norm() - 1.0) <= 1e-12)) {
        std::ostringstream msg;
        msg << "quaternion " << q << " is not unit (|q| = " << q.norm() << ')';
        throw PreconditionError(msg.str());
    }
}

UnitQuaternion UnitQuaternion::normalized(const Quaternion& q) {
    const double n = q.norm();
    if (!(n > 0.0)) throw ZeroVectorError("cannot normalize the zero quaternion");
    return trusted((1.0 / n) * q);
}

UnitQuaternion operator*(const UnitQuaternion& x, const UnitQuaternion& y) {
    // Renormalize so long products stay on S^3.
    return UnitQuaternion::normalized(x.q_ * y.q_);
}

double SpinPair::distance(const SpinPair& o) const {
    return std::max(left.distance(o.left), right.distance(o.right));
}

template <int N>
Rotation<N>::Rotation(const Matrix& m) : m_(m) {
    const double defect = orthogonality_defect(m);
    if (!(defect <= kRotationTolerance)) {
        std::ostringstream msg;
        msg << "matrix is not special-orthogonal (defect " << defect << ')';
        throw CoverError(msg.str());
    }
}

template <>
double Rotation<3>::angle_between(const Rotation& x, const Rotation& y) {
    const Eigen::Matrix3d rel = x.m_.transpose() * y.m_;
    return safe_acos(0.5 * (rel.trace() - 1.0));
}

template <>
double Rotation<4>::angle_between(const Rotation& x, const Rotation& y) {
    const SpinPair rel = spin4_preimage(Rotation(x.m_.transpose() * y.m_));
    const double alpha = safe_acos(rel.left.quaternion().a);
    const double beta = safe_acos(rel.right.quaternion().a);
    return std::max(fold_angle(alpha + beta), fold_angle(alpha - beta));
}

template class Rotation<3>;
template class Rotation<4>;

Eigen::Matrix4d left_mult_matrix(const Quaternion& q) {
    Eigen::Matrix4d m;
    for (int col = 0; col < 4; ++col) m.col(col) = (q * kBasis4[col]).vector();
    return m;
}

Eigen::Matrix4d right_mult_matrix(const Quaternion& q) {
    Eigen::Matrix4d m;
    for (int col = 0; col < 4; ++col) m.col(col) = (kBasis4[col] * q).vector();
    return m;
}

Rotation3 project_spin3(const UnitQuaternion& z) {
    const Quaternion& q = z.quaternion();
    Eigen::Matrix3d m;
    for (int col = 0; col < 3; ++col) {
        m.col(col) = (q * kBasis4[col + 1] * q.conj()).imaginary_part();
    }
    return Rotation3(m);
}

Rotation4 project_spin4(const SpinPair& p) {
    const Quaternion& zl = p.left.quaternion();
    const Quaternion zr_bar = p.right.quaternion().conj();
    Eigen::Matrix4d m;
    for (int col = 0; col < 4; ++col) m.col(col) = (zl * kBasis4[col] * zr_bar).vector();
    return Rotation4(m);
}

UnitQuaternion quat_exp(const Quaternion& w) {
    if (std::abs(w.a) > 1e-12) {
        throw PreconditionError("quat_exp expects an imaginary quaternion");
    }
    const double theta = w.norm();
    if (theta == 0.0) return UnitQuaternion{};
    const double s = std::sin(theta) / theta;
    return UnitQuaternion::normalized({std::cos(theta), s * w.b, s * w.c, s * w.d});
}

SpinPair spin4_preimage(const Rotation4& r) {
    // M = sum_ab p_a q_b L(e_a) R(conj e_b); the 16 basis matrices are
    // orthogonal with squared Frobenius norm 4, so K = p q^T is read off by
    // projection and then split at its largest entry.
    Eigen::Matrix4d k;
    for (int a = 0; a < 4; ++a) {
        const Eigen::Matrix4d la = left_mult_matrix(kBasis4[a]);
        for (int b = 0; b < 4; ++b) {
            const Eigen::Matrix4d basis = la * right_mult_matrix(kBasis4[b].conj());
            k(a, b) = 0.25 * (r.matrix().cwiseProduct(basis)).sum();
        }
    }
    Eigen::Index pa = 0;
    Eigen::Index pb = 0;
    k.cwiseAbs().maxCoeff(&pa, &pb);
    const Eigen::Vector4d p = k.col(pb).normalized();
    const Eigen::Vector4d q = k.transpose() * p;
    return {UnitQuaternion::normalized(Quaternion::from_vector(p)),
            UnitQuaternion::normalized(Quaternion::from_vector(q))};
}

UnitQuaternion spin3_preimage(const Rotation3& r) {
    Eigen::Matrix4d embedded = Eigen::Matrix4d::Identity();
    embedded.bottomRightCorner<3, 3>() = r.matrix();
    return spin4_preimage(Rotation4(embedded)).left;
}

namespace {

template <typename Rot, typename Spin, typename Project, typename Preimage, typename Align>
std::vector<Spin> lift_path(std::span<const Rot> frames, const Spin& base, Project project,
                            Preimage preimage, Align align) {
    std::vector<Spin> out;
    if (frames.empty()) return out;
    const double base_err = (project(base).matrix() - frames.front().matrix()).cwiseAbs().maxCoeff();
    if (base_err > 1e-6) {
        std::ostringstream msg;
        msg << "base does not cover the first frame (error " << base_err << ')';
        throw CoverError(msg.str());
    }
    out.reserve(frames.size());
    out.push_back(base);
    for (std::size_t i = 1; i < frames.size(); ++i) {
        const double step = Rot::angle_between(frames[i - 1], frames[i]);
        if (!(step < 0.5 * std::numbers::pi)) {
            std::ostringstream msg;
            msg << "frames " << i - 1 << " and " << i << " differ by angle " << step
                << " >= pi/2";
            throw DensityError(msg.str());
        }
        Spin next = preimage(frames[i]);
        if (align(next, out.back()) < 0.0) next = -next;
        out.push_back(next);
    }
    return out;
}

} // namespace

std::vector<UnitQuaternion> lift_path_spin3(std::span<const Rotation3> frames,
                                            const UnitQuaternion& base) {
    return lift_path(
        frames, base, [](const UnitQuaternion& z) { return project_spin3(z); },
        [](const Rotation3& r) { return spin3_preimage(r); },
        [](const UnitQuaternion& x, const UnitQuaternion& y) {
            return x.quaternion().dot(y.quaternion());
        });
}

std::vector<SpinPair> lift_path_spin4(std::span<const Rotation4> frames, const SpinPair& base) {
    return lift_path(
        frames, base, [](const SpinPair& z) { return project_spin4(z); },
        [](const Rotation4& r) { return spin4_preimage(r); },
        [](const SpinPair& x, const SpinPair& y) {
            return x.left.quaternion().dot(y.left.quaternion()) +
                   x.right.quaternion().dot(y.right.quaternion());
        });
}

} // namespace spherocurve
