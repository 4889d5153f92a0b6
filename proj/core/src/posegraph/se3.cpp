#include "echomap/posegraph/se3.hpp"

#include <cmath>
#include <numbers>

namespace echomap::posegraph {

Se3 Se3::from_quaternion(const Eigen::Quaterniond& q, const Eigen::Vector3d& t) {
    Se3 out;
    out.rotation = q.normalized().toRotationMatrix();
    out.translation = t;
    return out;
}

Eigen::Matrix4d Se3::matrix() const {
    Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
    m.topLeftCorner<3, 3>() = rotation;
    m.topRightCorner<3, 1>() = translation;
    return m;
}

Se3 orthonormalized(const Se3& a) {
    Se3 out;
    out.rotation = Eigen::Quaterniond(a.rotation).normalized().toRotationMatrix();
    out.translation = a.translation;
    return out;
}

Se3 compose(const Se3& a, const Se3& b) {
    Se3 out;
    out.rotation = a.rotation * b.rotation;
    out.translation = a.rotation * b.translation + a.translation;
    return orthonormalized(out);
}

Se3 invert(const Se3& a) {
    Se3 out;
    out.rotation = a.rotation.transpose();
    out.translation = -(out.rotation * a.translation);
    return out;
}

bool is_valid_rotation(const Eigen::Matrix3d& rotation, double tolerance) {
    const Eigen::Matrix3d should_be_identity = rotation.transpose() * rotation;
    if ((should_be_identity - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > tolerance)
        return false;
    return std::abs(rotation.determinant() - 1.0) <= tolerance;
}

Eigen::Matrix3d skew(const Eigen::Vector3d& v) {
    Eigen::Matrix3d m;
    m << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
    return m;
}

Eigen::Matrix3d so3_exp(const Eigen::Vector3d& omega) {
    const double theta = omega.norm();
    const Eigen::Matrix3d w = skew(omega);
    double a, b;
    if (theta < 1e-8) {
        // sin(t)/t and (1-cos(t))/t^2 by series
        a = 1.0 - theta * theta / 6.0;
        b = 0.5 - theta * theta / 24.0;
    } else {
        a = std::sin(theta) / theta;
        b = (1.0 - std::cos(theta)) / (theta * theta);
    }
    return Eigen::Matrix3d::Identity() + a * w + b * (w * w);
}

Eigen::Vector3d so3_log(const Eigen::Matrix3d& rotation) {
    const double cos_theta =
        std::clamp((rotation.trace() - 1.0) / 2.0, -1.0, 1.0);
    const double theta = std::acos(cos_theta);

    if (theta < 1e-8) {
        Eigen::Vector3d v(rotation(2, 1) - rotation(1, 2), rotation(0, 2) - rotation(2, 0),
                          rotation(1, 0) - rotation(0, 1));
        return 0.5 * v;
    }
    if (std::numbers::pi - theta < 1e-6) {
        // near pi the skew part vanishes; recover the axis from R + I
        const Eigen::Matrix3d m = rotation + Eigen::Matrix3d::Identity();
        int col = 0;
        m.colwise().norm().maxCoeff(&col);
        Eigen::Vector3d axis = m.col(col).normalized();
        // fix the sign so exp(log(R)) reproduces R's skew part
        Eigen::Vector3d v(rotation(2, 1) - rotation(1, 2), rotation(0, 2) - rotation(2, 0),
                          rotation(1, 0) - rotation(0, 1));
        if (axis.dot(v) < 0.0) axis = -axis;
        return theta * axis;
    }
    Eigen::Vector3d v(rotation(2, 1) - rotation(1, 2), rotation(0, 2) - rotation(2, 0),
                      rotation(1, 0) - rotation(0, 1));
    return theta / (2.0 * std::sin(theta)) * v;
}

namespace {

Eigen::Matrix3d left_jacobian(const Eigen::Vector3d& omega) {
    const double theta = omega.norm();
    const Eigen::Matrix3d w = skew(omega);
    double b, c;
    if (theta < 1e-8) {
        b = 0.5 - theta * theta / 24.0;
        c = 1.0 / 6.0 - theta * theta / 120.0;
    } else {
        b = (1.0 - std::cos(theta)) / (theta * theta);
        c = (theta - std::sin(theta)) / (theta * theta * theta);
    }
    return Eigen::Matrix3d::Identity() + b * w + c * (w * w);
}

Eigen::Matrix3d left_jacobian_inverse(const Eigen::Vector3d& omega) {
    const double theta = omega.norm();
    const Eigen::Matrix3d w = skew(omega);
    double c;
    if (theta < 1e-8) {
        c = 1.0 / 12.0 + theta * theta / 720.0;
    } else {
        c = 1.0 / (theta * theta) -
            (1.0 + std::cos(theta)) / (2.0 * theta * std::sin(theta));
    }
    return Eigen::Matrix3d::Identity() - 0.5 * w + c * (w * w);
}

} // namespace

Se3 se3_exp(const Twist& twist) {
    const Eigen::Vector3d rho = twist.head<3>();
    const Eigen::Vector3d omega = twist.tail<3>();
    Se3 out;
    out.rotation = so3_exp(omega);
    out.translation = left_jacobian(omega) * rho;
    return orthonormalized(out);
}

Twist se3_log(const Se3& transform) {
    const Eigen::Vector3d omega = so3_log(transform.rotation);
    Twist twist;
    twist.head<3>() = left_jacobian_inverse(omega) * transform.translation;
    twist.tail<3>() = omega;
    return twist;
}

double rotation_angle(const Se3& transform) {
    return so3_log(transform.rotation).norm();
}

Se3 interpolate(const Se3& a, const Se3& b, double alpha) {
    Se3 out;
    out.translation = (1.0 - alpha) * a.translation + alpha * b.translation;
    out.rotation = a.quaternion().slerp(alpha, b.quaternion()).toRotationMatrix();
    return out;
}

} // namespace echomap::posegraph
