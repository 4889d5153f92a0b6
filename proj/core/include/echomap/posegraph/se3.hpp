#ifndef ECHOMAP_POSEGRAPH_SE3_HPP
#define ECHOMAP_POSEGRAPH_SE3_HPP

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace echomap::posegraph {

using Twist = Eigen::Matrix<double, 6, 1>; // [translation; rotation]

// Rigid transform: x_out = rotation * x_in + translation.
struct Se3 {
    Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
    Eigen::Vector3d translation = Eigen::Vector3d::Zero();

    static Se3 identity() { return {}; }
    static Se3 from_quaternion(const Eigen::Quaterniond& q, const Eigen::Vector3d& t);

    Eigen::Quaterniond quaternion() const { return Eigen::Quaterniond(rotation); }
    Eigen::Matrix4d matrix() const;
    Eigen::Vector3d apply(const Eigen::Vector3d& p) const { return rotation * p + translation; }
};

// Homogeneous-matrix product a * b, re-orthonormalized.
Se3 compose(const Se3& a, const Se3& b);

// Inverse transform: compose(a, invert(a)) is the identity.
Se3 invert(const Se3& a);

// Snaps the rotation back onto SO(3) via a normalized quaternion round trip.
Se3 orthonormalized(const Se3& a);

bool is_valid_rotation(const Eigen::Matrix3d& rotation, double tolerance = 1e-9);

Eigen::Matrix3d skew(const Eigen::Vector3d& v);

Eigen::Matrix3d so3_exp(const Eigen::Vector3d& omega);
Eigen::Vector3d so3_log(const Eigen::Matrix3d& rotation);

Se3 se3_exp(const Twist& twist);
Twist se3_log(const Se3& transform);

// Absolute rotation angle in radians.
double rotation_angle(const Se3& transform);

// Linear translation / quaternion slerp blend, alpha in [0, 1].
Se3 interpolate(const Se3& a, const Se3& b, double alpha);

} // namespace echomap::posegraph

#endif
