#ifndef ECHOMAP_POSEGRAPH_CAMERA_HPP
#define ECHOMAP_POSEGRAPH_CAMERA_HPP

#include <Eigen/Core>

#include "echomap/posegraph/se3.hpp"

namespace echomap::posegraph {

struct CameraModel {
    Eigen::Matrix3d intrinsics = Eigen::Matrix3d::Identity(); // upper triangular
    Se3 extrinsics; // camera-from-world

    static CameraModel pinhole(double focal, double cx, double cy) {
        CameraModel cam;
        cam.intrinsics << focal, 0.0, cx, 0.0, focal, cy, 0.0, 0.0, 1.0;
        return cam;
    }
};

// Perspective projection of a homogeneous 3D point to pixel coordinates.
// Throws BehindCameraError when the point has nonpositive depth in the
// camera frame, InvalidInputError when w == 0.
Eigen::Vector2d project_pinhole(const CameraModel& camera, const Eigen::Vector4d& point);

} // namespace echomap::posegraph

#endif
