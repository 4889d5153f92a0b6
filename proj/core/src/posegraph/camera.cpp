#include "echomap/posegraph/camera.hpp"

#include "echomap/errors.hpp"

namespace echomap::posegraph {

Eigen::Vector2d project_pinhole(const CameraModel& camera, const Eigen::Vector4d& point) {
    if (point.w() == 0.0)
        throw InvalidInputError("project_pinhole: point at infinity (w == 0)");
    const Eigen::Vector3d p_world = point.head<3>() / point.w();
    const Eigen::Vector3d p_cam = camera.extrinsics.apply(p_world);
    if (p_cam.z() <= 0.0)
        throw BehindCameraError("project_pinhole: point has nonpositive depth " +
                                std::to_string(p_cam.z()));
    const Eigen::Vector3d pixel = camera.intrinsics * (p_cam / p_cam.z());
    return pixel.head<2>();
}

} // namespace echomap::posegraph
