#pragma once

#include "tmdsim/rotation.hpp"
#include "tmdsim/vec3.hpp"

namespace tmdsim {

/// One time sample of the prescribed nacelle motion, global-frame quantities.
struct NacelleMotionSample {
  double t = 0.0;             ///< s
  Vec3 accel_P_global{};      ///< nacelle origin linear acceleration, m/s^2
  RotationMatrix R_NG{};      ///< global -> nacelle orientation transform
  Vec3 omega_global{};        ///< nacelle angular velocity, rad/s
  Vec3 alpha_global{};        ///< nacelle angular acceleration, rad/s^2
};

/// The same inputs expressed in the nacelle frame, plus projected gravity.
/// omega components are the body rates about nacelle x, y, z.
struct NacelleMotionNacelleFrame {
  Vec3 accel_P{};   ///< m/s^2
  Vec3 omega{};     ///< rad/s, (roll, pitch, yaw) rates about nacelle axes
  Vec3 alpha{};     ///< rad/s^2
  Vec3 gravity{};   ///< gravitational acceleration seen in the nacelle frame
};

/// v_N = R * v_G
Vec3 rotate_to_nacelle(const RotationMatrix& r, const Vec3& v);

/// v_G = R^T * v_N
Vec3 rotate_to_global(const RotationMatrix& r, const Vec3& v);

/// Projects the global gravity vector (0, 0, -g) into the nacelle frame.
Vec3 gravity_in_nacelle(const RotationMatrix& r, double g);

/// Convenience constructor: R = rot_x(theta) * rot_y(phi) * rot_z(psi),
/// used directly as the global -> nacelle map. Input convenience only; the
/// dynamics always take angular velocity as a vector, which for large angles
/// is not the same as these angle rates.
RotationMatrix euler_to_rotation(double theta, double phi, double psi);

/// Rotates all global-frame inputs into the nacelle frame and projects
/// gravity for field strength g.
NacelleMotionNacelleFrame nacelle_frame_inputs(const NacelleMotionSample& s, double g);

}  // namespace tmdsim
