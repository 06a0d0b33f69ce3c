#include "tmdsim/frames.hpp"

namespace tmdsim {

Vec3 rotate_to_nacelle(const RotationMatrix& r, const Vec3& v) { return r.rotate(v); }

Vec3 rotate_to_global(const RotationMatrix& r, const Vec3& v) { return r.rotate_transpose(v); }

Vec3 gravity_in_nacelle(const RotationMatrix& r, double g) {
  return r.rotate({0.0, 0.0, -g});
}

RotationMatrix euler_to_rotation(double theta, double phi, double psi) {
  return rot_x(theta) * rot_y(phi) * rot_z(psi);
}

NacelleMotionNacelleFrame nacelle_frame_inputs(const NacelleMotionSample& s, double g) {
  return {s.R_NG.rotate(s.accel_P_global), s.R_NG.rotate(s.omega_global),
          s.R_NG.rotate(s.alpha_global), gravity_in_nacelle(s.R_NG, g)};
}

}  // namespace tmdsim
