#pragma once

#include <array>

#include "tmdsim/vec3.hpp"

namespace tmdsim {

/// 3x3 orientation transform, row-major. Maps global-frame components to
/// nacelle-frame components: v_N = R * v_G. Valid instances are orthonormal
/// with determinant +1.
struct RotationMatrix {
  std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

  double operator()(int row, int col) const { return m[3 * row + col]; }
  double& operator()(int row, int col) { return m[3 * row + col]; }

  static RotationMatrix identity() { return {}; }

  /// R * v
  Vec3 rotate(const Vec3& v) const {
    return {m[0] * v.x + m[1] * v.y + m[2] * v.z,
            m[3] * v.x + m[4] * v.y + m[5] * v.z,
            m[6] * v.x + m[7] * v.y + m[8] * v.z};
  }

  /// R^T * v
  Vec3 rotate_transpose(const Vec3& v) const {
    return {m[0] * v.x + m[3] * v.y + m[6] * v.z,
            m[1] * v.x + m[4] * v.y + m[7] * v.z,
            m[2] * v.x + m[5] * v.y + m[8] * v.z};
  }

  RotationMatrix transposed() const {
    return {{m[0], m[3], m[6], m[1], m[4], m[7], m[2], m[5], m[8]}};
  }
};

RotationMatrix operator*(const RotationMatrix& a, const RotationMatrix& b);

/// Elementary rotations about the frame axes (right-handed, angle in rad).
RotationMatrix rot_x(double angle);
RotationMatrix rot_y(double angle);
RotationMatrix rot_z(double angle);

/// Rotation by `angle` about unit axis `n` (Rodrigues form).
RotationMatrix axis_angle(const Vec3& n, double angle);

double determinant(const RotationMatrix& r);

/// max |R^T R - I| over all entries.
double orthonormality_defect(const RotationMatrix& r);

/// One Gram-Schmidt pass over the rows; third row rebuilt as r0 x r1 so the
/// result has determinant +1.
RotationMatrix gram_schmidt(const RotationMatrix& r);

/// Accepts a user-supplied matrix: defect <= 1e-6 passes through, defect in
/// (1e-6, 1e-3] is repaired with one Gram-Schmidt pass, anything worse (or a
/// non-positive determinant) throws ValidationError. `context` names the
/// input in the error message.
RotationMatrix validate_rotation(const RotationMatrix& r, const char* context);

}  // namespace tmdsim
