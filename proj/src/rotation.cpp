#include "tmdsim/rotation.hpp"

#include <cmath>
#include <sstream>

#include "tmdsim/errors.hpp"

namespace tmdsim {

RotationMatrix operator*(const RotationMatrix& a, const RotationMatrix& b) {
  RotationMatrix out{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      out(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j) + a(i, 2) * b(2, j);
    }
  }
  return out;
}

RotationMatrix rot_x(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {{1, 0, 0, 0, c, -s, 0, s, c}};
}

RotationMatrix rot_y(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {{c, 0, s, 0, 1, 0, -s, 0, c}};
}

RotationMatrix rot_z(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {{c, -s, 0, s, c, 0, 0, 0, 1}};
}

RotationMatrix axis_angle(const Vec3& n, double angle) {
  const double c = std::cos(angle), s = std::sin(angle), k = 1.0 - c;
  return {{c + n.x * n.x * k,       n.x * n.y * k - n.z * s, n.x * n.z * k + n.y * s,
           n.y * n.x * k + n.z * s, c + n.y * n.y * k,       n.y * n.z * k - n.x * s,
           n.z * n.x * k - n.y * s, n.z * n.y * k + n.x * s, c + n.z * n.z * k}};
}

double determinant(const RotationMatrix& r) {
  return r(0, 0) * (r(1, 1) * r(2, 2) - r(1, 2) * r(2, 1)) -
         r(0, 1) * (r(1, 0) * r(2, 2) - r(1, 2) * r(2, 0)) +
         r(0, 2) * (r(1, 0) * r(2, 1) - r(1, 1) * r(2, 0));
}

double orthonormality_defect(const RotationMatrix& r) {
  double worst = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double g = r(0, i) * r(0, j) + r(1, i) * r(1, j) + r(2, i) * r(2, j);
      if (i == j) g -= 1.0;
      worst = std::max(worst, std::abs(g));
    }
  }
  return worst;
}

RotationMatrix gram_schmidt(const RotationMatrix& r) {
  Vec3 r0{r(0, 0), r(0, 1), r(0, 2)};
  Vec3 r1{r(1, 0), r(1, 1), r(1, 2)};
  r0 = r0 / norm(r0);
  r1 = r1 - dot(r1, r0) * r0;
  r1 = r1 / norm(r1);
  const Vec3 r2 = cross(r0, r1);
  return {{r0.x, r0.y, r0.z, r1.x, r1.y, r1.z, r2.x, r2.y, r2.z}};
}

RotationMatrix validate_rotation(const RotationMatrix& r, const char* context) {
  const double defect = orthonormality_defect(r);
  const double det = determinant(r);
  if (defect > 1e-3 || det <= 0.0 || !std::isfinite(defect)) {
    std::ostringstream msg;
    msg << context << ": rotation matrix is not orthonormal (defect " << defect
        << ", determinant " << det << ")";
    throw ValidationError(msg.str());
  }
  if (defect > 1e-6) {
    return gram_schmidt(r);
  }
  return r;
}

}  // namespace tmdsim
