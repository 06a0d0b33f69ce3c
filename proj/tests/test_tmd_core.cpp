#include <string>

#include "doctest.h"
#include "support.hpp"
#include "tmdsim/errors.hpp"
#include "tmdsim/tmd_core.hpp"

using namespace tmdsim;
using tmdsim::test::kPi;
using tmdsim::test::Rng;

namespace {

NacelleMotionNacelleFrame level_static(double g = 9.81) {
  NacelleMotionNacelleFrame u;
  u.gravity = {0.0, 0.0, -g};
  return u;
}

TmdAxisParams stopped_axis() {
  TmdAxisParams a;
  a.stop_max = 1.0;
  a.stop_min = -1.0;
  a.stop_stiffness = 1e5;
  a.stop_damping = 1e3;
  return a;
}

}  // namespace

TEST_SUITE("tmd_core") {

TEST_CASE("config validation") {
  TmdConfig good = test::oscillator_config(1.0, 100.0, 2.0);
  CHECK_NOTHROW(validate(good));

  TmdConfig no_mass = good;
  no_mass.x_axis.mass = 0.0;
  CHECK_THROWS_WITH_AS(validate(no_mass),
                       doctest::Contains("TMD_X_M"), ValidationError);

  TmdConfig bad_stops = good;
  bad_stops.x_axis.stop_min = 0.5;
  bad_stops.x_axis.stop_max = -0.5;
  try {
    validate(bad_stops);
    FAIL("expected throw");
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("TMD_X_UWSP") != std::string::npos);
    CHECK(msg.find("TMD_X_DWSP") != std::string::npos);
  }

  TmdConfig bad_disp = good;
  bad_disp.y_axis.stop_min = -0.1;
  bad_disp.y_axis.stop_max = 0.1;
  bad_disp.y_axis.initial_disp = 0.2;
  CHECK_THROWS_WITH_AS(validate(bad_disp), doctest::Contains("TMD_Y_DSP"), ValidationError);

  TmdConfig bad_g = good;
  bad_g.gravity = -1.0;
  CHECK_THROWS_WITH_AS(validate(bad_g), doctest::Contains("GRAVITY"), ValidationError);
}

TEST_CASE("stop force branches") {
  const TmdAxisParams a = stopped_axis();
  CHECK(stop_force(0.0, 5.0, a) == 0.0);
  CHECK(stop_force(0.999, -3.0, a) == 0.0);
  // moving further out: spring + damper
  CHECK(stop_force(1.1, 1.0, a) == doctest::Approx(-11000.0));
  // moving back in: spring only, the damper must not drag the mass outward
  CHECK(stop_force(1.1, -0.5, a) == doctest::Approx(-10000.0));
  // at rest beyond the stop: spring only (closed comparison)
  CHECK(stop_force(1.1, 0.0, a) == doctest::Approx(-10000.0));
  // mirrored at the lower stop
  CHECK(stop_force(-1.1, -1.0, a) == doctest::Approx(11000.0));
  CHECK(stop_force(-1.1, 0.5, a) == doctest::Approx(10000.0));
  CHECK(stop_force(-1.1, 0.0, a) == doctest::Approx(10000.0));
}

TEST_CASE("stop force is continuous in position at the stops") {
  const TmdAxisParams a = stopped_axis();
  const double eps = 1e-9;
  for (double vel : {-2.0, 0.0, 2.0}) {
    const double outward = vel > 0.0 ? a.stop_damping * vel : 0.0;
    CHECK(std::abs(stop_force(1.0 + eps, vel, a)) <= a.stop_stiffness * eps + outward + 1e-9);
    CHECK(stop_force(1.0 - eps, vel, a) == 0.0);
  }
}

TEST_CASE("state derivative reduces to the plain oscillator") {
  const TmdConfig cfg = test::oscillator_config(1.0, 100.0, 0.0);
  const TmdDerivative d = state_derivative({1.0, 0.0, 0.0, 0.0}, level_static(), cfg, {});
  CHECK(d.x_acc == doctest::Approx(-100.0));
  CHECK(d.x_dot == 0.0);
  CHECK(d.y_acc == 0.0);
}

TEST_CASE("constant yaw rate softens the spring") {
  const TmdConfig cfg = test::oscillator_config(1.0, 100.0, 0.0);
  NacelleMotionNacelleFrame u = level_static();
  u.omega = {0.0, 0.0, 1.0};
  const TmdDerivative d = state_derivative({1.0, 0.0, 0.0, 0.0}, u, cfg, {});
  CHECK(d.x_acc == doctest::Approx(-99.0));
}

TEST_CASE("pitched nacelle drives the fore-aft mass by gravity") {
  const TmdConfig cfg = test::oscillator_config(1.0, 100.0, 0.0);
  NacelleMotionNacelleFrame u;
  u.gravity = {-9.81, 0.0, 0.0};
  const TmdDerivative d = state_derivative({0.0, 0.0, 0.0, 0.0}, u, cfg, {});
  CHECK(d.x_acc == doctest::Approx(-9.81));
}

TEST_CASE("disabled axis holds zero rates") {
  TmdConfig cfg = test::oscillator_config(1.0, 100.0, 2.0);
  cfg.x_axis.dof_enabled = false;
  const TmdDerivative d = state_derivative({0.5, 1.0, 0.0, 0.0}, level_static(), cfg, {});
  CHECK(d.x_dot == 0.0);
  CHECK(d.x_acc == 0.0);
}

TEST_CASE("constraint forces: static, Coriolis and Euler terms") {
  TmdConfig cfg = test::oscillator_config(1.0, 100.0, 0.0);

  // stationary level nacelle: the track carries the weight
  ConstraintForces f = constraint_forces({1.0, 0.0, 0.0, 0.0}, level_static(), cfg);
  CHECK(f.fy_tmdx == doctest::Approx(0.0));
  CHECK(f.fz_tmdx == doctest::Approx(9.81));

  // pure yaw rate with track speed: Coriolis reaction only
  NacelleMotionNacelleFrame u = level_static();
  u.gravity = {};
  u.omega = {0.0, 0.0, 2.0};
  f = constraint_forces({0.0, 1.0, 0.0, 0.0}, u, cfg);
  CHECK(f.fy_tmdx == doctest::Approx(4.0));
  CHECK(f.fz_tmdx == doctest::Approx(0.0));

  // pure yaw acceleration with offset: Euler reaction only
  NacelleMotionNacelleFrame ua;
  ua.alpha = {0.0, 0.0, 3.0};
  f = constraint_forces({2.0, 0.0, 0.0, 0.0}, ua, cfg);
  CHECK(f.fy_tmdx == doctest::Approx(6.0));
  CHECK(f.fz_tmdx == doctest::Approx(0.0));
}

TEST_CASE("static output loads carry both weights with no lever arm") {
  TmdConfig cfg = test::oscillator_config(1.0, 100.0, 0.0);
  cfg.y_axis = cfg.x_axis;
  const LoadOutput out =
      output_loads({0, 0, 0, 0}, level_static(), RotationMatrix::identity(), cfg, {});
  CHECK(out.force_G.x == doctest::Approx(0.0));
  CHECK(out.force_G.y == doctest::Approx(0.0));
  CHECK(out.force_G.z == doctest::Approx(-19.62));
  CHECK(norm(out.moment_G) == doctest::Approx(0.0));
}

TEST_CASE("offset fore-aft mass produces a pitch moment") {
  const TmdConfig cfg = test::oscillator_config(1.0, 0.0, 0.0);
  const LoadOutput out =
      output_loads({1.0, 0, 0, 0}, level_static(), RotationMatrix::identity(), cfg, {});
  CHECK(out.moment_G.x == doctest::Approx(0.0));
  CHECK(out.moment_G.y == doctest::Approx(9.81));
  CHECK(out.moment_G.z == doctest::Approx(0.0));
}

TEST_CASE("static weight transfers straight down for a pitched nacelle") {
  // spring stretched to balance the gravity component along the track
  const double m = 2.0, k = 50.0, g = 9.81;
  const TmdConfig cfg = test::oscillator_config(m, k, 0.0);
  const RotationMatrix r = rot_y(kPi / 2.0);
  NacelleMotionSample s;
  s.R_NG = r;
  const NacelleMotionNacelleFrame u = nacelle_frame_inputs(s, g);
  const double x_eq = -m * g / k;
  CHECK(state_derivative({x_eq, 0, 0, 0}, u, cfg, {}).x_acc == doctest::Approx(0.0));
  const LoadOutput out = output_loads({x_eq, 0, 0, 0}, u, r, cfg, {});
  CHECK(out.force_G.x == doctest::Approx(0.0));
  CHECK(out.force_G.y == doctest::Approx(0.0));
  CHECK(out.force_G.z == doctest::Approx(-m * g));
}

TEST_CASE("disabled axis contributes nothing to the outputs") {
  TmdConfig both = test::oscillator_config(1.0, 100.0, 2.0);
  both.y_axis = both.x_axis;
  both.y_axis.dof_enabled = false;
  both.y_axis.mass = 0.0;

  TmdConfig only_x = both;
  only_x.y_axis = TmdAxisParams{};

  Rng rng(42);
  for (int i = 0; i < 50; ++i) {
    const TmdState s{rng.uniform(-1, 1), rng.uniform(-2, 2), rng.uniform(-1, 1),
                     rng.uniform(-2, 2)};
    NacelleMotionNacelleFrame u;
    u.accel_P = rng.vec3(-3, 3);
    u.omega = rng.vec3(-2, 2);
    u.alpha = rng.vec3(-1, 1);
    u.gravity = rng.vec3(-10, 10);
    const RotationMatrix r = rng.rotation();
    const LoadOutput a = output_loads(s, u, r, both, {});
    const LoadOutput b = output_loads(s, u, r, only_x, {});
    CHECK(norm_inf(a.force_G - b.force_G) == 0.0);
    CHECK(norm_inf(a.moment_G - b.moment_G) == 0.0);
    CHECK(a.constraints.fx_tmdy == 0.0);
    CHECK(a.constraints.fz_tmdy == 0.0);
    CHECK(a.stop_fy == 0.0);
  }
}

TEST_CASE("active force gating") {
  const ExternalForce cmd{5.0, -2.0};
  const ExternalForce passive = active_force(ControlMode::passive, cmd);
  CHECK(passive.f_x == 0.0);
  CHECK(passive.f_y == 0.0);
  const ExternalForce act = active_force(ControlMode::active, cmd);
  CHECK(act.f_x == 5.0);
  CHECK(act.f_y == -2.0);
  const ExternalForce zero = active_force(ControlMode::active, {});
  CHECK(zero.f_x == 0.0);
}

TEST_CASE("actuator command reacts on the nacelle") {
  TmdConfig cfg = test::oscillator_config(1.0, 100.0, 0.0);
  cfg.control_mode = ControlMode::active;
  const ExternalForce f{5.0, 0.0};
  const LoadOutput out =
      output_loads({0, 0, 0, 0}, level_static(), RotationMatrix::identity(), cfg, f);
  CHECK(out.force_G.x == doctest::Approx(-5.0));
}

TEST_CASE("matrix form matches the specialized derivative") {
  Rng rng(9001);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    TmdConfig cfg = test::oscillator_config(rng.uniform(0.5, 50), rng.uniform(0, 5000),
                                            rng.uniform(0, 100));
    cfg.y_axis.dof_enabled = true;
    cfg.y_axis.mass = rng.uniform(0.5, 50);
    cfg.y_axis.stiffness = rng.uniform(0, 5000);
    cfg.y_axis.damping = rng.uniform(0, 100);
    if (i % 3 == 0) {
      // engage the stops on some draws
      cfg.x_axis.stop_max = 0.5;
      cfg.x_axis.stop_min = -0.5;
      cfg.x_axis.stop_stiffness = 1e4;
      cfg.x_axis.stop_damping = 100.0;
    }
    if (i % 5 == 0) cfg.y_axis.dof_enabled = false;
    cfg.control_mode = ControlMode::active;

    const TmdState s{rng.uniform(-1, 1), rng.uniform(-3, 3), rng.uniform(-1, 1),
                     rng.uniform(-3, 3)};
    NacelleMotionNacelleFrame u;
    u.accel_P = rng.vec3(-5, 5);
    u.omega = rng.vec3(-3, 3);
    u.alpha = rng.vec3(-2, 2);
    u.gravity = rng.vec3(-10, 10);
    const ExternalForce f{rng.uniform(-10, 10), rng.uniform(-10, 10)};

    const TmdDerivative d = state_derivative(s, u, cfg, f);
    const StateMatrixForm form = state_matrix_form(s, u, cfg, f);
    const double sv[4] = {s.x, s.x_dot, s.y, s.y_dot};
    double rebuilt[4];
    for (int r = 0; r < 4; ++r) {
      rebuilt[r] = form.b[r];
      for (int c = 0; c < 4; ++c) rebuilt[r] += form.A[r][c] * sv[c];
    }
    worst = std::max(worst, std::abs(rebuilt[0] - d.x_dot));
    worst = std::max(worst, std::abs(rebuilt[1] - d.x_acc));
    worst = std::max(worst, std::abs(rebuilt[2] - d.y_dot));
    worst = std::max(worst, std::abs(rebuilt[3] - d.y_acc));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("output loads with identity rotation equal the nacelle-frame assembly") {
  Rng rng(77);
  for (int i = 0; i < 100; ++i) {
    TmdConfig cfg = test::oscillator_config(rng.uniform(0.5, 10), rng.uniform(10, 500),
                                            rng.uniform(0, 20));
    cfg.y_axis = cfg.x_axis;
    cfg.y_axis.stiffness *= 1.3;
    const TmdState s{rng.uniform(-1, 1), rng.uniform(-2, 2), rng.uniform(-1, 1),
                     rng.uniform(-2, 2)};
    NacelleMotionNacelleFrame u;
    u.accel_P = rng.vec3(-4, 4);
    u.omega = rng.vec3(-3, 3);
    u.alpha = rng.vec3(-2, 2);
    u.gravity = rng.vec3(-10, 10);

    const ConstraintForces cf = constraint_forces(s, u, cfg);
    const LoadOutput out = output_loads(s, u, RotationMatrix::identity(), cfg, {});
    const double fx = cfg.x_axis.stiffness * s.x + cfg.x_axis.damping * s.x_dot - cf.fx_tmdy;
    const double fy = cfg.y_axis.stiffness * s.y + cfg.y_axis.damping * s.y_dot - cf.fy_tmdx;
    const double fz = -cf.fz_tmdx - cf.fz_tmdy;
    CHECK(out.force_G.x == doctest::Approx(fx).epsilon(1e-12));
    CHECK(out.force_G.y == doctest::Approx(fy).epsilon(1e-12));
    CHECK(out.force_G.z == doctest::Approx(fz).epsilon(1e-12));
    CHECK(out.moment_G.x == doctest::Approx(-cf.fz_tmdy * s.y).epsilon(1e-12));
    CHECK(out.moment_G.y == doctest::Approx(cf.fz_tmdx * s.x).epsilon(1e-12));
    CHECK(out.moment_G.z ==
          doctest::Approx(-cf.fy_tmdx * s.x + cf.fx_tmdy * s.y).epsilon(1e-12));
  }
}

}  // TEST_SUITE
