#include "disasm/metrics.hpp"

#include "helpers.hpp"

#include <doctest.h>

using namespace disasm;

TEST_CASE("pose_deviation hand-computed values") {
  PoseSample init{0.0, Vec3::Zero(), Quat::Identity()};

  // 3-4-5 translation
  PoseSample moved{1.0, Vec3(0.03, 0.04, 0.0), Quat::Identity()};
  CHECK(pose_deviation(moved, init) == doctest::Approx(0.05).epsilon(1e-12));

  // pure 90 degree rotation
  PoseSample turned{1.0, Vec3::Zero(), Quat(Eigen::AngleAxisd(M_PI_2, Vec3::UnitZ()))};
  CHECK(pose_deviation(turned, init) == doctest::Approx(M_PI_2).epsilon(1e-12));

  // combined case sums the two terms
  PoseSample both{1.0, Vec3(0.03, 0.04, 0.0), turned.orientation};
  CHECK(pose_deviation(both, init) == doctest::Approx(0.05 + M_PI_2).epsilon(1e-12));
}

TEST_CASE("quaternion_angle folds the double cover") {
  std::mt19937_64 rng(37);
  for (int i = 0; i < 10000; ++i) {
    Quat a = random_quat(rng);
    Quat b = random_quat(rng);
    double angle = quaternion_angle(a, b);
    CHECK(angle >= 0.0);
    CHECK(angle <= M_PI + 1e-12);
    Quat neg_a(-a.w(), -a.x(), -a.y(), -a.z());
    CHECK(quaternion_angle(neg_a, b) == angle);
    CHECK(quaternion_angle(b, a) == angle);
  }
  CHECK(quaternion_angle(Quat::Identity(), Quat::Identity()) == 0.0);
  CHECK_THROWS_AS(quaternion_angle(Quat(2.0, 0.0, 0.0, 0.0), Quat::Identity()), ValidationError);
}

TEST_CASE("normalize_timeline rescales onto 16 s with 0.1 s samples") {
  // linear motion recorded over [2, 10] s
  std::vector<PoseSample> series;
  for (int i = 0; i <= 80; ++i) {
    double t = 2.0 + 0.1 * i;
    series.push_back({t, Vec3(0.01 * i, 0.0, 0.0), Quat::Identity()});
  }
  auto norm = normalize_timeline(series);
  REQUIRE(norm.size() == 161);
  CHECK(norm.front().t == 0.0);
  CHECK(norm.back().t == 16.0);
  CHECK(norm.front().position.isApprox(series.front().position, 1e-12));
  CHECK(norm.back().position.isApprox(series.back().position, 1e-12));
  // a linear profile stays linear under the affine rescale
  for (std::size_t k = 0; k < norm.size(); ++k) {
    double expected_x = 0.8 * (norm[k].t / 16.0);
    CHECK(norm[k].position.x() == doctest::Approx(expected_x).epsilon(1e-9));
  }
}

TEST_CASE("normalize_timeline interpolates orientation spherically") {
  Quat q0 = Quat::Identity();
  Quat q1(Eigen::AngleAxisd(1.0, Vec3::UnitZ()));
  std::vector<PoseSample> series{{0.0, Vec3::Zero(), q0}, {4.0, Vec3::Zero(), q1}};
  auto norm = normalize_timeline(series);
  REQUIRE(norm.size() == 161);
  for (const PoseSample& s : norm) {
    double expected_angle = s.t / 16.0;  // constant angular velocity
    CHECK(quaternion_angle(s.orientation, q0) == doctest::Approx(expected_angle).epsilon(1e-9));
  }
}

TEST_CASE("normalize_timeline validates the series") {
  CHECK_THROWS_AS(normalize_timeline({}), ValidationError);
  CHECK_THROWS_AS(normalize_timeline({{1.0, Vec3::Zero(), Quat::Identity()}}), ValidationError);
  std::vector<PoseSample> flat{{1.0, Vec3::Zero(), Quat::Identity()},
                               {1.0, Vec3::Zero(), Quat::Identity()}};
  CHECK_THROWS_AS(normalize_timeline(flat), ValidationError);
}

TEST_CASE("success_rate") {
  CHECK(success_rate(std::vector<bool>{true, true, false, true}) == doctest::Approx(0.75));
  CHECK(success_rate(std::vector<bool>{false}) == 0.0);
  CHECK_THROWS_AS(success_rate(std::vector<bool>{}), ValidationError);
}
