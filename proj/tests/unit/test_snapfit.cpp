#include "disasm/snapfit.hpp"

#include "helpers.hpp"

#include <doctest.h>

using namespace disasm;

namespace {

double oracle_cost(const Vec3& d, const std::vector<SnapFitHook>& hooks, double floor_cos) {
  double worst = 0.0;
  for (const SnapFitHook& h : hooks) {
    double freq = h.k_out * h.release_deflection / std::cos(h.theta);
    worst = std::max(worst, freq / std::max(d.dot(h.extraction_axis), floor_cos));
  }
  return worst;
}

// dense 1-degree latitude/longitude grid oracle for the direction search
double grid_min_cost(const std::vector<SnapFitHook>& hooks) {
  double best = std::numeric_limits<double>::infinity();
  for (int lat = 0; lat <= 180; ++lat) {
    double th = lat * M_PI / 180.0;
    for (int lon = 0; lon < 360; ++lon) {
      double ph = lon * M_PI / 180.0;
      Vec3 d(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th));
      best = std::min(best, oracle_cost(d, hooks, 1e-3));
    }
  }
  return best;
}

SnapFitHook hook_with(double theta, const Vec3& axis) {
  SnapFitHook h;
  h.theta = theta;
  h.extraction_axis = axis.normalized();
  return h;
}

}  // namespace

TEST_CASE("decompose_hook_force splits into cos/sin components") {
  SnapFitHook hook = hook_with(0.3, Vec3::UnitX());
  auto d = decompose_hook_force(hook, 10.0);
  CHECK(d.horizontal == doctest::Approx(9.55336489125606).epsilon(1e-12));
  CHECK(d.vertical == doctest::Approx(2.9552020666133956).epsilon(1e-12));

  // recomposition is exact for random inputs
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> uf(0.0, 200.0), ut(0.0, 1.5);
  for (int i = 0; i < 1000; ++i) {
    SnapFitHook h = hook_with(ut(rng), Vec3::UnitX());
    double f = uf(rng);
    auto split = decompose_hook_force(h, f);
    CHECK(std::hypot(split.horizontal, split.vertical) == doctest::Approx(f).epsilon(1e-12));
  }
  CHECK_THROWS_AS(decompose_hook_force(hook, -1.0), ValidationError);
}

TEST_CASE("required_extraction_force frozen values and singularity") {
  SnapFitHook hook = hook_with(0.0, Vec3::UnitX());  // k_out 1000, deflection 0.005
  CHECK(required_extraction_force(hook) == doctest::Approx(5.0).epsilon(1e-12));
  hook.theta = 0.3;
  CHECK(required_extraction_force(hook) == doctest::Approx(5.233758007690429).epsilon(1e-12));
  hook.theta = M_PI_2;
  CHECK_THROWS_AS(required_extraction_force(hook), ValidationError);
}

TEST_CASE("required_extraction_force strictly increases in theta") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> uk(100.0, 5000.0), ud(0.001, 0.02);
  for (int trial = 0; trial < 200; ++trial) {
    SnapFitHook hook = hook_with(0.0, Vec3::UnitX());
    hook.k_out = uk(rng);
    hook.release_deflection = ud(rng);
    double prev = -1.0;
    for (int i = 0; i <= 14; ++i) {
      hook.theta = 0.1 * i;
      double f = required_extraction_force(hook);
      CHECK(f > prev);
      prev = f;
    }
  }
}

TEST_CASE("hook validation") {
  SnapFitHook hook;
  hook.theta = -0.1;
  CHECK_THROWS_AS(hook.validate(), ValidationError);
  hook = SnapFitHook{};
  hook.extraction_axis = Vec3(1.0, 1.0, 0.0);  // not unit
  CHECK_THROWS_AS(hook.validate(), ValidationError);
  hook = SnapFitHook{};
  hook.release_deflection = 0.0;
  CHECK_THROWS_AS(hook.validate(), ValidationError);
}

TEST_CASE("direction search returns a shared axis exactly") {
  std::vector<SnapFitHook> hooks{hook_with(0.2, Vec3::UnitX()), hook_with(0.4, Vec3::UnitX()),
                                 hook_with(0.1, Vec3::UnitX())};
  Vec3 d = estimate_disassembly_direction(hooks);
  CHECK((d - Vec3::UnitX()).norm() == 0.0);  // hook axes are exact candidates

  Vec3 tilted = Vec3(1.0, 2.0, -0.5).normalized();
  for (auto& h : hooks) h.extraction_axis = tilted;
  CHECK((estimate_disassembly_direction(hooks) - tilted).norm() == 0.0);
}

TEST_CASE("direction search matches the dense grid oracle") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> ut(0.0, 1.2);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<SnapFitHook> hooks;
    for (int i = 0; i < 4; ++i) {
      SnapFitHook h = hook_with(ut(rng), random_unit(rng));
      // keep axes in a common hemisphere so a feasible pull exists
      if (h.extraction_axis.z() < 0.0) h.extraction_axis = -h.extraction_axis;
      hooks.push_back(h);
    }
    Vec3 d = estimate_disassembly_direction(hooks);
    CHECK(std::abs(d.norm() - 1.0) < 1e-9);
    double cost = oracle_cost(d, hooks, 1e-3);
    // never worse than the best 1-degree grid direction
    CHECK(cost <= grid_min_cost(hooks) * (1.0 + 1e-6));
  }
}

TEST_CASE("two orthogonal equal hooks pull along the bisector") {
  std::vector<SnapFitHook> hooks{hook_with(0.0, Vec3::UnitX()), hook_with(0.0, Vec3::UnitY())};
  Vec3 d = estimate_disassembly_direction(hooks);
  Vec3 bisector = Vec3(1.0, 1.0, 0.0).normalized();
  CHECK(oracle_cost(d, hooks, 1e-3) ==
        doctest::Approx(oracle_cost(bisector, hooks, 1e-3)).epsilon(1e-6));
  CHECK(d.dot(bisector) == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("direction search rejects empty input") {
  CHECK_THROWS_AS(estimate_disassembly_direction({}), ValidationError);
}
