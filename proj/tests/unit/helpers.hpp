#pragma once

#include "disasm/types.hpp"

#include <random>
#include <string>

inline std::string fixture(const std::string& rel) { return std::string(FIXTURES_DIR "/") + rel; }

inline disasm::Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  disasm::Vec3 v;
  do {
    v = disasm::Vec3(g(rng), g(rng), g(rng));
  } while (v.norm() < 1e-6);
  return v.normalized();
}

inline disasm::Quat random_quat(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  disasm::Quat q(g(rng), g(rng), g(rng), g(rng));
  while (q.norm() < 1e-6) q = disasm::Quat(g(rng), g(rng), g(rng), g(rng));
  q.normalize();
  return q;
}
