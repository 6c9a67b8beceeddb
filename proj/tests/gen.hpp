#pragma once

#include <cstdint>
#include <random>

#include "sie/trig.hpp"

namespace gen {

// seeded source for property tests
struct Gen {
  std::mt19937_64 rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}

  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
  int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); }
  sie::cplx complex(double r = 1.0) { return {uniform(-r, r), uniform(-r, r)}; }

  sie::TrigPoly poly(int n, double r = 1.0) {
    sie::TrigPoly p(n);
    for (auto& c : p.c) c = complex(r);
    return p;
  }
};

}  // namespace gen
