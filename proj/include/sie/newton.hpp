#pragma once

#include <cstdint>
#include <functional>

#include "sie/common.hpp"

namespace sie {

struct NonlinearSystem {
  std::function<Vec(const Vec&)> residual;
  std::function<Mat(const Vec&)> jacobian;
};

enum class NewtonMode { basic, modified, right_inverse };

struct NewtonConfig {
  NewtonMode mode = NewtonMode::basic;
  int max_iter = 60;
  double tol = 1e-12;  // on ||K(x)||_inf
  int stagnation = 5;
  std::uint64_t seed = 7;
};

struct NewtonReport {
  double eta0 = 0.0;       // ||Gamma_0 K(x_0)||
  double B0 = 0.0;         // probe estimate of ||Gamma_0||
  double lipschitz = 0.0;  // sampled ||K'(x_1) - K'(x_0)|| / ||x_1 - x_0||
  double h = 0.0;          // B0 * lipschitz * eta0
  bool kantorovich_ok = false;
  rvec residuals;  // ||K(x_m)||_inf, m = 0, 1, ...
  rvec steps;      // ||x_{m+1} - x_m||_inf
  rvec ratios;     // steps[m+1] / steps[m]
  int iterations = 0;
  bool converged = false;
};

struct NewtonResult {
  Vec x;
  NewtonReport report;
};

NewtonResult newton_solve(const NonlinearSystem& sys, const Vec& x0, const NewtonConfig& cfg = {});

// infinity-norm estimate of a factored inverse from random probes
double inverse_norm_estimate(const std::function<Vec(const Vec&)>& apply_inverse, Eigen::Index dim,
                             std::uint64_t seed, int probes = 8);

double mat_inf_norm(const Mat& A);

}  // namespace sie
