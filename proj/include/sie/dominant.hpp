#pragma once

#include <functional>

#include "sie/common.hpp"

namespace sie {

// (1/pi) PV int_{-1}^{1} x(tau) / (tau - t) d tau = f(t), with int x = p for index one
enum class SegmentIndex { zero, one };

struct SegmentDominantProblem {
  std::function<cplx(double)> f;
  SegmentIndex xi = SegmentIndex::zero;
  double p = 0.0;
};

enum class WeightedBasis { jacobi_index0, chebyshev_index1 };

struct WeightedSolution {
  WeightedBasis basis = WeightedBasis::jacobi_index0;
  cvec coeffs;
  double alpha = -0.5, beta = 0.5;  // weight (1-t)^alpha (1+t)^beta
  rvec nodes;
  cvec nodal;  // f at the collocation nodes
};

// Jacobi P_k^{(a,b)}(t) by the three-term recurrence
double jacobi_p(int k, double a, double b, double t);
double cheb_t(int k, double t);
double cheb_u(int k, double t);

// roots of P_{n+1}^{(1/2,-1/2)}, decreasing
rvec nodes_index0(int n);
// zeros of U_n, decreasing: cos((k+1) pi / (n+1))
rvec nodes_index1(int n);

// S [w P_k^{(-1/2,1/2)}] = c_k P_k^{(1/2,-1/2)} with w = sqrt((1+t)/(1-t)); c_k = 1
double index0_symbol(int k);

WeightedSolution solve_index0(const SegmentDominantProblem& prob, int n);
WeightedSolution solve_index1(const SegmentDominantProblem& prob, int n);
WeightedSolution solve_dominant(const SegmentDominantProblem& prob, int n);

cplx eval(const WeightedSolution& sol, double t);
// polynomial part only (no weight)
cplx eval_smooth(const WeightedSolution& sol, double t);

}  // namespace sie
