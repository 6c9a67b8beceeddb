#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "sie/newton.hpp"
#include "sie/trig.hpp"

namespace sie {

// a(t, x(t)) + (1/pi i) int h(t, tau, x(tau)) / (tau - t) d tau = f(t) on |t| = 1
struct NonlinearCircleProblem {
  std::function<cplx(cplx, cplx)> a, a_u;              // a(t, u)
  std::function<cplx(cplx, cplx, cplx)> h, h_u, h_uu;  // h(t, tau, u); derivatives may be empty
  std::function<cplx(cplx)> f;
  TrigPoly x0;  // zero polynomial when unset
};

enum class NonlinearScheme { scheme1, scheme2, scheme3 };

// missing u-derivatives are replaced by central differences in u
NonlinearCircleProblem with_derivatives(const NonlinearCircleProblem& p);

// largest relative deviation of the supplied derivatives from central differences
double derivative_mismatch(const NonlinearCircleProblem& p, std::uint64_t seed = 11, int points = 20);

// scheme 1: nodal values at s_j = 2 pi j / (2n+1), collocation at t_j
Vec residual_scheme1(const NonlinearCircleProblem& p, const Vec& x, int n, Exec exec = Exec::parallel);
Mat jacobian_scheme1(const NonlinearCircleProblem& p, const Vec& x, int n, Exec exec = Exec::parallel);

// scheme 2: alpha_k = x_n(s_k); a-term uses x_n at the shifted points
Vec residual_scheme2(const NonlinearCircleProblem& p, const Vec& alpha, int n, Exec exec = Exec::parallel);
Mat jacobian_scheme2(const NonlinearCircleProblem& p, const Vec& alpha, int n, Exec exec = Exec::parallel);

// scheme 3: interpolate h in tau on s_k, exact S, collocation at the shifted points
Vec residual_scheme3(const NonlinearCircleProblem& p, const Vec& x, int n, Exec exec = Exec::parallel);
Mat jacobian_scheme3(const NonlinearCircleProblem& p, const Vec& x, int n, Exec exec = Exec::parallel);

NonlinearSystem scheme_system(const NonlinearCircleProblem& p, int n, NonlinearScheme s);

struct NonlinearCircleSolution {
  NonlinearScheme scheme = NonlinearScheme::scheme1;
  int n = 0;
  Vec nodal;  // values at the plain nodes
  TrigPoly x;
  NewtonReport newton;
};

NonlinearCircleSolution solve_nonlinear_circle(const NonlinearCircleProblem& p, int n, NonlinearScheme s,
                                               const NewtonConfig& cfg = {});

struct DescentResult {
  Vec x;
  rvec residuals;  // discrete L2 norms of K_n x^m
  int iterations = 0;
  bool converged = false;
};

// x^{m+1} = x^m - (|r|^2 / |J_0 r|^2) J_0^* r with r = K_n x^m
DescentResult l2_descent(const NonlinearSystem& sys, const Vec& x0, double tol = 1e-10, int max_iter = 500);
DescentResult l2_descent(const NonlinearCircleProblem& p, int n, const Vec& x0,
                         NonlinearScheme s = NonlinearScheme::scheme3, double tol = 1e-10, int max_iter = 500);

std::string to_string(NonlinearScheme s);
NonlinearScheme nonlinear_scheme_from_string(const std::string& s);

}  // namespace sie
