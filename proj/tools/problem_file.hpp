#pragma once

#include <string>

#include "json.hpp"
#include "sie/bisingular.hpp"
#include "sie/circle.hpp"
#include "sie/dominant.hpp"
#include "sie/exceptional.hpp"
#include "sie/multidim.hpp"
#include "sie/nonlinear.hpp"
#include "sie/spline.hpp"

namespace sie::cli {

using nlohmann::json;

// a function value is one of
//   2.5 | [re, im]                       constant
//   {"fourier":   [[k, re, im], ...]}     sum c_k t^k on the unit circle
//   {"chebyshev": [[k, re, im], ...]}     sum c_k T_k(t) on [-1, 1]
//   {"fourier2":  [[k, l, re, im], ...]}  sum c_kl t1^k t2^l on the torus
//   {"poly2":     [[i, j, re, im], ...]}  sum c_ij u^i v^j on the plane
cplx constant_value(const json& j);
std::function<cplx(cplx)> circle_fn(const json& j);
std::function<cplx(double)> angle_fn(const json& j);    // circle function at t = e^{is}
std::function<cplx(double)> segment_fn(const json& j);  // chebyshev or constant
std::function<cplx(cplx, cplx)> torus_fn(const json& j);
std::function<cplx(double, double)> plane_fn(const json& j);

json load_problem(const std::string& path);
// built-in problem for a subcommand, written in the same schema
json default_problem(const std::string& kind);

CircleProblem circle_problem(const json& j);
SegmentDominantProblem dominant_problem(const json& j);
SegmentProblem segment_problem(const json& j);
ExceptionalProblem exceptional_problem(const json& j);
// a(t, u) = sum_m a_m(t) u^m and h(t, tau, u) = sum_m h_m(t) u^m
NonlinearCircleProblem nonlinear_problem(const json& j);
BisingularProblem bisingular_problem(const json& j);
FourTermProblem four_term_problem(const json& j);
Problem2D multidim_problem(const json& j);

}  // namespace sie::cli
