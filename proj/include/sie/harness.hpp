#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "sie/bisingular.hpp"
#include "sie/circle.hpp"
#include "sie/exceptional.hpp"
#include "sie/multidim.hpp"
#include "sie/nonlinear.hpp"
#include "sie/spline.hpp"

namespace sie {

enum class Family {
  circle_linear,
  circle_weak,
  dominant_segment,
  spline_segment,
  exceptional,
  nonlinear_circle,
  bisingular,
  multidim2d,
};

std::string to_string(Family f);
Family family_from_string(const std::string& s);

struct ManufacturedCase {
  Family family = Family::circle_linear;
  std::string name;
  double smoothness = 0.0;  // Holder exponent or spline degree
  // solve at size n; report.error is the grid-max error against x*
  std::function<SolveReport(int n)> solve;
  // max |f - K x*| at 64 random points, f recomputed with a tighter oracle
  std::function<double(std::uint64_t seed)> oracle_residual;
  // nodal solution with a, b (or G) and f perturbed by seeded box noise of size eps; empty when unsupported
  std::function<cvec(int n, double eps, std::uint64_t seed)> perturbed;
  // minimum Hadamard margin of the perturbed system; multidim only
  std::function<double(int n, double eps, std::uint64_t seed)> perturbed_margin;
};

// default manufactured problems; f = K x* by oracle quadrature, x* returned through exact
SegmentProblem spline_default_problem(std::function<cplx(double)>* exact = nullptr);
// circle: functions of the angle; segment: x* vanishes at the endpoints
ExceptionalProblem exceptional_default_problem(Geometry g, std::function<cplx(double)>* exact = nullptr);
// quadratic nonlinearity of size 0.05
NonlinearCircleProblem nonlinear_default_problem(std::function<cplx(cplx)>* exact = nullptr);
BisingularProblem bisingular_default_problem(std::function<cplx(cplx, cplx)>* exact = nullptr);
// x* vanishes on the boundary of [-1, 1]^2
Problem2D multidim_default_problem(const std::string& characteristic = "sin2", double b = 0.1,
                                   std::function<cplx(double, double)>* exact = nullptr);

// |sin(s/2)|^alpha (1 + 0.3 e^{is} + 0.2 e^{-2is}) on the circle, scaled
ManufacturedCase circle_case(double alpha = 0.75, double eta = 0.0, CircleScheme scheme = CircleScheme::basic,
                             double scale = 1.0);
ManufacturedCase dominant_segment_case(int k = 3, double p = 0.7);
ManufacturedCase spline_segment_case(int r = 2);
ManufacturedCase exceptional_case(Geometry g = Geometry::circle);
ManufacturedCase nonlinear_circle_case(NonlinearScheme s = NonlinearScheme::scheme1);
ManufacturedCase bisingular_case();
ManufacturedCase multidim_case(const std::string& characteristic = "sin2", double b = 0.1);
ManufacturedCase make_case(Family f);

// uniform box noise in [-1, 1] + i[-1, 1], a deterministic function of its arguments
cplx box_noise(std::uint64_t seed, int channel, double u, double v = 0.0);

struct ConvergenceReport {
  std::string name;
  std::vector<int> ns;
  rvec errors;
  double order = 0.0;
  bool order_fitted = false;  // skipped when every error is at roundoff
  bool monotone = true;       // each error at most twice the previous one
  std::string failure;        // non-empty when a solve aborted the run
};

struct StabilityReport {
  std::string name;
  int n = 0;
  rvec eps, deviations, ratios;
  std::vector<std::string> failures;  // per eps, empty on success
  rvec margins;                       // multidim only
  double base_margin = 0.0;
  double zero_deviation = 0.0;
  double spread = 0.0;  // max ratio / min ratio
  bool stable = false;
};

// least-squares slope of -log e against log n
double fitted_order(const std::vector<int>& ns, const rvec& errors);

ConvergenceReport run_convergence(const ManufacturedCase& c, const std::vector<int>& ns);
StabilityReport run_stability(const ManufacturedCase& c, int n, const rvec& eps, std::uint64_t seed = 7);

}  // namespace sie
