#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "sie/circle.hpp"

namespace sie {

// circle (angle s):  a x + (b/2pi) PV int x cot((sigma - s)/2) + int h(s, sigma) x d sigma = f
// segment / line:    a x + (b/pi) PV int x/(tau - t) + int h(t, tau) x d tau = f
struct ExceptionalProblem {
  std::function<cplx(double)> a, b, f;
  std::function<cplx(double, double)> h;  // empty means zero
};

enum class Geometry { circle, segment };

struct ShiftedScheme {
  int n = 0;
  double offset = 0.0;
  double lo = 0.0, width = 0.0;  // panel origin and width
  rvec s;                        // panel endpoints
  rvec star;                     // collocation nodes
};

struct ExceptionalSolution {
  ShiftedScheme scheme;
  cvec x;
  SolveReport report;
  double tail = 0.0;  // truncated-line rhs mass outside [-A, A]
  // polygon through the nodal values (periodic on the circle)
  cplx operator()(double t) const;
};

struct CorrectiveLine {
  double anchor = 0.0;
  cplx value{0.0};
  cplx slope{0.0};
  cplx operator()(double s) const { return value + slope * (s - anchor); }
  bool slope_bounded(double alpha, int n) const;
};

ShiftedScheme circle_scheme(int n, double h);
ShiftedScheme segment_scheme(int n, double h, double lo = -1.0, double width = 0.0);

DenseSystem assemble_circle_exceptional(const ExceptionalProblem& p, const ShiftedScheme& sc,
                                        Exec exec = Exec::parallel);
DenseSystem assemble_segment_exceptional(const ExceptionalProblem& p, const ShiftedScheme& sc,
                                         Exec exec = Exec::parallel);

// h <= 0 requests the geometric search
ExceptionalSolution solve_circle_exceptional(const ExceptionalProblem& p, int n, double h = 0.0,
                                             const std::function<cplx(double)>& exact = {});
ExceptionalSolution solve_segment_exceptional(const ExceptionalProblem& p, int n, double h = 0.0,
                                              const std::function<cplx(double)>& exact = {});

struct LineOptions {
  double A = 8.0;
  int N = 32;
  double h = 0.0;
  double tail_tol = 1e-2;
};

// x + (1/pi i) int_R x/(tau - t) = f by default (a = 1, b = -i)
ExceptionalProblem lavrentyev_line(std::function<cplx(double)> f);
ExceptionalSolution solve_line_truncated(const ExceptionalProblem& p, const LineOptions& opt);

// row j of the segment scheme: (interval, unknown index) pairs of the Cauchy sum
std::vector<std::pair<std::pair<double, double>, int>> segment_row_panels(const ShiftedScheme& sc, int j);
// parts of the segment not covered by row j
std::vector<std::pair<double, double>> segment_skipped(const ShiftedScheme& sc, int j);

// zero-moment line over the skipped panels of node j
CorrectiveLine corrective_line(int j, cplx value, int n, double h, Geometry g);
// the slope formulas as printed for the circle and the left-shifted segment node
cplx printed_circle_slope(cplx value, int n, double h);
cplx printed_segment_slope(cplx value, int n, double h);

std::string to_string(Geometry g);

}  // namespace sie
