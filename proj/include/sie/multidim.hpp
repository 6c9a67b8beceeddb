#pragma once

#include <functional>
#include <string>

#include "sie/circle.hpp"

namespace sie {

// angular density of the kernel phi(Theta)/r^2, Theta = (tau - t)/r at angle theta
struct Characteristic {
  std::string name;
  std::function<double(double)> phi;
  rvec zero_rays;
};

// validates zero mean (1e-10) and the declared zero rays (1e-12)
Characteristic make_characteristic(std::string name, std::function<double(double)> phi, rvec zero_rays);
// "cos2", "sin2", "cos3"
Characteristic characteristic(const std::string& name);

struct Rect {
  double x0 = 0.0, x1 = 0.0, y0 = 0.0, y1 = 0.0;
  double area() const { return (x1 - x0) * (y1 - y0); }
};

// int over the rectangle of phi(Theta)/r^2 d tau; principal value when (tx, ty) is inside
double panel_coeff(double tx, double ty, const Rect& panel, const Characteristic& ch);

// tensor Gauss cubature with dyadic refinement toward the target; target outside the panel
double panel_coeff_cubature(double tx, double ty, const Rect& panel, const Characteristic& ch, double rel_tol = 1e-10);

struct Grid2D {
  int N = 0;
  double A = 1.0;
  double h = 0.0;    // cell width 2A/(N+2)
  rvec t;            // t_0 .. t_{N+2}
  double h1 = 0.0, h2 = 0.0;

  std::pair<double, double> interval(int k) const;  // merged 1-D interval of unknown k = 1..N
  Rect merged(int k, int l) const;                   // bar Delta_kl
  Rect square(int k, int l) const;                   // Delta_kl
  double node_x(int k) const { return t[k] + h1; }
  double node_y(int l) const { return t[l] + h2; }
  int index(int k, int l) const { return (k - 1) * N + (l - 1); }
};

Grid2D build_grid(int N, double A, double h1, double h2);

struct Problem2D {
  std::function<cplx(double, double)> a, b, f;
  Characteristic ch;
  std::function<cplx(double, double, double, double)> h;  // optional Fredholm kernel
};

DenseSystem assemble_grid(const Problem2D& p, const Grid2D& g, Exec exec = Exec::parallel);

struct ShiftChoice {
  double h1 = 0.0, h2 = 0.0;
  DominanceReport dominance;
  bool feasible = false;
  int tried = 0;
};

// centre first, then a 16 x 16 lattice of interior shifts in row-major order
ShiftChoice tune_shift(const Problem2D& p, int N, double A, double M = 0.0);

struct Solution2D {
  Grid2D grid;
  cvec x;  // x_kl at index(k, l)
  SolveReport report;
  int sweeps = 0;
  cplx operator()(double t1, double t2) const;
};

// tunes the shift when the grid has none (h1 <= 0)
Solution2D assemble_solve(const Problem2D& p, int N, double A = 1.0, double h1 = 0.0, double h2 = 0.0);
Solution2D assemble_solve(const Problem2D& p, const Grid2D& g);
Solution2D parallel_solve(const Problem2D& p, const Grid2D& g, int P, double tol = 1e-12);

// a x + b PV int_G phi x / r^2 + int_G h x at the point t, by polar quadrature
cplx apply_operator(const Problem2D& p, double A, const std::function<cplx(double, double)>& x, double t1,
                    double t2);

struct SplineParams2D {
  int N = 8;
  int r = 1;
  double A = 1.0;
  double q1 = 1.0, q2 = 1.0;
  double h = 0.0;  // zero requests halving from the largest admissible value
};

struct SplineSolution2D {
  SplineParams2D params;
  Grid2D grid;
  rvec nodes;  // t_k^i per axis, index (k-1) r + (i-1)
  cvec x;      // unknown (I, J) at I * N r + J
  SolveReport report;
  cplx operator()(double t1, double t2) const;
};

DenseSystem assemble_spline(const Problem2D& p, const SplineParams2D& prm, Exec exec = Exec::parallel);
SplineSolution2D solve_spline(const Problem2D& p, SplineParams2D prm,
                              const std::function<cplx(double, double)>& exact = {});

}  // namespace sie
