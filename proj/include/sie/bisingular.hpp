#pragma once

#include <array>
#include <functional>
#include <string>

#include "sie/circle.hpp"

namespace sie {

// sum_{|k|,|l| <= n} c_kl t1^k t2^l on the torus; samples are matrices with
// row p at s1 = 2 pi p/(2n+1) and column q at s2 = 2 pi q/(2n+1)
struct TrigPoly2D {
  int n = 0;
  Mat c;  // c(k + n, l + n)

  TrigPoly2D() : c(Mat::Zero(1, 1)) {}
  explicit TrigPoly2D(int degree) : n(degree), c(Mat::Zero(2 * degree + 1, 2 * degree + 1)) {}

  cplx coef(int k, int l) const { return (std::abs(k) > n || std::abs(l) > n) ? cplx{} : c(k + n, l + n); }
  cplx& coef(int k, int l) { return c(k + n, l + n); }
  cplx operator()(double s1, double s2) const;
};

rvec torus_angles(int n);
TrigPoly2D interpolate2d(const Mat& samples);
TrigPoly2D interpolate2d(const std::function<cplx(cplx, cplx)>& f, int n);
Mat evaluate2d(const TrigPoly2D& p, int n_grid);  // on the plain grid of size 2 n_grid + 1
Mat sample2d(const std::function<cplx(cplx, cplx)>& f, int n);

TrigPoly2D cauchy1(const TrigPoly2D& p);
TrigPoly2D cauchy2(const TrigPoly2D& p);
TrigPoly2D cauchy12(const TrigPoly2D& p);

// x = X++ - X+- - X-+ + X--  and  S12 x = X++ + X+- + X-+ + X--
struct QuadrantSplit {
  TrigPoly2D pp, pm, mp, mm;
  TrigPoly2D recombine() const;
  TrigPoly2D s12() const;
};

QuadrantSplit quadrant_split(const TrigPoly2D& p);

struct FactorData2D {
  int m = 0;
  TrigPoly2D pp, pm, mp, mm;  // psi^{++}, psi^{+-}, psi^{-+}, psi^{--}
  int kappa1 = 0, kappa2 = 0;
  double residual = 0.0;  // max |psi++ psi-- - G psi+- psi-+| on the half-step grid
};

FactorData2D factorize(const Mat& G_samples);
FactorData2D factorize(const std::function<cplx(cplx, cplx)>& G, int m);

// a x + d S12 x + U12(h x) = f
struct BisingularProblem {
  std::function<cplx(cplx, cplx)> a, d, f;
  std::function<cplx(cplx, cplx, cplx, cplx)> h;  // empty means zero
};

std::function<cplx(cplx, cplx)> riemann_coefficient(const BisingularProblem& p);  // (a - d)/(a + d)

DenseSystem assemble_collocation(const BisingularProblem& p, const FactorData2D& factor, int n,
                                 Exec exec = Exec::parallel);

struct BisingularSolution {
  int n = 0;
  TrigPoly2D alpha;  // alpha_kl in the layout of the coefficients
  Mat nodal;         // x at the collocation grid
  FactorData2D factor;
  SolveReport report;
  cplx operator()(double s1, double s2) const;
};

// m <= 0 picks 2n for the factorization degree
BisingularSolution solve_collocation(const BisingularProblem& p, int n, int m = 0);

struct Disk {
  cplx center{0.0};
  double radius = 0.0;
};
Disk min_enclosing_disk(std::vector<cplx> pts, std::uint64_t seed = 5);

struct IterationConfig {
  int n = 12;              // grid of (2n+1)^2 nodes
  cplx alpha{0.0};         // zero requests the automatic choice
  double tol = 1e-12;
  int max_iter = 1000;
};

struct IterationResult {
  Mat nodal;     // solution samples
  TrigPoly2D x;
  rvec history;  // discrete L2 norms of successive updates
  rvec ratios;
  double q = 0.0;
  cplx alpha{0.0};
  Disk disk;
  int iterations = 0;
  bool converged = false;
};

// psi_{k+1} = (alpha G - 1)(psi^{+-} + psi^{-+}) + f/(a + d); the compact term is not included
IterationResult riemann_iterate(const BisingularProblem& p, const IterationConfig& cfg);

// a x + b S1 x + c S2 x + d S12 x = f
struct FourTermProblem {
  std::function<cplx(cplx, cplx)> a, b, c, d, f;
};

// Riemann coefficients a1, b1, c1, d1 of the quadrant form
std::array<std::function<cplx(cplx, cplx)>, 4> four_term_coefficients(const FourTermProblem& p);

struct FourTermConfig {
  int n = 12;
  std::array<cplx, 4> scale{};  // alpha, beta, gamma, delta; zeros request automatic choice
  double tol = 1e-12;
  int max_iter = 1000;
};

struct FourTermResult {
  Mat nodal;
  TrigPoly2D x;
  rvec history, ratios;
  std::array<double, 4> q{};
  std::array<cplx, 4> scale{};
  int iterations = 0;
  bool converged = false;
};

FourTermResult four_term_iterate(const FourTermProblem& p, const FourTermConfig& cfg);

}  // namespace sie
