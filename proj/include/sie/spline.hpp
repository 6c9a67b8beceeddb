#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "sie/circle.hpp"
#include "sie/newton.hpp"

namespace sie {

// a x + b int_{-1}^{1} x(tau)/(tau - t) d tau + int h(t, tau) x(tau) d tau = f
struct SegmentProblem {
  std::function<cplx(double)> a, b, f;
  std::function<cplx(double, double)> h;  // empty means zero
};

struct MeshParams {
  int n = 0;
  int r = 1;
  double h_star = 0.0;
  double q = 0.5;
  double M = 0.0;
};

struct SplineMesh {
  MeshParams params;
  double h = 0.0;                                 // panel width 2/n
  rvec t;                                         // panel endpoints, n+1
  rvec nodes;                                     // t_{kj}, index k r + j - 1
  std::vector<std::pair<double, double>> special; // Delta_{kj}
  rvec panel_nodes(int k) const;
};

SplineMesh build_mesh(const MeshParams& params);

// fundamental Lagrange polynomial on xs, index j
double lagrange(const rvec& xs, int j, double t);

// int over Delta_{kj} of (psi_{kj}(tau) - 1)/(tau - t_{kj})
double special_defect(const SplineMesh& mesh, int k, int j);

MeshParams tune_params(const SegmentProblem& p, int n, int r, double M);

DenseSystem assemble_linear(const SegmentProblem& p, const MeshParams& params, Exec exec = Exec::parallel);

struct SplineSolution {
  SplineMesh mesh;
  cvec nodal;
  SolveReport report;
  cplx operator()(double t) const;
};

SplineSolution solve_linear(const SegmentProblem& p, const MeshParams& params,
                            const std::function<cplx(double)>& exact = {});

// a(s) x + (1/2pi) int b(s, sigma, x) cot((sigma - s)/2) + int h(s, sigma, x) d sigma = f
struct HilbertNonlinearProblem {
  std::function<cplx(double)> a, f;
  std::function<cplx(double, double, cplx)> b, b_u, h, h_u;  // b, h may be empty
};

struct HilbertSolution {
  rvec nodes;  // s*_k
  cvec x;
  NewtonReport newton;
  double q = 0.0;            // sup over iterates of ||L^{-1}(K'(x_0) - K'(x_m))||
  double split_ratio = 0.0;  // ||D^{-1} E|| for the Jacobian at x_0
  DominanceReport dominance;
  double offset = 0.0;
};

Vec hilbert_residual(const HilbertNonlinearProblem& p, int n, double h_offset, const Vec& x);
Mat hilbert_jacobian(const HilbertNonlinearProblem& p, int n, double h_offset, const Vec& x);

HilbertSolution solve_nonlinear_hilbert(const HilbertNonlinearProblem& p, int n, double h_offset,
                                        const cvec& x0 = {}, NewtonConfig cfg = {NewtonMode::modified});

}  // namespace sie
