#pragma once

#include <functional>
#include <string>

#include "sie/linalg.hpp"
#include "sie/quadrature.hpp"
#include "sie/trig.hpp"

namespace sie {

using CircleFn = std::function<cplx(cplx)>;
using CircleKernel = std::function<cplx(cplx, cplx)>;

enum class KernelForm { weak, cauchy_full };
enum class CircleScheme { basic, optimal, full_kernel, full_kernel_unsplit };
enum class NormKind { holder_grid, l2_grid };

// a x + b S x + U(h |tau - t|^{-eta} x) = f   (weak)
// a x + S(h(t, tau) x(tau)) = f              (cauchy_full)
struct CircleProblem {
  CircleFn a, b, f;
  CircleKernel h;  // empty means zero
  WeakKernelSpec weak;
  KernelForm form = KernelForm::weak;
};

struct SolveReport {
  std::string scheme;
  int n = 0;
  double residual = 0.0;
  DominanceReport dominance;
  double solution_norm = 0.0;
  double error = -1.0;  // negative when no exact solution was supplied
  double parameter = 0.0;  // scheme-specific (shift, offset)
};

struct CircleSolution {
  TrigPoly x;
  cvec nodal;  // values at the plain nodes
  SolveReport report;
};

DenseSystem assemble_basic(const CircleProblem& p, int n, Exec exec = Exec::parallel);
DenseSystem assemble_optimal(const CircleProblem& p, int n, Exec exec = Exec::parallel);
DenseSystem assemble_full_kernel(const CircleProblem& p, int n, bool split = true, Exec exec = Exec::parallel);

CircleSolution solve(const CircleProblem& p, int n, CircleScheme scheme, NormKind norm = NormKind::holder_grid,
                     const std::function<cplx(double)>& exact = {});

// uniform-grid max or discrete quadratic mean of g on [0, 2pi)
double grid_norm(const std::function<cplx(double)>& g, NormKind kind, int points = 2048);

std::string to_string(CircleScheme s);
CircleScheme circle_scheme_from_string(const std::string& s);

}  // namespace sie
