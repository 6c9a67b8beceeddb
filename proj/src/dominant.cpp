#include "sie/dominant.hpp"

#include <cmath>

#include <Eigen/LU>

namespace sie {

double jacobi_p(int k, double a, double b, double t) {
  if (k == 0) return 1.0;
  double p0 = 1.0;
  double p1 = 0.5 * (a - b + (a + b + 2.0) * t);
  for (int m = 2; m <= k; ++m) {
    const double c = 2.0 * m + a + b;
    const double a1 = 2.0 * m * (m + a + b) * (c - 2.0);
    const double a2 = (c - 1.0) * (a * a - b * b);
    const double a3 = (c - 2.0) * (c - 1.0) * c;
    const double a4 = 2.0 * (m + a - 1.0) * (m + b - 1.0) * c;
    const double p2 = ((a2 + a3 * t) * p1 - a4 * p0) / a1;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

double cheb_t(int k, double t) {
  if (k == 0) return 1.0;
  double p0 = 1.0, p1 = t;
  for (int m = 2; m <= k; ++m) {
    const double p2 = 2.0 * t * p1 - p0;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

double cheb_u(int k, double t) {
  if (k == 0) return 1.0;
  double p0 = 1.0, p1 = 2.0 * t;
  for (int m = 2; m <= k; ++m) {
    const double p2 = 2.0 * t * p1 - p0;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

rvec nodes_index0(int n) {
  if (n < 0) fail(ErrorKind::invalid_input, "n must be non-negative");
  const int m = n + 1;
  auto P = [m](double t) { return jacobi_p(m, 0.5, -0.5, t); };
  // sample finely, bracket sign changes, bisect
  const int samples = 64 * (m + 1);
  rvec roots;
  double tl = -1.0, pl = P(tl);
  for (int i = 1; i <= samples; ++i) {
    const double tr = -std::cos(pi * i / samples);
    const double pr = P(tr);
    if (pl == 0.0) {
      roots.push_back(tl);
    } else if ((pl < 0) != (pr < 0) && pr != 0.0) {
      double lo = tl, hi = tr, plo = pl;
      for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double pm = P(mid);
        if ((pm < 0) == (plo < 0)) {
          lo = mid;
          plo = pm;
        } else {
          hi = mid;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    tl = tr;
    pl = pr;
  }
  if (static_cast<int>(roots.size()) != m) fail(ErrorKind::domain, "root bracketing failed");
  return rvec(roots.rbegin(), roots.rend());
}

rvec nodes_index1(int n) {
  rvec t(n);
  for (int k = 0; k < n; ++k) t[k] = std::cos((k + 1.0) * pi / (n + 1.0));
  return t;
}

double index0_symbol(int k) {
  if (k < 0) fail(ErrorKind::invalid_input, "polynomial degree must be non-negative");
  return 1.0;
}

WeightedSolution solve_index0(const SegmentDominantProblem& prob, int n) {
  if (prob.xi != SegmentIndex::zero) fail(ErrorKind::invalid_input, "solve_index0 needs index zero");
  WeightedSolution sol;
  sol.basis = WeightedBasis::jacobi_index0;
  sol.alpha = -0.5;
  sol.beta = 0.5;
  sol.nodes = nodes_index0(n);
  const int m = n + 1;
  Mat V(m, m);
  Vec F(m);
  sol.nodal.resize(m);
  for (int i = 0; i < m; ++i) {
    sol.nodal[i] = prob.f(sol.nodes[i]);
    F(i) = sol.nodal[i];
    for (int l = 0; l < m; ++l) V(i, l) = jacobi_p(l, 0.5, -0.5, sol.nodes[i]);
  }
  const Vec beta = Eigen::PartialPivLU<Mat>(V).solve(F);
  sol.coeffs.resize(m);
  for (int l = 0; l < m; ++l) sol.coeffs[l] = beta(l) / index0_symbol(l);
  return sol;
}

WeightedSolution solve_index1(const SegmentDominantProblem& prob, int n) {
  if (prob.xi != SegmentIndex::one) fail(ErrorKind::invalid_input, "solve_index1 needs index one");
  if (!std::isfinite(prob.p)) fail(ErrorKind::invalid_input, "side condition value must be finite");
  WeightedSolution sol;
  sol.basis = WeightedBasis::chebyshev_index1;
  sol.alpha = -0.5;
  sol.beta = -0.5;
  sol.nodes = nodes_index1(n);
  Mat V(n, n);
  Vec F(n);
  sol.nodal.resize(n);
  for (int i = 0; i < n; ++i) {
    sol.nodal[i] = prob.f(sol.nodes[i]);
    F(i) = sol.nodal[i];
    for (int l = 0; l < n; ++l) V(i, l) = cheb_u(l, sol.nodes[i]);
  }
  sol.coeffs.assign(n + 1, 0.0);
  sol.coeffs[0] = prob.p / pi;
  if (n > 0) {
    const Vec beta = Eigen::PartialPivLU<Mat>(V).solve(F);
    for (int l = 0; l < n; ++l) sol.coeffs[l + 1] = beta(l);
  }
  return sol;
}

WeightedSolution solve_dominant(const SegmentDominantProblem& prob, int n) {
  return prob.xi == SegmentIndex::zero ? solve_index0(prob, n) : solve_index1(prob, n);
}

cplx eval_smooth(const WeightedSolution& sol, double t) {
  const int m = static_cast<int>(sol.coeffs.size());
  if (m == 0) return 0.0;
  if (sol.basis == WeightedBasis::chebyshev_index1) {
    // Clenshaw for sum c_k T_k
    cplx b1 = 0.0, b2 = 0.0;
    for (int k = m - 1; k >= 1; --k) {
      const cplx b0 = sol.coeffs[k] + 2.0 * t * b1 - b2;
      b2 = b1;
      b1 = b0;
    }
    return sol.coeffs[0] + t * b1 - b2;
  }
  // one forward pass of the P^{(-1/2,1/2)} recurrence
  const double a = -0.5, b = 0.5;
  double p0 = 1.0, p1 = 0.5 * (a - b + (a + b + 2.0) * t);
  cplx acc = sol.coeffs[0] * p0;
  if (m > 1) acc += sol.coeffs[1] * p1;
  for (int k = 2; k < m; ++k) {
    const double c = 2.0 * k + a + b;
    const double p2 = (((c - 1.0) * (a * a - b * b) + (c - 2.0) * (c - 1.0) * c * t) * p1 -
                       2.0 * (k + a - 1.0) * (k + b - 1.0) * c * p0) /
                      (2.0 * k * (k + a + b) * (c - 2.0));
    acc += sol.coeffs[k] * p2;
    p0 = p1;
    p1 = p2;
  }
  return acc;
}

cplx eval(const WeightedSolution& sol, double t) {
  if (!(std::abs(t) < 1.0)) fail(ErrorKind::domain, "weighted solution evaluated outside (-1, 1)");
  return std::pow(1.0 - t, sol.alpha) * std::pow(1.0 + t, sol.beta) * eval_smooth(sol, t);
}

}  // namespace sie
