#pragma once

#include <functional>
#include <utility>

#include "sie/common.hpp"

namespace sie {

// Trigonometric polynomial sum_{k=-n..n} c_k t^k with t = e^{is}.
struct TrigPoly {
  int n = 0;
  cvec c;  // c[k + n]

  TrigPoly() : c(1, 0.0) {}
  explicit TrigPoly(int degree) : n(degree), c(2 * degree + 1, 0.0) {}

  cplx coef(int k) const { return (k < -n || k > n) ? cplx{} : c[k + n]; }
  cplx& coef(int k) { return c[k + n]; }
  int size() const { return 2 * n + 1; }

  cplx operator()(double s) const;
  cplx at(cplx t) const;
};

// s_k = 2k pi/(2n+1) + offset
struct NodeSet {
  int n = 0;
  double offset = 0.0;

  int size() const { return 2 * n + 1; }
  double node(int k) const { return 2.0 * k * pi / size() + offset; }
  cplx point(int k) const { return unit(node(k)); }
  rvec angles() const;
};

inline NodeSet plain_nodes(int n) { return {n, 0.0}; }
inline NodeSet shifted_nodes(int n) { return {n, pi / (2 * n + 1)}; }

inline double sign_mode(int k) { return k >= 0 ? 1.0 : -1.0; }

TrigPoly interpolate(const cvec& samples, double offset = 0.0);
TrigPoly interpolate(const std::function<cplx(double)>& f, const NodeSet& nodes);
cvec evaluate(const TrigPoly& p, const NodeSet& nodes);

double fundamental_eval(int n, int k, double s, double offset = 0.0);

std::pair<TrigPoly, TrigPoly> plemel_split(const TrigPoly& p);
TrigPoly cauchy_apply(const TrigPoly& p);
TrigPoly hilbert_apply(const TrigPoly& p);
TrigPoly derivative(const TrigPoly& p);

TrigPoly operator+(const TrigPoly& a, const TrigPoly& b);
TrigPoly operator-(const TrigPoly& a, const TrigPoly& b);
TrigPoly operator*(cplx s, const TrigPoly& a);

// Nodal operator matrices: column k is the nodal basis function at the
// plain nodes s_k (offset col_offset), row j the evaluation angle rows[j].
Mat multiplier_matrix(int n, const rvec& rows, const std::function<cplx(int)>& mu,
                      double col_offset = 0.0, Exec exec = Exec::parallel);
Mat eval_matrix(int n, const rvec& rows, double col_offset = 0.0);
Mat cauchy_matrix(int n, const rvec& rows, double col_offset = 0.0);
Mat hilbert_matrix(int n, const rvec& rows, double col_offset = 0.0);
Mat diff_matrix(int n, const rvec& rows, double col_offset = 0.0);

}  // namespace sie
