#include "sie/trig.hpp"

#include <cmath>

namespace sie {

cplx TrigPoly::operator()(double s) const {
  cplx acc = 0.0;
  for (int k = -n; k <= n; ++k) acc += c[k + n] * unit(k * s);
  return acc;
}

cplx TrigPoly::at(cplx t) const { return (*this)(std::arg(t)); }

rvec NodeSet::angles() const {
  rvec s(size());
  for (int k = 0; k < size(); ++k) s[k] = node(k);
  return s;
}

TrigPoly interpolate(const cvec& samples, double offset) {
  const int N = static_cast<int>(samples.size());
  if (N < 1 || N % 2 == 0) fail(ErrorKind::invalid_input, "invalid node set: sample count must be odd");
  const int n = (N - 1) / 2;
  TrigPoly p(n);
  for (int m = -n; m <= n; ++m) {
    cplx acc = 0.0;
    for (int k = 0; k < N; ++k) acc += samples[k] * unit(-m * (2.0 * k * pi / N + offset));
    p.coef(m) = acc / static_cast<double>(N);
  }
  return p;
}

TrigPoly interpolate(const std::function<cplx(double)>& f, const NodeSet& nodes) {
  cvec v(nodes.size());
  for (int k = 0; k < nodes.size(); ++k) v[k] = f(nodes.node(k));
  return interpolate(v, nodes.offset);
}

cvec evaluate(const TrigPoly& p, const NodeSet& nodes) {
  cvec v(nodes.size());
  for (int k = 0; k < nodes.size(); ++k) v[k] = p(nodes.node(k));
  return v;
}

double fundamental_eval(int n, int k, double s, double offset) {
  const int N = 2 * n + 1;
  if (k < 0 || k >= N) fail(ErrorKind::invalid_input, "node index out of range");
  const double d = angle_diff(s, 2.0 * k * pi / N + offset);
  if (std::abs(d) < 1e-9) {
    // series about the node: 1 - n(n+1) d^2 / 6
    return 1.0 - n * (n + 1.0) * d * d / 6.0;
  }
  return std::sin(0.5 * N * d) / (N * std::sin(0.5 * d));
}

std::pair<TrigPoly, TrigPoly> plemel_split(const TrigPoly& p) {
  TrigPoly plus(p.n), minus(p.n);
  for (int k = -p.n; k <= p.n; ++k) {
    if (k >= 0)
      plus.coef(k) = p.coef(k);
    else
      minus.coef(k) = -p.coef(k);
  }
  return {plus, minus};
}

TrigPoly cauchy_apply(const TrigPoly& p) {
  TrigPoly out(p.n);
  for (int k = -p.n; k <= p.n; ++k) out.coef(k) = sign_mode(k) * p.coef(k);
  return out;
}

TrigPoly hilbert_apply(const TrigPoly& p) {
  TrigPoly out(p.n);
  for (int k = -p.n; k <= p.n; ++k) out.coef(k) = k == 0 ? cplx{} : I * sign_mode(k) * p.coef(k);
  return out;
}

TrigPoly derivative(const TrigPoly& p) {
  TrigPoly out(p.n);
  for (int k = -p.n; k <= p.n; ++k) out.coef(k) = I * static_cast<double>(k) * p.coef(k);
  return out;
}

static TrigPoly combine(const TrigPoly& a, const TrigPoly& b, double sb) {
  TrigPoly out(std::max(a.n, b.n));
  for (int k = -out.n; k <= out.n; ++k) out.coef(k) = a.coef(k) + sb * b.coef(k);
  return out;
}

TrigPoly operator+(const TrigPoly& a, const TrigPoly& b) { return combine(a, b, 1.0); }
TrigPoly operator-(const TrigPoly& a, const TrigPoly& b) { return combine(a, b, -1.0); }

TrigPoly operator*(cplx s, const TrigPoly& a) {
  TrigPoly out = a;
  for (auto& z : out.c) z *= s;
  return out;
}

Mat multiplier_matrix(int n, const rvec& rows, const std::function<cplx(int)>& mu, double col_offset, Exec exec) {
  const int N = 2 * n + 1;
  cvec w(N);
  for (int m = -n; m <= n; ++m) w[m + n] = mu(m) / static_cast<double>(N);
  Mat M(static_cast<Eigen::Index>(rows.size()), N);
  parallel_for(0, static_cast<int>(rows.size()), exec, [&](int j) {
    for (int k = 0; k < N; ++k) {
      const double d = rows[j] - (2.0 * k * pi / N + col_offset);
      cplx acc = 0.0;
      for (int m = -n; m <= n; ++m) acc += w[m + n] * unit(m * d);
      M(j, k) = acc;
    }
  });
  return M;
}

Mat eval_matrix(int n, const rvec& rows, double col_offset) {
  return multiplier_matrix(n, rows, [](int) { return cplx{1.0}; }, col_offset);
}

Mat cauchy_matrix(int n, const rvec& rows, double col_offset) {
  return multiplier_matrix(n, rows, [](int m) { return cplx{sign_mode(m)}; }, col_offset);
}

Mat hilbert_matrix(int n, const rvec& rows, double col_offset) {
  return multiplier_matrix(
      n, rows, [](int m) { return m == 0 ? cplx{} : I * sign_mode(m); }, col_offset);
}

Mat diff_matrix(int n, const rvec& rows, double col_offset) {
  return multiplier_matrix(n, rows, [](int m) { return I * static_cast<double>(m); }, col_offset);
}

}  // namespace sie
