#include "sie/spline.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/LU>

namespace sie {

rvec SplineMesh::panel_nodes(int k) const {
  const int r = params.r;
  return rvec(nodes.begin() + k * r, nodes.begin() + (k + 1) * r);
}

SplineMesh build_mesh(const MeshParams& p) {
  if (p.n < 1 || p.r < 1) fail(ErrorKind::invalid_input, "mesh parameter error: n, r must be positive");
  const double h = 2.0 / p.n;
  if (!(p.h_star > 0.0 && p.h_star < h / (p.r + 1)))
    fail(ErrorKind::invalid_input, "mesh parameter error: need 0 < h* < h/(r+1)");
  if (!(p.q > 0.0 && p.q < 1.0)) fail(ErrorKind::invalid_input, "mesh parameter error: need 0 < q < 1");
  SplineMesh m;
  m.params = p;
  m.h = h;
  m.t.resize(p.n + 1);
  for (int k = 0; k <= p.n; ++k) m.t[k] = -1.0 + 2.0 * k / p.n;
  for (int k = 0; k < p.n; ++k)
    for (int j = 1; j <= p.r; ++j) {
      const double tk = m.t[k] + j * h / (p.r + 1);
      m.nodes.push_back(tk);
      m.special.emplace_back(tk - p.q * p.h_star, tk + p.h_star);
    }
  return m;
}

double lagrange(const rvec& xs, int j, double t) {
  double v = 1.0;
  for (int i = 0; i < static_cast<int>(xs.size()); ++i)
    if (i != j) v *= (t - xs[i]) / (xs[j] - xs[i]);
  return v;
}

namespace {

// int_a^b psi(tau)/(tau - t) with psi a polynomial of degree < r, t off the interval
double far_moment(const rvec& xs, int j, double a, double b, double t) {
  const int r = static_cast<int>(xs.size());
  if (r <= 3) {
    const auto [gx, gw] = gauss_legendre(std::max(r, 1));
    const double pt = lagrange(xs, j, t);
    double acc = pt * std::log(std::abs((b - t) / (a - t)));
    for (std::size_t g = 0; g < gx.size(); ++g) {
      const double tau = 0.5 * (a + b) + 0.5 * (b - a) * gx[g];
      acc += 0.5 * (b - a) * gw[g] * (lagrange(xs, j, tau) - pt) / (tau - t);
    }
    return acc;
  }
  const auto [gx, gw] = gauss_legendre(16);
  double acc = 0.0;
  for (std::size_t g = 0; g < gx.size(); ++g) {
    const double tau = 0.5 * (a + b) + 0.5 * (b - a) * gx[g];
    acc += 0.5 * (b - a) * gw[g] * lagrange(xs, j, tau) / (tau - t);
  }
  return acc;
}

// int over [a, b] of (psi(tau) - psi(t))/(tau - t), t inside; the integrand is a polynomial
double regular_part(const rvec& xs, int j, double a, double b, double t) {
  const auto [gx, gw] = gauss_legendre(static_cast<int>(xs.size()) + 1);
  const double pt = lagrange(xs, j, t);
  double acc = 0.0;
  for (std::size_t g = 0; g < gx.size(); ++g) {
    const double tau = 0.5 * (a + b) + 0.5 * (b - a) * gx[g];
    acc += 0.5 * (b - a) * gw[g] * (lagrange(xs, j, tau) - pt) / (tau - t);
  }
  return acc;
}

}  // namespace

double special_defect(const SplineMesh& mesh, int k, int j) {
  const int r = mesh.params.r;
  const rvec xs = mesh.panel_nodes(k);
  const auto [a, b] = mesh.special[k * r + j];
  // psi_{kj}(t_{kj}) = 1, so the defect is the regular part alone
  return regular_part(xs, j, a, b, xs[j]);
}

MeshParams tune_params(const SegmentProblem& p, int n, int r, double M) {
  double a_max = 0.0, b_min = INFINITY;
  for (int i = 0; i <= 1000; ++i) {
    const double t = -1.0 + 2.0 * i / 1000.0;
    a_max = std::max(a_max, std::abs(p.a(t)));
    b_min = std::min(b_min, std::abs(p.b(t)));
  }
  if (!(b_min > 1e-12)) fail(ErrorKind::invalid_input, "tune_params needs b bounded away from zero");
  MeshParams mp;
  mp.n = n;
  mp.r = r;
  mp.M = M;
  mp.q = std::exp(-(M + 1.0 + a_max));
  const double h = 2.0 / n;
  mp.h_star = 0.999 * h / (r + 1);
  double worst = INFINITY;
  for (int it = 0; it <= 60; ++it) {
    const SplineMesh mesh = build_mesh(mp);
    worst = 0.0;
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < r; ++j) worst = std::max(worst, std::abs(special_defect(mesh, k, j)));
    if (worst <= 0.5) break;
    if (it == 60) fail(ErrorKind::tuning, "no feasible h* after 60 halvings");
    mp.h_star *= 0.5;
  }
  const DominanceReport dom = hadamard_margins(assemble_linear(p, mp));
  if (!dom.dominant)
    fail(ErrorKind::tuning, "spline tuning failed: best Hadamard margin " + std::to_string(dom.min_margin));
  return mp;
}

DenseSystem assemble_linear(const SegmentProblem& p, const MeshParams& params, Exec exec) {
  const SplineMesh mesh = build_mesh(params);
  const int n = params.n, r = params.r, N = n * r;
  const double lnq = std::log(1.0 / params.q);
  const auto [gx, gw] = gauss_legendre(r);
  DenseSystem sys;
  sys.C = Mat::Zero(N, N);
  sys.F.resize(N);
  parallel_for(0, N, exec, [&](int row) {
    const int k = row / r, l = row % r;
    const double t = mesh.nodes[row];
    const cplx at = p.a(t), bt = p.b(t);
    sys.F(row) = p.f(t);
    sys.C(row, row) += at;
    // special interval inside panel k
    const rvec xk = mesh.panel_nodes(k);
    const auto [sa, sb] = mesh.special[row];
    for (int j = 0; j < r; ++j) {
      double v = regular_part(xk, j, sa, sb, t);
      if (j == l) v += lnq;
      sys.C(row, k * r + j) += bt * v;
    }
    for (int i = 0; i < n; ++i) {
      const rvec xi = mesh.panel_nodes(i);
      const double a = mesh.t[i], b = mesh.t[i + 1];
      if (std::abs(i - k) > 1)
        for (int j = 0; j < r; ++j) sys.C(row, i * r + j) += bt * far_moment(xi, j, a, b, t);
      if (p.h)
        for (std::size_t g = 0; g < gx.size(); ++g) {
          const double tau = 0.5 * (a + b) + 0.5 * (b - a) * gx[g];
          const cplx hv = 0.5 * (b - a) * gw[g] * p.h(t, tau);
          for (int j = 0; j < r; ++j) sys.C(row, i * r + j) += hv * lagrange(xi, j, tau);
        }
    }
  });
  return sys;
}

cplx SplineSolution::operator()(double t) const {
  const int n = mesh.params.n, r = mesh.params.r;
  int k = static_cast<int>(std::floor((t + 1.0) / mesh.h));
  k = std::clamp(k, 0, n - 1);
  const rvec xs = mesh.panel_nodes(k);
  cplx acc = 0.0;
  for (int j = 0; j < r; ++j) acc += nodal[k * r + j] * lagrange(xs, j, t);
  return acc;
}

SplineSolution solve_linear(const SegmentProblem& p, const MeshParams& params,
                            const std::function<cplx(double)>& exact) {
  SplineSolution sol;
  sol.mesh = build_mesh(params);
  const DenseSystem sys = assemble_linear(p, params);
  const LuResult lu = lu_solve(sys);
  sol.nodal = to_cvec(lu.x);
  sol.report.scheme = "spline";
  sol.report.n = params.n;
  sol.report.residual = lu.residual;
  sol.report.dominance = hadamard_margins(sys);
  sol.report.solution_norm = max_abs(sol.nodal);
  sol.report.parameter = params.h_star;
  if (exact) {
    double e = 0.0;
    for (std::size_t i = 0; i < sol.nodal.size(); ++i)
      e = std::max(e, std::abs(sol.nodal[i] - exact(sol.mesh.nodes[i])));
    sol.report.error = e;
  }
  return sol;
}

// ---- nonlinear Hilbert-kernel scheme ----

namespace {

struct HilbertGrid {
  int n2;
  double dh;
  rvec s, ss;
};

HilbertGrid hilbert_grid(int n, double h_offset) {
  if (n < 2) fail(ErrorKind::invalid_input, "nonlinear Hilbert scheme needs n >= 2");
  if (!(h_offset > 0.0 && h_offset <= pi / (2 * n) * (1 + 1e-12)))
    fail(ErrorKind::invalid_input, "offset h must lie in (0, pi/2n]");
  HilbertGrid g{2 * n, pi / n, {}, {}};
  for (int k = 0; k <= 2 * n; ++k) g.s.push_back(pi * k / n);
  for (int k = 0; k < 2 * n; ++k) g.ss.push_back(g.s[k] + h_offset);
  return g;
}

bool skipped(int j, int k, int n2) { return k == (j + n2 - 1) % n2 || k == (j + 1) % n2; }

}  // namespace

Vec hilbert_residual(const HilbertNonlinearProblem& p, int n, double h_offset, const Vec& x) {
  const HilbertGrid g = hilbert_grid(n, h_offset);
  Vec R(g.n2);
  for (int j = 0; j < g.n2; ++j) {
    const double sj = g.ss[j];
    cplx acc = p.a(sj) * x(j) - p.f(sj);
    for (int k = 0; k < g.n2; ++k) {
      if (p.b && !skipped(j, k, g.n2))
        acc += p.b(sj, g.ss[k], x(k)) * cot_panel(g.s[k], g.s[k + 1], sj) / (2.0 * pi);
      if (p.h) acc += pi / n * p.h(sj, g.ss[k], x(k));
    }
    R(j) = acc;
  }
  return R;
}

Mat hilbert_jacobian(const HilbertNonlinearProblem& p, int n, double h_offset, const Vec& x) {
  const HilbertGrid g = hilbert_grid(n, h_offset);
  Mat J = Mat::Zero(g.n2, g.n2);
  for (int j = 0; j < g.n2; ++j) {
    const double sj = g.ss[j];
    J(j, j) += p.a(sj);
    for (int k = 0; k < g.n2; ++k) {
      if (p.b && !skipped(j, k, g.n2))
        J(j, k) += p.b_u(sj, g.ss[k], x(k)) * cot_panel(g.s[k], g.s[k + 1], sj) / (2.0 * pi);
      if (p.h) J(j, k) += pi / n * p.h_u(sj, g.ss[k], x(k));
    }
  }
  return J;
}

HilbertSolution solve_nonlinear_hilbert(const HilbertNonlinearProblem& p, int n, double h_offset, const cvec& x0,
                                        NewtonConfig cfg) {
  const HilbertGrid g = hilbert_grid(n, h_offset);
  if ((p.b && !p.b_u) || (p.h && !p.h_u)) fail(ErrorKind::invalid_input, "kernel derivatives must be supplied");
  Vec x(g.n2);
  for (int k = 0; k < g.n2; ++k) x(k) = x0.empty() ? p.f(g.ss[k]) / p.a(g.ss[k]) : x0[k];
  const Mat J0 = hilbert_jacobian(p, n, h_offset, x);

  HilbertSolution sol;
  sol.nodes = g.ss;
  sol.offset = h_offset;
  sol.dominance = hadamard_margins(J0);
  double ratio = 0.0;
  for (int j = 0; j < g.n2; ++j) {
    const double d = std::abs(J0(j, j));
    ratio = std::max(ratio, (J0.row(j).cwiseAbs().sum() - d) / d);
  }
  sol.split_ratio = ratio;
  if (!(ratio < 1.0))
    fail(ErrorKind::tuning, "non-dominant Jacobian: ||D^-1 E|| = " + std::to_string(ratio));

  std::vector<Vec> iterates;
  NonlinearSystem sys{[&](const Vec& v) {
                        iterates.push_back(v);
                        return hilbert_residual(p, n, h_offset, v);
                      },
                      [&](const Vec& v) { return hilbert_jacobian(p, n, h_offset, v); }};
  const NewtonResult nr = newton_solve(sys, x, cfg);
  sol.x = to_cvec(nr.x);
  sol.newton = nr.report;
  const Eigen::PartialPivLU<Mat> lu(J0);
  for (const Vec& v : iterates)
    sol.q = std::max(sol.q, mat_inf_norm(lu.solve(Mat(J0 - hilbert_jacobian(p, n, h_offset, v)))));
  return sol;
}

}  // namespace sie
