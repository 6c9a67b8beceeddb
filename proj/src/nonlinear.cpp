#include "sie/nonlinear.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/QR>

namespace sie {

namespace {

double fd_step(cplx u) { return 1e-6 * (1.0 + std::abs(u)); }

struct Grid {
  int N;
  rvec s, sbar;
  std::vector<cplx> t, tbar;
};

Grid grid(int n) {
  if (n < 1) fail(ErrorKind::invalid_input, "nonlinear circle schemes need n >= 1");
  Grid g;
  g.N = 2 * n + 1;
  for (int j = 0; j < g.N; ++j) {
    g.s.push_back(2.0 * pi * j / g.N);
    g.sbar.push_back((2.0 * j + 1) * pi / g.N);
    g.t.push_back(unit(g.s.back()));
    g.tbar.push_back(unit(g.sbar.back()));
  }
  return g;
}

void check_size(const Vec& x, int N) {
  if (x.size() != N) fail(ErrorKind::invalid_input, "unknown vector must have 2n+1 entries");
}

cplx hval(const NonlinearCircleProblem& p, cplx t, cplx tau, cplx u) { return p.h ? p.h(t, tau, u) : cplx{}; }

}  // namespace

NonlinearCircleProblem with_derivatives(const NonlinearCircleProblem& p) {
  if (!p.a || !p.f) fail(ErrorKind::invalid_input, "nonlinear problem needs a and f");
  NonlinearCircleProblem q = p;
  if (!q.a_u) {
    auto a = p.a;
    q.a_u = [a](cplx t, cplx u) {
      const double d = fd_step(u);
      return (a(t, u + d) - a(t, u - d)) / (2 * d);
    };
  }
  if (q.h && !q.h_u) {
    auto h = p.h;
    q.h_u = [h](cplx t, cplx tau, cplx u) {
      const double d = fd_step(u);
      return (h(t, tau, u + d) - h(t, tau, u - d)) / (2 * d);
    };
  }
  if (q.h && !q.h_uu) {
    auto hu = q.h_u;
    q.h_uu = [hu](cplx t, cplx tau, cplx u) {
      const double d = 1e-4 * (1.0 + std::abs(u));
      return (hu(t, tau, u + d) - hu(t, tau, u - d)) / (2 * d);
    };
  }
  return q;
}

double derivative_mismatch(const NonlinearCircleProblem& p, std::uint64_t seed, int points) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ang(0.0, 2 * pi), mag(-1.0, 1.0);
  double worst = 0.0;
  auto rel = [](cplx got, cplx want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); };
  for (int i = 0; i < points; ++i) {
    const cplx t = unit(ang(rng)), tau = unit(ang(rng)), u{mag(rng), mag(rng)};
    const double d = 1e-5 * (1.0 + std::abs(u));
    if (p.a_u) worst = std::max(worst, rel(p.a_u(t, u), (p.a(t, u + d) - p.a(t, u - d)) / (2 * d)));
    if (p.h && p.h_u) worst = std::max(worst, rel(p.h_u(t, tau, u), (p.h(t, tau, u + d) - p.h(t, tau, u - d)) / (2 * d)));
    if (p.h_u && p.h_uu)
      worst = std::max(worst, rel(p.h_uu(t, tau, u), (p.h_u(t, tau, u + d) - p.h_u(t, tau, u - d)) / (2 * d)));
  }
  return worst;
}

Vec residual_scheme1(const NonlinearCircleProblem& p0, const Vec& x, int n, Exec exec) {
  const NonlinearCircleProblem p = with_derivatives(p0);
  const Grid g = grid(n);
  check_size(x, g.N);
  const Vec xp = diff_matrix(n, g.s, 0.0) * x;
  Vec R(g.N);
  parallel_for(0, g.N, exec, [&](int j) {
    cplx acc = p.a(g.t[j], x(j)) - p.f(g.t[j]);
    if (p.h) {
      cplx sum = 0.0;
      for (int k = 0; k < g.N; ++k)
        if (k != j) sum += p.h(g.t[j], g.t[k], x(k)) * (1.0 - I / std::tan((g.s[k] - g.s[j]) / 2));
      acc += sum / static_cast<double>(g.N) - 2.0 * I / static_cast<double>(g.N) * p.h_u(g.t[j], g.t[j], x(j)) * xp(j);
    }
    R(j) = acc;
  });
  return R;
}

Mat jacobian_scheme1(const NonlinearCircleProblem& p0, const Vec& x, int n, Exec exec) {
  const NonlinearCircleProblem p = with_derivatives(p0);
  const Grid g = grid(n);
  check_size(x, g.N);
  const Mat D = diff_matrix(n, g.s, 0.0);
  const Vec xp = D * x;
  const double invN = 1.0 / g.N;
  Mat J = Mat::Zero(g.N, g.N);
  parallel_for(0, g.N, exec, [&](int j) {
    J(j, j) += p.a_u(g.t[j], x(j));
    if (!p.h) return;
    for (int k = 0; k < g.N; ++k)
      if (k != j) J(j, k) += invN * p.h_u(g.t[j], g.t[k], x(k)) * (1.0 - I / std::tan((g.s[k] - g.s[j]) / 2));
    const cplx hu = p.h_u(g.t[j], g.t[j], x(j));
    J(j, j) -= 2.0 * I * invN * p.h_uu(g.t[j], g.t[j], x(j)) * xp(j);
    for (int k = 0; k < g.N; ++k) J(j, k) -= 2.0 * I * invN * hu * D(j, k);
  });
  return J;
}

Vec residual_scheme2(const NonlinearCircleProblem& p0, const Vec& alpha, int n, Exec exec) {
  const NonlinearCircleProblem p = with_derivatives(p0);
  const Grid g = grid(n);
  check_size(alpha, g.N);
  const Vec y = eval_matrix(n, g.sbar, 0.0) * alpha;
  Vec R(g.N);
  parallel_for(0, g.N, exec, [&](int j) {
    cplx sum = 0.0;
    for (int k = 0; k < g.N; ++k)
      sum += hval(p, g.t[j], g.t[k], alpha(k)) * (1.0 - I / std::tan((g.s[k] - g.sbar[j]) / 2));
    R(j) = p.a(g.t[j], y(j)) + sum / static_cast<double>(g.N) - p.f(g.t[j]);
  });
  return R;
}

Mat jacobian_scheme2(const NonlinearCircleProblem& p0, const Vec& alpha, int n, Exec exec) {
  const NonlinearCircleProblem p = with_derivatives(p0);
  const Grid g = grid(n);
  check_size(alpha, g.N);
  const Mat E = eval_matrix(n, g.sbar, 0.0);
  const Vec y = E * alpha;
  Mat J(g.N, g.N);
  parallel_for(0, g.N, exec, [&](int j) {
    const cplx au = p.a_u(g.t[j], y(j));
    for (int k = 0; k < g.N; ++k) {
      J(j, k) = au * E(j, k);
      if (p.h)
        J(j, k) += p.h_u(g.t[j], g.t[k], alpha(k)) * (1.0 - I / std::tan((g.s[k] - g.sbar[j]) / 2)) /
                   static_cast<double>(g.N);
    }
  });
  return J;
}

Vec residual_scheme3(const NonlinearCircleProblem& p0, const Vec& x, int n, Exec exec) {
  const NonlinearCircleProblem p = with_derivatives(p0);
  const Grid g = grid(n);
  check_size(x, g.N);
  const Vec y = eval_matrix(n, g.sbar, 0.0) * x;
  const Mat S = cauchy_matrix(n, g.sbar, 0.0);
  Vec R(g.N);
  parallel_for(0, g.N, exec, [&](int j) {
    cplx acc = p.a(g.tbar[j], y(j)) - p.f(g.tbar[j]);
    if (p.h)
      for (int k = 0; k < g.N; ++k) acc += S(j, k) * p.h(g.tbar[j], g.t[k], x(k));
    R(j) = acc;
  });
  return R;
}

Mat jacobian_scheme3(const NonlinearCircleProblem& p0, const Vec& x, int n, Exec exec) {
  const NonlinearCircleProblem p = with_derivatives(p0);
  const Grid g = grid(n);
  check_size(x, g.N);
  const Mat E = eval_matrix(n, g.sbar, 0.0);
  const Mat S = cauchy_matrix(n, g.sbar, 0.0);
  const Vec y = E * x;
  Mat J(g.N, g.N);
  parallel_for(0, g.N, exec, [&](int j) {
    const cplx au = p.a_u(g.tbar[j], y(j));
    for (int k = 0; k < g.N; ++k) {
      J(j, k) = au * E(j, k);
      if (p.h) J(j, k) += S(j, k) * p.h_u(g.tbar[j], g.t[k], x(k));
    }
  });
  return J;
}

NonlinearSystem scheme_system(const NonlinearCircleProblem& p0, int n, NonlinearScheme s) {
  const NonlinearCircleProblem p = with_derivatives(p0);
  switch (s) {
    case NonlinearScheme::scheme1:
      return {[p, n](const Vec& x) { return residual_scheme1(p, x, n); },
              [p, n](const Vec& x) { return jacobian_scheme1(p, x, n); }};
    case NonlinearScheme::scheme2:
      return {[p, n](const Vec& x) { return residual_scheme2(p, x, n); },
              [p, n](const Vec& x) { return jacobian_scheme2(p, x, n); }};
    case NonlinearScheme::scheme3:
      break;
  }
  return {[p, n](const Vec& x) { return residual_scheme3(p, x, n); },
          [p, n](const Vec& x) { return jacobian_scheme3(p, x, n); }};
}

NonlinearCircleSolution solve_nonlinear_circle(const NonlinearCircleProblem& p, int n, NonlinearScheme s,
                                               const NewtonConfig& cfg) {
  const NonlinearSystem sys = scheme_system(p, n, s);
  const cvec start = evaluate(p.x0, plain_nodes(n));
  const NewtonResult r = newton_solve(sys, to_vec(start), cfg);
  NonlinearCircleSolution sol;
  sol.scheme = s;
  sol.n = n;
  sol.nodal = r.x;
  sol.x = interpolate(to_cvec(r.x), 0.0);
  sol.newton = r.report;
  return sol;
}

DescentResult l2_descent(const NonlinearSystem& sys, const Vec& x0, double tol, int max_iter) {
  const Mat J0 = sys.jacobian(x0);
  const Eigen::Index N = x0.size();
  if (N == 0) fail(ErrorKind::invalid_input, "empty unknown vector");
  {
    const Eigen::PartialPivLU<Mat> lu(J0);
    if (std::abs(lu.determinant()) == 0.0) fail(ErrorKind::singular, "K'(x_0) is singular");
  }
  auto norm = [N](const Vec& v) { return std::sqrt(v.squaredNorm() / static_cast<double>(N)); };
  DescentResult out;
  out.x = x0;
  Vec r = sys.residual(out.x);
  out.residuals.push_back(norm(r));
  for (int m = 0; m < max_iter; ++m) {
    if (out.residuals.back() < tol) {
      out.converged = true;
      return out;
    }
    const Vec Jr = J0 * r;
    const double den = Jr.squaredNorm();
    if (den == 0.0) fail(ErrorKind::divergence, "stationary point: K'(x_0) K x = 0");
    out.x -= (r.squaredNorm() / den) * (J0.adjoint() * r);
    r = sys.residual(out.x);
    out.residuals.push_back(norm(r));
    ++out.iterations;
    if (!(out.residuals.back() <= out.residuals[out.residuals.size() - 2] * (1 + 1e-12)))
      fail(ErrorKind::divergence, "L2 descent residual increased at step " + std::to_string(m + 1));
  }
  out.converged = out.residuals.back() < tol;
  return out;
}

DescentResult l2_descent(const NonlinearCircleProblem& p, int n, const Vec& x0, NonlinearScheme s, double tol,
                         int max_iter) {
  return l2_descent(scheme_system(p, n, s), x0, tol, max_iter);
}

std::string to_string(NonlinearScheme s) {
  switch (s) {
    case NonlinearScheme::scheme1: return "scheme1";
    case NonlinearScheme::scheme2: return "scheme2";
    case NonlinearScheme::scheme3: return "scheme3";
  }
  return "?";
}

NonlinearScheme nonlinear_scheme_from_string(const std::string& s) {
  if (s == "scheme1" || s == "1") return NonlinearScheme::scheme1;
  if (s == "scheme2" || s == "2") return NonlinearScheme::scheme2;
  if (s == "scheme3" || s == "3") return NonlinearScheme::scheme3;
  fail(ErrorKind::invalid_input, "unknown nonlinear scheme: " + s);
}

}  // namespace sie
