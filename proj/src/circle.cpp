#include "sie/circle.hpp"

#include <cmath>

namespace sie {

static cplx kernel_or_zero(const CircleKernel& h, cplx t, cplx tau) { return h ? h(t, tau) : cplx{}; }

static DenseSystem dominant_rows(const CircleProblem& p, int n) {
  const NodeSet nodes = plain_nodes(n);
  const int N = nodes.size();
  DenseSystem sys;
  sys.C = cauchy_matrix(n, nodes.angles());
  sys.F.resize(N);
  for (int j = 0; j < N; ++j) {
    const cplx t = nodes.point(j);
    sys.C.row(j) *= p.b ? p.b(t) : cplx{};
    sys.C(j, j) += p.a(t);
    sys.F(j) = p.f(t);
  }
  return sys;
}

DenseSystem assemble_basic(const CircleProblem& p, int n, Exec exec) {
  if (p.form != KernelForm::weak) fail(ErrorKind::invalid_input, "scheme basic needs a weak-kernel problem");
  DenseSystem sys = dominant_rows(p, n);
  if (!p.h) return sys;
  const NodeSet nodes = plain_nodes(n);
  const int N = nodes.size();
  parallel_for(0, N, exec, [&](int j) {
    const cplx t = nodes.point(j);
    for (int k = 0; k < N; ++k) {
      const cplx tau = nodes.point(k);
      const double d = weak_weight(nodes.node(j), nodes.node(k), p.weak, n);
      sys.C(j, k) += p.h(t, tau) * d * tau / static_cast<double>(N);
    }
  });
  return sys;
}

DenseSystem assemble_optimal(const CircleProblem& p, int n, Exec exec) {
  if (p.form != KernelForm::weak) fail(ErrorKind::invalid_input, "scheme optimal needs a weak-kernel problem");
  DenseSystem sys = dominant_rows(p, n);
  if (!p.h) return sys;
  const NodeSet nodes = plain_nodes(n);
  const int N = nodes.size();
  const double half = pi / N;
  parallel_for(0, N, exec, [&](int j) {
    const cplx t = nodes.point(j);
    for (int k = 0; k < N; ++k) {
      const cplx tau = nodes.point(k);
      const double s = nodes.node(k);
      const double w = weak_panel(nodes.node(j), s - half, s + half, p.weak.eta);
      sys.C(j, k) += p.h(t, tau) * w * tau / (2.0 * pi);
    }
  });
  return sys;
}

DenseSystem assemble_full_kernel(const CircleProblem& p, int n, bool split, Exec exec) {
  if (p.form != KernelForm::cauchy_full)
    fail(ErrorKind::invalid_input, "full-kernel schemes need a cauchy_full problem");
  const NodeSet nodes = plain_nodes(n);
  const NodeSet rows = shifted_nodes(n);
  const int N = nodes.size();
  const rvec ra = rows.angles();
  DenseSystem sys;
  sys.C = eval_matrix(n, ra);
  sys.F.resize(N);
  const Mat S = split ? cauchy_matrix(n, ra) : Mat();
  parallel_for(0, N, exec, [&](int j) {
    const cplx t = rows.point(j);
    sys.C.row(j) *= p.a(t);
    sys.F(j) = p.f(t);
    const cplx htt = kernel_or_zero(p.h, t, t);
    if (split) sys.C.row(j) += htt * S.row(j);
    for (int k = 0; k < N; ++k) {
      const cplx tau = nodes.point(k);
      const cplx diff = tau - t;
      cplx g;
      if (!split) {
        g = kernel_or_zero(p.h, t, tau) / diff;
      } else if (std::abs(diff) > 1e-8) {
        g = (kernel_or_zero(p.h, t, tau) - htt) / diff;
      } else {
        const double s = rows.node(j), st = 1e-6;
        g = (kernel_or_zero(p.h, t, unit(s + st)) - kernel_or_zero(p.h, t, unit(s - st))) / (2.0 * st) / (I * t);
      }
      sys.C(j, k) += 2.0 / N * g * tau;
    }
  });
  return sys;
}

double grid_norm(const std::function<cplx(double)>& g, NormKind kind, int points) {
  double acc = 0.0;
  for (int i = 0; i < points; ++i) {
    const double v = std::abs(g(2.0 * pi * i / points));
    acc = kind == NormKind::holder_grid ? std::max(acc, v) : acc + v * v;
  }
  return kind == NormKind::holder_grid ? acc : std::sqrt(acc / points);
}

CircleSolution solve(const CircleProblem& p, int n, CircleScheme scheme, NormKind norm,
                     const std::function<cplx(double)>& exact) {
  DenseSystem sys;
  switch (scheme) {
    case CircleScheme::basic: sys = assemble_basic(p, n); break;
    case CircleScheme::optimal: sys = assemble_optimal(p, n); break;
    case CircleScheme::full_kernel: sys = assemble_full_kernel(p, n, true); break;
    case CircleScheme::full_kernel_unsplit: sys = assemble_full_kernel(p, n, false); break;
  }
  CircleSolution out;
  LuResult lu;
  try {
    lu = lu_solve(sys);
  } catch (const Error& e) {
    throw Error(e.kind(), std::string(e.what()) + " [scheme " + to_string(scheme) + ", n=" + std::to_string(n) + "]");
  }
  out.nodal = to_cvec(lu.x);
  out.x = interpolate(out.nodal);
  out.report.scheme = to_string(scheme);
  out.report.n = n;
  out.report.residual = lu.residual;
  out.report.dominance = hadamard_margins(sys);
  const TrigPoly& x = out.x;
  out.report.solution_norm = grid_norm([&](double s) { return x(s); }, norm);
  if (exact) out.report.error = grid_norm([&](double s) { return x(s) - exact(s); }, norm);
  return out;
}

std::string to_string(CircleScheme s) {
  switch (s) {
    case CircleScheme::basic: return "basic";
    case CircleScheme::optimal: return "optimal";
    case CircleScheme::full_kernel: return "full_kernel";
    case CircleScheme::full_kernel_unsplit: return "full_kernel_unsplit";
  }
  return "?";
}

CircleScheme circle_scheme_from_string(const std::string& s) {
  if (s == "basic") return CircleScheme::basic;
  if (s == "optimal") return CircleScheme::optimal;
  if (s == "full_kernel") return CircleScheme::full_kernel;
  if (s == "full_kernel_unsplit") return CircleScheme::full_kernel_unsplit;
  fail(ErrorKind::invalid_input, "unknown circle scheme: " + s);
}

}  // namespace sie
