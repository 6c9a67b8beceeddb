#include "sie/multidim.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "sie/quadrature.hpp"

namespace sie {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

const std::pair<rvec, rvec>& gl_rule(int m) {
  static const auto g4 = gauss_legendre(4);
  static const auto g8 = gauss_legendre(8);
  static const auto g16 = gauss_legendre(16);
  static const auto g24 = gauss_legendre(24);
  static const auto g32 = gauss_legendre(32);
  switch (m) {
    case 4: return g4;
    case 8: return g8;
    case 16: return g16;
    case 24: return g24;
    default: return g32;
  }
}

template <class F>
auto gl_sum(int m, double a, double b, F&& f) {
  const auto& [x, w] = gl_rule(m);
  const double c = 0.5 * (a + b), r = 0.5 * (b - a);
  decltype(f(a)) s{};
  for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * f(c + r * x[i]);
  return s * r;
}

// distance along (c, s) from an interior point to the boundary
double exit_length(double tx, double ty, const Rect& R, double c, double s) {
  const double ex = c > 0 ? (R.x1 - tx) / c : c < 0 ? (R.x0 - tx) / c : inf;
  const double ey = s > 0 ? (R.y1 - ty) / s : s < 0 ? (R.y0 - ty) / s : inf;
  return std::min(ex, ey);
}

// entry and exit distances of the ray, empty when it misses
bool ray_span(double tx, double ty, const Rect& R, double c, double s, double& tin, double& tout) {
  double lo = -inf, hi = inf;
  auto slab = [&](double p, double d, double a, double b) {
    if (std::abs(d) < 1e-300) return p >= a && p <= b;
    double u = (a - p) / d, v = (b - p) / d;
    if (u > v) std::swap(u, v);
    lo = std::max(lo, u);
    hi = std::min(hi, v);
    return true;
  };
  if (!slab(tx, c, R.x0, R.x1) || !slab(ty, s, R.y0, R.y1)) return false;
  tin = std::max(lo, 0.0);
  tout = hi;
  return tout > tin;
}

std::array<double, 4> corner_angles(double tx, double ty, const Rect& R) {
  return {std::atan2(R.y0 - ty, R.x0 - tx), std::atan2(R.y0 - ty, R.x1 - tx), std::atan2(R.y1 - ty, R.x1 - tx),
          std::atan2(R.y1 - ty, R.x0 - tx)};
}

// consecutive breakpoints covering the full turn for an interior point
rvec interior_breaks(double tx, double ty, const Rect& R) {
  auto c = corner_angles(tx, ty, R);
  rvec b;
  for (double a : c) b.push_back(wrap_angle(a));
  std::sort(b.begin(), b.end());
  b.push_back(b.front() + 2 * pi);
  return b;
}

bool strictly_inside(double tx, double ty, const Rect& R) {
  return tx > R.x0 && tx < R.x1 && ty > R.y0 && ty < R.y1;
}

double distance_to(double tx, double ty, const Rect& R) {
  const double dx = std::max({R.x0 - tx, 0.0, tx - R.x1});
  const double dy = std::max({R.y0 - ty, 0.0, ty - R.y1});
  return std::hypot(dx, dy);
}

bool on_boundary(double tx, double ty, const Rect& R) {
  const double eps = 1e-14 * (1.0 + std::abs(tx) + std::abs(ty));
  const bool in_x = tx >= R.x0 - eps && tx <= R.x1 + eps;
  const bool in_y = ty >= R.y0 - eps && ty <= R.y1 + eps;
  if (!in_x || !in_y) return false;
  return std::abs(tx - R.x0) <= eps || std::abs(tx - R.x1) <= eps || std::abs(ty - R.y0) <= eps ||
         std::abs(ty - R.y1) <= eps;
}

// Lagrange basis on r equispaced interior nodes of [lo, lo + w]
rvec lagrange_basis(double x, double lo, double w, int r) {
  rvec v(r, 1.0);
  if (r == 1) return v;
  for (int i = 0; i < r; ++i) {
    const double xi = lo + w * (i + 1) / (r + 1);
    for (int m = 0; m < r; ++m) {
      if (m == i) continue;
      const double xm = lo + w * (m + 1) / (r + 1);
      v[i] *= (x - xm) / (xi - xm);
    }
  }
  return v;
}

int locate(const Grid2D& g, double t) {
  if (t < g.t.front() - 1e-12 || t > g.t.back() + 1e-12) fail(ErrorKind::domain, "point outside the square");
  int k = static_cast<int>(std::floor((t - g.t.front()) / g.h));
  k = std::clamp(k, 1, g.N);
  return k;
}

}  // namespace

Characteristic make_characteristic(std::string name, std::function<double(double)> phi, rvec zero_rays) {
  if (!phi) fail(ErrorKind::invalid_input, "characteristic needs a function");
  const double mean = integrate(phi, 0.0, 2 * pi, 1e-13);
  if (std::abs(mean) > 1e-10) fail(ErrorKind::domain, "characteristic " + name + " has nonzero mean");
  for (double z : zero_rays)
    if (std::abs(phi(z)) > 1e-12) fail(ErrorKind::invalid_input, "declared zero ray is not a zero of " + name);
  return {std::move(name), std::move(phi), std::move(zero_rays)};
}

Characteristic characteristic(const std::string& name) {
  if (name == "cos2")
    return make_characteristic(name, [](double t) { return std::cos(2 * t); }, {pi / 4, 3 * pi / 4});
  if (name == "sin2")
    return make_characteristic(name, [](double t) { return std::sin(2 * t); }, {0.0, pi / 2});
  if (name == "cos3")
    return make_characteristic(name, [](double t) { return std::cos(3 * t); }, {pi / 6, pi / 2});
  fail(ErrorKind::invalid_input, "unknown characteristic " + name);
}

double panel_coeff(double tx, double ty, const Rect& R, const Characteristic& ch) {
  if (on_boundary(tx, ty, R)) fail(ErrorKind::domain, "target on a panel edge");
  const double side = std::min(R.x1 - R.x0, R.y1 - R.y0);
  if (strictly_inside(tx, ty, R)) {
    const rvec b = interior_breaks(tx, ty, R);
    const double edge = std::min({tx - R.x0, R.x1 - tx, ty - R.y0, R.y1 - ty});
    std::function<double(double)> g = [&](double th) {
      return ch.phi(th) * std::log(exit_length(tx, ty, R, std::cos(th), std::sin(th)));
    };
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < b.size(); ++i)
      s += edge < 0.1 * side ? integrate_endpoint(g, b[i], b[i + 1], 1e-13) : gl_sum(24, b[i], b[i + 1], g);
    return s;
  }
  const double ref = std::atan2(0.5 * (R.y0 + R.y1) - ty, 0.5 * (R.x0 + R.x1) - tx);
  rvec d;
  for (double a : corner_angles(tx, ty, R)) d.push_back(angle_diff(a, ref));
  std::sort(d.begin(), d.end());
  std::function<double(double)> g = [&](double u) {
    const double th = ref + u;
    double tin = 0.0, tout = 0.0;
    if (!ray_span(tx, ty, R, std::cos(th), std::sin(th), tin, tout)) return 0.0;
    return ch.phi(th) * std::log(tout / tin);
  };
  const bool near = distance_to(tx, ty, R) < side;
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    if (d[i + 1] > d[i]) s += near ? integrate_endpoint(g, d[i], d[i + 1], 1e-13) : gl_sum(16, d[i], d[i + 1], g);
  return s;
}

double panel_coeff_cubature(double tx, double ty, const Rect& R, const Characteristic& ch, double rel_tol) {
  if (strictly_inside(tx, ty, R) || on_boundary(tx, ty, R))
    fail(ErrorKind::invalid_input, "cubature needs a target outside the panel");
  auto tensor = [&](const Rect& q, int m) {
    return gl_sum(m, q.x0, q.x1, [&](double x) {
      return gl_sum(m, q.y0, q.y1, [&](double y) {
        const double dx = x - tx, dy = y - ty;
        return ch.phi(std::atan2(dy, dx)) / (dx * dx + dy * dy);
      });
    });
  };
  std::function<double(const Rect&, int)> rec = [&](const Rect& q, int depth) -> double {
    const double diag = std::hypot(q.x1 - q.x0, q.y1 - q.y0);
    const double lo = tensor(q, 16), hi = tensor(q, 24);
    if (depth > 20) fail(ErrorKind::cubature, "cubature refinement limit reached");
    if (distance_to(tx, ty, q) > 0.5 * diag && std::abs(hi - lo) <= rel_tol * std::max(1e-3, std::abs(hi))) return hi;
    const double xm = 0.5 * (q.x0 + q.x1), ym = 0.5 * (q.y0 + q.y1);
    return rec({q.x0, xm, q.y0, ym}, depth + 1) + rec({xm, q.x1, q.y0, ym}, depth + 1) +
           rec({q.x0, xm, ym, q.y1}, depth + 1) + rec({xm, q.x1, ym, q.y1}, depth + 1);
  };
  return rec(R, 0);
}

std::pair<double, double> Grid2D::interval(int k) const {
  if (k == 1) return {t[0], t[2]};
  if (k == N) return {t[N], t[N + 2]};
  return {t[k], t[k + 1]};
}

Rect Grid2D::merged(int k, int l) const {
  auto [a, b] = interval(k);
  auto [c, d] = interval(l);
  return {a, b, c, d};
}

Rect Grid2D::square(int k, int l) const { return {t[k], t[k + 1], t[l], t[l + 1]}; }

Grid2D build_grid(int N, double A, double h1, double h2) {
  if (N < 4) fail(ErrorKind::invalid_input, "grid needs N >= 4");
  if (!(A > 0)) fail(ErrorKind::invalid_input, "half-width must be positive");
  Grid2D g;
  g.N = N;
  g.A = A;
  g.h = 2 * A / (N + 2);
  if (!(h1 > 0 && h1 < g.h && h2 > 0 && h2 < g.h)) fail(ErrorKind::invalid_input, "shift must lie in (0, h)");
  g.h1 = h1;
  g.h2 = h2;
  g.t.resize(N + 3);
  for (int k = 0; k <= N + 2; ++k) g.t[k] = -A + g.h * k;
  return g;
}

namespace {

DenseSystem assemble_rows(const Problem2D& p, const Grid2D& g, Exec exec, bool rhs) {
  const int N = g.N, n = N * N;
  DenseSystem sys{Mat::Zero(n, n), Vec::Zero(n)};
  parallel_for(0, n, exec, [&](int row) {
    const int k = row / N + 1, l = row % N + 1;
    const double tx = g.node_x(k), ty = g.node_y(l);
    const cplx a = p.a(tx, ty), b = p.b(tx, ty);
    sys.C(row, row) = a + b * panel_coeff(tx, ty, g.square(k, l), p.ch);
    for (int i = 1; i <= N; ++i)
      for (int j = 1; j <= N; ++j) {
        if (std::abs(i - k) <= 1 && std::abs(j - l) <= 1) continue;
        sys.C(row, g.index(i, j)) += b * panel_coeff(tx, ty, g.merged(i, j), p.ch);
      }
    if (p.h)
      for (int i = 1; i <= N; ++i)
        for (int j = 1; j <= N; ++j)
          sys.C(row, g.index(i, j)) += g.merged(i, j).area() * p.h(tx, ty, g.node_x(i), g.node_y(j));
    if (rhs) sys.F(row) = p.f(tx, ty);
  });
  return sys;
}

}  // namespace

DenseSystem assemble_grid(const Problem2D& p, const Grid2D& g, Exec exec) { return assemble_rows(p, g, exec, true); }

ShiftChoice tune_shift(const Problem2D& p, int N, double A, double M) {
  std::vector<std::pair<double, double>> cand{{0.5, 0.5}};
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) cand.emplace_back((i + 0.5) / 16, (j + 0.5) / 16);
  ShiftChoice best;
  best.dominance.min_margin = -inf;
  const double h = 2 * A / (N + 2);
  for (auto [u, v] : cand) {
    const Grid2D g = build_grid(N, A, u * h, v * h);
    auto dom = hadamard_margins(assemble_rows(p, g, Exec::parallel, false));
    ++best.tried;
    if (dom.min_margin > best.dominance.min_margin) {
      best.h1 = g.h1;
      best.h2 = g.h2;
      best.dominance = dom;
    }
    if (dom.min_margin > M) {
      best.h1 = g.h1;
      best.h2 = g.h2;
      best.dominance = std::move(dom);
      best.feasible = true;
      return best;
    }
  }
  return best;
}

cplx Solution2D::operator()(double t1, double t2) const {
  return x[grid.index(locate(grid, t1), locate(grid, t2))];
}

Solution2D assemble_solve(const Problem2D& p, const Grid2D& g) {
  const DenseSystem sys = assemble_grid(p, g);
  Solution2D s;
  s.grid = g;
  auto lu = lu_solve(sys);
  s.x = to_cvec(lu.x);
  s.report.scheme = "grid2d";
  s.report.n = g.N;
  s.report.residual = lu.residual;
  s.report.dominance = hadamard_margins(sys);
  s.report.solution_norm = max_abs(s.x);
  s.report.parameter = g.h1;
  return s;
}

Solution2D assemble_solve(const Problem2D& p, int N, double A, double h1, double h2) {
  if (h1 > 0 && h2 > 0) return assemble_solve(p, build_grid(N, A, h1, h2));
  const ShiftChoice c = tune_shift(p, N, A);
  if (!c.feasible)
    fail(ErrorKind::tuning, "no shift gives row dominance; best margin " + std::to_string(c.dominance.min_margin) +
                                " after " + std::to_string(c.tried) + " shifts");
  return assemble_solve(p, build_grid(N, A, c.h1, c.h2));
}

Solution2D parallel_solve(const Problem2D& p, const Grid2D& g, int P, double tol) {
  const int n = g.N * g.N;
  if (P < 1 || n % P != 0) fail(ErrorKind::invalid_input, "block count must divide N^2");
  const DenseSystem sys = assemble_grid(p, g);
  const BlockPartition part(sys.C, P);
  auto res = block_jacobi_solve(part, sys.F, Vec::Zero(n), tol);
  Solution2D s;
  s.grid = g;
  s.x = to_cvec(res.x);
  s.sweeps = res.sweeps;
  s.report.scheme = "grid2d-blocks";
  s.report.n = g.N;
  s.report.residual = (sys.C * res.x - sys.F).lpNorm<Eigen::Infinity>() / std::max(1e-300, sys.F.lpNorm<Eigen::Infinity>());
  s.report.dominance = hadamard_margins(sys);
  s.report.solution_norm = max_abs(s.x);
  s.report.parameter = g.h1;
  return s;
}

cplx apply_operator(const Problem2D& p, double A, const std::function<cplx(double, double)>& x, double t1,
                    double t2) {
  const Rect G{-A, A, -A, A};
  if (!strictly_inside(t1, t2, G)) fail(ErrorKind::domain, "point outside the open square");
  const cplx x0 = x(t1, t2);
  const rvec b = interior_breaks(t1, t2, G);
  std::function<cplx(double)> ray = [&](double th) {
    const double c = std::cos(th), s = std::sin(th);
    const double R = exit_length(t1, t2, G, c, s);
    const cplx radial =
        gl_sum(32, 0.0, R, [&](double rho) { return (x(t1 + rho * c, t2 + rho * s) - x0) / rho; });
    return p.ch.phi(th) * (x0 * std::log(R) + radial);
  };
  cplx pv{};
  for (std::size_t i = 0; i + 1 < b.size(); ++i) pv += integrate_complex(ray, b[i], b[i + 1], 1e-11);
  cplx out = p.a(t1, t2) * x0 + p.b(t1, t2) * pv;
  if (p.h)
    out += gl_sum(32, -A, A, [&](double u) {
      return gl_sum(32, -A, A, [&](double v) { return p.h(t1, t2, u, v) * x(u, v); });
    });
  return out;
}

namespace {

struct AxisData {
  rvec nodes;                    // t_k^i
  std::vector<rvec> xs, ws;      // cubature points over the merged interval of cell k
  std::vector<std::vector<rvec>> psi;  // psi[k][point][i]
};

AxisData axis_data(const Grid2D& g, int r) {
  AxisData d;
  const int N = g.N;
  d.xs.resize(N + 1);
  d.ws.resize(N + 1);
  d.psi.resize(N + 1);
  const auto& [gx, gw] = gl_rule(8);
  for (int k = 1; k <= N; ++k) {
    for (int i = 1; i <= r; ++i) d.nodes.push_back(g.t[k] + g.h * i / (r + 1));
    auto [lo, hi] = g.interval(k);
    const int parts = static_cast<int>(std::lround((hi - lo) / g.h));
    for (int q = 0; q < parts; ++q) {
      const double a = lo + q * g.h, c = a + 0.5 * g.h;
      for (std::size_t m = 0; m < gx.size(); ++m) {
        const double x = c + 0.5 * g.h * gx[m];
        d.xs[k].push_back(x);
        d.ws[k].push_back(0.5 * g.h * gw[m]);
        d.psi[k].push_back(lagrange_basis(x, g.t[k], g.h, r));
      }
    }
  }
  return d;
}

}  // namespace

DenseSystem assemble_spline(const Problem2D& p, const SplineParams2D& prm, Exec exec) {
  const int N = prm.N, r = prm.r;
  if (r < 1 || r > 3) fail(ErrorKind::invalid_input, "spline degree r must be 1, 2 or 3");
  if (!(prm.q1 > 0 && prm.q2 > 0)) fail(ErrorKind::invalid_input, "q1, q2 must be positive");
  const Grid2D g = build_grid(N, prm.A, 0.5 * 2 * prm.A / (N + 2), 0.5 * 2 * prm.A / (N + 2));
  const double hs = prm.h;
  if (!(hs > 0) || hs > 2 * prm.A / (r * N) * (1 + 1e-12))
    fail(ErrorKind::invalid_input, "special rectangle size must lie in (0, 2A/(rN)]");
  const AxisData ax = axis_data(g, r);
  const int Nr = N * r, n = Nr * Nr;
  DenseSystem sys{Mat::Zero(n, n), Vec::Zero(n)};
  const auto& [g4x, g4w] = gl_rule(4);
  parallel_for(0, n, exec, [&](int row) {
    const int I = row / Nr, J = row % Nr;
    const int k = I / r + 1, i = I % r, l = J / r + 1, j = J % r;
    const double mx = ax.nodes[I], my = ax.nodes[J];
    const cplx a = p.a(mx, my), b = p.b(mx, my);
    const Rect S{mx - prm.q1 * hs, mx + hs, my - prm.q2 * hs, my + hs};
    // self cell: polar form with the value at the node split off
    std::vector<double> self(r * r, 0.0);
    const rvec br = interior_breaks(mx, my, S);
    const auto& [gx, gw] = gl_rule(24);
    for (std::size_t arc = 0; arc + 1 < br.size(); ++arc) {
      const double c0 = 0.5 * (br[arc] + br[arc + 1]), h0 = 0.5 * (br[arc + 1] - br[arc]);
      for (std::size_t m = 0; m < gx.size(); ++m) {
        const double th = c0 + h0 * gx[m], wt = gw[m] * h0 * p.ch.phi(th);
        const double c = std::cos(th), s = std::sin(th);
        const double R = exit_length(mx, my, S, c, s);
        std::vector<double> radial(r * r, 0.0);
        for (std::size_t q = 0; q < g4x.size(); ++q) {
          const double rho = 0.5 * R * (1 + g4x[q]);
          const rvec bx = lagrange_basis(mx + rho * c, g.t[k], g.h, r);
          const rvec by = lagrange_basis(my + rho * s, g.t[l], g.h, r);
          for (int u = 0; u < r; ++u)
            for (int v = 0; v < r; ++v) {
              const double gm = (u == i && v == j) ? 1.0 : 0.0;
              radial[u * r + v] += 0.5 * R * g4w[q] * (bx[u] * by[v] - gm) / rho;
            }
        }
        for (int u = 0; u < r; ++u)
          for (int v = 0; v < r; ++v) {
            const double gm = (u == i && v == j) ? 1.0 : 0.0;
            self[u * r + v] += wt * (gm * std::log(R) + radial[u * r + v]);
          }
      }
    }
    for (int u = 0; u < r; ++u)
      for (int v = 0; v < r; ++v) sys.C(row, ((k - 1) * r + u) * Nr + (l - 1) * r + v) += b * self[u * r + v];
    sys.C(row, row) += a;
    std::vector<double> far(r * r);
    for (int k1 = 1; k1 <= N; ++k1)
      for (int l1 = 1; l1 <= N; ++l1) {
        if (std::abs(k1 - k) <= 1 && std::abs(l1 - l) <= 1) continue;
        std::fill(far.begin(), far.end(), 0.0);
        for (std::size_t px = 0; px < ax.xs[k1].size(); ++px)
          for (std::size_t py = 0; py < ax.xs[l1].size(); ++py) {
            const double dx = ax.xs[k1][px] - mx, dy = ax.xs[l1][py] - my;
            const double K = ax.ws[k1][px] * ax.ws[l1][py] * p.ch.phi(std::atan2(dy, dx)) / (dx * dx + dy * dy);
            for (int u = 0; u < r; ++u)
              for (int v = 0; v < r; ++v) far[u * r + v] += K * ax.psi[k1][px][u] * ax.psi[l1][py][v];
          }
        for (int u = 0; u < r; ++u)
          for (int v = 0; v < r; ++v) sys.C(row, ((k1 - 1) * r + u) * Nr + (l1 - 1) * r + v) += b * far[u * r + v];
      }
    sys.F(row) = p.f(mx, my);
  });
  return sys;
}

cplx SplineSolution2D::operator()(double t1, double t2) const {
  const int r = params.r, Nr = params.N * r;
  const int k = locate(grid, t1), l = locate(grid, t2);
  const rvec px = lagrange_basis(t1, grid.t[k], grid.h, r), py = lagrange_basis(t2, grid.t[l], grid.h, r);
  cplx s{};
  for (int u = 0; u < r; ++u)
    for (int v = 0; v < r; ++v) s += px[u] * py[v] * x[((k - 1) * r + u) * Nr + (l - 1) * r + v];
  return s;
}

SplineSolution2D solve_spline(const Problem2D& p, SplineParams2D prm, const std::function<cplx(double, double)>& exact) {
  if (prm.N < 4) fail(ErrorKind::invalid_input, "grid needs N >= 4");
  const double cell = 2 * prm.A / (prm.N + 2);
  const double hmax = std::min(2 * prm.A / (prm.r * prm.N), cell / (prm.r + 1) / std::max({1.0, prm.q1, prm.q2}));
  const bool search = !(prm.h > 0);
  if (search) prm.h = hmax;
  DenseSystem sys;
  DominanceReport dom;
  double last = -inf;
  for (int m = 0;; ++m) {
    sys = assemble_spline(p, prm);
    dom = hadamard_margins(sys);
    if (!search || dom.dominant) break;
    if (m >= 40 || std::abs(dom.min_margin - last) < 1e-13 * (1 + std::abs(last)))
      fail(ErrorKind::tuning, "shrinking the special rectangle does not reach row dominance; best margin " +
                                  std::to_string(dom.min_margin));
    last = dom.min_margin;
    prm.h *= 0.5;
  }
  SplineSolution2D s;
  s.params = prm;
  s.grid = build_grid(prm.N, prm.A, 0.5 * cell, 0.5 * cell);
  s.nodes = axis_data(s.grid, prm.r).nodes;
  auto lu = lu_solve(sys);
  s.x = to_cvec(lu.x);
  s.report.scheme = "spline2d";
  s.report.n = prm.N;
  s.report.residual = lu.residual;
  s.report.dominance = dom;
  s.report.solution_norm = max_abs(s.x);
  s.report.parameter = prm.h;
  if (exact) {
    const int Nr = prm.N * prm.r;
    double e = 0.0;
    for (int I = 0; I < Nr; ++I)
      for (int J = 0; J < Nr; ++J) e = std::max(e, std::abs(s.x[I * Nr + J] - exact(s.nodes[I], s.nodes[J])));
    s.report.error = e;
  }
  return s;
}

}  // namespace sie
