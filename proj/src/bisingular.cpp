#include "sie/bisingular.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace sie {

namespace {

int grid_size(int n) { return 2 * n + 1; }

// E(p, k + n) = e^{i k s_p}
Mat synth(int n, const rvec& s) {
  Mat E(static_cast<Eigen::Index>(s.size()), grid_size(n));
  for (std::size_t p = 0; p < s.size(); ++p)
    for (int k = -n; k <= n; ++k) E(static_cast<Eigen::Index>(p), k + n) = unit(k * s[p]);
  return E;
}

Mat analysis(int n) {
  const int N = grid_size(n);
  const rvec s = torus_angles(n);
  Mat F(N, N);
  for (int k = -n; k <= n; ++k)
    for (int p = 0; p < N; ++p) F(k + n, p) = unit(-k * s[p]) / static_cast<double>(N);
  return F;
}

Mat eval_on(const TrigPoly2D& p, const rvec& s1, const rvec& s2) {
  return synth(p.n, s1) * p.c * synth(p.n, s2).transpose();
}

// unsigned quadrant masks: kpos selects k >= 0, lpos selects l >= 0
TrigPoly2D mask(const TrigPoly2D& p, bool kpos, bool lpos) {
  TrigPoly2D out(p.n);
  for (int k = -p.n; k <= p.n; ++k)
    for (int l = -p.n; l <= p.n; ++l)
      if ((k >= 0) == kpos && (l >= 0) == lpos) out.coef(k, l) = p.coef(k, l);
  return out;
}

TrigPoly2D scaled(const TrigPoly2D& p, cplx s) {
  TrigPoly2D out = p;
  out.c *= s;
  return out;
}

double l2(const Mat& m) { return std::sqrt(m.cwiseAbs2().sum() / static_cast<double>(m.size())); }

Mat exp_of(const TrigPoly2D& p) {
  Mat v = evaluate2d(p, p.n);
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = std::exp(v(i));
  return v;
}

Disk disk_from(cplx a, cplx b) { return {(a + b) / 2.0, std::abs(a - b) / 2.0}; }

Disk disk_from(cplx a, cplx b, cplx c) {
  const double ax = a.real(), ay = a.imag(), bx = b.real(), by = b.imag(), cx = c.real(), cy = c.imag();
  const double d = 2 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
  if (std::abs(d) < 1e-300) {
    Disk best = disk_from(a, b);
    for (const Disk& o : {disk_from(a, c), disk_from(b, c)})
      if (o.radius > best.radius) best = o;
    return best;
  }
  const double a2 = std::norm(a), b2 = std::norm(b), c2 = std::norm(c);
  const cplx ctr{(a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / d,
                 (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / d};
  return {ctr, std::abs(a - ctr)};
}

bool inside(const Disk& D, cplx z) { return std::abs(z - D.center) <= D.radius * (1 + 1e-12) + 1e-15; }

std::vector<cplx> flatten(const Mat& m) { return {m.data(), m.data() + m.size()}; }

// mixed quadrant parts X^{+-} + X^{-+} of grid samples, with the signs of x = X++ - X+- - X-+ + X--
struct Quads {
  Mat pp, pm, mp, mm;  // unsigned projections P^{..} x at the nodes
};

Quads project(const Mat& v, int n) {
  const TrigPoly2D c = interpolate2d(v);
  return {evaluate2d(mask(c, true, true), n), evaluate2d(mask(c, true, false), n),
          evaluate2d(mask(c, false, true), n), evaluate2d(mask(c, false, false), n)};
}

}  // namespace

cplx TrigPoly2D::operator()(double s1, double s2) const {
  cplx acc = 0.0;
  for (int k = -n; k <= n; ++k) {
    const cplx e1 = unit(k * s1);
    for (int l = -n; l <= n; ++l) acc += c(k + n, l + n) * e1 * unit(l * s2);
  }
  return acc;
}

rvec torus_angles(int n) {
  const int N = grid_size(n);
  rvec s(N);
  for (int p = 0; p < N; ++p) s[p] = 2.0 * pi * p / N;
  return s;
}

TrigPoly2D interpolate2d(const Mat& samples) {
  if (samples.rows() != samples.cols() || samples.rows() % 2 == 0)
    fail(ErrorKind::invalid_input, "torus samples need an odd square grid");
  const int n = static_cast<int>(samples.rows() / 2);
  const Mat F = analysis(n);
  TrigPoly2D p(n);
  p.c = F * samples * F.transpose();
  return p;
}

TrigPoly2D interpolate2d(const std::function<cplx(cplx, cplx)>& f, int n) { return interpolate2d(sample2d(f, n)); }

Mat evaluate2d(const TrigPoly2D& p, int n_grid) {
  const rvec s = torus_angles(n_grid);
  return eval_on(p, s, s);
}

Mat sample2d(const std::function<cplx(cplx, cplx)>& f, int n) {
  const rvec s = torus_angles(n);
  const int N = grid_size(n);
  Mat v(N, N);
  for (int p = 0; p < N; ++p)
    for (int q = 0; q < N; ++q) v(p, q) = f(unit(s[p]), unit(s[q]));
  return v;
}

TrigPoly2D cauchy1(const TrigPoly2D& p) {
  TrigPoly2D out = p;
  for (int k = -p.n; k < 0; ++k) out.c.row(k + p.n) *= -1.0;
  return out;
}

TrigPoly2D cauchy2(const TrigPoly2D& p) {
  TrigPoly2D out = p;
  for (int l = -p.n; l < 0; ++l) out.c.col(l + p.n) *= -1.0;
  return out;
}

TrigPoly2D cauchy12(const TrigPoly2D& p) { return cauchy1(cauchy2(p)); }

TrigPoly2D QuadrantSplit::recombine() const {
  TrigPoly2D out(pp.n);
  out.c = pp.c - pm.c - mp.c + mm.c;
  return out;
}

TrigPoly2D QuadrantSplit::s12() const {
  TrigPoly2D out(pp.n);
  out.c = pp.c + pm.c + mp.c + mm.c;
  return out;
}

QuadrantSplit quadrant_split(const TrigPoly2D& p) {
  return {mask(p, true, true), scaled(mask(p, true, false), -1.0), scaled(mask(p, false, true), -1.0),
          mask(p, false, false)};
}

FactorData2D factorize(const Mat& G) {
  if (G.rows() != G.cols() || G.rows() % 2 == 0) fail(ErrorKind::invalid_input, "G needs an odd square grid");
  const int N = static_cast<int>(G.rows()), m = N / 2;
  const double scale = G.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < G.size(); ++i)
    if (!(std::abs(G(i)) > 1e-14 * scale)) fail(ErrorKind::domain, "G vanishes at a node");

  auto step = [](cplx to, cplx from) { return std::arg(to / from); };
  FactorData2D fd;
  fd.m = m;
  for (int p = 0; p < N; ++p) {
    double w = 0.0;
    for (int q = 0; q < N; ++q) w += step(G(p, (q + 1) % N), G(p, q));
    fd.kappa2 = std::max(fd.kappa2, std::abs(static_cast<int>(std::lround(w / (2 * pi)))));
  }
  for (int q = 0; q < N; ++q) {
    double w = 0.0;
    for (int p = 0; p < N; ++p) w += step(G((p + 1) % N, q), G(p, q));
    fd.kappa1 = std::max(fd.kappa1, std::abs(static_cast<int>(std::lround(w / (2 * pi)))));
  }
  if (fd.kappa1 != 0 || fd.kappa2 != 0)
    fail(ErrorKind::domain, "nonzero winding of G: kappa1 = " + std::to_string(fd.kappa1) +
                                ", kappa2 = " + std::to_string(fd.kappa2));

  Mat phase(N, N);
  phase(0, 0) = std::arg(G(0, 0));
  for (int p = 1; p < N; ++p) phase(p, 0) = phase(p - 1, 0).real() + step(G(p, 0), G(p - 1, 0));
  for (int p = 0; p < N; ++p)
    for (int q = 1; q < N; ++q) phase(p, q) = phase(p, q - 1).real() + step(G(p, q), G(p, q - 1));
  Mat lnG(N, N);
  for (int p = 0; p < N; ++p)
    for (int q = 0; q < N; ++q) lnG(p, q) = cplx{std::log(std::abs(G(p, q))), phase(p, q).real()};

  const QuadrantSplit parts = quadrant_split(interpolate2d(lnG));
  fd.pp = interpolate2d(exp_of(parts.pp));
  fd.pm = interpolate2d(exp_of(parts.pm));
  fd.mp = interpolate2d(exp_of(parts.mp));
  fd.mm = interpolate2d(exp_of(parts.mm));
  const Mat r = evaluate2d(fd.pp, m).cwiseProduct(evaluate2d(fd.mm, m)) -
                G.cwiseProduct(evaluate2d(fd.pm, m)).cwiseProduct(evaluate2d(fd.mp, m));
  fd.residual = r.cwiseAbs().maxCoeff();
  return fd;
}

FactorData2D factorize(const std::function<cplx(cplx, cplx)>& G, int m) {
  if (m < 1) fail(ErrorKind::invalid_input, "factorization degree must be positive");
  FactorData2D fd = factorize(sample2d(G, m));
  // truncation residual between the nodes
  const int N = grid_size(m);
  rvec s = torus_angles(m);
  for (double& v : s) v += pi / N;
  const Mat pp = eval_on(fd.pp, s, s), pm = eval_on(fd.pm, s, s), mp = eval_on(fd.mp, s, s),
            mm = eval_on(fd.mm, s, s);
  double r = 0.0;
  for (int p = 0; p < N; ++p)
    for (int q = 0; q < N; ++q)
      r = std::max(r, std::abs(pp(p, q) * mm(p, q) - G(unit(s[p]), unit(s[q])) * pm(p, q) * mp(p, q)));
  fd.residual = std::max(fd.residual, r);
  return fd;
}

std::function<cplx(cplx, cplx)> riemann_coefficient(const BisingularProblem& p) {
  return [a = p.a, d = p.d](cplx t1, cplx t2) {
    const cplx av = a(t1, t2), dv = d(t1, t2);
    return (av - dv) / (av + dv);
  };
}

namespace {

struct Basis {
  int n, N;
  Mat pp, pm, mp, mm;  // psi values at the nodes
  rvec s;
};

Basis basis_at_nodes(const FactorData2D& f, int n) {
  const rvec s = torus_angles(n);
  return {n, grid_size(n), eval_on(f.pp, s, s), eval_on(f.pm, s, s), eval_on(f.mp, s, s), eval_on(f.mm, s, s), s};
}

// quadrant index of (k, l): 0 ++, 1 +-, 2 -+, 3 --
int quad(int k, int l) { return (k < 0 ? 2 : 0) + (l < 0 ? 1 : 0); }

cplx psi_at(const Basis& b, int Q, int p, int q) {
  switch (Q) {
    case 0: return b.pp(p, q);
    case 1: return b.pm(p, q);
    case 2: return b.mp(p, q);
    default: return b.mm(p, q);
  }
}

}  // namespace

DenseSystem assemble_collocation(const BisingularProblem& pr, const FactorData2D& factor, int n, Exec exec) {
  if (n < 1) fail(ErrorKind::invalid_input, "collocation degree must be positive");
  const Basis B = basis_at_nodes(factor, n);
  const int N = B.N, M = N * N;
  const auto Gf = riemann_coefficient(pr);
  DenseSystem sys{Mat(M, M), Vec(M)};
  Mat X;  // x at the nodes per unknown, for the compact term
  if (pr.h) X.resize(M, M);
  Vec apd(M);
  parallel_for(0, M, exec, [&](int r) {
    const int p = r / N, q = r % N;
    const cplx t1 = unit(B.s[p]), t2 = unit(B.s[q]);
    const cplx G = Gf(t1, t2);
    apd(r) = pr.a(t1, t2) + pr.d(t1, t2);
    sys.F(r) = pr.f(t1, t2) / apd(r);
    for (int k = -n; k <= n; ++k)
      for (int l = -n; l <= n; ++l) {
        const int Q = quad(k, l);
        const cplx v = psi_at(B, Q, p, q) * unit(k * B.s[p] + l * B.s[q]);
        const bool mixed = Q == 1 || Q == 2;
        const int u = (k + n) * N + (l + n);
        sys.C(r, u) = mixed ? -G * v : v;
        if (pr.h) X(r, u) = mixed ? -v : v;
      }
  });
  if (pr.h) {
    const double w = std::pow(2 * pi / N, 2);
    Mat U(M, M);
    parallel_for(0, M, exec, [&](int r) {
      const cplx t1 = unit(B.s[r / N]), t2 = unit(B.s[r % N]);
      for (int c = 0; c < M; ++c) {
        const cplx u1 = unit(B.s[c / N]), u2 = unit(B.s[c % N]);
        U(r, c) = w * pr.h(t1, t2, u1, u2) * (I * u1) * (I * u2) / apd(r);
      }
    });
    sys.C += U * X;
  }
  return sys;
}

cplx BisingularSolution::operator()(double s1, double s2) const {
  cplx acc = 0.0;
  const TrigPoly2D* psi[4] = {&factor.pp, &factor.pm, &factor.mp, &factor.mm};
  cplx part[4] = {};
  for (int k = -n; k <= n; ++k)
    for (int l = -n; l <= n; ++l) part[quad(k, l)] += alpha.coef(k, l) * unit(k * s1 + l * s2);
  for (int Q = 0; Q < 4; ++Q) acc += (Q == 1 || Q == 2 ? -1.0 : 1.0) * (*psi[Q])(s1, s2) * part[Q];
  return acc;
}

BisingularSolution solve_collocation(const BisingularProblem& p, int n, int m) {
  if (!p.a || !p.d || !p.f) fail(ErrorKind::invalid_input, "bisingular problem needs a, d and f");
  BisingularSolution sol;
  sol.n = n;
  sol.factor = factorize(riemann_coefficient(p), m > 0 ? m : 2 * n);
  const DenseSystem sys = assemble_collocation(p, sol.factor, n);
  const LuResult lr = lu_solve(sys);
  const int N = grid_size(n);
  sol.alpha = TrigPoly2D(n);
  for (int u = 0; u < N * N; ++u) sol.alpha.c(u / N, u % N) = lr.x(u);
  const Basis B = basis_at_nodes(sol.factor, n);
  sol.nodal = Mat::Zero(N, N);
  for (int p0 = 0; p0 < N; ++p0)
    for (int q = 0; q < N; ++q)
      for (int k = -n; k <= n; ++k)
        for (int l = -n; l <= n; ++l) {
          const int Q = quad(k, l);
          sol.nodal(p0, q) += (Q == 1 || Q == 2 ? -1.0 : 1.0) * psi_at(B, Q, p0, q) * sol.alpha.coef(k, l) *
                              unit(k * B.s[p0] + l * B.s[q]);
        }
  sol.report.scheme = "bisingular_collocation";
  sol.report.n = n;
  sol.report.residual = lr.residual;
  sol.report.dominance = hadamard_margins(sys);
  sol.report.solution_norm = sol.nodal.cwiseAbs().maxCoeff();
  sol.report.parameter = sol.factor.residual;
  return sol;
}

Disk min_enclosing_disk(std::vector<cplx> pts, std::uint64_t seed) {
  if (pts.empty()) fail(ErrorKind::invalid_input, "no points for the enclosing disk");
  std::mt19937_64 rng(seed);
  std::shuffle(pts.begin(), pts.end(), rng);
  Disk D{pts[0], 0.0};
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (inside(D, pts[i])) continue;
    D = {pts[i], 0.0};
    for (std::size_t j = 0; j < i; ++j) {
      if (inside(D, pts[j])) continue;
      D = disk_from(pts[i], pts[j]);
      for (std::size_t k = 0; k < j; ++k)
        if (!inside(D, pts[k])) D = disk_from(pts[i], pts[j], pts[k]);
    }
  }
  return D;
}

IterationResult riemann_iterate(const BisingularProblem& pr, const IterationConfig& cfg) {
  if (cfg.n < 1) fail(ErrorKind::invalid_input, "grid degree must be positive");
  const int n = cfg.n;
  const Mat G = sample2d(riemann_coefficient(pr), n);
  const Mat f1 = sample2d([&](cplx t1, cplx t2) { return pr.f(t1, t2) / (pr.a(t1, t2) + pr.d(t1, t2)); }, n);
  IterationResult res;
  res.disk = min_enclosing_disk(flatten(G));
  if (cfg.alpha == 0.0) {
    if (!(std::abs(res.disk.center) > res.disk.radius))
      fail(ErrorKind::tuning, "angle condition fails: enclosing disk of G (center " +
                                  std::to_string(res.disk.center.real()) + "+" +
                                  std::to_string(res.disk.center.imag()) + "i, radius " +
                                  std::to_string(res.disk.radius) + ") contains 0");
    res.alpha = 1.0 / res.disk.center;
  } else {
    res.alpha = cfg.alpha;
  }
  const Mat mult = (res.alpha * G).array() - 1.0;
  res.q = mult.cwiseAbs().maxCoeff();
  if (!(res.q < 1.0)) fail(ErrorKind::tuning, "angle condition fails: max |alpha G - 1| = " + std::to_string(res.q));

  Mat psi = f1;
  for (int it = 0; it < cfg.max_iter; ++it) {
    const Quads Q = project(psi, n);
    const Mat next = mult.cwiseProduct(-(Q.pm + Q.mp)) + f1;
    const double d = l2(next - psi);
    psi = next;
    ++res.iterations;
    if (!res.history.empty() && res.history.back() > 0) res.ratios.push_back(d / res.history.back());
    res.history.push_back(d);
    if (d <= cfg.tol * (1.0 + l2(psi))) {
      res.converged = true;
      break;
    }
  }
  const Quads Q = project(psi, n);
  res.nodal = Q.pp + Q.mm + res.alpha * (Q.pm + Q.mp);
  res.x = interpolate2d(res.nodal);
  if (!res.converged) fail(ErrorKind::divergence, "Riemann iteration did not reach tolerance");
  return res;
}

std::array<std::function<cplx(cplx, cplx)>, 4> four_term_coefficients(const FourTermProblem& p) {
  const auto a = p.a, b = p.b, c = p.c, d = p.d;
  return {[=](cplx x, cplx y) { return a(x, y) + b(x, y) + c(x, y) + d(x, y); },
          [=](cplx x, cplx y) { return -a(x, y) - b(x, y) + c(x, y) + d(x, y); },
          [=](cplx x, cplx y) { return -a(x, y) + b(x, y) - c(x, y) + d(x, y); },
          [=](cplx x, cplx y) { return a(x, y) - b(x, y) - c(x, y) + d(x, y); }};
}

FourTermResult four_term_iterate(const FourTermProblem& p, const FourTermConfig& cfg) {
  if (!p.a || !p.b || !p.c || !p.d || !p.f) fail(ErrorKind::invalid_input, "four-term problem needs a, b, c, d, f");
  const int n = cfg.n;
  const auto coef = four_term_coefficients(p);
  // target values of scale * coefficient: -1, +1, +1, -1
  const double target[4] = {-1.0, 1.0, 1.0, -1.0};
  FourTermResult res;
  std::array<Mat, 4> mult;
  for (int i = 0; i < 4; ++i) {
    const Mat c = sample2d(coef[i], n);
    cplx s = cfg.scale[i];
    if (s == 0.0) {
      const Disk D = min_enclosing_disk(flatten(c));
      s = std::abs(D.center) > D.radius ? target[i] / D.center : cplx{};
    }
    res.scale[i] = s;
    mult[i] = (s * c).array() - target[i];
    res.q[i] = s == 0.0 ? INFINITY : mult[i].cwiseAbs().maxCoeff();
  }
  const double qsum = res.q[0] + res.q[1] + res.q[2] + res.q[3];
  if (!(qsum < 1.0))
    fail(ErrorKind::tuning, "four-term scalings infeasible: q = (" + std::to_string(res.q[0]) + ", " +
                                std::to_string(res.q[1]) + ", " + std::to_string(res.q[2]) + ", " +
                                std::to_string(res.q[3]) + ")");
  // multipliers act on v^{++} = P++ v, v^{+-} = -P+- v, v^{-+} = -P-+ v, v^{--} = P-- v; the fixed point
  // satisfies the quadrant equation with right side f when the iteration subtracts f
  const Mat f = sample2d(p.f, n);
  Mat v = -f;
  for (int it = 0; it < cfg.max_iter; ++it) {
    const Quads Q = project(v, n);
    const Mat next = (mult[0].cwiseProduct(Q.pp) - mult[1].cwiseProduct(Q.pm) - mult[2].cwiseProduct(Q.mp) +
                      mult[3].cwiseProduct(Q.mm)) -
                     f;
    const double d = l2(next - v);
    v = next;
    ++res.iterations;
    if (!res.history.empty() && res.history.back() > 0) res.ratios.push_back(d / res.history.back());
    res.history.push_back(d);
    if (d <= cfg.tol * (1.0 + l2(v))) {
      res.converged = true;
      break;
    }
  }
  const Quads Q = project(v, n);
  res.nodal = res.scale[0] * Q.pp + res.scale[1] * Q.pm + res.scale[2] * Q.mp + res.scale[3] * Q.mm;
  res.x = interpolate2d(res.nodal);
  if (!res.converged) fail(ErrorKind::divergence, "four-term iteration did not reach tolerance");
  return res;
}

}  // namespace sie
