#include "sie/newton.hpp"

#include <cmath>
#include <random>
#include <string>

#include <Eigen/LU>
#include <Eigen/QR>

namespace sie {

double mat_inf_norm(const Mat& A) { return A.rows() ? A.cwiseAbs().rowwise().sum().maxCoeff() : 0.0; }

double inverse_norm_estimate(const std::function<Vec(const Vec&)>& apply_inverse, Eigen::Index dim,
                             std::uint64_t seed, int probes) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double best = 0.0;
  for (int p = 0; p < probes; ++p) {
    Vec v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v(i) = cplx(u(rng), u(rng));
    best = std::max(best, max_abs(apply_inverse(v)) / max_abs(v));
  }
  return best;
}

namespace {

struct Stepper {
  NewtonMode mode;
  Eigen::PartialPivLU<Mat> lu;
  Eigen::CompleteOrthogonalDecomposition<Mat> cod;
  bool square = true;

  void factor(const Mat& J) {
    square = J.rows() == J.cols();
    if (mode == NewtonMode::right_inverse || !square) {
      cod.compute(J);
      if (cod.rank() < std::min(J.rows(), J.cols())) fail(ErrorKind::singular, "singular Jacobian");
    } else {
      lu.compute(J);
      const auto& U = lu.matrixLU();
      const double scale = mat_inf_norm(J);
      for (Eigen::Index i = 0; i < U.rows(); ++i)
        if (!(std::abs(U(i, i)) > 1e-14 * scale)) fail(ErrorKind::singular, "singular Jacobian");
    }
  }
  Vec solve(const Vec& r) const {
    if (mode == NewtonMode::right_inverse || !square) return cod.solve(r);
    return lu.solve(r);
  }
};

}  // namespace

NewtonResult newton_solve(const NonlinearSystem& sys, const Vec& x0, const NewtonConfig& cfg) {
  NewtonResult res;
  auto& rep = res.report;
  Vec x = x0;
  Vec r = sys.residual(x);
  const Mat J0 = sys.jacobian(x);
  Stepper st{cfg.mode, {}, {}, true};
  st.factor(J0);

  rep.residuals.push_back(max_abs(r));
  rep.B0 = inverse_norm_estimate([&](const Vec& v) { return st.solve(v); }, J0.rows(), cfg.seed);

  double best = rep.residuals.back();
  int since_best = 0;
  for (int m = 0; m < cfg.max_iter; ++m) {
    if (rep.residuals.back() <= cfg.tol) {
      rep.converged = true;
      break;
    }
    if (m > 0 && cfg.mode != NewtonMode::modified) st.factor(sys.jacobian(x));
    const Vec dx = st.solve(r);
    const Vec xn = x - dx;
    const double step = max_abs(dx);
    if (m == 0) {
      rep.eta0 = step;
      const Mat J1 = sys.jacobian(xn);
      rep.lipschitz = step > 0 ? mat_inf_norm(J1 - J0) / step : 0.0;
      rep.h = rep.B0 * rep.lipschitz * rep.eta0;
      rep.kantorovich_ok = rep.h <= 0.5;
    }
    if (!rep.steps.empty() && rep.steps.back() > 0) rep.ratios.push_back(step / rep.steps.back());
    rep.steps.push_back(step);
    x = xn;
    r = sys.residual(x);
    const double rn = max_abs(r);
    if (!std::isfinite(rn)) fail(ErrorKind::divergence, "Newton iteration produced a non-finite residual");
    rep.residuals.push_back(rn);
    rep.iterations = m + 1;
    if (rn < best) {
      best = rn;
      since_best = 0;
    } else if (++since_best >= cfg.stagnation) {
      if (rn <= 10.0 * cfg.tol) {
        rep.converged = true;
        break;
      }
      fail(ErrorKind::divergence, "Newton residual stagnated for " + std::to_string(cfg.stagnation) +
                                      " steps at " + std::to_string(rn));
    }
    if (step <= 1e-15 * (1.0 + max_abs(x)) && rn <= 1e3 * cfg.tol) {
      rep.converged = true;
      break;
    }
  }
  if (!rep.converged && rep.residuals.back() <= cfg.tol) rep.converged = true;
  if (!rep.converged)
    fail(ErrorKind::divergence, "Newton did not converge in " + std::to_string(cfg.max_iter) +
                                    " iterations; last residual " + std::to_string(rep.residuals.back()));
  res.x = x;
  return res;
}

}  // namespace sie
