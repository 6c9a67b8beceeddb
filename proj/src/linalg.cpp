#include "sie/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace sie {

static double inf_norm(const Mat& C) { return C.rows() ? C.cwiseAbs().rowwise().sum().maxCoeff() : 0.0; }

LuResult lu_solve(const DenseSystem& sys) {
  if (sys.C.rows() != sys.C.cols() || sys.C.rows() != sys.F.size())
    fail(ErrorKind::invalid_input, "lu_solve: dimension mismatch");
  if (!sys.C.allFinite() || !sys.F.allFinite()) fail(ErrorKind::invalid_input, "lu_solve: non-finite entries");
  Eigen::PartialPivLU<Mat> lu(sys.C);
  const double scale = inf_norm(sys.C);
  const auto& U = lu.matrixLU();
  for (Eigen::Index i = 0; i < U.rows(); ++i)
    if (std::abs(U(i, i)) < 1e-14 * scale) fail(ErrorKind::singular, "singular system: pivot below 1e-14 ||C||");
  LuResult r;
  r.x = lu.solve(sys.F);
  const double fn = max_abs(sys.F);
  const double rn = max_abs(Vec(sys.C * r.x - sys.F));
  r.residual = fn > 0 ? rn / fn : rn;
  return r;
}

DominanceReport hadamard_margins(const Mat& C) {
  DominanceReport rep;
  const auto M = C.rows();
  rep.margins.resize(M);
  for (Eigen::Index j = 0; j < M; ++j) {
    double off = 0.0;
    for (Eigen::Index k = 0; k < C.cols(); ++k)
      if (k != j) off += std::abs(C(j, k));
    rep.margins[j] = std::abs(C(j, j)) - off;
  }
  rep.min_margin = M ? *std::min_element(rep.margins.begin(), rep.margins.end()) : 0.0;
  rep.dominant = M > 0 && rep.min_margin > 0.0;
  return rep;
}

double jacobi_contraction(const Mat& C) {
  double q = 0.0;
  for (Eigen::Index j = 0; j < C.rows(); ++j) {
    const double d = std::abs(C(j, j));
    const double off = C.row(j).cwiseAbs().sum() - d;
    q = std::max(q, d > 0 ? off / d : INFINITY);
  }
  return q;
}

BlockPartition::BlockPartition(const Mat& C, int P) : C_(C), P_(P) {
  if (C.rows() != C.cols()) fail(ErrorKind::invalid_input, "block partition needs a square matrix");
  if (P < 1 || C.rows() % P != 0) fail(ErrorKind::invalid_input, "block count must divide the dimension");
  L_ = static_cast<int>(C.rows() / P);
  diag_.reserve(P);
  const double scale = inf_norm(C);
  for (int k = 0; k < P; ++k) {
    diag_.emplace_back(Mat(C.block(k * L_, k * L_, L_, L_)));
    const auto& U = diag_.back().matrixLU();
    for (int i = 0; i < L_; ++i)
      if (std::abs(U(i, i)) < 1e-14 * scale) fail(ErrorKind::singular, "singular diagonal block " + std::to_string(k));
  }
}

void BlockPartition::solve_block(int k, const Vec& rhs, const Vec& x_prev, Vec& x_next) const {
  const auto off = static_cast<Eigen::Index>(k) * L_;
  Vec r = rhs.segment(off, L_);
  for (int l = 0; l < P_; ++l) {
    if (l == k) continue;
    r.noalias() -= C_.block(off, static_cast<Eigen::Index>(l) * L_, L_, L_) * x_prev.segment(l * L_, L_);
  }
  x_next.segment(off, L_) = diag_[k].solve(r);
}

static std::vector<int> visit_order(int P, const std::vector<int>& order) {
  if (order.empty()) {
    std::vector<int> o(P);
    std::iota(o.begin(), o.end(), 0);
    return o;
  }
  if (static_cast<int>(order.size()) != P) fail(ErrorKind::invalid_input, "block order must list every block once");
  return order;
}

Vec block_jacobi_sweep_serial(const BlockPartition& part, const Vec& rhs, const Vec& x_prev,
                              const std::vector<int>& order) {
  Vec x_next(x_prev.size());
  for (int k : visit_order(part.blocks(), order)) part.solve_block(k, rhs, x_prev, x_next);
  return x_next;
}

Vec block_jacobi_sweep(const BlockPartition& part, const Vec& rhs, const Vec& x_prev, const std::vector<int>& order) {
  const auto o = visit_order(part.blocks(), order);
  Vec x_next(x_prev.size());
  parallel_for(0, static_cast<int>(o.size()), Exec::parallel, [&](int i) {
    part.solve_block(o[i], rhs, x_prev, x_next);
  });
  return x_next;
}

BlockJacobiResult block_jacobi_solve(const BlockPartition& part, const Vec& rhs, const Vec& x0, double tol,
                                     int max_sweeps, bool parallel) {
  BlockJacobiResult res;
  res.contraction = jacobi_contraction(part.matrix());
  if (!(res.contraction < 1.0))
    fail(ErrorKind::divergence,
         "block Jacobi refused: contraction estimate q = " + std::to_string(res.contraction) + " >= 1");
  Vec x = x0;
  for (int m = 1; m <= max_sweeps; ++m) {
    Vec xn = parallel ? block_jacobi_sweep(part, rhs, x) : block_jacobi_sweep_serial(part, rhs, x);
    const double dx = max_abs(Vec(xn - x));
    res.history.push_back(dx);
    x = std::move(xn);
    res.sweeps = m;
    if (dx < tol * (1.0 + max_abs(x))) {
      res.x = x;
      return res;
    }
  }
  fail(ErrorKind::divergence, "block Jacobi did not converge within " + std::to_string(max_sweeps) + " sweeps");
}

}  // namespace sie
