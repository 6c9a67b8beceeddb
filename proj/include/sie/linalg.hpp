#pragma once

#include <vector>

#include <Eigen/LU>

#include "sie/common.hpp"

namespace sie {

struct DenseSystem {
  Mat C;
  Vec F;
};

struct LuResult {
  Vec x;
  double residual = 0.0;  // ||Cx - F||_inf / ||F||_inf
};

struct DominanceReport {
  rvec margins;
  double min_margin = 0.0;
  bool dominant = false;
};

LuResult lu_solve(const DenseSystem& sys);
DominanceReport hadamard_margins(const Mat& C);
inline DominanceReport hadamard_margins(const DenseSystem& sys) { return hadamard_margins(sys.C); }

// max_j sum_{k != j} |c_jk| / |c_jj|
double jacobi_contraction(const Mat& C);

class BlockPartition {
 public:
  BlockPartition(const Mat& C, int P);

  int blocks() const { return P_; }
  int block_size() const { return L_; }
  const Mat& matrix() const { return C_; }

  // B_kk solve of rhs restricted to block k minus off-block coupling with x_prev
  void solve_block(int k, const Vec& rhs, const Vec& x_prev, Vec& x_next) const;

 private:
  Mat C_;
  int P_, L_;
  std::vector<Eigen::PartialPivLU<Mat>> diag_;
};

// one synchronous sweep; order permutes the block visiting sequence only
Vec block_jacobi_sweep(const BlockPartition& part, const Vec& rhs, const Vec& x_prev,
                       const std::vector<int>& order = {});
Vec block_jacobi_sweep_serial(const BlockPartition& part, const Vec& rhs, const Vec& x_prev,
                              const std::vector<int>& order = {});

struct BlockJacobiResult {
  Vec x;
  int sweeps = 0;
  double contraction = 0.0;
  rvec history;  // ||x_{m+1} - x_m||_inf
};

BlockJacobiResult block_jacobi_solve(const BlockPartition& part, const Vec& rhs, const Vec& x0,
                                     double tol = 1e-10, int max_sweeps = 10000, bool parallel = true);

}  // namespace sie
