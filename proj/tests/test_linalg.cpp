#include <algorithm>
#include <numeric>

#include "doctest.h"
#include "gen.hpp"
#include "sie/linalg.hpp"

using namespace sie;

namespace {

// strictly diagonally dominant with off-diagonal row mass at most rho |c_jj|
Mat dominant_matrix(gen::Gen& g, int n, double rho) {
  Mat C(n, n);
  for (int j = 0; j < n; ++j) {
    double off = 0.0;
    for (int k = 0; k < n; ++k)
      if (k != j) {
        C(j, k) = g.complex();
        off += std::abs(C(j, k));
      }
    C(j, j) = std::polar(off / rho, g.uniform(0.0, 2 * pi));
  }
  return C;
}

Vec random_vec(gen::Gen& g, int n) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = g.complex();
  return v;
}

}  // namespace

TEST_SUITE("linalg") {
  TEST_CASE("lu solve reproduces a known solution") {
    gen::Gen g(31);
    for (int trial = 0; trial < 20; ++trial) {
      const int n = g.integer(1, 40);
      const Mat C = dominant_matrix(g, n, 0.8);
      const Vec x = random_vec(g, n);
      const LuResult r = lu_solve({C, C * x});
      CHECK((r.x - x).cwiseAbs().maxCoeff() < 1e-11);
      CHECK(r.residual < 1e-13);
    }
  }

  TEST_CASE("singular system is reported") {
    Mat C = Mat::Zero(3, 3);
    C(0, 0) = 1.0;
    CHECK_THROWS_AS(lu_solve({C, Vec::Ones(3)}), Error);
  }

  TEST_CASE("hadamard margins by hand") {
    Mat C(2, 2);
    C << 3.0, 1.0, cplx(0.0, 2.0), cplx(0.0, 1.0);
    const DominanceReport d = hadamard_margins(C);
    CHECK(d.margins[0] == doctest::Approx(2.0));
    CHECK(d.margins[1] == doctest::Approx(-1.0));
    CHECK(d.min_margin == doctest::Approx(-1.0));
    CHECK_FALSE(d.dominant);
    CHECK(jacobi_contraction(C) == doctest::Approx(2.0));
  }

  TEST_CASE("contraction of generated dominant matrices is the generator ratio") {
    gen::Gen g(32);
    for (int trial = 0; trial < 20; ++trial) {
      const double rho = g.uniform(0.1, 0.9);
      const Mat C = dominant_matrix(g, g.integer(2, 20), rho);
      CHECK(jacobi_contraction(C) == doctest::Approx(rho).epsilon(1e-12));
      CHECK(hadamard_margins(C).dominant);
    }
  }

  TEST_CASE("block jacobi converges to the direct solution") {
    gen::Gen g(33);
    for (int P : {1, 2, 3, 6}) {
      const Mat C = dominant_matrix(g, 24, 0.6);
      const Vec f = random_vec(g, 24);
      const BlockPartition part(C, P);
      CHECK(part.block_size() * part.blocks() == 24);
      const BlockJacobiResult r = block_jacobi_solve(part, f, Vec::Zero(24), 1e-12);
      CHECK((C * r.x - f).cwiseAbs().maxCoeff() < 1e-9);
      CHECK(r.contraction < 1.0);
      if (P == 1) CHECK(r.sweeps <= 2);
    }
  }

  TEST_CASE("block count must divide the dimension") {
    CHECK_THROWS_AS(BlockPartition(Mat::Identity(5, 5), 2), Error);
  }

  TEST_CASE("block jacobi refuses a non-contracting matrix") {
    Mat C(2, 2);
    C << 1.0, 2.0, 2.0, 1.0;
    CHECK_THROWS_AS(block_jacobi_solve(BlockPartition(C, 2), Vec::Ones(2), Vec::Zero(2)), Error);
  }

  TEST_CASE("sweep result does not depend on the visiting order") {
    gen::Gen g(34);
    const Mat C = dominant_matrix(g, 32, 0.5);
    const BlockPartition part(C, 8);
    const Vec f = random_vec(g, 32), x = random_vec(g, 32);
    const Vec ref = block_jacobi_sweep_serial(part, f, x);
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<int> order(8);
      std::iota(order.begin(), order.end(), 0);
      std::shuffle(order.begin(), order.end(), g.rng);
      CHECK((block_jacobi_sweep(part, f, x, order) - ref).cwiseAbs().maxCoeff() == 0.0);
      CHECK((block_jacobi_sweep_serial(part, f, x, order) - ref).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}
