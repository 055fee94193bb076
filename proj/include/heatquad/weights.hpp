#ifndef HEATQUAD_WEIGHTS_HPP
#define HEATQUAD_WEIGHTS_HPP

#include <string>
#include <vector>

#include "heatquad/geometry.hpp"

namespace heatquad {

// Symmetric Gaussian kernel matrix C_ij = exp(-d(x_i, x_j)^2 / 4t) under the
// manifold's configured distance; unit diagonal by construction.
struct KernelMatrix {
  int n = 0;
  double t = 0.0;
  std::vector<double> entries;  // n x n row-major

  double at(int i, int j) const {
    return entries[static_cast<std::size_t>(i) * n + j];
  }
};

KernelMatrix kernel_matrix(const PointSet& ps, double t);

struct WeightSolveInfo {
  double kkt_residual = 0.0;   // (max - min) of C a, relative to its mean
  double min_weight = 0.0;
  double cond_estimate = 0.0;  // factorization pivot-ratio lower bound
  bool jittered = false;       // diagonal jitter retry was needed
  bool has_negative = false;   // reported, never rejected
  // "cholesky", "cholesky_jitter", or "lu". The min-image Gaussian kernel on
  // the torus picks up small negative eigenvalues once t is large (already
  // at t = N^(-2/d) for dense sets); the closed-form solution still exists,
  // so those systems go through a pivoted LU instead.
  std::string factorization;
};

// Closed-form optimal quadrature weights: solve C y = 1 by factorization and
// normalize so the weights sum to vol_normalizer(manifold). Cholesky first;
// one retry with 1e-12 diagonal jitter for near-coincident points; pivoted
// LU when the kernel is (mildly) indefinite.
std::vector<double> solve_weights(const PointSet& ps, double t,
                                  WeightSolveInfo* info = nullptr);

}  // namespace heatquad

#endif  // HEATQUAD_WEIGHTS_HPP
