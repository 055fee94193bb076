#include "heatquad/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace heatquad {

KernelMatrix kernel_matrix(const PointSet& ps, double t) {
  if (ps.n < 1) throw std::invalid_argument("empty point set");
  if (!(t > 0.0)) throw std::invalid_argument("bandwidth t must be > 0");
  KernelMatrix k;
  k.n = ps.n;
  k.t = t;
  k.entries.assign(static_cast<std::size_t>(ps.n) * ps.n, 1.0);
  const double inv4t = 1.0 / (4.0 * t);
  for (int i = 0; i < ps.n; ++i) {
    for (int j = i + 1; j < ps.n; ++j) {
      const double d = manifold_distance(ps.manifold, ps.point(i), ps.point(j));
      const double v = std::exp(-d * d * inv4t);
      k.entries[static_cast<std::size_t>(i) * ps.n + j] = v;
      k.entries[static_cast<std::size_t>(j) * ps.n + i] = v;
    }
  }
  return k;
}

namespace {

// In-place lower Cholesky; returns false on a non-positive pivot.
bool cholesky(std::vector<double>& a, int n) {
  for (int j = 0; j < n; ++j) {
    double d = a[static_cast<std::size_t>(j) * n + j];
    for (int k = 0; k < j; ++k) {
      const double l = a[static_cast<std::size_t>(j) * n + k];
      d -= l * l;
    }
    if (!(d > 0.0)) return false;
    d = std::sqrt(d);
    a[static_cast<std::size_t>(j) * n + j] = d;
    for (int i = j + 1; i < n; ++i) {
      double v = a[static_cast<std::size_t>(i) * n + j];
      for (int k = 0; k < j; ++k)
        v -= a[static_cast<std::size_t>(i) * n + k] *
             a[static_cast<std::size_t>(j) * n + k];
      a[static_cast<std::size_t>(i) * n + j] = v / d;
    }
  }
  return true;
}

// Solves L L^T y = b given the Cholesky factor in the lower triangle.
void cholesky_solve(const std::vector<double>& l, int n,
                    std::vector<double>& y) {
  for (int i = 0; i < n; ++i) {
    double v = y[i];
    for (int k = 0; k < i; ++k)
      v -= l[static_cast<std::size_t>(i) * n + k] * y[k];
    y[i] = v / l[static_cast<std::size_t>(i) * n + i];
  }
  for (int i = n - 1; i >= 0; --i) {
    double v = y[i];
    for (int k = i + 1; k < n; ++k)
      v -= l[static_cast<std::size_t>(k) * n + i] * y[k];
    y[i] = v / l[static_cast<std::size_t>(i) * n + i];
  }
}

// Partially pivoted LU solve for the indefinite case; returns false on a
// numerically singular pivot.
bool lu_solve(std::vector<double> a, int n, std::vector<double>& y,
              double* pivot_ratio) {
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  double pmin = std::numeric_limits<double>::infinity(), pmax = 0.0;
  for (int col = 0; col < n; ++col) {
    int best = col;
    double best_abs = std::fabs(a[static_cast<std::size_t>(col) * n + col]);
    for (int i = col + 1; i < n; ++i) {
      const double v = std::fabs(a[static_cast<std::size_t>(i) * n + col]);
      if (v > best_abs) {
        best_abs = v;
        best = i;
      }
    }
    if (best_abs < 1e-300) return false;
    if (best != col) {
      for (int j = 0; j < n; ++j)
        std::swap(a[static_cast<std::size_t>(col) * n + j],
                  a[static_cast<std::size_t>(best) * n + j]);
      std::swap(perm[col], perm[best]);
    }
    const double pivot = a[static_cast<std::size_t>(col) * n + col];
    pmin = std::min(pmin, std::fabs(pivot));
    pmax = std::max(pmax, std::fabs(pivot));
    for (int i = col + 1; i < n; ++i) {
      const double f = a[static_cast<std::size_t>(i) * n + col] / pivot;
      a[static_cast<std::size_t>(i) * n + col] = f;
      for (int j = col + 1; j < n; ++j)
        a[static_cast<std::size_t>(i) * n + j] -=
            f * a[static_cast<std::size_t>(col) * n + j];
    }
  }
  std::vector<double> b(n);
  for (int i = 0; i < n; ++i) b[i] = y[perm[i]];
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < i; ++k)
      b[i] -= a[static_cast<std::size_t>(i) * n + k] * b[k];
  for (int i = n - 1; i >= 0; --i) {
    for (int k = i + 1; k < n; ++k)
      b[i] -= a[static_cast<std::size_t>(i) * n + k] * b[k];
    b[i] /= a[static_cast<std::size_t>(i) * n + i];
  }
  y = std::move(b);
  if (pivot_ratio) *pivot_ratio = pmax / pmin;
  return true;
}

}  // namespace

std::vector<double> solve_weights(const PointSet& ps, double t,
                                  WeightSolveInfo* info) {
  const KernelMatrix km = kernel_matrix(ps, t);
  const int n = km.n;

  std::vector<double> factor = km.entries;
  std::string factorization = "cholesky";
  bool jittered = false;
  bool spd = cholesky(factor, n);
  if (!spd) {
    factor = km.entries;
    for (int i = 0; i < n; ++i)
      factor[static_cast<std::size_t>(i) * n + i] += 1e-12;
    jittered = true;
    spd = cholesky(factor, n);
    factorization = "cholesky_jitter";
  }

  std::vector<double> y(n, 1.0);
  double lu_pivot_ratio = 0.0;
  if (spd) {
    cholesky_solve(factor, n, y);
  } else {
    // Mildly indefinite kernel (large-t min-image metric): the closed form
    // is still well-defined, so solve the original system by pivoted LU.
    jittered = false;
    factorization = "lu";
    if (!lu_solve(km.entries, n, y, &lu_pivot_ratio))
      throw std::runtime_error(
          "kernel matrix is numerically singular (coincident points?)");
  }
  double sum = 0.0;
  for (double v : y) sum += v;
  if (sum == 0.0 || !std::isfinite(sum))
    throw std::runtime_error("degenerate weight normalization");
  const double scale = vol_normalizer(ps.manifold) / sum;
  std::vector<double> a(n);
  for (int i = 0; i < n; ++i) a[i] = y[i] * scale;

  if (info) {
    // KKT condition of the constrained quadratic program: C a is constant.
    double lo = std::numeric_limits<double>::infinity(), hi = -lo, mean = 0.0;
    for (int i = 0; i < n; ++i) {
      double r = 0.0;
      for (int j = 0; j < n; ++j)
        r += km.entries[static_cast<std::size_t>(i) * n + j] * a[j];
      lo = std::min(lo, r);
      hi = std::max(hi, r);
      mean += r;
    }
    mean /= n;
    info->kkt_residual = mean != 0.0 ? (hi - lo) / std::fabs(mean) : hi - lo;
    info->min_weight = *std::min_element(a.begin(), a.end());
    if (spd) {
      double pmin = std::numeric_limits<double>::infinity(), pmax = 0.0;
      for (int i = 0; i < n; ++i) {
        const double p = factor[static_cast<std::size_t>(i) * n + i];
        pmin = std::min(pmin, p);
        pmax = std::max(pmax, p);
      }
      info->cond_estimate = (pmax / pmin) * (pmax / pmin);
    } else {
      info->cond_estimate = lu_pivot_ratio;
    }
    info->jittered = jittered;
    info->has_negative = info->min_weight < 0.0;
    info->factorization = factorization;
  }
  return a;
}

}  // namespace heatquad
