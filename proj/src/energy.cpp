#include "heatquad/energy.hpp"

#include <cmath>
#include <stdexcept>

namespace heatquad {

namespace {

constexpr int kMaxDim = 16;

// Signed displacement from point j to point i under the manifold metric.
// Returns the squared distance.
inline double pair_displacement(bool periodic, const double* xi,
                                const double* xj, int dim, double* delta) {
  double d2 = 0.0;
  for (int c = 0; c < dim; ++c) {
    double d = xi[c] - xj[c];
    if (periodic) {
      if (d > 0.5)
        d -= 1.0;
      else if (d < -0.5)
        d += 1.0;
    }
    delta[c] = d;
    d2 += d * d;
  }
  return d2;
}

void require_points(const PointSet& ps) {
  if (ps.n < 1) throw std::invalid_argument("empty point set");
}

}  // namespace

WallPenalty WallPenalty::for_hyperboloid(const ManifoldSpec& m) {
  if (m.kind != ManifoldKind::CompactHyperboloid)
    throw std::invalid_argument("wall penalty applies to the hyperboloid");
  WallPenalty w;
  w.c = m.wall_threshold();
  return w;
}

EnergySpec EnergySpec::gaussian(double t) {
  if (!(t > 0.0)) throw std::invalid_argument("Gaussian bandwidth t must be > 0");
  EnergySpec e;
  e.kind = EnergyKind::Gaussian;
  e.t = t;
  return e;
}

EnergySpec EnergySpec::riesz(double s) {
  if (!(s > 0.0)) throw std::invalid_argument("Riesz exponent s must be > 0");
  EnergySpec e;
  e.kind = EnergyKind::Riesz;
  e.s = s;
  return e;
}

double gaussian_energy(const PointSet& ps, double t) {
  require_points(ps);
  if (!(t > 0.0)) throw std::invalid_argument("Gaussian bandwidth t must be > 0");
  const bool periodic = ps.manifold.kind == ManifoldKind::Torus;
  const int dim = ps.manifold.ambient_dim();
  const double inv4t = 1.0 / (4.0 * t);
  double delta[kMaxDim];
  double off = 0.0;
  for (int i = 0; i < ps.n; ++i) {
    const double* xi = ps.coords.data() + static_cast<std::size_t>(i) * dim;
    for (int j = i + 1; j < ps.n; ++j) {
      const double* xj = ps.coords.data() + static_cast<std::size_t>(j) * dim;
      off += std::exp(-pair_displacement(periodic, xi, xj, dim, delta) * inv4t);
    }
  }
  return static_cast<double>(ps.n) + 2.0 * off;
}

double weighted_gaussian_energy(const PointSet& ps, double t) {
  require_points(ps);
  if (!ps.has_weights())
    throw std::invalid_argument("weighted energy requires a weight vector");
  if (static_cast<int>(ps.weights.size()) != ps.n)
    throw std::invalid_argument("weight vector length mismatch");
  const bool periodic = ps.manifold.kind == ManifoldKind::Torus;
  const int dim = ps.manifold.ambient_dim();
  const double inv4t = 1.0 / (4.0 * t);
  double delta[kMaxDim];
  double diag = 0.0, off = 0.0;
  for (int i = 0; i < ps.n; ++i) {
    diag += ps.weights[i] * ps.weights[i];
    const double* xi = ps.coords.data() + static_cast<std::size_t>(i) * dim;
    for (int j = i + 1; j < ps.n; ++j) {
      const double* xj = ps.coords.data() + static_cast<std::size_t>(j) * dim;
      off += ps.weights[i] * ps.weights[j] *
             std::exp(-pair_displacement(periodic, xi, xj, dim, delta) * inv4t);
    }
  }
  return diag + 2.0 * off;
}

double riesz_energy(const PointSet& ps, double s) {
  require_points(ps);
  if (!(s > 0.0)) throw std::invalid_argument("Riesz exponent s must be > 0");
  const bool periodic = ps.manifold.kind == ManifoldKind::Torus;
  const int dim = ps.manifold.ambient_dim();
  double delta[kMaxDim];
  double off = 0.0;
  for (int i = 0; i < ps.n; ++i) {
    const double* xi = ps.coords.data() + static_cast<std::size_t>(i) * dim;
    for (int j = i + 1; j < ps.n; ++j) {
      const double* xj = ps.coords.data() + static_cast<std::size_t>(j) * dim;
      const double d2 = pair_displacement(periodic, xi, xj, dim, delta);
      if (d2 == 0.0)
        throw std::runtime_error("coincident points: Riesz energy undefined");
      off += std::pow(d2, -0.5 * s);
    }
  }
  return 2.0 * off;
}

namespace {

// Shared pair sweep for value + gradient. kind selects the kernel.
double energy_grad_sweep(const ManifoldSpec& m, std::span<const double> coords,
                         int n, EnergyKind kind, double t, double s,
                         std::span<double> grad) {
  const bool periodic = m.kind == ManifoldKind::Torus;
  const int dim = m.ambient_dim();
  if (coords.size() != static_cast<std::size_t>(n) * dim)
    throw std::invalid_argument("coordinate buffer size mismatch");
  if (grad.size() != coords.size())
    throw std::invalid_argument("gradient buffer size mismatch");
  const double inv4t = kind == EnergyKind::Gaussian ? 1.0 / (4.0 * t) : 0.0;
  double delta[kMaxDim];
  std::fill(grad.begin(), grad.end(), 0.0);
  double off = 0.0;
  for (int i = 0; i < n; ++i) {
    const double* xi = coords.data() + static_cast<std::size_t>(i) * dim;
    double* gi = grad.data() + static_cast<std::size_t>(i) * dim;
    for (int j = i + 1; j < n; ++j) {
      const double* xj = coords.data() + static_cast<std::size_t>(j) * dim;
      double* gj = grad.data() + static_cast<std::size_t>(j) * dim;
      const double d2 = pair_displacement(periodic, xi, xj, dim, delta);
      double e, coeff;
      if (kind == EnergyKind::Gaussian) {
        e = std::exp(-d2 * inv4t);
        coeff = -e / t;  // d/dx_i of both ordered pairs combined
      } else {
        if (d2 == 0.0)
          throw std::runtime_error("coincident points: Riesz energy undefined");
        e = std::pow(d2, -0.5 * s);
        coeff = -2.0 * s * e / d2;
      }
      off += e;
      for (int c = 0; c < dim; ++c) {
        const double g = coeff * delta[c];
        gi[c] += g;
        gj[c] -= g;
      }
    }
  }
  return kind == EnergyKind::Gaussian ? static_cast<double>(n) + 2.0 * off
                                      : 2.0 * off;
}

}  // namespace

std::vector<double> gaussian_energy_grad(const PointSet& ps, double t) {
  require_points(ps);
  if (!(t > 0.0)) throw std::invalid_argument("Gaussian bandwidth t must be > 0");
  std::vector<double> grad(ps.coords.size());
  energy_grad_sweep(ps.manifold, ps.coords, ps.n, EnergyKind::Gaussian, t, 0.0,
                    grad);
  return grad;
}

std::vector<double> riesz_energy_grad(const PointSet& ps, double s) {
  require_points(ps);
  if (!(s > 0.0)) throw std::invalid_argument("Riesz exponent s must be > 0");
  std::vector<double> grad(ps.coords.size());
  energy_grad_sweep(ps.manifold, ps.coords, ps.n, EnergyKind::Riesz, 0.0, s,
                    grad);
  return grad;
}

double default_bandwidth(int n, int d, double theta) {
  if (n < 1 || d < 1) throw std::invalid_argument("need n >= 1 and d >= 1");
  if (!(theta > 0.0)) throw std::invalid_argument("theta must be > 0");
  return theta * std::pow(static_cast<double>(n), -2.0 / d);
}

WallEval wall_penalty(const std::array<double, 3>& x, const WallPenalty& w) {
  WallEval out;
  const double excess = x[2] - w.c;
  if (excess <= 0.0) return out;
  out.value = w.kappa * std::pow(excess, w.alpha_exp);
  out.grad[2] = w.kappa * w.alpha_exp * std::pow(excess, w.alpha_exp - 1.0);
  return out;
}

Potential::Potential(ManifoldSpec manifold, EnergySpec spec, int n)
    : manifold_(manifold), spec_(spec), n_(n) {
  if (n < 1) throw std::invalid_argument("empty point set");
  if (spec_.kind == EnergyKind::Gaussian && !(spec_.t > 0.0))
    throw std::invalid_argument("Gaussian bandwidth t must be > 0");
  if (spec_.kind == EnergyKind::Riesz && !(spec_.s > 0.0))
    throw std::invalid_argument("Riesz exponent s must be > 0");
}

double Potential::value(std::span<const double> coords) const {
  std::vector<double> scratch(coords.size());
  return value_and_grad(coords, scratch);
}

double Potential::value_and_grad(std::span<const double> coords,
                                 std::span<double> grad) const {
  double u = energy_grad_sweep(manifold_, coords, n_, spec_.kind, spec_.t,
                               spec_.s, grad);
  if (spec_.wall) {
    const int dim = manifold_.ambient_dim();
    for (int i = 0; i < n_; ++i) {
      const double* xi = coords.data() + static_cast<std::size_t>(i) * dim;
      const WallEval we =
          wall_penalty({xi[0], xi[1], xi[2]}, *spec_.wall);
      u += we.value;
      double* gi = grad.data() + static_cast<std::size_t>(i) * dim;
      for (int c = 0; c < 3; ++c) gi[c] += we.grad[c];
    }
  }
  return u;
}

}  // namespace heatquad
