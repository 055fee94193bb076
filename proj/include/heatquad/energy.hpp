#ifndef HEATQUAD_ENERGY_HPP
#define HEATQUAD_ENERGY_HPP

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "heatquad/geometry.hpp"

namespace heatquad {

// Soft wall bounding x3 <= c on the compact hyperboloid, kappa (x3 - c)^a
// above the threshold and identically zero below it.
struct WallPenalty {
  double c = 0.0;
  double kappa = 1e4;
  double alpha_exp = 4.0;

  static WallPenalty for_hyperboloid(const ManifoldSpec& m);
};

enum class EnergyKind { Gaussian, Riesz };

struct EnergySpec {
  EnergyKind kind = EnergyKind::Gaussian;
  double t = 0.0;  // Gaussian bandwidth; <= 0 means default_bandwidth(N, d)
  double s = 1.0;  // Riesz exponent
  std::optional<WallPenalty> wall;

  static EnergySpec gaussian(double t);
  static EnergySpec riesz(double s);
};

// Pairwise Gaussian interaction sum over all i, j including the diagonal
// (each diagonal term contributes exp(0) = 1, so the value is >= N).
double gaussian_energy(const PointSet& ps, double t);

// Quadratic form a^T C a with the Gaussian kernel matrix; requires weights.
double weighted_gaussian_energy(const PointSet& ps, double t);

// Inverse-power repulsion, off-diagonal pairs only. Coincident points are an
// error, not an infinity.
double riesz_energy(const PointSet& ps, double s);

// Analytic gradients (n x ambient_dim, row-major); the double-sum symmetry
// factor of 2 is included.
std::vector<double> gaussian_energy_grad(const PointSet& ps, double t);
std::vector<double> riesz_energy_grad(const PointSet& ps, double s);

// Weyl-law bandwidth rule theta * N^(-2/d).
double default_bandwidth(int n, int d, double theta = 1.0);

struct WallEval {
  double value = 0.0;
  std::array<double, 3> grad{0.0, 0.0, 0.0};
};

WallEval wall_penalty(const std::array<double, 3>& x, const WallPenalty& w);

// Potential bound to one manifold and energy choice; evaluates U and grad U
// in a single pair sweep. This is what the annealer drives.
class Potential {
 public:
  Potential(ManifoldSpec manifold, EnergySpec spec, int n);

  double value(std::span<const double> coords) const;
  // Writes the gradient (n x ambient_dim) and returns the energy.
  double value_and_grad(std::span<const double> coords,
                        std::span<double> grad) const;

  const EnergySpec& spec() const { return spec_; }

 private:
  ManifoldSpec manifold_;
  EnergySpec spec_;
  int n_;
};

}  // namespace heatquad

#endif  // HEATQUAD_ENERGY_HPP
