#ifndef HEATQUAD_ANNEALER_HPP
#define HEATQUAD_ANNEALER_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "heatquad/energy.hpp"
#include "heatquad/geometry.hpp"
#include "heatquad/rng.hpp"

namespace heatquad {

enum class InitKind {
  Halton,              // torus
  SphericalFibonacci,  // sphere
  DentedLift,          // dented sphere: lifted spherical Fibonacci
  DiskUniformLift,     // hyperboloid: uniform disk points, inverse projection
  FromFile,
};

std::string init_name(InitKind kind);
InitKind init_from_name(const std::string& name);
InitKind default_init_for(const ManifoldSpec& m);

struct AnnealConfig {
  double dt = 0.0;       // <= 0 resolves to 0.05 * N^(-1/d)
  std::int64_t steps = 200000;
  double gamma = 1.0;
  double cool_c = 0.0;   // <= 0 resolves to 0.1 * U(x0) / N
  std::uint64_t seed = 0;
  std::int64_t trace_every = 1;
  InitKind init = InitKind::Halton;
  std::string init_path;  // FromFile
};

struct PhaseState {
  int n = 0;
  int dim = 0;
  std::vector<double> x;  // n x dim row-major
  std::vector<double> p;  // same layout
};

struct TraceRow {
  std::int64_t step;
  double time;
  double beta_inv;
  double energy;
};

struct AnnealResult {
  PointSet best;
  double best_energy = 0.0;
  std::int64_t accepted_step = 0;
  std::vector<TraceRow> trace;
  // Relative energy spread over the last 10% of recorded steps; a settled
  // run reports a small value.
  double tail_rel_change = 0.0;
  double resolved_dt = 0.0;
  double resolved_cool_c = 0.0;
};

// Logarithmic cooling beta^-1(t) = C / (1 + log(1 + t)); the shift keeps the
// schedule finite and positive from t = 0.
double cooling_schedule(double c, double time);

// Potential energy and gradient in one sweep: fills grad, returns U.
using EnergyGradFn =
    std::function<double(std::span<const double>, std::span<double>)>;

// One BAOAB sweep (half kick, half drift, momentum refresh, half drift, half
// kick) with noise std sqrt((1 - alpha^2) beta_inv), alpha = exp(-dt gamma).
// Torus positions are re-wrapped after each drift when `periodic`. Returns U
// at the new positions. grad_cache, when non-empty, must hold grad U at the
// entry positions and holds grad U at the new positions on return.
double baoab_step(PhaseState& state, double dt, double gamma, double beta_inv,
                  const EnergyGradFn& fn, const NoiseSource& noise,
                  std::uint64_t step_index, bool periodic,
                  std::vector<double>* grad_cache = nullptr);

// Projects drift proposals back onto the surface along the constraint
// gradient at the reference positions (per-particle Newton iteration).
void shake_project(std::span<double> x_new, std::span<const double> x_ref,
                   const ManifoldSpec& m, double tol = 1e-10,
                   int max_iter = 50);

// Removes the normal component of each momentum: grad g_i . p_i = 0 after.
void rattle_project(std::span<double> p, std::span<const double> x,
                    const ManifoldSpec& m);

// Constrained BAOAB: every B and O step is followed by a momentum
// projection, every A step by a position projection plus a momentum
// projection. Same gradient-cache contract as baoab_step.
double gbaoab_step(PhaseState& state, double dt, double gamma, double beta_inv,
                   const EnergyGradFn& fn, const ManifoldSpec& m,
                   const NoiseSource& noise, std::uint64_t step_index,
                   std::vector<double>* grad_cache = nullptr);

// Initial configuration for an annealing run (momenta start at zero).
PointSet initial_configuration(const ManifoldSpec& m, int n,
                               const AnnealConfig& cfg);

// Langevin simulated annealing: T steps of (g-)BAOAB under the logarithmic
// cooling schedule, returning the lowest-energy recorded configuration.
// Fully deterministic for a fixed config.
AnnealResult anneal(const ManifoldSpec& m, int n, const EnergySpec& espec,
                    const AnnealConfig& cfg);

}  // namespace heatquad

#endif  // HEATQUAD_ANNEALER_HPP
