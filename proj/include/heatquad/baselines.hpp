#ifndef HEATQUAD_BASELINES_HPP
#define HEATQUAD_BASELINES_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "heatquad/geometry.hpp"

namespace heatquad {

enum class GeneratorMethod {
  Halton,
  Sobol,
  FibonacciLattice,
  KorobovLattice,
  LHS,
  UniformRandom,
  SphericalFibonacci,
  SphericalDesignFile,
};

struct GeneratorSpec {
  GeneratorMethod method = GeneratorMethod::Halton;
  int n = 1;
  int d = 2;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> path;      // SphericalDesignFile
  std::optional<int> korobov_a;
};

// Halton sequence on T^d, bases the first d primes, indices 1..N (the
// all-zeros point is skipped). d <= 16.
PointSet halton(int n, int d);

// Sobol sequence on T^d from embedded Joe-Kuo direction numbers, point 0 at
// the origin. A seed applies a per-dimension digital shift. d <= 16.
PointSet sobol(int n, int d,
               std::optional<std::uint64_t> scramble_seed = std::nullopt);

// Rank-1 Fibonacci lattice on T^2 with N = F_m points and generator
// (1, F_(m-1)); fib_index is m.
PointSet fibonacci_lattice(int fib_index);

// Fibonacci index m with F_m == n (n >= 2), if n is a Fibonacci number.
std::optional<int> fibonacci_index_of(int n);

// Rank-1 Korobov lattice x_j = ({j/N}, {j a/N}, ..., {j a^(d-1)/N}). When a
// is omitted, an exhaustive search over gcd(a, N) = 1 picks the generator
// minimizing the number of dual-lattice hits among the first N enumerated
// frequencies (smallest such a on ties).
PointSet korobov_lattice(int n, int d, std::optional<int> a = std::nullopt);

// Latin hypercube sample: one point per axis stratum in every dimension.
PointSet lhs(int n, int d, std::uint64_t seed);

// i.i.d. uniform points; torus coordinates or normalized 3-D Gaussians on
// the sphere.
PointSet uniform_random(int n, const ManifoldSpec& m, std::uint64_t seed);

// Golden-angle spiral points z_j = 1 - (2j + 1)/N on the unit sphere.
PointSet spherical_fibonacci(int n);

// Reads a Womersley-style design file (whitespace-separated x y z rows,
// comments allowed), validates unit norms to 1e-3, renormalizes, and
// attaches uniform weights 1/N.
PointSet load_spherical_design(const std::string& path);

PointSet generate(const GeneratorSpec& spec);

std::string generator_name(GeneratorMethod method);

}  // namespace heatquad

#endif  // HEATQUAD_BASELINES_HPP
