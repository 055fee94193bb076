#include "heatquad/baselines.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "heatquad/eval.hpp"
#include "heatquad/rng.hpp"

namespace heatquad {

namespace {

constexpr int kMaxSeqDim = 16;

constexpr std::array<int, kMaxSeqDim> kPrimes = {2,  3,  5,  7,  11, 13, 17, 19,
                                                 23, 29, 31, 37, 41, 43, 47, 53};

// Joe-Kuo primitive polynomial degrees, coefficients, and initial direction
// numbers for Sobol dimensions 2..16 (dimension 1 uses m_k = 1).
struct SobolDim {
  int s;
  unsigned a;
  std::array<unsigned, 6> m;
};

constexpr std::array<SobolDim, 15> kJoeKuo = {{
    {1, 0, {1}},
    {2, 1, {1, 3}},
    {3, 1, {1, 3, 1}},
    {3, 2, {1, 1, 1}},
    {4, 1, {1, 1, 3, 3}},
    {4, 4, {1, 3, 5, 13}},
    {5, 2, {1, 1, 5, 5, 17}},
    {5, 4, {1, 1, 5, 5, 5}},
    {5, 7, {1, 1, 7, 11, 19}},
    {5, 11, {1, 1, 5, 1, 1}},
    {5, 13, {1, 1, 1, 3, 11}},
    {5, 14, {1, 3, 5, 5, 31}},
    {6, 1, {1, 3, 3, 9, 7, 49}},
    {6, 13, {1, 1, 1, 15, 21, 21}},
    {6, 16, {1, 3, 1, 13, 27, 49}},
}};

PointSet make_torus_set(int n, int d, const std::string& method) {
  if (n < 1) throw std::invalid_argument("need at least one point");
  PointSet ps;
  ps.manifold = ManifoldSpec::torus(d);
  ps.n = n;
  ps.coords.assign(static_cast<std::size_t>(n) * d, 0.0);
  ps.set_meta("manifold", "torus");
  ps.set_meta("d", std::to_string(d));
  ps.set_meta("N", std::to_string(n));
  ps.set_meta("method", method);
  return ps;
}

PointSet make_sphere_set(int n, const std::string& method) {
  if (n < 1) throw std::invalid_argument("need at least one point");
  PointSet ps;
  ps.manifold = ManifoldSpec::sphere();
  ps.n = n;
  ps.coords.assign(static_cast<std::size_t>(n) * 3, 0.0);
  ps.set_meta("manifold", "sphere");
  ps.set_meta("d", "2");
  ps.set_meta("N", std::to_string(n));
  ps.set_meta("method", method);
  return ps;
}

double radical_inverse(std::uint64_t i, int base) {
  double inv = 1.0 / base, f = inv, value = 0.0;
  while (i > 0) {
    value += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return value;
}

}  // namespace

PointSet halton(int n, int d) {
  if (d < 1 || d > kMaxSeqDim)
    throw std::invalid_argument("halton supports 1 <= d <= 16");
  PointSet ps = make_torus_set(n, d, "halton");
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < d; ++c)
      ps.coords[static_cast<std::size_t>(i) * d + c] =
          radical_inverse(static_cast<std::uint64_t>(i) + 1, kPrimes[c]);
  return ps;
}

PointSet sobol(int n, int d, std::optional<std::uint64_t> scramble_seed) {
  if (d < 1 || d > kMaxSeqDim)
    throw std::invalid_argument("sobol supports 1 <= d <= 16");
  PointSet ps = make_torus_set(n, d, "sobol");
  constexpr int kBits = 32;
  // Direction numbers v[c][k], scaled to 32 fractional bits.
  std::vector<std::array<std::uint32_t, kBits>> v(d);
  for (int k = 0; k < kBits; ++k) v[0][k] = 1u << (kBits - 1 - k);
  for (int c = 1; c < d; ++c) {
    const SobolDim& dim = kJoeKuo[c - 1];
    std::vector<std::uint32_t> m(kBits);
    for (int k = 0; k < dim.s; ++k) m[k] = dim.m[k];
    for (int k = dim.s; k < kBits; ++k) {
      std::uint32_t mk = m[k - dim.s] ^ (m[k - dim.s] << dim.s);
      for (int i = 1; i <= dim.s - 1; ++i)
        mk ^= ((dim.a >> (dim.s - 1 - i)) & 1u) * (m[k - i] << i);
      m[k] = mk;
    }
    for (int k = 0; k < kBits; ++k) v[c][k] = m[k] << (kBits - 1 - k);
  }
  std::vector<std::uint32_t> shift(d, 0);
  if (scramble_seed) {
    CounterStream rng(*scramble_seed, kDomainSobolScramble);
    for (int c = 0; c < d; ++c)
      shift[c] = static_cast<std::uint32_t>(rng.uniform_int(1ull << 32));
    ps.set_meta("scramble_seed", std::to_string(*scramble_seed));
  }
  std::vector<std::uint32_t> x(d, 0);
  for (int i = 0; i < n; ++i) {
    if (i > 0) {
      // Gray-code step: flip the direction of the lowest zero bit of i-1.
      unsigned bit = 0;
      std::uint32_t value = static_cast<std::uint32_t>(i - 1);
      while (value & 1u) {
        value >>= 1;
        ++bit;
      }
      for (int c = 0; c < d; ++c) x[c] ^= v[c][bit];
    }
    for (int c = 0; c < d; ++c)
      ps.coords[static_cast<std::size_t>(i) * d + c] =
          static_cast<double>(x[c] ^ shift[c]) * 0x1.0p-32;
  }
  return ps;
}

std::optional<int> fibonacci_index_of(int n) {
  if (n < 2) return std::nullopt;
  long long a = 1, b = 1;  // F_1, F_2
  int idx = 2;
  while (b < n) {
    const long long next = a + b;
    a = b;
    b = next;
    ++idx;
  }
  if (b == n) return idx;
  return std::nullopt;
}

PointSet fibonacci_lattice(int fib_index) {
  if (fib_index < 3)
    throw std::invalid_argument("fibonacci lattice needs F_m >= 2 (m >= 3)");
  long long fibs[2] = {1, 1};
  for (int i = 3; i <= fib_index; ++i) {
    const long long next = fibs[0] + fibs[1];
    fibs[0] = fibs[1];
    fibs[1] = next;
  }
  const long long n = fibs[1], mult = fibs[0];
  if (n > (1 << 30)) throw std::invalid_argument("fibonacci index too large");
  PointSet ps = make_torus_set(static_cast<int>(n), 2, "fibonacci");
  for (long long j = 0; j < n; ++j) {
    ps.coords[2 * j] = static_cast<double>(j) / static_cast<double>(n);
    ps.coords[2 * j + 1] =
        static_cast<double>((j * mult) % n) / static_cast<double>(n);
  }
  ps.set_meta("fib_index", std::to_string(fib_index));
  ps.set_meta("generator", "1," + std::to_string(mult));
  return ps;
}

namespace {

// Dual-lattice hits of (1, a, a^2, ...) among the first `count` enumerated
// representatives: each hit contributes a full unit of integration error.
int korobov_dual_hits(int n, int d, int a,
                      const std::vector<EigenLabel>& labels) {
  std::vector<long long> gen(d);
  gen[0] = 1 % n;
  for (int c = 1; c < d; ++c) gen[c] = (gen[c - 1] * a) % n;
  int hits = 0;
  for (const auto& lab : labels) {
    long long dot = 0;
    for (int c = 0; c < d; ++c) dot += lab.k[c] * gen[c];
    if (((dot % n) + n) % n == 0) ++hits;
  }
  return hits;
}

}  // namespace

PointSet korobov_lattice(int n, int d, std::optional<int> a) {
  if (n < 1) throw std::invalid_argument("need at least one point");
  if (d < 1) throw std::invalid_argument("dimension must be >= 1");
  int gen_a;
  if (a) {
    gen_a = *a;
    if (gen_a < 1 || std::gcd(gen_a, n) != 1)
      throw std::invalid_argument("korobov generator must satisfy gcd(a, N) = 1");
  } else if (n <= 3) {
    gen_a = 1;
  } else {
    const auto labels = torus_eigen_enumeration(d, n);
    int best_hits = -1;
    gen_a = 1;
    for (int cand = 2; cand < n; ++cand) {
      if (std::gcd(cand, n) != 1) continue;
      const int hits = korobov_dual_hits(n, d, cand, labels);
      if (best_hits < 0 || hits < best_hits) {
        best_hits = hits;
        gen_a = cand;
      }
    }
  }
  PointSet ps = make_torus_set(n, d, "korobov");
  for (int j = 0; j < n; ++j) {
    long long power = 1;
    for (int c = 0; c < d; ++c) {
      ps.coords[static_cast<std::size_t>(j) * d + c] =
          static_cast<double>((static_cast<long long>(j) * power) % n) /
          static_cast<double>(n);
      power = (power * gen_a) % n;
    }
  }
  ps.set_meta("korobov_a", std::to_string(gen_a));
  return ps;
}

PointSet lhs(int n, int d, std::uint64_t seed) {
  PointSet ps = make_torus_set(n, d, "lhs");
  ps.set_meta("seed", std::to_string(seed));
  std::vector<int> perm(n);
  for (int c = 0; c < d; ++c) {
    CounterStream perm_rng(seed, kDomainLhsPerm, static_cast<std::uint32_t>(c));
    CounterStream jit_rng(seed, kDomainLhsJitter, static_cast<std::uint32_t>(c));
    std::iota(perm.begin(), perm.end(), 0);
    for (int j = n - 1; j > 0; --j)
      std::swap(perm[j], perm[perm_rng.uniform_int(j + 1)]);
    for (int j = 0; j < n; ++j)
      ps.coords[static_cast<std::size_t>(j) * d + c] =
          (perm[j] + jit_rng.uniform()) / n;
  }
  return ps;
}

PointSet uniform_random(int n, const ManifoldSpec& m, std::uint64_t seed) {
  if (m.kind == ManifoldKind::Torus) {
    PointSet ps = make_torus_set(n, m.dim, "uniform");
    ps.set_meta("seed", std::to_string(seed));
    CounterStream rng(seed, kDomainUniform);
    for (auto& c : ps.coords) c = rng.uniform();
    return ps;
  }
  if (m.kind == ManifoldKind::Sphere) {
    PointSet ps = make_sphere_set(n, "uniform");
    ps.set_meta("seed", std::to_string(seed));
    CounterStream rng(seed, kDomainUniform);
    for (int i = 0; i < n; ++i) {
      double x[3], norm = 0.0;
      do {
        norm = 0.0;
        for (double& v : x) {
          v = rng.normal();
          norm += v * v;
        }
        norm = std::sqrt(norm);
      } while (norm < 1e-12);
      for (int c = 0; c < 3; ++c)
        ps.coords[static_cast<std::size_t>(i) * 3 + c] = x[c] / norm;
    }
    return ps;
  }
  throw std::invalid_argument(
      "uniform sampling is implemented for the torus and the sphere");
}

PointSet spherical_fibonacci(int n) {
  PointSet ps = make_sphere_set(n, "spherical_fibonacci");
  const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int j = 0; j < n; ++j) {
    const double z = 1.0 - (2.0 * j + 1.0) / n;
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = 2.0 * std::numbers::pi * j * golden;
    ps.coords[static_cast<std::size_t>(j) * 3] = rho * std::cos(phi);
    ps.coords[static_cast<std::size_t>(j) * 3 + 1] = rho * std::sin(phi);
    ps.coords[static_cast<std::size_t>(j) * 3 + 2] = z;
  }
  ps.set_meta("variant", "offset_2j+1");
  return ps;
}

PointSet load_spherical_design(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open design file: " + path);
  std::vector<double> coords;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream row(line);
    double x, y, z;
    if (!(row >> x >> y >> z)) {
      throw std::runtime_error("malformed design row at line " +
                               std::to_string(line_no));
    }
    std::string tail;
    if (row >> tail)
      throw std::runtime_error("malformed design row at line " +
                               std::to_string(line_no));
    coords.insert(coords.end(), {x, y, z});
  }
  if (coords.empty()) throw std::runtime_error("design file holds no points");

  PointSet ps = make_sphere_set(static_cast<int>(coords.size() / 3), "design");
  double max_dev = 0.0;
  for (int i = 0; i < ps.n; ++i) {
    double* p = coords.data() + static_cast<std::size_t>(i) * 3;
    const double norm = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
    const double dev = std::fabs(norm - 1.0);
    if (dev > 1e-3)
      throw std::runtime_error("design point " + std::to_string(i) +
                               " is off the unit sphere by " +
                               std::to_string(dev));
    max_dev = std::max(max_dev, dev);
    for (int c = 0; c < 3; ++c) p[c] /= norm;
  }
  ps.coords = std::move(coords);
  ps.weights.assign(ps.n, 1.0 / ps.n);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", max_dev);
  ps.set_meta("max_norm_deviation", buf);
  ps.set_meta("source", path);
  return ps;
}

PointSet generate(const GeneratorSpec& spec) {
  switch (spec.method) {
    case GeneratorMethod::Halton:
      return halton(spec.n, spec.d);
    case GeneratorMethod::Sobol:
      return sobol(spec.n, spec.d, spec.seed);
    case GeneratorMethod::FibonacciLattice: {
      const auto idx = fibonacci_index_of(spec.n);
      if (!idx)
        throw std::invalid_argument(
            "fibonacci lattice requires N to be a Fibonacci number >= 2");
      if (spec.d != 2)
        throw std::invalid_argument("fibonacci lattice is defined on T^2");
      return fibonacci_lattice(*idx);
    }
    case GeneratorMethod::KorobovLattice:
      return korobov_lattice(spec.n, spec.d, spec.korobov_a);
    case GeneratorMethod::LHS:
      return lhs(spec.n, spec.d, spec.seed.value_or(0));
    case GeneratorMethod::UniformRandom:
      return uniform_random(spec.n, ManifoldSpec::torus(spec.d),
                            spec.seed.value_or(0));
    case GeneratorMethod::SphericalFibonacci:
      return spherical_fibonacci(spec.n);
    case GeneratorMethod::SphericalDesignFile:
      if (!spec.path)
        throw std::invalid_argument("design file method requires a path");
      return load_spherical_design(*spec.path);
  }
  throw std::logic_error("unknown generator method");
}

std::string generator_name(GeneratorMethod method) {
  switch (method) {
    case GeneratorMethod::Halton: return "halton";
    case GeneratorMethod::Sobol: return "sobol";
    case GeneratorMethod::FibonacciLattice: return "fibonacci";
    case GeneratorMethod::KorobovLattice: return "korobov";
    case GeneratorMethod::LHS: return "lhs";
    case GeneratorMethod::UniformRandom: return "uniform";
    case GeneratorMethod::SphericalFibonacci: return "spherical_fibonacci";
    case GeneratorMethod::SphericalDesignFile: return "design";
  }
  throw std::logic_error("unknown generator method");
}

}  // namespace heatquad
