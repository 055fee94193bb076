#include <stdexcept>
#include <cmath>
#include <random>

#include "doctest.h"
#include "heatquad/energy.hpp"
#include "heatquad/weights.hpp"

using namespace heatquad;

namespace {

PointSet make_set(const ManifoldSpec& m, std::vector<double> coords) {
  PointSet ps;
  ps.manifold = m;
  ps.n = static_cast<int>(coords.size()) / m.ambient_dim();
  ps.coords = std::move(coords);
  return ps;
}

PointSet equispaced_circle(int n) {
  std::vector<double> coords(n);
  for (int j = 0; j < n; ++j) coords[j] = static_cast<double>(j) / n;
  return make_set(ManifoldSpec::torus(1), std::move(coords));
}

std::mt19937 rng_for(const char* tag) {
  std::seed_seq seq(tag, tag + std::char_traits<char>::length(tag));
  return std::mt19937(seq);
}

PointSet random_torus_set(int n, int d, std::mt19937& gen) {
  std::uniform_real_distribution<double> ud;
  std::vector<double> coords(static_cast<std::size_t>(n) * d);
  for (double& c : coords) c = ud(gen);
  return make_set(ManifoldSpec::torus(d), std::move(coords));
}

}  // namespace

TEST_SUITE("weights") {

TEST_CASE("kernel matrix entries") {
  const auto k1 = kernel_matrix(make_set(ManifoldSpec::torus(1), {0.4}), 0.3);
  CHECK(k1.entries == std::vector<double>{1.0});

  const auto kco =
      kernel_matrix(make_set(ManifoldSpec::torus(1), {0.4, 0.4}), 0.3);
  CHECK(kco.entries == std::vector<double>{1.0, 1.0, 1.0, 1.0});

  const auto k2 =
      kernel_matrix(make_set(ManifoldSpec::torus(1), {0.0, 0.5}), 0.25);
  CHECK(k2.at(0, 1) == doctest::Approx(std::exp(-0.25)).epsilon(1e-15));
  CHECK(k2.at(0, 0) == 1.0);
  CHECK(k2.at(1, 0) == k2.at(0, 1));
}

TEST_CASE("single point gets the full budget") {
  const auto w = solve_weights(make_set(ManifoldSpec::torus(1), {0.7}), 0.1);
  CHECK(w == std::vector<double>{1.0});
}

TEST_CASE("equispaced circle points share the weight evenly") {
  for (int n : {4, 8, 12}) {
    // bandwidth in the positive-definite regime of the min-image kernel
    const auto w = solve_weights(equispaced_circle(n), 0.25 / (n * n));
    for (double v : w)
      CHECK(v == doctest::Approx(1.0 / n).epsilon(1e-12));
  }
}

TEST_CASE("large bandwidths route through the indefinite LU path") {
  // at t = 0.1 the 4-point circulant kernel has a negative eigenvalue, but
  // the closed-form weights still exist (and symmetry forces uniformity)
  WeightSolveInfo info;
  const auto w = solve_weights(equispaced_circle(4), 0.1, &info);
  CHECK(info.factorization == "lu");
  CHECK_FALSE(info.jittered);
  for (double v : w) CHECK(v == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(info.kkt_residual <= 1e-9);
}

TEST_CASE("three-point solve matches the precomputed dense oracle") {
  // dense 3x3 solve of C a = const for {0, 0.25, 0.6} at t = 0.1, computed
  // independently ahead of this implementation
  const auto w =
      solve_weights(make_set(ManifoldSpec::torus(1), {0.0, 0.25, 0.6}), 0.1);
  CHECK(w[0] == doctest::Approx(0.3792802092243056).epsilon(1e-12));
  CHECK(w[1] == doctest::Approx(0.17734794573048632).epsilon(1e-12));
  CHECK(w[2] == doctest::Approx(0.44337184504520805).epsilon(1e-12));
}

TEST_CASE("weights always sum to the volume normalizer") {
  auto gen = rng_for("wsum");
  for (int trial = 0; trial < 30; ++trial) {
    const PointSet ps = random_torus_set(12, 2, gen);
    const auto w = solve_weights(ps, 0.01);
    double sum = 0.0;
    for (double v : w) sum += v;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("KKT condition: the kernel image of the weights is constant") {
  auto gen = rng_for("kkt");
  for (int trial = 0; trial < 30; ++trial) {
    const PointSet ps = random_torus_set(14, 2, gen);
    WeightSolveInfo info;
    solve_weights(ps, 0.01, &info);
    CHECK(info.kkt_residual <= 1e-9);
  }
}

TEST_CASE("permuting points permutes the weights") {
  auto gen = rng_for("perm");
  PointSet ps = random_torus_set(9, 2, gen);
  const auto w = solve_weights(ps, 0.01);
  PointSet swapped = ps;
  for (int c = 0; c < 2; ++c) std::swap(swapped.coords[c], swapped.coords[6 + c]);
  const auto w2 = solve_weights(swapped, 0.01);
  CHECK(w2[0] == doctest::Approx(w[3]).epsilon(1e-10));
  CHECK(w2[3] == doctest::Approx(w[0]).epsilon(1e-10));
  CHECK(w2[5] == doctest::Approx(w[5]).epsilon(1e-10));
}

TEST_CASE("solved weights never lose to uniform weights") {
  auto gen = rng_for("optimal");
  for (int trial = 0; trial < 30; ++trial) {
    PointSet ps = random_torus_set(10, 2, gen);
    const double t = 0.01;
    ps.weights = solve_weights(ps, t);
    const double solved = weighted_gaussian_energy(ps, t);
    ps.weights.assign(ps.n, 1.0 / ps.n);
    const double uniform = weighted_gaussian_energy(ps, t);
    CHECK(solved <= uniform + 1e-12);
  }
}

TEST_CASE("coincident points take the jitter path") {
  PointSet ps = make_set(ManifoldSpec::torus(1), {0.2, 0.2, 0.8});
  WeightSolveInfo info;
  const auto w = solve_weights(ps, 0.1, &info);
  CHECK(info.jittered);
  double sum = 0.0;
  for (double v : w) sum += v;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("diagnostics populate") {
  const PointSet ps = equispaced_circle(8);
  WeightSolveInfo info;
  solve_weights(ps, 0.25 / 64, &info);
  CHECK(info.min_weight == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(info.factorization == "cholesky");
  CHECK_FALSE(info.has_negative);
  CHECK_FALSE(info.jittered);
  CHECK(info.cond_estimate >= 1.0);
}

}  // TEST_SUITE
