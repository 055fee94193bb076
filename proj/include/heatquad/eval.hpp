#ifndef HEATQUAD_EVAL_HPP
#define HEATQUAD_EVAL_HPP

#include <complex>
#include <vector>

#include "heatquad/geometry.hpp"

namespace heatquad {

// One Laplacian eigenfunction label. Torus labels carry the frequency
// vector k (one canonical representative per +-k pair, first nonzero
// component positive); sphere labels carry degree l and order m. lambda is
// |k|^2 on the torus (the 4 pi^2 factor is dropped) and l (l + 1) on the
// sphere.
struct EigenLabel {
  ManifoldKind kind = ManifoldKind::Torus;
  std::vector<int> k;
  int l = 0;
  int m = 0;
  double lambda = 0.0;
};

struct ErrorSpectrum {
  std::vector<EigenLabel> labels;
  std::vector<double> e_lambda;
  std::vector<double> e_cum;
};

// First `count` torus frequency representatives sorted by |k|^2; ties break
// toward the axis-first order ((1,0) before (0,1), (1,1) before (1,-1)).
std::vector<EigenLabel> torus_eigen_enumeration(int d, int count);

// First `count` sphere modes in order l ascending (from l = 1), m ascending.
std::vector<EigenLabel> sphere_eigen_enumeration(int count);

// Squared quadrature error |sum_j a_j e^(2 pi i k.x_j)|^2; weights default
// to uniform 1/N.
double torus_error(const PointSet& ps, const std::vector<int>& k);

// Orthonormal complex spherical harmonic (Condon-Shortley phase, unit L^2
// norm under the unnormalized area measure), stable up to l = 100.
std::complex<double> sph_harm(int l, int m, const std::array<double, 3>& x);

// Squared quadrature error |sum_j a_j Y_l^m(x_j)|^2 for l >= 1; weights
// default to uniform 1/N.
double sphere_error(const PointSet& ps, int l, int m);

// Per-mode errors for the first `count` eigenfunctions of ps's manifold,
// with running cumulative sums. Errors on manifolds without a closed-form
// eigenbasis.
ErrorSpectrum error_spectrum(const PointSet& ps, int count);

// Prefix sums of e_lambda (recomputed, monotone non-decreasing).
ErrorSpectrum cumulative_error(ErrorSpectrum spectrum);

struct EnsembleStats {
  std::vector<EigenLabel> labels;
  std::vector<double> median;  // even counts average the middle two
  std::vector<double> min;
  std::vector<double> max;
};

// Per-label order statistics over runs; all spectra must share one label
// list.
EnsembleStats ensemble_stats(const std::vector<ErrorSpectrum>& spectra);

}  // namespace heatquad

#endif  // HEATQUAD_EVAL_HPP
