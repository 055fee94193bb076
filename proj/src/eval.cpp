#include "heatquad/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace heatquad {

namespace {

// Axis-first order within an eigenvalue shell: componentwise descending
// lexicographic, so (1,0) precedes (0,1) and (1,1) precedes (1,-1).
bool shell_less(const std::vector<int>& a, const std::vector<int>& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return a[i] > b[i];
  return false;
}

bool is_representative(const std::vector<int>& k) {
  for (int v : k) {
    if (v > 0) return true;
    if (v < 0) return false;
  }
  return false;  // zero vector
}

void enumerate_ball(int d, int radius, std::vector<std::vector<int>>& out) {
  std::vector<int> k(d, -radius);
  const int r2 = radius * radius;
  for (;;) {
    int norm2 = 0;
    for (int v : k) norm2 += v * v;
    if (norm2 <= r2 && norm2 > 0 && is_representative(k)) out.push_back(k);
    int i = d - 1;
    while (i >= 0 && k[i] == radius) k[i--] = -radius;
    if (i < 0) break;
    ++k[i];
  }
}

}  // namespace

std::vector<EigenLabel> torus_eigen_enumeration(int d, int count) {
  if (d < 1) throw std::invalid_argument("dimension must be >= 1");
  if (d > 8)
    throw std::invalid_argument(
        "frequency enumeration scans a full lattice cube; d <= 8 supported");
  if (count < 1) throw std::invalid_argument("count must be >= 1");
  // Grow the search radius until the ball holds `count` representatives;
  // everything outside the ball has a strictly larger norm, so the first
  // `count` after sorting are globally correct.
  int radius = 1;
  std::vector<std::vector<int>> reps;
  for (;;) {
    reps.clear();
    enumerate_ball(d, radius, reps);
    if (static_cast<int>(reps.size()) >= count) break;
    ++radius;
  }
  std::sort(reps.begin(), reps.end(),
            [](const std::vector<int>& a, const std::vector<int>& b) {
              long long na = 0, nb = 0;
              for (int v : a) na += static_cast<long long>(v) * v;
              for (int v : b) nb += static_cast<long long>(v) * v;
              if (na != nb) return na < nb;
              return shell_less(a, b);
            });
  std::vector<EigenLabel> labels;
  labels.reserve(count);
  for (int i = 0; i < count; ++i) {
    EigenLabel lab;
    lab.kind = ManifoldKind::Torus;
    lab.k = reps[i];
    long long n2 = 0;
    for (int v : lab.k) n2 += static_cast<long long>(v) * v;
    lab.lambda = static_cast<double>(n2);
    labels.push_back(std::move(lab));
  }
  return labels;
}

std::vector<EigenLabel> sphere_eigen_enumeration(int count) {
  if (count < 1) throw std::invalid_argument("count must be >= 1");
  std::vector<EigenLabel> labels;
  labels.reserve(count);
  for (int l = 1; static_cast<int>(labels.size()) < count; ++l) {
    for (int m = -l; m <= l && static_cast<int>(labels.size()) < count; ++m) {
      EigenLabel lab;
      lab.kind = ManifoldKind::Sphere;
      lab.l = l;
      lab.m = m;
      lab.lambda = static_cast<double>(l) * (l + 1);
      labels.push_back(std::move(lab));
    }
  }
  return labels;
}

double torus_error(const PointSet& ps, const std::vector<int>& k) {
  if (ps.manifold.kind != ManifoldKind::Torus)
    throw std::invalid_argument("torus_error requires a torus point set");
  const int d = ps.manifold.dim;
  if (static_cast<int>(k.size()) != d)
    throw std::invalid_argument("frequency dimension mismatch");
  const double uniform = 1.0 / ps.n;
  double re = 0.0, im = 0.0;
  for (int i = 0; i < ps.n; ++i) {
    const auto x = ps.point(i);
    double dot = 0.0;
    for (int c = 0; c < d; ++c) dot += k[c] * x[c];
    // Reduce before scaling by 2 pi; keeps the phase accurate for large k.x.
    const double theta =
        2.0 * std::numbers::pi * (dot - std::floor(dot));
    const double a = ps.has_weights() ? ps.weights[i] : uniform;
    re += a * std::cos(theta);
    im += a * std::sin(theta);
  }
  return re * re + im * im;
}

namespace {

// Fully normalized associated Legendre P-bar_l^m(z) with Condon-Shortley
// phase, so Y_l^m = P-bar_l^m(cos theta) e^(i m phi). Standard three-term
// recurrence, stable for l well past 100.
double legendre_norm(int l, int m, double z) {
  const double s2 = std::max(0.0, 1.0 - z * z);
  const double s = std::sqrt(s2);
  double pmm = 1.0 / std::sqrt(4.0 * std::numbers::pi);
  for (int k = 1; k <= m; ++k)
    pmm *= -std::sqrt((2.0 * k + 1.0) / (2.0 * k)) * s;
  if (l == m) return pmm;
  double pm1 = std::sqrt(2.0 * m + 3.0) * z * pmm;
  if (l == m + 1) return pm1;
  double p = 0.0;
  for (int ll = m + 2; ll <= l; ++ll) {
    const double a = std::sqrt((4.0 * ll * ll - 1.0) /
                               (static_cast<double>(ll) * ll - m * m));
    const double b =
        std::sqrt(((ll - 1.0) * (ll - 1.0) - m * m) /
                  (4.0 * (ll - 1.0) * (ll - 1.0) - 1.0));
    p = a * (z * pm1 - b * pmm);
    pmm = pm1;
    pm1 = p;
  }
  return p;
}

}  // namespace

std::complex<double> sph_harm(int l, int m, const std::array<double, 3>& x) {
  if (l < 0 || std::abs(m) > l)
    throw std::invalid_argument("spherical harmonic requires |m| <= l");
  const int am = std::abs(m);
  const double z = std::clamp(x[2], -1.0, 1.0);
  const double phi = std::atan2(x[1], x[0]);
  const double p = legendre_norm(l, am, z);
  std::complex<double> y(p * std::cos(am * phi), p * std::sin(am * phi));
  if (m < 0) {
    y = std::conj(y);
    if (am % 2 == 1) y = -y;
  }
  return y;
}

double sphere_error(const PointSet& ps, int l, int m) {
  if (ps.manifold.kind != ManifoldKind::Sphere)
    throw std::invalid_argument("sphere_error requires a sphere point set");
  if (l < 1) throw std::invalid_argument("sphere error is defined for l >= 1");
  const double uniform = 1.0 / ps.n;
  std::complex<double> sum = 0.0;
  for (int i = 0; i < ps.n; ++i) {
    const auto x = ps.point(i);
    const double norm = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    if (std::fabs(norm - 1.0) > 1e-6)
      throw std::invalid_argument("sphere point is off the unit sphere");
    const double a = ps.has_weights() ? ps.weights[i] : uniform;
    sum += a * sph_harm(l, m, {x[0], x[1], x[2]});
  }
  return std::norm(sum);
}

ErrorSpectrum error_spectrum(const PointSet& ps, int count) {
  ErrorSpectrum spec;
  switch (ps.manifold.kind) {
    case ManifoldKind::Torus: {
      spec.labels = torus_eigen_enumeration(ps.manifold.dim, count);
      spec.e_lambda.reserve(count);
      for (const auto& lab : spec.labels)
        spec.e_lambda.push_back(torus_error(ps, lab.k));
      break;
    }
    case ManifoldKind::Sphere: {
      spec.labels = sphere_eigen_enumeration(count);
      spec.e_lambda.reserve(count);
      for (const auto& lab : spec.labels)
        spec.e_lambda.push_back(sphere_error(ps, lab.l, lab.m));
      break;
    }
    default:
      throw std::invalid_argument(
          "qualitative-only manifold: no closed-form Laplacian eigenbasis");
  }
  return cumulative_error(std::move(spec));
}

ErrorSpectrum cumulative_error(ErrorSpectrum spectrum) {
  spectrum.e_cum.resize(spectrum.e_lambda.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < spectrum.e_lambda.size(); ++i) {
    acc += spectrum.e_lambda[i];
    spectrum.e_cum[i] = acc;
  }
  return spectrum;
}

EnsembleStats ensemble_stats(const std::vector<ErrorSpectrum>& spectra) {
  if (spectra.empty()) throw std::invalid_argument("no spectra given");
  const std::size_t count = spectra.front().e_lambda.size();
  for (const auto& s : spectra) {
    if (s.e_lambda.size() != count)
      throw std::invalid_argument("spectra disagree on label count");
    for (std::size_t i = 0; i < count; ++i)
      if (s.labels[i].lambda != spectra.front().labels[i].lambda ||
          s.labels[i].k != spectra.front().labels[i].k ||
          s.labels[i].l != spectra.front().labels[i].l ||
          s.labels[i].m != spectra.front().labels[i].m)
        throw std::invalid_argument("spectra disagree on labels");
  }
  EnsembleStats stats;
  stats.labels = spectra.front().labels;
  stats.median.resize(count);
  stats.min.resize(count);
  stats.max.resize(count);
  std::vector<double> vals(spectra.size());
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t r = 0; r < spectra.size(); ++r)
      vals[r] = spectra[r].e_lambda[i];
    std::sort(vals.begin(), vals.end());
    stats.min[i] = vals.front();
    stats.max[i] = vals.back();
    const std::size_t h = vals.size() / 2;
    stats.median[i] = vals.size() % 2 == 1 ? vals[h]
                                           : 0.5 * (vals[h - 1] + vals[h]);
  }
  return stats;
}

}  // namespace heatquad
