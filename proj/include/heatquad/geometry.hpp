#ifndef HEATQUAD_GEOMETRY_HPP
#define HEATQUAD_GEOMETRY_HPP

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace heatquad {

enum class ManifoldKind { Torus, Sphere, DentedSphere, CompactHyperboloid };

// Which manifold, plus the parameters that shape it. The torus is T^d for
// any d >= 1; the embedded surfaces live in R^3.
struct ManifoldSpec {
  ManifoldKind kind = ManifoldKind::Torus;
  int dim = 2;         // intrinsic dimension
  double alpha = 0.1;  // dent strength (DentedSphere)
  double r = 0.8;      // Poincare disk radius (CompactHyperboloid)

  static ManifoldSpec torus(int d);
  static ManifoldSpec sphere();
  static ManifoldSpec dented_sphere(double alpha);
  static ManifoldSpec compact_hyperboloid(double r = 0.8);

  bool embedded() const { return kind != ManifoldKind::Torus; }
  int ambient_dim() const { return embedded() ? 3 : dim; }
  // Threshold (1 + r^2) / (1 - r^2) bounding x3 on the compact hyperboloid.
  double wall_threshold() const;
};

std::string manifold_name(ManifoldKind kind);
ManifoldKind manifold_from_name(const std::string& name);

// N points in manifold coordinates (row-major n x ambient_dim), an optional
// weight vector, and provenance metadata carried through the file format.
struct PointSet {
  ManifoldSpec manifold;
  int n = 0;
  std::vector<double> coords;
  std::vector<double> weights;  // empty or size n
  std::vector<std::pair<std::string, std::string>> meta;

  bool has_weights() const { return !weights.empty(); }
  std::span<const double> point(int i) const {
    const int a = manifold.ambient_dim();
    return {coords.data() + static_cast<std::size_t>(i) * a,
            static_cast<std::size_t>(a)};
  }
  void set_meta(const std::string& key, const std::string& value);
  const std::string* get_meta(const std::string& key) const;
};

// Canonical torus representative in [0, 1).
inline double wrap_unit(double x) {
  double f = x - static_cast<std::int64_t>(x);
  if (f < 0.0) f += 1.0;
  return f < 1.0 ? f : 0.0;  // guards against f == 1.0 after rounding
}

// Min-image metric on the flat unit torus.
double torus_distance(std::span<const double> x, std::span<const double> y);

// Signed per-coordinate displacement delta with |delta_i| <= 1/2 and
// x - delta == y (mod 1); its norm equals torus_distance(x, y).
std::vector<double> min_image_displacement(std::span<const double> x,
                                           std::span<const double> y);

// Euclidean distance of the R^3 embedding.
double ambient_distance(std::span<const double> x, std::span<const double> y);

// Distance under the manifold's configured metric (min-image on the torus,
// chordal everywhere else).
double manifold_distance(const ManifoldSpec& m, std::span<const double> x,
                         std::span<const double> y);

// Level-set function g with g = 0 exactly on the surface. Errors on Torus.
double constraint(const ManifoldSpec& m, std::span<const double> x);

// Analytic gradient of the constraint.
std::array<double, 3> constraint_grad(const ManifoldSpec& m,
                                      std::span<const double> x);

// Central projection of the upper hyperboloid sheet onto the Poincare disk.
std::array<double, 2> hyperboloid_to_disk(const std::array<double, 3>& x);

// Inverse of hyperboloid_to_disk; requires |u| < 1.
std::array<double, 3> disk_to_hyperboloid(const std::array<double, 2>& u);

// Maps a unit-sphere point onto the dented sphere, preserving the sign of
// the second coordinate.
std::array<double, 3> dented_sphere_lift(const std::array<double, 3>& x,
                                         double alpha);

// Normalization constant for the weight-sum constraint. All quadrature here
// targets the normalized integral, so this is 1 for every manifold.
double vol_normalizer(const ManifoldSpec& m);

}  // namespace heatquad

#endif  // HEATQUAD_GEOMETRY_HPP
