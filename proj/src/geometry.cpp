#include "heatquad/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace heatquad {

ManifoldSpec ManifoldSpec::torus(int d) {
  if (d < 1) throw std::invalid_argument("torus dimension must be >= 1");
  ManifoldSpec m;
  m.kind = ManifoldKind::Torus;
  m.dim = d;
  return m;
}

ManifoldSpec ManifoldSpec::sphere() {
  ManifoldSpec m;
  m.kind = ManifoldKind::Sphere;
  m.dim = 2;
  return m;
}

ManifoldSpec ManifoldSpec::dented_sphere(double alpha) {
  if (!(alpha > 0.0))
    throw std::invalid_argument("dented sphere requires alpha > 0");
  ManifoldSpec m;
  m.kind = ManifoldKind::DentedSphere;
  m.dim = 2;
  m.alpha = alpha;
  return m;
}

ManifoldSpec ManifoldSpec::compact_hyperboloid(double r) {
  if (!(r > 0.0 && r < 1.0))
    throw std::invalid_argument("compact hyperboloid requires r in (0, 1)");
  ManifoldSpec m;
  m.kind = ManifoldKind::CompactHyperboloid;
  m.dim = 2;
  m.r = r;
  return m;
}

double ManifoldSpec::wall_threshold() const {
  return (1.0 + r * r) / (1.0 - r * r);
}

std::string manifold_name(ManifoldKind kind) {
  switch (kind) {
    case ManifoldKind::Torus: return "torus";
    case ManifoldKind::Sphere: return "sphere";
    case ManifoldKind::DentedSphere: return "dented_sphere";
    case ManifoldKind::CompactHyperboloid: return "compact_hyperboloid";
  }
  throw std::logic_error("unknown manifold kind");
}

ManifoldKind manifold_from_name(const std::string& name) {
  if (name == "torus") return ManifoldKind::Torus;
  if (name == "sphere") return ManifoldKind::Sphere;
  if (name == "dented_sphere") return ManifoldKind::DentedSphere;
  if (name == "compact_hyperboloid") return ManifoldKind::CompactHyperboloid;
  throw std::invalid_argument("unknown manifold name: " + name);
}

void PointSet::set_meta(const std::string& key, const std::string& value) {
  for (auto& kv : meta) {
    if (kv.first == key) {
      kv.second = value;
      return;
    }
  }
  meta.emplace_back(key, value);
}

const std::string* PointSet::get_meta(const std::string& key) const {
  for (const auto& kv : meta)
    if (kv.first == key) return &kv.second;
  return nullptr;
}

namespace {

void check_same_dim(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw std::invalid_argument("point dimension mismatch");
}

}  // namespace

double torus_distance(std::span<const double> x, std::span<const double> y) {
  check_same_dim(x, y);
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double d = std::fabs(x[i] - y[i]);
    d = std::min(d, 1.0 - d);
    acc += d * d;
  }
  return std::sqrt(acc);
}

std::vector<double> min_image_displacement(std::span<const double> x,
                                           std::span<const double> y) {
  check_same_dim(x, y);
  std::vector<double> delta(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double d = x[i] - y[i];
    if (d > 0.5)
      d -= 1.0;
    else if (d < -0.5)
      d += 1.0;
    delta[i] = d;
  }
  return delta;
}

double ambient_distance(std::span<const double> x, std::span<const double> y) {
  check_same_dim(x, y);
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

double manifold_distance(const ManifoldSpec& m, std::span<const double> x,
                         std::span<const double> y) {
  return m.kind == ManifoldKind::Torus ? torus_distance(x, y)
                                       : ambient_distance(x, y);
}

double constraint(const ManifoldSpec& m, std::span<const double> x) {
  if (!m.embedded())
    throw std::invalid_argument("torus carries no surface constraint");
  if (x.size() != 3)
    throw std::invalid_argument("embedded surfaces live in R^3");
  switch (m.kind) {
    case ManifoldKind::Sphere:
      return x[0] * x[0] + x[1] * x[1] + x[2] * x[2] - 1.0;
    case ManifoldKind::DentedSphere:
      return x[0] * x[0] + x[1] * x[1] / (m.alpha + x[0] * x[0]) +
             x[2] * x[2] - 1.0;
    case ManifoldKind::CompactHyperboloid:
      return x[0] * x[0] + x[1] * x[1] - x[2] * x[2] + 1.0;
    default:
      throw std::logic_error("unreachable");
  }
}

std::array<double, 3> constraint_grad(const ManifoldSpec& m,
                                      std::span<const double> x) {
  if (!m.embedded())
    throw std::invalid_argument("torus carries no surface constraint");
  if (x.size() != 3)
    throw std::invalid_argument("embedded surfaces live in R^3");
  switch (m.kind) {
    case ManifoldKind::Sphere:
      return {2.0 * x[0], 2.0 * x[1], 2.0 * x[2]};
    case ManifoldKind::DentedSphere: {
      const double q = m.alpha + x[0] * x[0];
      return {2.0 * x[0] - x[1] * x[1] * 2.0 * x[0] / (q * q),
              2.0 * x[1] / q, 2.0 * x[2]};
    }
    case ManifoldKind::CompactHyperboloid:
      return {2.0 * x[0], 2.0 * x[1], -2.0 * x[2]};
    default:
      throw std::logic_error("unreachable");
  }
}

std::array<double, 2> hyperboloid_to_disk(const std::array<double, 3>& x) {
  if (x[2] <= -1.0)
    throw std::invalid_argument("lower hyperboloid sheet is unsupported");
  const double s = 1.0 + x[2];
  return {x[0] / s, x[1] / s};
}

std::array<double, 3> disk_to_hyperboloid(const std::array<double, 2>& u) {
  const double rho2 = u[0] * u[0] + u[1] * u[1];
  if (rho2 >= 1.0)
    throw std::invalid_argument("disk point must satisfy |u| < 1");
  const double s = 1.0 - rho2;
  return {2.0 * u[0] / s, 2.0 * u[1] / s, (1.0 + rho2) / s};
}

std::array<double, 3> dented_sphere_lift(const std::array<double, 3>& x,
                                         double alpha) {
  const double y = std::sqrt((alpha + x[0] * x[0]) * x[1] * x[1]);
  return {x[0], x[1] < 0.0 ? -y : y, x[2]};
}

double vol_normalizer(const ManifoldSpec&) { return 1.0; }

}  // namespace heatquad
