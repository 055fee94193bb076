#include "heatquad/annealer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include "heatquad/baselines.hpp"
#include "heatquad/pointset_io.hpp"

namespace heatquad {

std::string init_name(InitKind kind) {
  switch (kind) {
    case InitKind::Halton: return "halton";
    case InitKind::SphericalFibonacci: return "spherical_fibonacci";
    case InitKind::DentedLift: return "dented_lift";
    case InitKind::DiskUniformLift: return "disk_uniform_lift";
    case InitKind::FromFile: return "from_file";
  }
  throw std::logic_error("unknown init kind");
}

InitKind init_from_name(const std::string& name) {
  if (name == "halton") return InitKind::Halton;
  if (name == "spherical_fibonacci") return InitKind::SphericalFibonacci;
  if (name == "dented_lift") return InitKind::DentedLift;
  if (name == "disk_uniform_lift") return InitKind::DiskUniformLift;
  if (name == "from_file") return InitKind::FromFile;
  throw std::invalid_argument("unknown initializer: " + name);
}

InitKind default_init_for(const ManifoldSpec& m) {
  switch (m.kind) {
    case ManifoldKind::Torus: return InitKind::Halton;
    case ManifoldKind::Sphere: return InitKind::SphericalFibonacci;
    case ManifoldKind::DentedSphere: return InitKind::DentedLift;
    case ManifoldKind::CompactHyperboloid: return InitKind::DiskUniformLift;
  }
  throw std::logic_error("unknown manifold kind");
}

double cooling_schedule(double c, double time) {
  if (!(c > 0.0)) throw std::invalid_argument("cooling constant must be > 0");
  if (time < 0.0) throw std::invalid_argument("time must be >= 0");
  return c / (1.0 + std::log1p(time));
}

namespace {

void check_finite(std::span<const double> grad) {
  for (double g : grad)
    if (!std::isfinite(g))
      throw std::runtime_error(
          "non-finite energy gradient (coincident points or diverged run)");
}

inline void kick_half(PhaseState& s, std::span<const double> grad, double dt) {
  for (std::size_t i = 0; i < s.p.size(); ++i) s.p[i] -= 0.5 * dt * grad[i];
}

inline void drift_half(PhaseState& s, double dt, bool periodic) {
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    s.x[i] += 0.5 * dt * s.p[i];
    if (periodic) s.x[i] = wrap_unit(s.x[i]);
  }
}

inline void ornstein_uhlenbeck(PhaseState& s, double dt, double gamma,
                               double beta_inv, const NoiseSource& noise,
                               std::uint64_t k) {
  const double alpha = std::exp(-dt * gamma);
  const double sigma = std::sqrt(std::max(0.0, 1.0 - alpha * alpha) * beta_inv);
  for (int i = 0; i < s.n; ++i)
    for (int c = 0; c < s.dim; ++c) {
      double& p = s.p[static_cast<std::size_t>(i) * s.dim + c];
      p = alpha * p;
      if (sigma > 0.0)
        p += sigma * noise.normal(k, static_cast<std::uint32_t>(i),
                                  static_cast<std::uint32_t>(c));
    }
}

}  // namespace

double baoab_step(PhaseState& state, double dt, double gamma, double beta_inv,
                  const EnergyGradFn& fn, const NoiseSource& noise,
                  std::uint64_t step_index, bool periodic,
                  std::vector<double>* grad_cache) {
  std::vector<double> local;
  std::vector<double>& grad = grad_cache ? *grad_cache : local;
  if (grad.size() != state.x.size()) {
    grad.resize(state.x.size());
    fn(state.x, grad);
    check_finite(grad);
  }
  kick_half(state, grad, dt);
  drift_half(state, dt, periodic);
  ornstein_uhlenbeck(state, dt, gamma, beta_inv, noise, step_index);
  drift_half(state, dt, periodic);
  const double energy = fn(state.x, grad);
  check_finite(grad);
  kick_half(state, grad, dt);
  return energy;
}

void shake_project(std::span<double> x_new, std::span<const double> x_ref,
                   const ManifoldSpec& m, double tol, int max_iter) {
  if (!m.embedded())
    throw std::invalid_argument("position projection needs a constrained manifold");
  if (x_new.size() != x_ref.size() || x_new.size() % 3 != 0)
    throw std::invalid_argument("position buffer size mismatch");
  const int n = static_cast<int>(x_new.size() / 3);
  for (int i = 0; i < n; ++i) {
    double* xi = x_new.data() + static_cast<std::size_t>(i) * 3;
    const auto dir = constraint_grad(
        m, std::span<const double>(x_ref.data() + static_cast<std::size_t>(i) * 3, 3));
    double lambda = 0.0;
    bool done = false;
    for (int iter = 0; iter < max_iter; ++iter) {
      const std::array<double, 3> pos = {xi[0] + lambda * dir[0],
                                         xi[1] + lambda * dir[1],
                                         xi[2] + lambda * dir[2]};
      const double val = constraint(m, pos);
      if (std::fabs(val) <= tol) {
        for (int c = 0; c < 3; ++c) xi[c] = pos[c];
        done = true;
        break;
      }
      const auto g = constraint_grad(m, pos);
      const double slope = g[0] * dir[0] + g[1] * dir[1] + g[2] * dir[2];
      if (slope == 0.0 || !std::isfinite(slope))
        throw std::runtime_error(
            "constraint projection hit a singular direction; reduce dt");
      lambda -= val / slope;
    }
    if (!done)
      throw std::runtime_error(
          "constraint projection failed to converge; reduce dt");
  }
}

void rattle_project(std::span<double> p, std::span<const double> x,
                    const ManifoldSpec& m) {
  if (!m.embedded())
    throw std::invalid_argument("momentum projection needs a constrained manifold");
  if (p.size() != x.size() || p.size() % 3 != 0)
    throw std::invalid_argument("momentum buffer size mismatch");
  const int n = static_cast<int>(p.size() / 3);
  for (int i = 0; i < n; ++i) {
    const auto g = constraint_grad(
        m, std::span<const double>(x.data() + static_cast<std::size_t>(i) * 3, 3));
    const double norm2 = g[0] * g[0] + g[1] * g[1] + g[2] * g[2];
    if (norm2 == 0.0)
      throw std::runtime_error("constraint gradient vanished (singular point)");
    double* pi = p.data() + static_cast<std::size_t>(i) * 3;
    const double scale = (g[0] * pi[0] + g[1] * pi[1] + g[2] * pi[2]) / norm2;
    for (int c = 0; c < 3; ++c) pi[c] -= scale * g[c];
  }
}

double gbaoab_step(PhaseState& state, double dt, double gamma, double beta_inv,
                   const EnergyGradFn& fn, const ManifoldSpec& m,
                   const NoiseSource& noise, std::uint64_t step_index,
                   std::vector<double>* grad_cache) {
  std::vector<double> local;
  std::vector<double>& grad = grad_cache ? *grad_cache : local;
  if (grad.size() != state.x.size()) {
    grad.resize(state.x.size());
    fn(state.x, grad);
    check_finite(grad);
  }
  std::vector<double> ref = state.x;

  kick_half(state, grad, dt);
  rattle_project(state.p, state.x, m);

  drift_half(state, dt, false);
  shake_project(state.x, ref, m);
  rattle_project(state.p, state.x, m);

  ornstein_uhlenbeck(state, dt, gamma, beta_inv, noise, step_index);
  rattle_project(state.p, state.x, m);

  ref = state.x;
  drift_half(state, dt, false);
  shake_project(state.x, ref, m);
  rattle_project(state.p, state.x, m);

  const double energy = fn(state.x, grad);
  check_finite(grad);
  kick_half(state, grad, dt);
  rattle_project(state.p, state.x, m);
  return energy;
}

PointSet initial_configuration(const ManifoldSpec& m, int n,
                               const AnnealConfig& cfg) {
  switch (cfg.init) {
    case InitKind::Halton:
      if (m.kind != ManifoldKind::Torus)
        throw std::invalid_argument("halton initializer pairs with the torus");
      return halton(n, m.dim);
    case InitKind::SphericalFibonacci:
      if (m.kind != ManifoldKind::Sphere)
        throw std::invalid_argument(
            "spherical Fibonacci initializer pairs with the sphere");
      return spherical_fibonacci(n);
    case InitKind::DentedLift: {
      if (m.kind != ManifoldKind::DentedSphere)
        throw std::invalid_argument(
            "dented-lift initializer pairs with the dented sphere");
      PointSet ps = spherical_fibonacci(n);
      for (int i = 0; i < n; ++i) {
        double* p = ps.coords.data() + static_cast<std::size_t>(i) * 3;
        const auto lifted = dented_sphere_lift({p[0], p[1], p[2]}, m.alpha);
        for (int c = 0; c < 3; ++c) p[c] = lifted[c];
      }
      ps.manifold = m;
      ps.set_meta("manifold", manifold_name(m.kind));
      ps.set_meta("method", "dented_lift");
      return ps;
    }
    case InitKind::DiskUniformLift: {
      if (m.kind != ManifoldKind::CompactHyperboloid)
        throw std::invalid_argument(
            "disk-uniform initializer pairs with the compact hyperboloid");
      PointSet ps;
      ps.manifold = m;
      ps.n = n;
      ps.coords.resize(static_cast<std::size_t>(n) * 3);
      CounterStream rng(cfg.seed, kDomainAnnealInit);
      for (int i = 0; i < n; ++i) {
        const double rho = m.r * std::sqrt(rng.uniform());
        const double phi = 2.0 * std::numbers::pi * rng.uniform();
        const auto x = disk_to_hyperboloid(
            {rho * std::cos(phi), rho * std::sin(phi)});
        for (int c = 0; c < 3; ++c)
          ps.coords[static_cast<std::size_t>(i) * 3 + c] = x[c];
      }
      ps.set_meta("manifold", manifold_name(m.kind));
      ps.set_meta("method", "disk_uniform_lift");
      return ps;
    }
    case InitKind::FromFile: {
      if (cfg.init_path.empty())
        throw std::invalid_argument("from_file initializer needs init_path");
      PointSet ps = read_point_set(cfg.init_path);
      if (ps.manifold.kind != m.kind)
        throw std::invalid_argument(
            "initializer file manifold does not match the requested manifold");
      if (ps.n != n)
        throw std::invalid_argument("initializer file has the wrong point count");
      ps.manifold = m;
      return ps;
    }
  }
  throw std::logic_error("unknown init kind");
}

AnnealResult anneal(const ManifoldSpec& m, int n, const EnergySpec& espec,
                    const AnnealConfig& cfg) {
  if (n < 2) throw std::invalid_argument("annealing needs at least two points");
  if (cfg.steps < 1) throw std::invalid_argument("steps must be >= 1");
  if (!(cfg.gamma > 0.0)) throw std::invalid_argument("gamma must be > 0");
  if (cfg.trace_every < 1) throw std::invalid_argument("trace_every must be >= 1");
  if (cfg.dt < 0.0) throw std::invalid_argument("dt must be positive (or 0 for auto)");

  EnergySpec spec = espec;
  if (spec.kind == EnergyKind::Gaussian && spec.t <= 0.0)
    spec.t = default_bandwidth(n, m.dim);
  if (m.kind == ManifoldKind::CompactHyperboloid && !spec.wall)
    spec.wall = WallPenalty::for_hyperboloid(m);

  const double dt =
      cfg.dt > 0.0 ? cfg.dt : 0.05 * std::pow(n, -1.0 / m.dim);

  PointSet start = initial_configuration(m, n, cfg);
  const int dim = m.ambient_dim();
  PhaseState state;
  state.n = n;
  state.dim = dim;
  state.x = start.coords;
  state.p.assign(state.x.size(), 0.0);

  const Potential pot(m, spec, n);
  const EnergyGradFn fn = [&pot](std::span<const double> x,
                                 std::span<double> g) {
    return pot.value_and_grad(x, g);
  };

  std::vector<double> grad(state.x.size());
  double energy = fn(state.x, grad);
  check_finite(grad);
  const double cool_c = cfg.cool_c > 0.0 ? cfg.cool_c : 0.1 * energy / n;

  const NoiseSource noise(cfg.seed, kDomainAnnealNoise);
  const bool constrained = m.embedded();
  const bool periodic = !constrained;

  AnnealResult result;
  result.resolved_dt = dt;
  result.resolved_cool_c = cool_c;
  result.trace.push_back({0, 0.0, cooling_schedule(cool_c, 0.0), energy});
  std::vector<double> best_x = state.x;
  double best_energy = energy;
  std::int64_t best_step = 0;

  for (std::int64_t k = 0; k < cfg.steps; ++k) {
    const double beta_inv = cooling_schedule(cool_c, dt * static_cast<double>(k));
    energy = constrained
                 ? gbaoab_step(state, dt, cfg.gamma, beta_inv, fn, m, noise,
                               static_cast<std::uint64_t>(k), &grad)
                 : baoab_step(state, dt, cfg.gamma, beta_inv, fn, noise,
                              static_cast<std::uint64_t>(k), periodic, &grad);
    const std::int64_t done = k + 1;
    if (done % cfg.trace_every == 0 || done == cfg.steps) {
      const double time = dt * static_cast<double>(done);
      result.trace.push_back(
          {done, time, cooling_schedule(cool_c, time), energy});
      if (energy < best_energy) {
        best_energy = energy;
        best_step = done;
        best_x = state.x;
      }
    }
  }

  // Convergence diagnostic: energy spread across the last 10% of the trace.
  const std::int64_t tail_from =
      cfg.steps - std::max<std::int64_t>(cfg.steps / 10, 1);
  double tail_min = energy, tail_max = energy;
  for (const auto& row : result.trace) {
    if (row.step < tail_from) continue;
    tail_min = std::min(tail_min, row.energy);
    tail_max = std::max(tail_max, row.energy);
  }
  result.tail_rel_change =
      (tail_max - tail_min) / std::max(std::fabs(energy), 1e-300);

  result.best_energy = best_energy;
  result.accepted_step = best_step;
  result.best.manifold = m;
  result.best.n = n;
  result.best.coords = std::move(best_x);

  char buf[64];
  auto put = [&](const char* key, double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    result.best.set_meta(key, buf);
  };
  result.best.set_meta("manifold", manifold_name(m.kind));
  result.best.set_meta("d", std::to_string(m.dim));
  result.best.set_meta("N", std::to_string(n));
  result.best.set_meta("method", spec.kind == EnergyKind::Gaussian
                                     ? "gaussian-anneal"
                                     : "riesz-anneal");
  if (m.kind == ManifoldKind::DentedSphere) put("alpha", m.alpha);
  if (m.kind == ManifoldKind::CompactHyperboloid) put("r", m.r);
  result.best.set_meta("seed", std::to_string(cfg.seed));
  if (spec.kind == EnergyKind::Gaussian)
    put("t", spec.t);
  else
    put("s", spec.s);
  if (spec.wall) {
    put("wall_c", spec.wall->c);
    put("wall_kappa", spec.wall->kappa);
    put("wall_alpha", spec.wall->alpha_exp);
  }
  put("dt", dt);
  result.best.set_meta("steps", std::to_string(cfg.steps));
  put("gamma", cfg.gamma);
  put("cool_c", cool_c);
  result.best.set_meta("trace_every", std::to_string(cfg.trace_every));
  result.best.set_meta("init", init_name(cfg.init));
  if (cfg.init == InitKind::FromFile)
    result.best.set_meta("init_path", cfg.init_path);
  result.best.set_meta("best_step", std::to_string(best_step));
  put("best_energy", best_energy);
  put("tail_rel_change", result.tail_rel_change);
  return result;
}

}  // namespace heatquad
