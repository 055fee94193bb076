// hkq: quadrature point-set construction and benchmarking on compact
// manifolds. Subcommands: generate, weights, eval, bench, designs import.

#include <atomic>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "heatquad/annealer.hpp"
#include "heatquad/baselines.hpp"
#include "heatquad/energy.hpp"
#include "heatquad/eval.hpp"
#include "heatquad/pointset_io.hpp"
#include "heatquad/weights.hpp"
#include "json.hpp"

namespace hq = heatquad;
using nlohmann::json;

namespace {

// JSON config files mirror flag names: top-level keys feed the global
// options, one nested object per subcommand.
class ConfigJson : public CLI::Config {
 public:
  std::string to_config(const CLI::App* app, bool default_also, bool,
                        std::string) const override {
    json j;
    for (const CLI::Option* opt : app->get_options({})) {
      if (!opt->get_lnames().empty() && opt->get_configurable()) {
        const std::string name = opt->get_lnames()[0];
        if (opt->count() == 1)
          j[name] = opt->results().at(0);
        else if (opt->count() > 1)
          j[name] = opt->results();
        else if (default_also && !opt->get_default_str().empty())
          j[name] = opt->get_default_str();
      }
    }
    return j.dump(2);
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    json j;
    input >> j;
    return collect(j, "", {});
  }

 private:
  static std::vector<CLI::ConfigItem> collect(const json& j,
                                              const std::string& name,
                                              std::vector<std::string> parents) {
    std::vector<CLI::ConfigItem> results;
    if (j.is_object()) {
      if (!name.empty()) parents.push_back(name);
      for (auto it = j.begin(); it != j.end(); ++it) {
        auto sub = collect(it.value(), it.key(), parents);
        results.insert(results.end(), sub.begin(), sub.end());
      }
      return results;
    }
    if (name.empty())
      throw CLI::ConversionError("top-level config values must be objects");
    CLI::ConfigItem item;
    item.name = name;
    item.parents = std::move(parents);
    if (j.is_boolean())
      item.inputs = {j.get<bool>() ? "true" : "false"};
    else if (j.is_number_integer())
      item.inputs = {std::to_string(j.get<long long>())};
    else if (j.is_number()) {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", j.get<double>());
      item.inputs = {buf};
    } else if (j.is_string())
      item.inputs = {j.get<std::string>()};
    else if (j.is_array())
      for (const auto& e : j) item.inputs.push_back(e.get<std::string>());
    else
      throw CLI::ConversionError("cannot convert config key " + name);
    results.push_back(std::move(item));
    return results;
  }
};

struct GlobalArgs {
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format = "csv";
};

struct ManifoldArgs {
  std::string name = "torus";
  int d = 2;
  double alpha = 0.1;
  double r = 0.8;

  hq::ManifoldSpec resolve() const {
    if (name == "torus") return hq::ManifoldSpec::torus(d);
    if (name == "sphere") return hq::ManifoldSpec::sphere();
    if (name == "dented-sphere" || name == "dented_sphere")
      return hq::ManifoldSpec::dented_sphere(alpha);
    if (name == "hyperboloid" || name == "compact_hyperboloid")
      return hq::ManifoldSpec::compact_hyperboloid(r);
    throw std::invalid_argument("unknown manifold: " + name);
  }
};

struct AnnealArgs {
  double t = 0.0;       // explicit bandwidth
  double theta = 1.0;   // bandwidth prefactor when t not given
  double s = 1.0;
  double dt = 0.0;
  std::int64_t steps = 200000;
  double gamma = 1.0;
  double cool_c = 0.0;
  std::int64_t trace_every = 1;
  std::string init;
  std::string init_file;
  double wall_kappa = 1e4;
  double wall_alpha = 4.0;

  hq::EnergySpec energy(const hq::ManifoldSpec& m, int n, bool riesz) const {
    hq::EnergySpec e;
    if (riesz) {
      e = hq::EnergySpec::riesz(s);
    } else {
      e = hq::EnergySpec::gaussian(t > 0.0 ? t
                                           : hq::default_bandwidth(n, m.dim, theta));
    }
    if (m.kind == hq::ManifoldKind::CompactHyperboloid) {
      hq::WallPenalty w = hq::WallPenalty::for_hyperboloid(m);
      w.kappa = wall_kappa;
      w.alpha_exp = wall_alpha;
      e.wall = w;
    }
    return e;
  }

  hq::AnnealConfig config(const hq::ManifoldSpec& m, std::uint64_t seed) const {
    hq::AnnealConfig cfg;
    cfg.dt = dt;
    cfg.steps = steps;
    cfg.gamma = gamma;
    cfg.cool_c = cool_c;
    cfg.seed = seed;
    cfg.trace_every = trace_every;
    cfg.init = init.empty() ? hq::default_init_for(m) : hq::init_from_name(init);
    cfg.init_path = init_file;
    return cfg;
  }
};

void emit(const GlobalArgs& g, const std::string& content) {
  if (g.out.empty())
    std::cout << content;
  else
    hq::atomic_write_text(g.out, content);
}

double bandwidth_for(const hq::PointSet& ps, double t, double theta) {
  return t > 0.0 ? t : hq::default_bandwidth(ps.n, ps.manifold.dim, theta);
}

void attach_weights(hq::PointSet& ps, double t) {
  hq::WeightSolveInfo info;
  ps.weights = hq::solve_weights(ps, t, &info);
  char buf[40];
  auto put = [&](const char* key, double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    ps.set_meta(key, buf);
  };
  put("weights_t", t);
  put("weights_kkt_residual", info.kkt_residual);
  put("weights_min", info.min_weight);
  put("weights_cond_estimate", info.cond_estimate);
  ps.set_meta("weights_factorization", info.factorization);
  ps.set_meta("weights_jittered", info.jittered ? "1" : "0");
  if (info.has_negative) {
    ps.set_meta("weights_warning", "negative weight present");
    std::cerr << "warning: solved weights contain a negative entry (min "
              << info.min_weight << ")\n";
  }
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
  ManifoldArgs manifold;
  int n = 0;
  std::string method;
  std::optional<int> korobov_a;
  AnnealArgs anneal;
  std::string trace_out;
  bool project_disk = false;
};

std::string disk_projection_text(const hq::PointSet& ps) {
  std::string out;
  for (const auto& [key, value] : ps.meta)
    out += "# " + key + "=" + value + "\n";
  out += "# projection=poincare_disk\n";
  char buf[40];
  for (int i = 0; i < ps.n; ++i) {
    const auto p = ps.point(i);
    const auto u = hq::hyperboloid_to_disk({p[0], p[1], p[2]});
    std::snprintf(buf, sizeof buf, "%.17g", u[0]);
    out += buf;
    std::snprintf(buf, sizeof buf, " %.17g\n", u[1]);
    out += buf;
  }
  return out;
}

// Builds one point set for a named method, validating the method/manifold
// pairing. Shared by `generate` and `bench`. scramble holds a user-supplied
// seed for Sobol scrambling (absent = the standard unscrambled sequence);
// trace_out, when non-null, receives the annealing trace CSV.
hq::PointSet build_point_set(const std::string& method,
                             const hq::ManifoldSpec& m, int n,
                             std::uint64_t seed,
                             std::optional<std::uint64_t> scramble,
                             std::optional<int> korobov_a,
                             const AnnealArgs& anneal_args,
                             std::string* trace_out = nullptr) {
  auto require_torus = [&] {
    if (m.kind != hq::ManifoldKind::Torus)
      throw std::invalid_argument("method '" + method +
                                  "' generates torus point sets");
  };
  if (method == "halton") {
    require_torus();
    return hq::halton(n, m.dim);
  }
  if (method == "sobol") {
    require_torus();
    return hq::sobol(n, m.dim, scramble);
  }
  if (method == "fibonacci") {
    require_torus();
    if (m.dim != 2)
      throw std::invalid_argument("fibonacci lattice is defined on T^2");
    const auto idx = hq::fibonacci_index_of(n);
    if (!idx)
      throw std::invalid_argument(
          "fibonacci lattice requires N to be a Fibonacci number >= 2");
    return hq::fibonacci_lattice(*idx);
  }
  if (method == "korobov") {
    require_torus();
    return hq::korobov_lattice(n, m.dim, korobov_a);
  }
  if (method == "lhs") {
    require_torus();
    return hq::lhs(n, m.dim, seed);
  }
  if (method == "uniform") return hq::uniform_random(n, m, seed);
  if (method == "spherical-fibonacci") {
    if (m.kind != hq::ManifoldKind::Sphere)
      throw std::invalid_argument("spherical-fibonacci pairs with the sphere");
    return hq::spherical_fibonacci(n);
  }
  if (method == "gaussian-anneal" || method == "riesz-anneal") {
    const bool riesz = method == "riesz-anneal";
    const hq::AnnealResult res =
        hq::anneal(m, n, anneal_args.energy(m, n, riesz),
                   anneal_args.config(m, seed));
    if (trace_out) *trace_out = hq::format_trace_csv(res.trace);
    return res.best;
  }
  throw std::invalid_argument("unknown method: " + method);
}

int run_generate(const GlobalArgs& g, const GenerateArgs& a) {
  const hq::ManifoldSpec m = a.manifold.resolve();
  const std::uint64_t seed = g.seed.value_or(0);
  std::string trace_csv;
  hq::PointSet ps = build_point_set(
      a.method, m, a.n, seed, g.seed, a.korobov_a, a.anneal,
      a.trace_out.empty() ? nullptr : &trace_csv);

  if (a.project_disk) {
    if (m.kind != hq::ManifoldKind::CompactHyperboloid)
      throw std::invalid_argument("--project-disk applies to the hyperboloid");
    emit(g, disk_projection_text(ps));
  } else {
    emit(g, hq::format_point_set(ps));
  }
  if (!trace_csv.empty()) hq::atomic_write_text(a.trace_out, trace_csv);
  return 0;
}

// ----------------------------------------------------------------- weights

struct WeightsArgs {
  std::string in;
  double t = 0.0;
  double theta = 1.0;
};

int run_weights(const GlobalArgs& g, const WeightsArgs& a) {
  hq::PointSet ps = hq::read_point_set(a.in);
  attach_weights(ps, bandwidth_for(ps, a.t, a.theta));
  emit(g, hq::format_point_set(ps));
  return 0;
}

// -------------------------------------------------------------------- eval

struct EvalArgs {
  std::string in;
  int count = 0;
};

int run_eval(const GlobalArgs& g, const EvalArgs& a) {
  const hq::PointSet ps = hq::read_point_set(a.in);
  const hq::ErrorSpectrum spec = hq::error_spectrum(ps, a.count);
  emit(g, g.format == "json" ? hq::format_spectrum_json(spec)
                             : hq::format_spectrum_csv(spec));
  return 0;
}

// ------------------------------------------------------------------- bench

struct BenchArgs {
  ManifoldArgs manifold;
  int n = 0;
  std::vector<std::string> methods;
  int runs = 10;
  int count = 100;
  std::string out_prefix;
  AnnealArgs anneal;
  int jobs = 0;
};

struct BenchRun {
  std::uint64_t seed = 0;
  bool ok = false;
  std::string message;
  double energy = 0.0;
  bool has_energy = false;
  hq::ErrorSpectrum spectrum;
};

bool method_is_stochastic(const std::string& base) {
  return base == "lhs" || base == "uniform" || base == "gaussian-anneal" ||
         base == "riesz-anneal";
}

std::string sanitize(std::string token) {
  for (char& c : token)
    if (c == '+' || c == ':' || c == '/') c = '_';
  return token;
}

int run_bench(const GlobalArgs& g, const BenchArgs& a) {
  const hq::ManifoldSpec m = a.manifold.resolve();
  if (a.out_prefix.empty())
    throw std::invalid_argument("bench requires --out-prefix");
  if (a.runs < 1) throw std::invalid_argument("--runs must be >= 1");
  const std::uint64_t seed0 = g.seed.value_or(0);

  struct MethodPlan {
    std::string token;
    std::string base;
    bool weighted;
    int runs;
  };
  std::vector<MethodPlan> plans;
  for (const std::string& token : a.methods) {
    MethodPlan plan;
    plan.token = token;
    plan.base = token;
    plan.weighted = false;
    if (token.size() > 2 && token.substr(token.size() - 2) == "+w") {
      plan.weighted = true;
      plan.base = token.substr(0, token.size() - 2);
    }
    plan.runs = method_is_stochastic(plan.base) ? a.runs : 1;
    plans.push_back(std::move(plan));
  }

  std::vector<std::vector<BenchRun>> results(plans.size());
  struct Task {
    std::size_t method;
    int run;
  };
  std::vector<Task> tasks;
  for (std::size_t mi = 0; mi < plans.size(); ++mi) {
    results[mi].resize(plans[mi].runs);
    for (int r = 0; r < plans[mi].runs; ++r) tasks.push_back({mi, r});
  }

  auto execute = [&](const Task& task) {
    const MethodPlan& plan = plans[task.method];
    BenchRun& slot = results[task.method][task.run];
    slot.seed = seed0 + static_cast<std::uint64_t>(task.run);
    try {
      hq::PointSet ps = build_point_set(plan.base, m, a.n, slot.seed,
                                        std::nullopt, std::nullopt, a.anneal);
      if (const std::string* be = ps.get_meta("best_energy")) {
        slot.energy = std::stod(*be);
        slot.has_energy = true;
      }
      if (plan.weighted)
        ps.weights = hq::solve_weights(
            ps, bandwidth_for(ps, a.anneal.t, a.anneal.theta));
      slot.spectrum = hq::error_spectrum(ps, a.count);
      slot.ok = true;
    } catch (const std::exception& e) {
      slot.ok = false;
      slot.message = e.what();
    }
  };

  const int jobs = a.jobs > 0
                       ? a.jobs
                       : static_cast<int>(std::max(
                             1u, std::thread::hardware_concurrency()));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      execute(tasks[i]);
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < jobs; ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  bool any_method_all_failed = false;
  for (std::size_t mi = 0; mi < plans.size(); ++mi) {
    const MethodPlan& plan = plans[mi];
    std::vector<hq::ErrorSpectrum> ok_spectra;
    std::string runs_csv = "run_id,seed,status,message,best_energy\n";
    for (int r = 0; r < plan.runs; ++r) {
      const BenchRun& run = results[mi][r];
      std::string msg = run.message;
      for (char& c : msg)
        if (c == ',' || c == '\n') c = ';';
      runs_csv += std::to_string(r) + "," + std::to_string(run.seed) + "," +
                  (run.ok ? "ok" : "fail") + "," + msg + ",";
      if (run.has_energy) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", run.energy);
        runs_csv += buf;
      }
      runs_csv += "\n";
      if (run.ok) ok_spectra.push_back(run.spectrum);
    }
    const std::string stem = a.out_prefix + "_" + sanitize(plan.token);
    hq::atomic_write_text(stem + "_runs.csv", runs_csv);
    if (ok_spectra.empty()) {
      any_method_all_failed = true;
      std::cerr << "error: every run of method '" << plan.token
                << "' failed\n";
      continue;
    }
    hq::atomic_write_text(stem + ".csv", hq::format_ensemble_csv(ok_spectra));
    hq::atomic_write_text(
        stem + "_stat.csv",
        hq::format_ensemble_stats_csv(hq::ensemble_stats(ok_spectra)));
  }
  return any_method_all_failed ? 2 : 0;
}

// ----------------------------------------------------------------- designs

int run_designs_import(const GlobalArgs& g, const std::string& in) {
  const hq::PointSet ps = hq::load_spherical_design(in);
  emit(g, hq::format_point_set(ps));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quadrature point sets on compact manifolds"};
  app.fallthrough();
  app.set_config("--config", "", "JSON config mirroring flag names");
  app.config_formatter(std::make_shared<ConfigJson>());
  app.require_subcommand(1);

  GlobalArgs global;
  app.add_option("--seed", global.seed, "Random seed");
  app.add_option("--out", global.out, "Output path (stdout when omitted)");
  app.add_option("--format", global.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));

  auto add_manifold = [](CLI::App* cmd, ManifoldArgs& m) {
    cmd->add_option("--manifold", m.name,
                    "torus | sphere | dented-sphere | hyperboloid");
    cmd->add_option("--d", m.d, "Torus dimension");
    cmd->add_option("--alpha", m.alpha, "Dent strength (dented sphere)");
    cmd->add_option("--r", m.r, "Poincare disk radius (hyperboloid)");
  };
  auto add_anneal = [](CLI::App* cmd, AnnealArgs& a) {
    cmd->add_option("--t", a.t, "Gaussian bandwidth (default theta N^(-2/d))");
    cmd->add_option("--theta", a.theta, "Bandwidth prefactor");
    cmd->add_option("--s", a.s, "Riesz exponent");
    cmd->add_option("--dt", a.dt, "Step size (default 0.05 N^(-1/d))");
    cmd->add_option("--steps", a.steps, "Annealing steps");
    cmd->add_option("--gamma", a.gamma, "Friction");
    cmd->add_option("--cool-c", a.cool_c,
                    "Cooling constant (default 0.1 U0/N)");
    cmd->add_option("--trace-every", a.trace_every, "Energy recording stride");
    cmd->add_option("--init", a.init,
                    "halton | spherical_fibonacci | dented_lift | "
                    "disk_uniform_lift | from_file");
    cmd->add_option("--init-file", a.init_file, "Initializer point-set file");
    cmd->add_option("--wall-kappa", a.wall_kappa, "Wall penalty strength");
    cmd->add_option("--wall-alpha", a.wall_alpha, "Wall penalty exponent");
  };

  GenerateArgs gen;
  CLI::App* cgen = app.add_subcommand("generate", "Generate a point set");
  add_manifold(cgen, gen.manifold);
  cgen->add_option("--n", gen.n, "Number of points")->required();
  cgen->add_option("--method", gen.method,
                   "halton | sobol | fibonacci | korobov | lhs | uniform | "
                   "spherical-fibonacci | gaussian-anneal | riesz-anneal")
      ->required();
  cgen->add_option("--korobov-a", gen.korobov_a, "Korobov generator");
  add_anneal(cgen, gen.anneal);
  cgen->add_option("--trace-out", gen.trace_out, "Annealing trace CSV path");
  cgen->add_flag("--project-disk", gen.project_disk,
                 "Emit the Poincare disk projection (hyperboloid only)");

  WeightsArgs wts;
  CLI::App* cwts =
      app.add_subcommand("weights", "Solve optimal quadrature weights");
  cwts->add_option("--in", wts.in, "Input point-set file")->required();
  cwts->add_option("--t", wts.t, "Gaussian bandwidth");
  cwts->add_option("--theta", wts.theta, "Bandwidth prefactor");

  EvalArgs ev;
  CLI::App* cev =
      app.add_subcommand("eval", "Integration errors against eigenfunctions");
  cev->add_option("--in", ev.in, "Input point-set file")->required();
  cev->add_option("--count", ev.count, "Number of eigenfunctions")->required();

  BenchArgs bench;
  CLI::App* cbench =
      app.add_subcommand("bench", "Ensemble benchmark across methods");
  add_manifold(cbench, bench.manifold);
  cbench->add_option("--n", bench.n, "Number of points")->required();
  cbench
      ->add_option("--methods", bench.methods,
                   "Comma-separated method list; append +w to solve weights")
      ->required()
      ->delimiter(',');
  cbench->add_option("--runs", bench.runs, "Runs per stochastic method");
  cbench->add_option("--count", bench.count, "Number of eigenfunctions");
  cbench->add_option("--out-prefix", bench.out_prefix, "Output file prefix")
      ->required();
  cbench->add_option("--jobs", bench.jobs, "Worker threads");
  add_anneal(cbench, bench.anneal);

  std::string design_in;
  CLI::App* cdesigns = app.add_subcommand("designs", "Spherical design files");
  CLI::App* cimport =
      cdesigns->add_subcommand("import", "Validate and import a design file");
  cimport->add_option("--in", design_in, "Design file (x y z rows)")
      ->required();
  cdesigns->require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (cgen->parsed()) return run_generate(global, gen);
    if (cwts->parsed()) return run_weights(global, wts);
    if (cev->parsed()) return run_eval(global, ev);
    if (cbench->parsed()) return run_bench(global, bench);
    if (cdesigns->parsed() && cimport->parsed())
      return run_designs_import(global, design_in);
    std::cerr << "error: no subcommand given\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
