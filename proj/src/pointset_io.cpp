#include "heatquad/pointset_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "heatquad/annealer.hpp"

namespace heatquad {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string format_point_set(const PointSet& ps) {
  std::string out;
  for (const auto& [key, value] : ps.meta)
    if (key != "weights")  // reserved marker, re-emitted below
      out += "# " + key + "=" + value + "\n";
  if (ps.has_weights()) out += "# weights=1\n";
  const int dim = ps.manifold.ambient_dim();
  for (int i = 0; i < ps.n; ++i) {
    for (int c = 0; c < dim; ++c) {
      if (c) out += ' ';
      out += fmt(ps.coords[static_cast<std::size_t>(i) * dim + c]);
    }
    if (ps.has_weights()) {
      out += ' ';
      out += fmt(ps.weights[i]);
    }
    out += '\n';
  }
  return out;
}

PointSet parse_point_set(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<std::vector<double>> rows;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#') {
      const auto eq = line.find('=', first);
      if (eq != std::string::npos) {
        std::string key = line.substr(first + 1, eq - first - 1);
        std::string value = line.substr(eq + 1);
        const auto ks = key.find_first_not_of(" \t");
        const auto ke = key.find_last_not_of(" \t");
        if (ks != std::string::npos) key = key.substr(ks, ke - ks + 1);
        while (!value.empty() && (value.back() == '\r' || value.back() == ' '))
          value.pop_back();
        meta.emplace_back(key, value);
      }
      continue;
    }
    std::istringstream row(line);
    std::vector<double> vals;
    double v;
    while (row >> v) vals.push_back(v);
    if (vals.empty() || !row.eof())
      throw std::runtime_error("malformed data row at line " +
                               std::to_string(line_no));
    rows.push_back(std::move(vals));
  }
  if (rows.empty()) throw std::runtime_error("point-set file holds no points");

  PointSet ps;
  ps.meta = meta;
  const std::string* name = ps.get_meta("manifold");
  if (!name)
    throw std::runtime_error(
        "point-set file lacks a manifold header (design files go through "
        "`designs import`)");
  const ManifoldKind kind = manifold_from_name(*name);
  switch (kind) {
    case ManifoldKind::Torus: {
      const std::string* d = ps.get_meta("d");
      if (!d) throw std::runtime_error("torus point-set file lacks d");
      ps.manifold = ManifoldSpec::torus(std::stoi(*d));
      break;
    }
    case ManifoldKind::Sphere:
      ps.manifold = ManifoldSpec::sphere();
      break;
    case ManifoldKind::DentedSphere: {
      const std::string* alpha = ps.get_meta("alpha");
      ps.manifold =
          ManifoldSpec::dented_sphere(alpha ? std::stod(*alpha) : 0.1);
      break;
    }
    case ManifoldKind::CompactHyperboloid: {
      const std::string* r = ps.get_meta("r");
      ps.manifold = ManifoldSpec::compact_hyperboloid(r ? std::stod(*r) : 0.8);
      break;
    }
  }
  const int dim = ps.manifold.ambient_dim();
  const std::size_t cols = rows.front().size();
  if (cols != static_cast<std::size_t>(dim) &&
      cols != static_cast<std::size_t>(dim) + 1)
    throw std::runtime_error("unexpected column count for this manifold");
  const bool weighted = cols == static_cast<std::size_t>(dim) + 1;
  ps.n = static_cast<int>(rows.size());
  ps.coords.reserve(static_cast<std::size_t>(ps.n) * dim);
  if (weighted) ps.weights.reserve(ps.n);
  for (const auto& row : rows) {
    if (row.size() != cols)
      throw std::runtime_error("ragged data rows in point-set file");
    for (int c = 0; c < dim; ++c) ps.coords.push_back(row[c]);
    if (weighted) ps.weights.push_back(row[dim]);
  }
  return ps;
}

PointSet read_point_set(const std::string& path) {
  return parse_point_set(read_text(path));
}

void write_point_set(const PointSet& ps, const std::string& path) {
  atomic_write_text(path, format_point_set(ps));
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void atomic_write_text(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write file: " + tmp.string());
    out << content;
    if (!out) throw std::runtime_error("short write: " + tmp.string());
  }
  fs::rename(tmp, target);
}

namespace {

std::string label_k(const EigenLabel& lab) {
  if (lab.kind == ManifoldKind::Sphere) return std::to_string(lab.l);
  std::string out;
  for (std::size_t i = 0; i < lab.k.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(lab.k[i]);
  }
  return out;
}

std::string label_m(const EigenLabel& lab) {
  return lab.kind == ManifoldKind::Sphere ? std::to_string(lab.m)
                                          : std::string();
}

}  // namespace

std::string format_spectrum_csv(const ErrorSpectrum& spectrum) {
  std::string out = "index,lambda,l_or_k,m_or_blank,E_lambda,E_cum\n";
  for (std::size_t i = 0; i < spectrum.e_lambda.size(); ++i) {
    const auto& lab = spectrum.labels[i];
    out += std::to_string(i + 1) + "," + fmt(lab.lambda) + "," + label_k(lab) +
           "," + label_m(lab) + "," + fmt(spectrum.e_lambda[i]) + "," +
           fmt(spectrum.e_cum[i]) + "\n";
  }
  return out;
}

std::string format_spectrum_json(const ErrorSpectrum& spectrum) {
  std::string out = "[\n";
  for (std::size_t i = 0; i < spectrum.e_lambda.size(); ++i) {
    const auto& lab = spectrum.labels[i];
    out += "  {\"index\": " + std::to_string(i + 1) +
           ", \"lambda\": " + fmt(lab.lambda) + ", \"l_or_k\": \"" +
           label_k(lab) + "\", \"m_or_blank\": \"" + label_m(lab) +
           "\", \"E_lambda\": " + fmt(spectrum.e_lambda[i]) +
           ", \"E_cum\": " + fmt(spectrum.e_cum[i]) + "}";
    out += i + 1 < spectrum.e_lambda.size() ? ",\n" : "\n";
  }
  out += "]\n";
  return out;
}

std::string format_ensemble_csv(const std::vector<ErrorSpectrum>& spectra) {
  std::string out = "run_id,index,lambda,l_or_k,m_or_blank,E_lambda,E_cum\n";
  for (std::size_t r = 0; r < spectra.size(); ++r) {
    const auto& s = spectra[r];
    for (std::size_t i = 0; i < s.e_lambda.size(); ++i) {
      const auto& lab = s.labels[i];
      out += std::to_string(r) + "," + std::to_string(i + 1) + "," +
             fmt(lab.lambda) + "," + label_k(lab) + "," + label_m(lab) + "," +
             fmt(s.e_lambda[i]) + "," + fmt(s.e_cum[i]) + "\n";
    }
  }
  return out;
}

std::string format_ensemble_stats_csv(const EnsembleStats& stats) {
  std::string out = "lambda,median,min,max\n";
  for (std::size_t i = 0; i < stats.median.size(); ++i)
    out += fmt(stats.labels[i].lambda) + "," + fmt(stats.median[i]) + "," +
           fmt(stats.min[i]) + "," + fmt(stats.max[i]) + "\n";
  return out;
}

std::string format_trace_csv(const std::vector<TraceRow>& trace) {
  std::string out = "step,time,beta_inv,energy\n";
  for (const auto& row : trace)
    out += std::to_string(row.step) + "," + fmt(row.time) + "," +
           fmt(row.beta_inv) + "," + fmt(row.energy) + "\n";
  return out;
}

}  // namespace heatquad
