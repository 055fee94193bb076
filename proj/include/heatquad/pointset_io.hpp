#ifndef HEATQUAD_POINTSET_IO_HPP
#define HEATQUAD_POINTSET_IO_HPP

#include <string>

#include "heatquad/eval.hpp"
#include "heatquad/geometry.hpp"

namespace heatquad {

struct TraceRow;

// Point-set text format: `# key=value` header lines followed by one
// whitespace-separated coordinate row per point, with the weight as an
// optional final column. Coordinates round-trip bit-exactly (%.17g).
std::string format_point_set(const PointSet& ps);
PointSet parse_point_set(const std::string& text);

PointSet read_point_set(const std::string& path);
// Writes via a temp file + rename so concurrent writers never interleave.
void write_point_set(const PointSet& ps, const std::string& path);

void atomic_write_text(const std::string& path, const std::string& content);
std::string read_text(const std::string& path);

// CSV / JSON emission for the evaluation schemas.
std::string format_spectrum_csv(const ErrorSpectrum& spectrum);
std::string format_spectrum_json(const ErrorSpectrum& spectrum);
std::string format_ensemble_csv(const std::vector<ErrorSpectrum>& spectra);
std::string format_ensemble_stats_csv(const EnsembleStats& stats);
std::string format_trace_csv(const std::vector<TraceRow>& trace);

}  // namespace heatquad

#endif  // HEATQUAD_POINTSET_IO_HPP
