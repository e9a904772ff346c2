#pragma once

#include <string>

#include "json.hpp"
#include "qpwave/kdv.hpp"
#include "qpwave/lattice.hpp"
#include "qpwave/nls.hpp"
#include "qpwave/scan.hpp"
#include "qpwave/trigpoly.hpp"

namespace qpwave {

using nlohmann::json;

/// Parses JSON text; syntax errors become ValidationError with line:column.
json parse_json(const std::string& text, const std::string& source = "<input>");
json read_json_file(const std::string& path);
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

/// Exact scalars: {"a": .., "b": .., "d": ..} with integer or "p/q" parts;
/// float scalars: a plain number.
json to_json(const QScalar& q, std::int64_t field = 1);
QScalar qscalar_from_json(const json& j);

/// {"d": 1, "nu": [2], "omega": [[{...}, {...}]]}.
json to_json(const LatticeSpec& spec);
LatticeSpec lattice_from_json(const json& j);

/// {"spec": {...}, "coeffs": [{"n": [1, 1], "re": 0.5, "im": 0.0}, ...]}.
json to_json(const TrigPoly& f);
TrigPoly trigpoly_from_json(const json& j);

/// Like TrigPoly JSON but listing the canonical half only, with "hermitian": true.
json to_json(const RealField& u);
RealField realfield_from_json(const json& j);

/// Keys: trunc_height, trunc_center, dt, T, picard_tol, max_picard, sign,
/// power, hs_s, trunc_warn. Unknown keys are rejected.
SolverConfig solver_config_from_json(const json& j);
json to_json(const SolverConfig& cfg);

/// "# config: {...}" line, then param,value,lo_ci,hi_ci rows.
std::string scan_csv(const ScanReport& report);
/// {"slope", "intercept", "residual", "name", "seed", "budget", "config_hash", "config"}.
json fit_json(const ScanReport& report);
/// "# config: {...}" line, then t,mass,hs_norm,trunc_loss,picard_iters,contraction rows.
std::string trace_csv(const SolveTrace& trace, const json& config);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

}  // namespace qpwave
