#include "qpwave/io.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace qpwave {
namespace {

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& what) {
  if (!j.is_object()) throw ValidationError(what + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.contains(key)) throw ValidationError("unknown key '" + key + "' in " + what);
  }
}

Rational rational_from_json(const json& j, const char* what) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_number_float()) return Rational::parse(format_double(j.get<double>()));
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  throw ValidationError(std::string(what) + " must be an integer, a decimal or a \"p/q\" string");
}

json rational_to_json(const Rational& r) {
  if (r.is_integer()) return r.num();
  return r.str();
}

std::int64_t lattice_field(const LatticeSpec& spec) {
  for (const auto& block : spec.omega()) {
    for (const auto& w : block) {
      if (w.is_exact() && w.radicand() != 0) return w.radicand();
    }
  }
  return 1;
}

template <class T>
T required(const json& j, const char* key, const std::string& what) {
  if (!j.contains(key)) throw ValidationError(what + " is missing key '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(what + " key '" + key + "' has the wrong type: " + e.what());
  }
}

std::vector<Term> coeffs_from_json(const json& arr, const LatticeSpec& spec) {
  if (!arr.is_array()) throw ValidationError("\"coeffs\" must be an array");
  std::vector<Term> terms;
  for (const auto& c : arr) {
    reject_unknown(c, {"n", "re", "im"}, "coefficient entry");
    const auto n = required<std::vector<std::int64_t>>(c, "n", "coefficient entry");
    const double re = c.value("re", 0.0);
    const double im = c.value("im", 0.0);
    const LatticeIndex idx = LatticeIndex::from(n);
    spec.check_shape(idx);
    terms.push_back({idx, Complex(re, im)});
  }
  return terms;
}

json coeffs_to_json(const std::vector<Term>& terms) {
  json arr = json::array();
  for (const auto& t : terms) {
    std::vector<std::int64_t> n(t.n.values().begin(), t.n.values().end());
    arr.push_back({{"n", n}, {"re", t.c.real()}, {"im", t.c.imag()}});
  }
  return arr;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

json parse_json(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ValidationError(source + ":" + std::to_string(line) + ":" + std::to_string(col) +
                          ": malformed JSON (" + e.what() + ")");
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json_file(const std::string& path) { return parse_json(read_text_file(path), path); }

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << text;
  if (!out) throw ValidationError("write to '" + path + "' failed");
}

json to_json(const QScalar& q, std::int64_t field) {
  if (!q.is_exact()) return q.value();
  const std::int64_t d = q.radicand() != 0 ? q.radicand() : field;
  return {{"a", rational_to_json(q.rational_part())}, {"b", rational_to_json(q.surd_part())}, {"d", d}};
}

QScalar qscalar_from_json(const json& j) {
  if (j.is_number()) return QScalar::approx(j.get<double>());
  reject_unknown(j, {"a", "b", "d"}, "scalar");
  const Rational a = j.contains("a") ? rational_from_json(j["a"], "\"a\"") : Rational(0);
  const Rational b = j.contains("b") ? rational_from_json(j["b"], "\"b\"") : Rational(0);
  const std::int64_t d = j.contains("d") ? required<std::int64_t>(j, "d", "scalar") : 1;
  if (b.is_zero() && d >= 1 && is_square_free(d)) return QScalar(a);
  return QScalar::exact(a, b, d);
}

json to_json(const LatticeSpec& spec) {
  const std::int64_t field = lattice_field(spec);
  json omega = json::array();
  for (const auto& block : spec.omega()) {
    json b = json::array();
    for (const auto& w : block) b.push_back(to_json(w, field));
    omega.push_back(b);
  }
  return {{"d", spec.dim()}, {"nu", spec.ranks()}, {"omega", omega}};
}

LatticeSpec lattice_from_json(const json& j) {
  if (j.is_string() && j.get<std::string>() == "sqrt2") return LatticeSpec::sqrt2();
  reject_unknown(j, {"d", "nu", "omega"}, "lattice spec");
  const auto omega_json = j.contains("omega") ? j["omega"] : json();
  if (!omega_json.is_array()) throw ValidationError("lattice spec needs an \"omega\" array of blocks");
  std::vector<std::vector<QScalar>> omega;
  for (const auto& block : omega_json) {
    if (!block.is_array()) throw ValidationError("each omega block must be an array");
    std::vector<QScalar> b;
    for (const auto& w : block) b.push_back(qscalar_from_json(w));
    omega.push_back(std::move(b));
  }
  LatticeSpec spec(std::move(omega));
  if (j.contains("d") && required<std::size_t>(j, "d", "lattice spec") != spec.dim()) {
    throw ValidationError("lattice spec \"d\" disagrees with the number of omega blocks");
  }
  if (j.contains("nu") && required<std::vector<std::size_t>>(j, "nu", "lattice spec") != spec.ranks()) {
    throw ValidationError("lattice spec \"nu\" disagrees with the omega block sizes");
  }
  return spec;
}

json to_json(const TrigPoly& f) {
  return {{"spec", to_json(f.spec())},
          {"coeffs", coeffs_to_json(std::vector<Term>(f.terms().begin(), f.terms().end()))}};
}

TrigPoly trigpoly_from_json(const json& j) {
  reject_unknown(j, {"spec", "coeffs", "hermitian"}, "polynomial");
  if (!j.contains("spec")) throw ValidationError("polynomial is missing \"spec\"");
  LatticeSpec spec = lattice_from_json(j["spec"]);
  auto terms = coeffs_from_json(j.value("coeffs", json::array()), spec);
  if (j.value("hermitian", false)) {
    const std::size_t k = terms.size();
    for (std::size_t i = 0; i < k; ++i) terms.push_back({-terms[i].n, std::conj(terms[i].c)});
  }
  return TrigPoly::from_terms(std::move(spec), std::move(terms));
}

json to_json(const RealField& u) {
  return {{"spec", to_json(u.spec())}, {"hermitian", true}, {"coeffs", coeffs_to_json(u.canonical_half())}};
}

RealField realfield_from_json(const json& j) {
  reject_unknown(j, {"spec", "coeffs", "hermitian"}, "real field");
  if (!j.contains("spec")) throw ValidationError("real field is missing \"spec\"");
  LatticeSpec spec = lattice_from_json(j["spec"]);
  auto terms = coeffs_from_json(j.value("coeffs", json::array()), spec);
  if (j.value("hermitian", false)) return RealField::from_half(std::move(spec), terms);
  return RealField(TrigPoly::from_terms(std::move(spec), std::move(terms)));
}

SolverConfig solver_config_from_json(const json& j) {
  reject_unknown(j,
                 {"trunc_height", "trunc_center", "dt", "T", "picard_tol", "max_picard", "sign", "power", "hs_s",
                  "trunc_warn"},
                 "solver config");
  SolverConfig cfg;
  try {
    cfg.trunc_height = j.value("trunc_height", cfg.trunc_height);
    if (j.contains("trunc_center")) {
      cfg.trunc_center = LatticeIndex::from(j["trunc_center"].get<std::vector<std::int64_t>>());
    }
    cfg.dt = j.value("dt", cfg.dt);
    cfg.T = j.value("T", cfg.T);
    cfg.picard_tol = j.value("picard_tol", cfg.picard_tol);
    cfg.max_picard = j.value("max_picard", cfg.max_picard);
    cfg.sign = j.value("sign", cfg.sign);
    cfg.power = j.value("power", cfg.power);
    cfg.hs_s = j.value("hs_s", cfg.hs_s);
    cfg.trunc_warn = j.value("trunc_warn", cfg.trunc_warn);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("solver config has a value of the wrong type: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

json to_json(const SolverConfig& cfg) {
  json j = {{"trunc_height", cfg.trunc_height}, {"dt", cfg.dt},       {"T", cfg.T},
            {"picard_tol", cfg.picard_tol},     {"max_picard", cfg.max_picard}, {"sign", cfg.sign},
            {"power", cfg.power},               {"hs_s", cfg.hs_s},   {"trunc_warn", cfg.trunc_warn}};
  if (cfg.trunc_center) {
    j["trunc_center"] = std::vector<std::int64_t>(cfg.trunc_center->values().begin(), cfg.trunc_center->values().end());
  }
  return j;
}

std::string scan_csv(const ScanReport& report) {
  std::ostringstream out;
  json header = report.config;
  header["seed"] = report.seed;
  header["budget"] = report.budget;
  out << "# config: " << header.dump() << "\n";
  out << "# config_hash: " << report.config_hash() << "\n";
  out << "param,value,lo_ci,hi_ci\n";
  for (const auto& r : report.rows) {
    out << format_double(r.param) << ',' << format_double(r.value) << ',' << format_double(r.lo_ci) << ','
        << format_double(r.hi_ci) << "\n";
  }
  return out.str();
}

json fit_json(const ScanReport& report) {
  json j = {{"name", report.name},   {"seed", report.seed},          {"budget", report.budget},
            {"config", report.config}, {"config_hash", report.config_hash()}};
  if (report.fit_valid) {
    j["slope"] = report.fit.slope;
    j["intercept"] = report.fit.intercept;
    j["residual"] = report.fit.residual;
  } else {
    j["slope"] = nullptr;
    j["intercept"] = nullptr;
    j["residual"] = nullptr;
  }
  return j;
}

std::string trace_csv(const SolveTrace& trace, const json& config) {
  std::ostringstream out;
  out << "# config: " << config.dump() << "\n";
  out << "t,mass,hs_norm,trunc_loss,picard_iters,contraction\n";
  for (const auto& r : trace.rows) {
    out << format_double(r.t) << ',' << format_double(r.mass) << ',' << format_double(r.hs_norm) << ','
        << format_double(r.trunc_loss) << ',' << r.picard_iters << ',' << format_double(r.contraction) << "\n";
  }
  return out.str();
}

}  // namespace qpwave
