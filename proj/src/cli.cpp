#include "qpwave/cli.hpp"

#include <cmath>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "qpwave/evolution.hpp"
#include "qpwave/io.hpp"
#include "qpwave/kdv.hpp"
#include "qpwave/meannorms.hpp"
#include "qpwave/nls.hpp"
#include "qpwave/verify.hpp"

namespace qpwave {
namespace {

struct ScanBandFailure : Error {
  using Error::Error;
};

struct Common {
  std::string omega = "sqrt2";
  unsigned workers = 0;
  std::uint64_t budget = 0;
  std::uint64_t seed = 1;
  std::string output;
  std::string config;
};

void add_common(CLI::App* app, Common& c, bool with_omega = true) {
  if (with_omega) app->add_option("--omega", c.omega, "lattice: sqrt2, a comma list like 1,sqrt2, or JSON");
  app->add_option("--workers", c.workers, "worker threads (0 = all cores)");
  app->add_option("--budget", c.budget, "enumeration budget (items)");
  app->add_option("--seed", c.seed, "random seed");
  app->add_option("--output", c.output, "output path (scans: prefix for .csv and .json)");
  app->add_option("--config", c.config, "JSON run config; keys are option names");
}

Budget budget_of(const Common& c, Budget fallback) {
  if (c.budget > 0) fallback.max_items = c.budget;
  return fallback;
}

QScalar parse_generator(const std::string& token) {
  if (token.rfind("sqrt", 0) == 0) return QScalar::sqrt_of(std::stoll(token.substr(4)));
  const Rational r = Rational::parse(token);
  return QScalar(r);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      parts.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(ch))) {
      cur += ch;
    }
  }
  parts.push_back(cur);
  return parts;
}

/// Adds "--key value" tokens from a JSON object unless the key was given on
/// the command line. Unknown keys surface as CLI11 extras errors.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  auto it = std::find(args.begin(), args.end(), "--config");
  if (it == args.end() || it + 1 == args.end()) return args;
  const json cfg = read_json_file(*(it + 1));
  if (!cfg.is_object()) throw ValidationError("run config must be a JSON object");
  for (const auto& [key, value] : cfg.items()) {
    std::string flag = "--" + key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    if (std::find(args.begin(), args.end(), flag) != args.end()) continue;
    auto scalar = [](const json& v) -> std::string {
      if (v.is_string()) return v.get<std::string>();
      if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
      if (v.is_number()) return format_double(v.get<double>());
      return v.dump();
    };
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back(flag);
      continue;
    }
    args.push_back(flag);
    if (value.is_array()) {
      for (const auto& v : value) args.push_back(scalar(v));
    } else {
      args.push_back(scalar(value));
    }
  }
  return args;
}

void write_scan(const ScanReport& report, const std::string& prefix) {
  if (prefix.empty()) return;
  write_text_file(prefix + ".csv", scan_csv(report));
  write_text_file(prefix + ".json", fit_json(report).dump(2) + "\n");
}

void print_scan(std::ostream& out, const ScanReport& report) {
  out << "# " << report.name << " config_hash=" << report.config_hash() << "\n";
  out << "param,value,lo_ci,hi_ci\n";
  for (const auto& r : report.rows) {
    out << format_double(r.param) << ',' << format_double(r.value) << ',' << format_double(r.lo_ci) << ','
        << format_double(r.hi_ci) << "\n";
  }
  if (report.fit_valid) {
    out << "slope " << format_double(report.fit.slope) << " intercept " << format_double(report.fit.intercept)
        << " residual " << format_double(report.fit.residual) << "\n";
  }
}

void check_band(const ScanReport& report, const std::vector<double>& band) {
  if (band.size() != 2) return;
  if (!report.fit_valid) throw ScanBandFailure(report.name + ": no fitted slope to check");
  const double s = report.fit.slope;
  if (s < band[0] || s > band[1]) {
    throw ScanBandFailure(report.name + ": slope " + format_double(s) + " outside [" + format_double(band[0]) +
                          ", " + format_double(band[1]) + "]");
  }
}

void emit_json(std::ostream& out, const std::string& path, const json& j) {
  if (path.empty()) {
    out << j.dump(2) << "\n";
  } else {
    write_text_file(path, j.dump(2) + "\n");
  }
}

int exit_for(std::ostream& err, const std::exception& e, int code) {
  err << "error: " << e.what() << "\n";
  return code;
}

}  // namespace

LatticeSpec parse_omega(const std::string& text) {
  if (text == "sqrt2") return LatticeSpec::sqrt2();
  if (!text.empty() && (text.front() == '{' || text.front() == '[' || text.front() == '"')) {
    return lattice_from_json(parse_json(text, "--omega"));
  }
  if (!text.empty() && text.front() == '@') return lattice_from_json(read_json_file(text.substr(1)));
  std::vector<QScalar> block;
  for (const auto& tok : split(text, ',')) {
    if (tok.empty()) throw ValidationError("empty generator in --omega '" + text + "'");
    try {
      block.push_back(parse_generator(tok));
    } catch (const std::invalid_argument&) {
      throw ValidationError("cannot parse generator '" + tok + "'");
    } catch (const std::out_of_range&) {
      throw ValidationError("generator '" + tok + "' is out of range");
    }
  }
  return LatticeSpec::one_dim(std::move(block));
}

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"quasi-periodic Strichartz norms, lattice counting and Galerkin solvers", "qpwave"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");
  Common common;
  json resolved = json::object();

  // norm
  std::string input;
  int p = 4;
  bool numeric = false;
  double window = 0.0, step = 0.0;
  auto* norm = app.add_subcommand("norm", "mean-value norm of a polynomial");
  add_common(norm, common, false);
  norm->add_option("--input", input, "polynomial JSON")->required();
  norm->add_option("--p", p, "exponent p (exact: 2, 4, 6)");
  norm->add_flag("--numeric", numeric, "long-interval trapezoid average instead of tuple counting");
  norm->add_option("--window", window, "averaging half-width L (numeric)");
  norm->add_option("--step", step, "quadrature step (numeric)");

  // mixed-norm
  std::string symbol_name = "schrodinger";
  double T = 1.0;
  bool global_mean = false;
  auto* mixed = app.add_subcommand("mixed-norm", "L^p_t L^p_x norm of a free evolution");
  add_common(mixed, common, false);
  mixed->add_option("--input", input, "polynomial JSON")->required();
  mixed->add_option("--p", p, "exponent p (2, 4, 6)");
  mixed->add_option("--symbol", symbol_name, "schrodinger, airy or none");
  mixed->add_option("--T", T, "time window [0, T]");
  mixed->add_flag("--global-mean", global_mean, "global time mean instead of the window");

  // count
  std::int64_t height = 8;
  std::vector<std::string> interval;
  bool closed = false;
  auto* count = app.add_subcommand("count", "count shell frequencies in an interval");
  add_common(count, common);
  count->add_option("--C", height, "dyadic height")->required();
  count->add_option("--interval", interval, "interval endpoints lo hi")->expected(2)->required();
  count->add_flag("--closed", closed, "use [lo, hi] instead of [lo, hi)");

  // gaps
  auto* gaps = app.add_subcommand("gaps", "minimal frequency gap and diophantine fit");
  add_common(gaps, common);
  gaps->add_option("--H", height, "height bound")->required();

  // extremizer
  auto* ext = app.add_subcommand("extremizer", "write the extremizer polynomial at height C");
  add_common(ext, common);
  ext->add_option("--C", height, "dyadic height")->required();

  // nls-run / kdv-run
  std::string run_path;
  std::string state_out;
  auto* nls_run = app.add_subcommand("nls-run", "Galerkin-truncated NLS run");
  auto* kdv_run = app.add_subcommand("kdv-run", "Galerkin-truncated KdV run");
  for (auto* sub : {nls_run, kdv_run}) {
    add_common(sub, common, false);
    sub->add_option("--input", input, "initial data JSON")->required();
    sub->add_option("--run", run_path, "solver config JSON");
    sub->add_option("--state-out", state_out, "write the final state JSON here");
  }

  // scans
  std::vector<std::int64_t> heights{8, 16, 32, 64};
  std::vector<double> band;
  double t = 0.01;
  auto* picard = app.add_subcommand("picard-scan", "first Picard iterate norm of extremizers vs C");
  add_common(picard, common);
  picard->add_option("--C", heights, "dyadic heights");
  picard->add_option("--t", t, "time");
  picard->add_option("--band", band, "required slope band lo hi (exit 4 outside)")->expected(2);

  std::size_t trials = 16, support_cap = 96;
  std::vector<double> extremizer_band;
  auto* strich = app.add_subcommand("strichartz-scan", "fixed-time Strichartz ratio scan");
  add_common(strich, common);
  strich->add_option("--symbol", symbol_name, "schrodinger or airy");
  strich->add_option("--p", p, "exponent (4)");
  strich->add_option("--T", T, "time window");
  strich->add_option("--C", heights, "dyadic heights");
  strich->add_option("--trials", trials, "random trials per height");
  strich->add_option("--support-cap", support_cap, "max support of a random trial");
  strich->add_option("--band", band, "max-ratio slope band lo hi")->expected(2);
  strich->add_option("--extremizer-band", extremizer_band, "extremizer slope band lo hi")->expected(2);

  std::int64_t c2 = 64;
  auto* bil = app.add_subcommand("bilinear-scan", "bilinear L2 ratio scan vs C1");
  add_common(bil, common);
  bil->add_option("--symbol", symbol_name, "schrodinger or airy");
  bil->add_option("--T", T, "time window");
  bil->add_option("--C1", heights, "dyadic heights of the first factor");
  bil->add_option("--C2", c2, "dyadic height of the second factor");
  bil->add_option("--trials", trials, "random trials per height");
  bil->add_option("--support-cap", support_cap, "max support of a random trial");
  bil->add_option("--band", band, "slope band lo hi")->expected(2);

  double delta = 1e-3, grid = 1e-3, bound = 10.0;
  auto* bio = app.add_subcommand("biortho-check", "biorthogonality of approximate cubic quadruples");
  add_common(bio, common, false);
  bio->add_option("--delta", delta, "cubic tolerance");
  bio->add_option("--grid", grid, "grid step 1/K");
  bio->add_option("--bound", bound, "pairing constant K");

  double avg_bound = 2.0;
  auto* avg = app.add_subcommand("averaged-check", "global-mean L4 ratio for extremizers and trials");
  add_common(avg, common);
  avg->add_option("--symbol", symbol_name, "schrodinger or airy");
  avg->add_option("--C", heights, "dyadic heights");
  avg->add_option("--bound", avg_bound, "absolute constant bounding every ratio");
  avg->add_option("--trials", trials, "random trials per height");
  avg->add_option("--support-cap", support_cap, "max support of a random trial");
  avg->add_option("--band", band, "extremizer slope band lo hi")->expected(2);

  std::string p_text = "4";
  int d = 1, b = 1;
  bool with_alpha = false;
  auto* pred = app.add_subcommand("predict-exponent", "s*(p, d, b) and the decoupling exponent");
  pred->add_option("--p", p_text, "p > 2, integer, p/q or inf")->required();
  pred->add_option("--d", d, "spatial dimension");
  pred->add_option("--b", b, "density parameter");
  pred->add_flag("--alpha", with_alpha, "also print alpha(p) and p_d");

  try {
    const auto args = expand_config(raw_args);
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ValidationError& e) {
    return exit_for(err, e, kExitValidation);
  }

  try {
    set_worker_count(common.workers);
    auto symbol = [&] { return DispersionSymbol::parse(symbol_name); };
    TrialOptions opt;
    opt.trials = trials;
    opt.support_cap = support_cap;
    opt.seed = common.seed;
    opt.budget = budget_of(common, tuple_budget());

    if (norm->parsed()) {
      const TrigPoly f = trigpoly_from_json(read_json_file(input));
      double v = 0;
      if (numeric) {
        v = lp_norm_numeric(f, p, window > 0 ? window : default_window(f), step);
      } else {
        v = lp_norm_exact(f, p, budget_of(common, tuple_budget()));
      }
      out << format_double(v) << "\n";
      if (!common.output.empty()) {
        json j = {{"norm", v}, {"config", {{"input", input}, {"p", p}, {"numeric", numeric}}}};
        if (numeric) {
          j["config"]["window"] = window;
          j["config"]["step"] = step;
        }
        write_text_file(common.output, j.dump(2) + "\n");
      }
      return kExitOk;
    }
    if (mixed->parsed()) {
      const TrigPoly f = trigpoly_from_json(read_json_file(input));
      const MixedNormSpec spec{p, global_mean ? TimeMode::global_mean : TimeMode::windowed, T};
      const double v = mixed_norm_free(f, symbol(), spec, budget_of(common, tuple_budget()));
      out << format_double(v) << "\n";
      if (!common.output.empty()) {
        json j = {{"norm", v},
                  {"config", {{"input", input}, {"p", p}, {"symbol", symbol_name}, {"T", T}, {"global_mean", global_mean}}}};
        write_text_file(common.output, j.dump(2) + "\n");
      }
      return kExitOk;
    }
    if (count->parsed()) {
      const LatticeSpec spec = parse_omega(common.omega);
      const QScalar lo = parse_generator(interval[0]);
      const QScalar hi = parse_generator(interval[1]);
      const Interval iv = closed ? Interval::closed(lo, hi) : Interval::half_open(lo, hi);
      const auto n = count_in_interval(spec, height, iv, budget_of(common, default_budget()));
      out << n << "\n";
      if (!common.output.empty()) {
        json j = {{"count", n},
                  {"config", {{"omega", to_json(spec)}, {"C", height}, {"interval", interval}, {"closed", closed}}}};
        write_text_file(common.output, j.dump(2) + "\n");
      }
      return kExitOk;
    }
    if (gaps->parsed()) {
      const LatticeSpec spec = parse_omega(common.omega);
      const auto rep = min_gap(spec, height, budget_of(common, default_budget()));
      out << "gap " << format_double(rep.gap_value) << " (" << rep.gap.str() << ")\n";
      if (rep.fit_valid) out << "alpha " << format_double(rep.alpha) << " beta " << format_double(rep.beta) << "\n";
      if (!common.output.empty()) {
        json series = json::array();
        for (const auto& [h, g] : rep.series) series.push_back({h, g});
        json j = {{"gap", rep.gap_value}, {"gap_exact", rep.gap.str()}, {"series", series},
                  {"config", {{"omega", to_json(spec)}, {"H", height}}}};
        if (rep.fit_valid) {
          j["alpha"] = rep.alpha;
          j["beta"] = rep.beta;
        }
        write_text_file(common.output, j.dump(2) + "\n");
      }
      return kExitOk;
    }
    if (ext->parsed()) {
      const LatticeSpec spec = parse_omega(common.omega);
      const TrigPoly f = extremizer(spec, height, budget_of(common, default_budget()));
      emit_json(out, common.output, to_json(f));
      if (!common.output.empty()) out << f.size() << " modes\n";
      return kExitOk;
    }
    if (nls_run->parsed() || kdv_run->parsed()) {
      const json data = read_json_file(input);
      const SolverConfig cfg = run_path.empty() ? SolverConfig{} : solver_config_from_json(read_json_file(run_path));
      json config = to_json(cfg);
      config["input"] = input;
      SolveResult res;
      json state;
      if (nls_run->parsed()) {
        config["equation"] = "nls";
        res = solve(trigpoly_from_json(data), cfg);
        state = to_json(res.state);
      } else {
        config["equation"] = "kdv";
        res = kdv_solve(realfield_from_json(data), cfg);
        state = to_json(RealField(res.state));
      }
      const std::string csv = trace_csv(res.trace, config);
      if (common.output.empty()) {
        out << csv;
      } else {
        write_text_file(common.output, csv);
      }
      if (!state_out.empty()) write_text_file(state_out, state.dump(2) + "\n");
      if (res.trace.truncation_warning) {
        err << "warning: truncation discarded up to " << format_double(res.trace.max_trunc_loss)
            << " of the mass per step (threshold " << format_double(cfg.trunc_warn) << ")\n";
      }
      out << "mass drift " << format_double(res.trace.mass_drift()) << "\n";
      return kExitOk;
    }
    if (picard->parsed()) {
      const LatticeSpec spec = parse_omega(common.omega);
      ScanReport rep = picard_blowup_scan(spec, heights, t, budget_of(common, default_budget()));
      rep.config["omega"] = to_json(spec);
      print_scan(out, rep);
      write_scan(rep, common.output);
      check_band(rep, band);
      return kExitOk;
    }
    if (strich->parsed()) {
      const LatticeSpec spec = parse_omega(common.omega);
      const auto res = strichartz_scan(spec, symbol(), p, T, heights, opt);
      print_scan(out, res.max_ratio);
      print_scan(out, res.extremizer);
      if (!common.output.empty()) {
        write_scan(res.max_ratio, common.output);
        write_scan(res.extremizer, common.output + ".extremizer");
      }
      check_band(res.max_ratio, band);
      check_band(res.extremizer, extremizer_band);
      return kExitOk;
    }
    if (bil->parsed()) {
      const LatticeSpec spec = parse_omega(common.omega);
      const auto rep = bilinear_scan(spec, symbol(), heights, c2, T, opt);
      print_scan(out, rep);
      write_scan(rep, common.output);
      check_band(rep, band);
      return kExitOk;
    }
    if (bio->parsed()) {
      const auto rep = biorthogonality_check(delta, grid, bound);
      json j = {{"delta", rep.delta},
                {"grid_step", rep.grid_step},
                {"quadruples", rep.quadruples},
                {"excluded_near_origin", rep.excluded_near_origin},
                {"max_normalized_distance", rep.max_normalized_distance},
                {"worst", rep.worst},
                {"bound", rep.bound},
                {"holds", rep.holds},
                {"config", {{"delta", delta}, {"grid", grid}, {"bound", bound}}}};
      emit_json(out, common.output, j);
      if (!rep.holds) {
        throw ScanBandFailure("pairing distance " + format_double(rep.max_normalized_distance) + " exceeds bound");
      }
      return kExitOk;
    }
    if (avg->parsed()) {
      const LatticeSpec spec = parse_omega(common.omega);
      const auto res = averaged_norm_check(spec, symbol(), heights, avg_bound, opt);
      print_scan(out, res.extremizer);
      print_scan(out, res.max_ratio);
      out << "max ratio " << format_double(res.max_observed) << " bound " << format_double(res.bound) << "\n";
      if (!common.output.empty()) {
        write_scan(res.extremizer, common.output);
        write_scan(res.max_ratio, common.output + ".max");
      }
      check_band(res.extremizer, band);
      if (!res.holds) throw ScanBandFailure("averaged ratio exceeds the bound");
      return kExitOk;
    }
    if (pred->parsed()) {
      if (p_text == "inf") {
        out << format_double(predicted_exponent_value(std::numeric_limits<double>::infinity(), d, b)) << "\n";
        return kExitOk;
      }
      const Rational pr = Rational::parse(p_text);
      const Rational s = predicted_exponent(pr, d, b);
      out << format_double(s.to_double()) << "\n";
      if (with_alpha) {
        out << "s* " << s.str() << "\nalpha " << decoupling_alpha(pr, d).str() << "\np_d "
            << critical_exponent(d).str() << "\n";
      }
      return kExitOk;
    }
  } catch (const ScanBandFailure& e) {
    return exit_for(err, e, kExitScanBand);
  } catch (const BudgetError& e) {
    return exit_for(err, e, kExitBudget);
  } catch (const ValidationError& e) {
    return exit_for(err, e, kExitValidation);
  } catch (const ResonantLatticeError& e) {
    return exit_for(err, e, kExitValidation);
  } catch (const std::exception& e) {
    return exit_for(err, e, kExitFailure);
  }
  return kExitFailure;
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace qpwave
