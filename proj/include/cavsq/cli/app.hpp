#pragma once

// Batch front-end: configuration parsing, command execution and output.
//
//   cavsq <command> [--key value ...] [--config file]
//
// Config files are flat `key = value` text with `#` comments; keys are the
// long option names without dashes. Command-line flags win over the file.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cavsq/cavsq.hpp"
#include "cavsq/cli/csv.hpp"
#include "cavsq/cli/svg.hpp"

namespace cavsq::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitNumeric = 3,
  kExitRegime = 4,
};

// Bad configuration or arguments; maps to exit code 2.
class UsageError : public Error {
 public:
  using Error::Error;
};

struct HelpRequested {
  std::string text;
};

struct GridSpec {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 1;
  bool log = false;

  std::vector<double> values() const {
    std::vector<double> v(count);
    for (std::size_t i = 0; i < count; ++i) {
      if (count == 1) {
        v[i] = lo;
      } else if (i + 1 == count) {
        v[i] = hi;
      } else {
        const double f = static_cast<double>(i) / static_cast<double>(count - 1);
        v[i] = log ? std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo)))
                   : lo + f * (hi - lo);
      }
    }
    return v;
  }
};

// "lo:hi:count[:lin|log]" or a single value for a one-point grid.
inline GridSpec parse_grid(const std::string& key, const std::string& text) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t c = text.find(':', start);
    parts.push_back(text.substr(start, c - start));
    if (c == std::string::npos) break;
    start = c + 1;
  }
  try {
    GridSpec g;
    if (parts.size() == 1) {
      g.lo = g.hi = parse_number(parts[0]);
      return g;
    }
    if (parts.size() < 3 || parts.size() > 4) throw UsageError("");
    g.lo = parse_number(parts[0]);
    g.hi = parse_number(parts[1]);
    const double n = parse_number(parts[2]);
    if (!(n >= 2.0) || n != std::floor(n)) throw UsageError("");
    g.count = static_cast<std::size_t>(n);
    if (parts.size() == 4) {
      if (parts[3] == "log") g.log = true;
      else if (parts[3] != "lin") throw UsageError("");
    }
    if (!(g.lo < g.hi) || (g.log && !(g.lo > 0.0))) throw UsageError("");
    return g;
  } catch (const Error&) {
    throw UsageError(key + ": expected lo:hi:count[:lin|log] with lo < hi and count >= 2, got '" +
                     text + "'");
  }
}

struct RunConfig {
  std::string command;
  std::optional<double> S, kappa, Omega, beta0, x, delta, Qx;
  std::optional<double> g, Gamma, Delta;
  double eta = INFINITY;
  std::optional<GridSpec> t_grid, Qx_grid, x_grid;
  std::vector<double> S_list, x_list;
  PhaseMode phase_mode = PhaseMode::Analytic;
  OverlapMode overlap_mode = OverlapMode::On;
  FormulaMode formula_mode = FormulaMode::Standard;
  ScalingMode scaling_mode = ScalingMode::Exact;
  std::string out;
  std::string svg;
  std::string svg_x, svg_y;
  bool svg_log_x = false, svg_log_y = false;
  bool no_meta = false;
  unsigned threads = 1;
  std::vector<std::string> raw_args;  // for the meta line

  double require(const std::optional<double>& v, const char* key) const {
    if (!v) throw UsageError("missing required key: " + std::string(key));
    return *v;
  }

  // Resolves x from whichever of x / delta was given.
  double resolved_x() const {
    const double k = require(kappa, "kappa");
    if (x && delta) {
      if (std::abs(*delta + 0.5 * *x * k) > 1e-12 * std::max(1.0, std::abs(*delta))) {
        throw UsageError("x and delta are inconsistent (need delta = -x*kappa/2)");
      }
      return *x;
    }
    if (x) return *x;
    if (delta) return -2.0 * *delta / k;
    throw UsageError("missing required key: x (or delta)");
  }

  DriveParams drive() const {
    const double k = require(kappa, "kappa");
    const double b = require(beta0, "beta0");
    const double xv = resolved_x();
    if (g || Gamma || Delta) {
      PhysicalRates r;
      r.g = require(g, "g");
      r.Gamma = require(Gamma, "Gamma");
      r.Delta = require(Delta, "Delta");
      r.omega_a = 2.0 * std::abs(r.Delta);
      const double derived = 2.0 * r.g * r.g / std::abs(r.Delta);
      if (Omega && std::abs(*Omega - derived) > 1e-9 * derived) {
        throw UsageError("Omega inconsistent with 2 g^2 / |Delta|");
      }
      DriveParams p = DriveParams::from_x(k, xv, derived, b);
      p.rates = r;
      p.validate();
      return p;
    }
    return DriveParams::from_x(k, xv, require(Omega, "Omega"), b);
  }
};

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"traj",    "sweep-detuning",    "scaling",
                                              "scatter", "optimize-detuning", "validate"};
  return names;
}

// Parses the arguments after the program name into a RunConfig. Help
// requests throw HelpRequested with the rendered usage.
inline RunConfig parse_config(std::vector<std::string> args) {
  RunConfig cfg;
  cfg.raw_args = args;
  CLI::App app{"Cavity spin squeezing simulator. All rates in rad/us, times in us.", "cavsq"};
  app.set_config("--config", "", "flat key = value file, # comments");
  app.allow_config_extras(CLI::config_extras_mode::error);

  std::string t_grid, qx_grid, x_grid, eta = "inf";
  std::string phase = "analytic", overlap = "on", formula = "standard", scaling = "exact";
  std::string svg_cols;

  app.add_option("command", cfg.command, "traj | sweep-detuning | scaling | scatter | "
                                         "optimize-detuning | validate")
      ->required()
      ->check(CLI::IsMember(command_names()));
  app.add_option("--S", cfg.S, "total spin S = N/2");
  app.add_option("--kappa", cfg.kappa, "cavity linewidth");
  app.add_option("--Omega", cfg.Omega, "dispersive shift 2g^2/|Delta|");
  app.add_option("--beta0", cfg.beta0, "drive amplitude");
  app.add_option("--x", cfg.x, "normalized detuning, delta = -x kappa / 2");
  app.add_option("--delta", cfg.delta, "laser-cavity detuning omega_c - omega_l");
  app.add_option("--eta", eta, "single-atom cooperativity (inf allowed)");
  app.add_option("--Qx", cfg.Qx, "shearing strength for validate");
  app.add_option("--g", cfg.g, "single-photon coupling");
  app.add_option("--Gamma", cfg.Gamma, "excited-state decay rate");
  app.add_option("--Delta", cfg.Delta, "atomic detuning |Delta| = omega_a / 2");
  app.add_option("--t-grid", t_grid, "time grid lo:hi:count[:lin|log]");
  app.add_option("--Qx-grid", qx_grid, "shearing-strength grid lo:hi:count[:lin|log]");
  app.add_option("--x-grid", x_grid, "detuning grid lo:hi:count[:lin|log]");
  app.add_option("--S-list", cfg.S_list, "comma separated spins")->delimiter(',');
  app.add_option("--x-list", cfg.x_list, "comma separated detunings")->delimiter(',');
  app.add_option("--phase-mode", phase, "analytic | numeric")
      ->check(CLI::IsMember({"analytic", "numeric"}));
  app.add_option("--overlap-mode", overlap, "on | off")->check(CLI::IsMember({"on", "off"}));
  app.add_option("--formula-mode", formula, "standard | as-written")
      ->check(CLI::IsMember({"standard", "as-written"}));
  app.add_option("--scaling-mode", scaling, "exact | analytic")
      ->check(CLI::IsMember({"exact", "analytic"}));
  app.add_option("--out", cfg.out, "CSV output path (default stdout)");
  app.add_option("--svg", cfg.svg, "also write an SVG plot here");
  app.add_option("--svg-columns", svg_cols, "x,y columns to plot");
  app.add_flag("--svg-logx", cfg.svg_log_x, "log x axis");
  app.add_flag("--svg-logy", cfg.svg_log_y, "log y axis");
  app.add_flag("--no-meta", cfg.no_meta, "omit the timestamp comment line");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested{app.help()};
  }

  try {
    cfg.eta = parse_number(eta);
  } catch (const Error&) {
    throw UsageError("eta: not a number: '" + eta + "'");
  }
  if (!t_grid.empty()) cfg.t_grid = parse_grid("t-grid", t_grid);
  if (!qx_grid.empty()) cfg.Qx_grid = parse_grid("Qx-grid", qx_grid);
  if (!x_grid.empty()) cfg.x_grid = parse_grid("x-grid", x_grid);
  cfg.phase_mode = phase == "numeric" ? PhaseMode::Numeric : PhaseMode::Analytic;
  cfg.overlap_mode = overlap == "off" ? OverlapMode::Off : OverlapMode::On;
  cfg.formula_mode = formula == "as-written" ? FormulaMode::AsWritten : FormulaMode::Standard;
  cfg.scaling_mode = scaling == "analytic" ? ScalingMode::Analytic : ScalingMode::Exact;
  if (!svg_cols.empty()) {
    const std::size_t c = svg_cols.find(',');
    if (c == std::string::npos) throw UsageError("svg-columns: expected x,y");
    cfg.svg_x = svg_cols.substr(0, c);
    cfg.svg_y = svg_cols.substr(c + 1);
  }
  if (!cfg.svg.empty() && cfg.svg_x.empty()) {
    throw UsageError("svg needs --svg-columns x,y");
  }
  cfg.threads = thread_count_from_env();

  // Detuning consistency is a parse-time error wherever both are given.
  if (cfg.x && cfg.delta) (void)cfg.resolved_x();
  return cfg;
}

// ---------------------------------------------------------------------------
// Commands

namespace detail {

inline EvolveOptions evolve_options(const RunConfig& c) {
  return {c.phase_mode, c.overlap_mode};
}

inline CsvTable run_traj(const RunConfig& c, std::ostream& log) {
  const auto spec = EnsembleSpec::from_spin(c.require(c.S, "S"));
  const DriveParams p = c.drive();
  std::vector<double> ts;
  if (c.t_grid) {
    ts = c.t_grid->values();
  } else if (c.Qx_grid) {
    for (double q : c.Qx_grid->values()) ts.push_back(t_from_Qx(p, spec.spin(), q));
  } else {
    throw UsageError("missing required key: t-grid (or Qx-grid)");
  }
  SweepOptions opts;
  opts.evolve = evolve_options(c);
  opts.threads = c.threads;
  const TrajectoryResult tr = sweep_trajectory(spec, p, ts, opts);

  CsvTable t;
  t.header = {"t", "Q", "Qx", "xi2", "contrast", "Sx", "varMin"};
  for (const TrajectoryPoint& pt : tr.points) {
    t.rows.push_back({pt.shear.t, pt.shear.Q, pt.shear.Qx, pt.report.xi2, pt.report.contrast,
                      pt.moments.mean[0], pt.report.min_variance});
  }
  log << "minimum xi2 = " << format_number(tr.minimum.report.xi2)
            << " at t = " << format_number(tr.minimum.shear.t)
            << " (Qx = " << format_number(tr.minimum.shear.Qx) << ")\n";
  return t;
}

inline CsvTable run_sweep_detuning(const RunConfig& c) {
  const auto spec = EnsembleSpec::from_spin(c.require(c.S, "S"));
  if (c.x_list.empty()) throw UsageError("missing required key: x-list");
  CsvTable t;
  t.header = {"x", "Q_opt", "Qx_opt", "xi2_min"};
  for (double x : c.x_list) {
    const DriveParams p = DriveParams::from_x(c.require(c.kappa, "kappa"), x,
                                              c.require(c.Omega, "Omega"),
                                              c.require(c.beta0, "beta0"));
    const OptimizeResult r = minimize_exact_over_qx(spec, p, evolve_options(c));
    t.rows.push_back({x, r.argmin / detuning_factor(x), r.argmin, r.value});
  }
  return t;
}

inline CsvTable run_scaling(const RunConfig& c) {
  if (c.S_list.empty()) throw UsageError("missing required key: S-list");
  ScalingConfig sc;
  sc.kappa = c.require(c.kappa, "kappa");
  sc.Omega = c.require(c.Omega, "Omega");
  sc.beta0 = c.require(c.beta0, "beta0");
  sc.x = c.resolved_x();
  sc.evolve = evolve_options(c);
  sc.threads = c.threads;
  const ScalingFit fit = scaling_fit(sc, c.S_list, c.scaling_mode);
  CsvTable t;
  t.header = {"S", "Qx_opt", "xi2_min"};
  for (const ScalingPoint& pt : fit.points) t.rows.push_back({pt.S, pt.Qx_opt, pt.xi2_min});
  t.footer_header = {"exponent", "prefactor", "rSquared"};
  t.footer = {fit.exponent, fit.prefactor, fit.r_squared};
  return t;
}

inline CsvTable run_scatter(const RunConfig& c) {
  const double s = c.require(c.S, "S");
  const double x = c.require(c.x, "x");
  if (!c.Qx_grid) throw UsageError("missing required key: Qx-grid");
  CsvTable t;
  t.header = {"Qx", "xi2_standard", "xi2_aswritten", "Rx"};
  for (double q : c.Qx_grid->values()) {
    const ScatterModelInput in{q, x, s, c.eta};
    double as_written = NAN;
    try {
      as_written = xi2_scatter(in, FormulaMode::AsWritten);
    } catch (const NumericFailure&) {
      // complex discriminant: reported as nan
    }
    t.rows.push_back({q, xi2_scatter(in, FormulaMode::Standard), as_written,
                      scattered_photons(q, x, s, c.eta)});
  }
  return t;
}

inline CsvTable run_optimize_detuning(const RunConfig& c) {
  const double s = c.require(c.S, "S");
  if (!c.x_grid) throw UsageError("missing required key: x-grid");
  CsvTable t;
  t.header = {"x", "Qx_opt", "xi2_min"};
  for (double x : c.x_grid->values()) {
    const OptimizeResult r = minimize_scatter_over_qx(x, s, c.eta, c.formula_mode);
    t.rows.push_back({x, r.argmin, r.value});
  }
  const DetuningOptimum best =
      optimal_over_detuning(s, c.eta, c.x_grid->lo, c.x_grid->hi, c.formula_mode);
  t.footer_header = {"x_opt", "Qx_opt", "xi2_min"};
  t.footer = {best.x, best.inner.argmin, best.inner.value};
  return t;
}

inline CsvTable run_validate(const RunConfig& c) {
  const double s = c.require(c.S, "S");
  const ValidityReport rep = validity(c.drive(), s, c.require(c.Qx, "Qx"));
  CsvTable t;
  t.header = {"check", "value", "threshold", "pass"};
  for (const ValidityCheck& ck : rep.checks) {
    t.rows.push_back({ck.name, ck.value, ck.threshold, std::string(ck.pass ? "1" : "0")});
  }
  t.rows.push_back({std::string("detuning_regime"), NAN, NAN,
                    std::string(to_string(rep.detuning_regime))});
  return t;
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  os << text;
  os.close();
  if (!os) throw UsageError("cannot write " + path);
}

inline std::string meta_line(const RunConfig& c) {
  const std::time_t now = std::time(nullptr);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  std::string line = std::string("cavsq ") + stamp;
  for (const auto& a : c.raw_args) line += " " + a;
  return line;
}

}  // namespace detail

struct RunOutput {
  CsvTable table;
  std::string csv;
  std::string svg;
};

// Executes the command. Throws on failure; nothing is written here except
// progress notes to log.
inline RunOutput run(const RunConfig& c, std::ostream& log = std::cerr) {
  RunOutput out;
  const std::string& cmd = c.command;
  if (cmd == "traj") out.table = detail::run_traj(c, log);
  else if (cmd == "sweep-detuning") out.table = detail::run_sweep_detuning(c);
  else if (cmd == "scaling") out.table = detail::run_scaling(c);
  else if (cmd == "scatter") out.table = detail::run_scatter(c);
  else if (cmd == "optimize-detuning") out.table = detail::run_optimize_detuning(c);
  else if (cmd == "validate") out.table = detail::run_validate(c);
  else throw UsageError("unknown command: " + cmd);

  out.csv = to_csv(out.table, c.no_meta ? std::string{} : detail::meta_line(c));
  if (!c.svg.empty()) {
    try {
      out.svg = emit_svg(out.table, c.svg_x, c.svg_y, {c.svg_log_x, c.svg_log_y});
    } catch (const InvalidArgument& e) {
      throw UsageError(e.what());
    }
  }
  return out;
}

// Full CLI entry point: parse, run, write outputs. Returns the exit code.
// Output files are written only after every table was produced and are
// removed again if any write fails.
inline int main(int argc, char** argv, std::ostream& out = std::cout,
                std::ostream& err = std::cerr) {
  std::vector<std::string> args(argv + 1, argv + argc);
  RunConfig cfg;
  try {
    cfg = parse_config(args);
  } catch (const HelpRequested& h) {
    out << h.text;
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "cavsq: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "cavsq: " << e.what() << '\n';
    return kExitUsage;
  }

  std::vector<std::string> written;
  try {
    const RunOutput res = run(cfg, err);
    if (!cfg.svg.empty()) {
      detail::write_file(cfg.svg, res.svg);
      written.push_back(cfg.svg);
    }
    if (cfg.out.empty()) {
      out << res.csv;
    } else {
      detail::write_file(cfg.out, res.csv);
      written.push_back(cfg.out);
    }
    return kExitOk;
  } catch (const Error& e) {
    for (const auto& f : written) std::filesystem::remove(f);
    err << "cavsq: " << e.what() << '\n';
    if (dynamic_cast<const OutOfRegime*>(&e)) return kExitRegime;
    if (dynamic_cast<const NumericFailure*>(&e) || dynamic_cast<const NoMinimum*>(&e) ||
        dynamic_cast<const DegenerateDirection*>(&e)) {
      return kExitNumeric;
    }
    return kExitUsage;
  }
}

}  // namespace cavsq::cli
