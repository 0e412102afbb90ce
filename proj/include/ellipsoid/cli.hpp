#pragma once

// Command-line driver. Exit statuses: 0 feasible, 1 not found (volume
// exhausted or iteration cap), 2 input error, 3 numerical breakdown.

#include <cmath>
#include <cstddef>
#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ellipsoid/ellipsoid.hpp"
#include "ellipsoid/errors.hpp"
#include "ellipsoid/oracle.hpp"
#include "ellipsoid/problem_io.hpp"
#include "ellipsoid/solver.hpp"
#include "ellipsoid/svg.hpp"

namespace ellipsoid::cli {

enum ExitStatus : int { kFeasible = 0, kNotFound = 1, kInputError = 2, kBreakdown = 3 };

/// Default epsilon is this fraction of the initial ball's volume.
inline constexpr double kDefaultEpsilonFraction = 1e-8;

struct Options {
  std::string input;
  std::optional<double> epsilon;
  std::optional<std::size_t> max_iter;
  double tol = kDefaultViolationTolerance;
  std::string output = "text";
  std::string trace_path;
  std::string svg_path;
  bool verify = false;
};

namespace cli_detail {

inline std::string oracle_agreement(const SolveOutcome& outcome, const LinearSystem& sys) {
  if (sys.dim() > kOracleMaxDim || sys.constraints().size() > kOracleMaxRows) return "skipped";
  const OracleVerdict verdict = vertex_enumeration_check(sys);
  if (std::holds_alternative<Inconclusive>(verdict)) return "inconclusive";
  const bool solver_found = std::holds_alternative<Feasible>(outcome);
  const bool oracle_found = std::holds_alternative<FeasibleWitness>(verdict);
  return solver_found == oracle_found ? "agree" : "disagree";
}

inline std::string status_name(const SolveOutcome& outcome) {
  if (std::holds_alternative<Feasible>(outcome)) return "feasible";
  if (std::holds_alternative<VolumeExhausted>(outcome)) return "volume_exhausted";
  return "iteration_cap";
}

inline std::size_t iterations_of(const SolveOutcome& outcome) {
  return std::visit([](const auto& o) { return o.iterations; }, outcome);
}

inline int run_unchecked(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  using nlohmann::json;

  Options opt;
  CLI::App app{"Linear feasibility by the ellipsoid method", "ellipsoid-cli"};
  app.add_option("--input", opt.input, "Problem file (JSON)")->required();
  app.add_option("--epsilon", opt.epsilon, "Volume threshold (default 1e-8 x initial ball volume)");
  app.add_option("--max-iter", opt.max_iter, "Iteration cap (default from the volume bound)");
  app.add_option("--tol", opt.tol, "Relative violation tolerance");
  app.add_option("--output", opt.output, "Report format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--trace", opt.trace_path, "Write newline-delimited trace records here");
  app.add_option("--svg", opt.svg_path, "Write an SVG of the ellipse sequence here (dim 2 only)");
  app.add_flag("--verify", opt.verify, "Cross-check with the brute-force oracle (dim <= 4)");

  std::vector<std::string> argv_storage{"ellipsoid-cli"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kFeasible;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }

  std::optional<LinearSystem> sys;
  try {
    std::ifstream in(opt.input, std::ios::binary);
    if (!in) {
      err << "error: cannot read " << opt.input << "\n";
      return kInputError;
    }
    const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    sys = to_linear_system(parse_problem(text));
  } catch (const parse_error& e) {
    err << "error: " << opt.input << ": " << e.what() << "\n";
    return kInputError;
  } catch (const validation_error& e) {
    err << "error: " << opt.input << ": " << e.what() << "\n";
    return kInputError;
  }

  const std::size_t n = sys->dim();
  if (!opt.svg_path.empty() && n != 2) {
    err << "error: --svg is only available for two-dimensional problems (dim = " << n << ")\n";
    return kInputError;
  }
  if (!(opt.tol >= 0.0)) {
    err << "error: --tol must be non-negative\n";
    return kInputError;
  }

  SolverConfig cfg;
  cfg.violation_tolerance = opt.tol;
  cfg.max_iterations = opt.max_iter;
  const double log_v0 = log_unit_ball_volume(n) + static_cast<double>(n) * std::log(sys->radius());
  cfg.epsilon = opt.epsilon.value_or(kDefaultEpsilonFraction * std::exp(log_v0));
  if (!(cfg.epsilon > 0.0) || !std::isfinite(cfg.epsilon)) {
    err << "error: epsilon must be positive and finite (pass --epsilon explicitly)\n";
    return kInputError;
  }

  std::ofstream trace_out;
  if (!opt.trace_path.empty()) {
    trace_out.open(opt.trace_path);
    if (!trace_out) {
      err << "error: cannot write " << opt.trace_path << "\n";
      return kInputError;
    }
  }
  std::vector<TraceRecord> records;
  std::vector<EllipsoidState> states;
  const bool want_svg = !opt.svg_path.empty();
  if (trace_out.is_open() || want_svg) {
    cfg.trace = [&](const TraceRecord& rec, const EllipsoidState& state) {
      if (trace_out.is_open()) trace_out << trace_record_json(rec).dump() << "\n";
      if (want_svg) {
        records.push_back(rec);
        states.push_back(state);
      }
    };
  }

  json report;
  report["dim"] = n;
  report["log_epsilon"] = std::log(cfg.epsilon);
  std::optional<SolveOutcome> outcome;
  int status = kNotFound;
  try {
    outcome = solve(*sys, cfg);
  } catch (const numerical_breakdown& e) {
    report["status"] = "numerical_breakdown";
    report["iteration"] = e.iteration();
    report["reason"] = e.what();
    status = kBreakdown;
  }

  if (outcome) {
    const CertReport cert = certify(*outcome, *sys, cfg.epsilon, cfg.violation_tolerance);
    report["status"] = status_name(*outcome);
    report["iterations"] = iterations_of(*outcome);
    report["certified"] = cert.passed;
    if (const auto* f = std::get_if<Feasible>(&*outcome)) {
      report["point"] = f->point.std_vector();
      report["min_slack"] = cert.min_slack ? json(*cert.min_slack) : json(nullptr);
      status = kFeasible;
    } else if (const auto* v = std::get_if<VolumeExhausted>(&*outcome)) {
      report["final_log_volume"] = v->final_log_volume;
      report["log_volume_margin"] = *cert.log_volume_margin;
    }
    if (opt.verify) report["oracle"] = oracle_agreement(*outcome, *sys);
  }

  if (want_svg) {
    std::ofstream svg(opt.svg_path);
    if (!svg) {
      err << "error: cannot write " << opt.svg_path << "\n";
      return kInputError;
    }
    emit_svg_trace(*sys, records, states, svg);
  }

  if (opt.output == "json") {
    out << report.dump(2) << "\n";
  } else {
    out << "status: " << report["status"].get<std::string>() << "\n";
    if (report.contains("iterations")) out << "iterations: " << report["iterations"].get<std::size_t>() << "\n";
    if (report.contains("iteration")) out << "failed at iteration: " << report["iteration"].get<std::size_t>() << "\n";
    if (report.contains("reason")) out << "reason: " << report["reason"].get<std::string>() << "\n";
    if (report.contains("point")) {
      out << "point:";
      for (double x : report["point"]) out << ' ' << x;
      out << "\n";
      if (!report["min_slack"].is_null()) out << "min slack: " << report["min_slack"].get<double>() << "\n";
    }
    if (report.contains("final_log_volume")) {
      out << "final log-volume: " << report["final_log_volume"].get<double>() << " (ln epsilon "
          << report["log_epsilon"].get<double>() << ")\n";
    }
    if (report.contains("certified")) out << "certified: " << (report["certified"].get<bool>() ? "yes" : "no") << "\n";
    if (report.contains("oracle")) out << "oracle: " << report["oracle"].get<std::string>() << "\n";
  }
  return status;
}

}  // namespace cli_detail

/// Runs one invocation. `args` excludes the program name. Always returns one of ExitStatus.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return cli_detail::run_unchecked(args, out, err);
  } catch (const usage_error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kBreakdown;
  }
}

}  // namespace ellipsoid::cli
