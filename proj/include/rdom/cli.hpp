#pragma once

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rdom/domain.hpp"
#include "rdom/io.hpp"
#include "rdom/model.hpp"
#include "rdom/scan.hpp"
#include "rdom/spectrum.hpp"

// Command-line surface.  Subcommands: spectrum, classify, scan, trace,
// figure.  Exit codes: 0 success/Inside, 1 Outside, 2 parse failure,
// 3 numeric failure, 4 Boundary, 5 unwritable output path.

namespace rdom::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitOutside = 1;
inline constexpr int kExitParse = 2;
inline constexpr int kExitNumeric = 3;
inline constexpr int kExitBoundary = 4;
inline constexpr int kExitUnwritable = 5;

namespace detail {

inline std::vector<double> parse_list(const std::string& text, std::size_t expect,
                                      const char* what) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    vals.push_back(std::stod(item, &used));
    if (used != item.size())
      throw std::invalid_argument(std::string(what) + ": bad number '" + item + "'");
  }
  if (vals.size() != expect)
    throw std::invalid_argument(std::string(what) + ": expected " +
                                std::to_string(expect) + " comma-separated values");
  return vals;
}

inline std::string complex_str(const std::complex<double>& z) {
  if (z.imag() == 0.0) return fmt(z.real());
  return fmt(z.real()) + (z.imag() < 0.0 ? " - " : " + ") + fmt(std::abs(z.imag())) +
         "i";
}

inline nlohmann::json complex_json(const std::complex<double>& z) {
  return {{"re", z.real()}, {"im", z.imag()}};
}

// default output path: <subcommand>.<format>
inline std::string output_path(const RunConfig& cfg, const std::string& subcommand) {
  return cfg.out.empty() ? subcommand + "." + cfg.format : cfg.out;
}

inline int write_output(const RunConfig& cfg, const std::string& subcommand,
                        const std::string& payload, std::ostream& out,
                        std::ostream& err) {
  const std::string path = output_path(cfg, subcommand);
  std::ofstream file(path, std::ios::binary);
  if (!file) {
    err << "error: cannot open output path: " << path << "\n";
    return kExitUnwritable;
  }
  file << payload;
  if (!file.flush()) {
    err << "error: write failed: " << path << "\n";
    return kExitUnwritable;
  }
  out << "wrote " << path << "\n";
  return kExitOk;
}

}  // namespace detail

inline int cmd_spectrum(const RunConfig& cfg, double a, double c, double f,
                        std::ostream& out) {
  const Couplings k(a, c, f);
  const SecularQuartic q = secular_quartic(k);
  const Roots4 from_matrix = matrix_eigenvalues(build_hamiltonian(k));
  const Roots4 from_quartic = quartic_roots(q);
  const Classification cls = classify_reality(from_matrix, cfg.reality_tolerance());
  std::optional<double> residual;
  if (k.f == 0.0 && oracle_real(cls))
    residual = self_duality_residual(from_matrix, cfg.reality_tolerance());

  if (cfg.format == "json") {
    nlohmann::json j = {{"a", k.a},
                        {"c", k.c},
                        {"f", k.f},
                        {"b", k.b()},
                        {"A", q.A},
                        {"C", q.C},
                        {"classification", to_string(cls)}};
    nlohmann::json m = nlohmann::json::array(), r = nlohmann::json::array();
    for (int i = 0; i < 4; ++i) {
      m.push_back(detail::complex_json(from_matrix[i]));
      r.push_back(detail::complex_json(from_quartic[i]));
    }
    j["matrix_eigenvalues"] = m;
    j["quartic_roots"] = r;
    if (residual) j["self_duality_residual"] = *residual;
    out << j.dump(2) << "\n";
    return kExitOk;
  }

  out << "a = " << fmt(k.a) << "  c = " << fmt(k.c) << "  f = " << fmt(k.f)
      << "  b = " << fmt(k.b()) << "\n";
  out << "A = " << fmt(q.A) << "  C = " << fmt(q.C) << "\n";
  out << "matrix eigenvalues:";
  for (const auto& z : from_matrix) out << "  " << detail::complex_str(z);
  out << "\nquartic roots:     ";
  for (const auto& z : from_quartic) out << "  " << detail::complex_str(z);
  out << "\nclassification: " << to_string(cls) << "\n";
  if (residual) out << "self-duality residual: " << fmt(*residual) << "\n";
  return kExitOk;
}

inline int cmd_classify(const RunConfig& cfg, double a, double c, double f,
                        std::ostream& out) {
  const Couplings k(a, c, f);
  const Membership analytic = membership_analytic(k, cfg.membership_policy());

  std::optional<Membership> chart;
  std::string chart_note;
  try {
    chart = membership_reparam(to_reparam(k), cfg.membership_policy());
  } catch (const NotRepresentable& e) {
    chart_note = e.what();
  }

  if (cfg.format == "json") {
    nlohmann::json j = {{"a", k.a},
                        {"c", k.c},
                        {"f", k.f},
                        {"analytic",
                         {{"verdict", to_string(analytic.verdict)},
                          {"slack", analytic.slack},
                          {"reason", to_string(analytic.reason)}}}};
    if (chart)
      j["reparam"] = {{"verdict", to_string(chart->verdict)},
                      {"slack", chart->slack},
                      {"reason", to_string(chart->reason)}};
    else
      j["reparam"] = {{"not_representable", chart_note}};
    out << j.dump(2) << "\n";
  } else {
    out << "analytic: " << to_string(analytic.verdict)
        << "  slack = " << fmt(analytic.slack)
        << "  reason = " << to_string(analytic.reason) << "\n";
    if (chart)
      out << "reparam:  " << to_string(chart->verdict)
          << "  slack = " << fmt(chart->slack)
          << "  reason = " << to_string(chart->reason) << "\n";
    else
      out << "reparam:  not representable (" << chart_note << ")\n";
  }
  switch (analytic.verdict) {
    case Verdict::Inside: return kExitOk;
    case Verdict::Outside: return kExitOutside;
    case Verdict::Boundary: return kExitBoundary;
  }
  return kExitNumeric;
}

inline int cmd_scan(const RunConfig& cfg, double f, const std::string& window,
                    std::ostream& out, std::ostream& err) {
  const std::vector<double> w = detail::parse_list(window, 4, "--window");
  SliceSpec spec;
  spec.fixed_f = f;
  spec.a_lo = w[0];
  spec.a_hi = w[1];
  spec.c_lo = w[2];
  spec.c_hi = w[3];
  spec.a_steps = spec.c_steps = cfg.res;
  const ClassifiedGrid grid =
      scan_slice(spec, cfg.membership_policy(), cfg.reality_tolerance());

  std::string payload;
  if (cfg.format == "json") {
    payload = scan_json(cfg, grid).dump(2) + "\n";
  } else {
    std::ostringstream ss;
    write_scan_csv(ss, grid);
    payload = ss.str();
  }
  const int rc = detail::write_output(cfg, "scan", payload, out, err);
  if (rc != kExitOk) return rc;

  const ScanSummary& s = grid.summary;
  out << "cells = " << grid.cells.size() << "  inside = " << s.inside
      << "  outside = " << s.outside << "  boundary = " << s.boundary << "\n";
  out << "oracle: all_real = " << s.all_real << "  one_pair = " << s.one_pair
      << "  two_pairs = " << s.two_pairs << "  degenerate = " << s.degenerate
      << "\n";
  out << "agreement: " << (s.compared - s.disagreements) << "/" << s.compared
      << " = " << fmt(s.agreement_rate) << " (|slack| >= " << fmt(s.exclusion_band)
      << ")\n";
  return kExitOk;
}

inline int cmd_trace(const RunConfig& cfg, double f, std::ostream& out,
                     std::ostream& err) {
  const BoundaryTrace trace =
      trace_boundary(f, cfg.rays, cfg.tol, cfg.membership_policy());

  std::string payload;
  if (cfg.format == "json") {
    payload = trace_json(cfg, trace).dump(2) + "\n";
  } else {
    std::ostringstream ss;
    write_trace_csv(ss, trace);
    payload = ss.str();
  }
  const int rc = detail::write_output(cfg, "trace", payload, out, err);
  if (rc != kExitOk) return rc;

  long ok = 0;
  for (const TracePoint& p : trace.points) ok += p.probes_ok ? 1 : 0;
  out << "points = " << trace.points.size() << "  probes_ok = " << ok
      << "  seed = (" << fmt(trace.seed_a) << ", " << fmt(trace.seed_c) << ")\n";
  return kExitOk;
}

inline int cmd_figure(const RunConfig& cfg, int which, double a, double c, double f,
                      const std::string& range, int steps, std::ostream& out,
                      std::ostream& err) {
  const Couplings k(a, c, f);
  CurveData cd;
  if (which == 1) {
    double lo = -4.0, hi = 4.0;
    if (!range.empty()) {
      const std::vector<double> r = detail::parse_list(range, 2, "--range");
      lo = r[0];
      hi = r[1];
    }
    cd = figure1_data(k, lo, hi, steps);
  } else if (which == 2) {
    const SecularQuartic q = secular_quartic(k);
    double lo = 0.0, hi = 1.0;
    if (!range.empty()) {
      const std::vector<double> r = detail::parse_list(range, 2, "--range");
      lo = r[0];
      hi = r[1];
    } else {
      if (!(q.A > 0.0))
        throw std::domain_error("figure 2 needs A > 0 (give --range explicitly)");
      lo = -std::sqrt(q.A / 2.0) - 0.5;
    }
    cd = figure2_data(q.A, k.f, lo, hi, steps);
  } else {
    throw std::invalid_argument("--which must be 1 or 2");
  }

  std::string payload;
  if (cfg.format == "json") {
    payload = figure_json(cfg, cd).dump(2) + "\n";
  } else {
    std::ostringstream ss;
    write_figure_csv(ss, cd);
    payload = ss.str();
  }
  const int rc = detail::write_output(cfg, "figure", payload, out, err);
  if (rc != kExitOk) return rc;
  out << "samples = " << cd.x.size() << "  sign_changes = " << sign_changes(cd)
      << "\n";
  return kExitOk;
}

inline int run(const std::vector<std::string>& args, std::ostream& out,
               std::ostream& err) {
  CLI::App app{"reality domain of the 4-site non-Hermitian chain Hamiltonian"};
  app.require_subcommand(1);

  std::string config_path;

  RunConfig flag_cfg;  // flag values land here; merged over file config below
  double a = 0.0, c = 0.0, f = 0.0;
  std::string window = "0,4,0,4";
  std::string range;
  int which = 1;
  int steps = 400;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "config file (key = value lines)");
    sub->add_option("--format", flag_cfg.format, "output format: csv or json");
    sub->add_option("--out", flag_cfg.out, "output path");
    sub->add_option("--abs-tol", flag_cfg.abs_tol, "reality tolerance (absolute)");
    sub->add_option("--rel-tol", flag_cfg.rel_tol, "reality tolerance (relative)");
    sub->add_option("--band", flag_cfg.boundary_band, "boundary band scale");
  };
  auto add_couplings = [&](CLI::App* sub) {
    sub->add_option("--a", a, "coupling a");
    sub->add_option("--c", c, "coupling c");
    sub->add_option("--f", f, "asymmetry f");
  };

  CLI::App* spectrum = app.add_subcommand("spectrum", "eigenvalues by both routes");
  add_common(spectrum);
  add_couplings(spectrum);

  CLI::App* classify = app.add_subcommand("classify", "membership in the reality domain");
  add_common(classify);
  add_couplings(classify);

  CLI::App* scan = app.add_subcommand("scan", "classify an (a, c) grid at fixed f");
  add_common(scan);
  scan->add_option("--f", f, "asymmetry f");
  scan->add_option("--window", window, "a_lo,a_hi,c_lo,c_hi");
  scan->add_option("--res", flag_cfg.res, "grid resolution per axis");

  CLI::App* trace = app.add_subcommand("trace", "trace the domain boundary at fixed f");
  add_common(trace);
  trace->add_option("--f", f, "asymmetry f");
  trace->add_option("--rays", flag_cfg.rays, "number of rays (>= 8)");
  trace->add_option("--tol", flag_cfg.tol, "probe separation along each ray");

  CLI::App* figure = app.add_subcommand("figure", "sampled curves of the two constructions");
  add_common(figure);
  add_couplings(figure);
  figure->add_option("--which", which, "1: secular curve vs tilt line, 2: slope cubic");
  figure->add_option("--range", range, "lo,hi sample range");
  figure->add_option("--steps", steps, "sample count (>= 2)");

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("reality-domain");
  for (const std::string& s : args) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << app.help();
    return kExitParse;
  }

  try {
    // precedence: defaults < env config < --config file < flags
    RunConfig cfg = default_config();
    if (!config_path.empty()) load_config_file(cfg, config_path);
    auto take = [&](CLI::App* sub, const std::string& name, auto member) {
      if (sub->count(name)) cfg.*member = flag_cfg.*member;
    };
    CLI::App* active = app.get_subcommands().front();
    take(active, "--format", &RunConfig::format);
    take(active, "--out", &RunConfig::out);
    take(active, "--abs-tol", &RunConfig::abs_tol);
    take(active, "--rel-tol", &RunConfig::rel_tol);
    take(active, "--band", &RunConfig::boundary_band);
    if (active == scan && scan->count("--res")) cfg.res = flag_cfg.res;
    if (active == trace && trace->count("--rays")) cfg.rays = flag_cfg.rays;
    if (active == trace && trace->count("--tol")) cfg.tol = flag_cfg.tol;
    cfg.validate();

    if (active == spectrum) return cmd_spectrum(cfg, a, c, f, out);
    if (active == classify) return cmd_classify(cfg, a, c, f, out);
    if (active == scan) return cmd_scan(cfg, f, window, out, err);
    if (active == trace) return cmd_trace(cfg, f, out, err);
    if (active == figure) return cmd_figure(cfg, which, a, c, f, range, steps, out, err);
    err << "error: unknown subcommand\n";
    return kExitParse;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const EigenFailure& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  }
}

}  // namespace rdom::cli
