#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "rdom/domain.hpp"
#include "rdom/scan.hpp"
#include "rdom/spectrum.hpp"

// Run configuration (defaults < config file < command-line flags) and the
// CSV/JSON serializers.  Numbers are printed with 17 significant digits so
// round-trips are lossless in double precision and outputs are byte-stable.

namespace rdom {

struct RunConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-12;
  double boundary_band = 1e-9;
  int res = 101;
  int rays = 64;
  double tol = 1e-8;
  std::string format = "csv";
  std::string out;

  RealityTolerance reality_tolerance() const { return {abs_tol, rel_tol}; }
  MembershipPolicy membership_policy() const { return {boundary_band}; }

  void validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || !(boundary_band > 0.0) || !(tol > 0.0))
      throw std::invalid_argument("config: tolerances must be > 0");
    if (res < 2) throw std::invalid_argument("config: res must be >= 2");
    if (rays < 8) throw std::invalid_argument("config: rays must be >= 8");
    if (format != "csv" && format != "json")
      throw std::invalid_argument("config: format must be csv or json");
  }
};

// key = value lines; blank lines and #-comments ignored.
inline void apply_config_line(RunConfig& cfg, const std::string& key,
                              const std::string& value) {
  auto num = [&] {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size())
      throw std::invalid_argument("config: bad number for " + key + ": " + value);
    return v;
  };
  if (key == "abs_tol") cfg.abs_tol = num();
  else if (key == "rel_tol") cfg.rel_tol = num();
  else if (key == "boundary_band") cfg.boundary_band = num();
  else if (key == "res") cfg.res = static_cast<int>(num());
  else if (key == "rays") cfg.rays = static_cast<int>(num());
  else if (key == "tol") cfg.tol = num();
  else if (key == "format") cfg.format = value;
  else if (key == "out") cfg.out = value;
  else throw std::invalid_argument("config: unknown key: " + key);
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline void load_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: expected key = value, got: " + t);
    apply_config_line(cfg, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
}

// Default config path from the environment, if any.
inline RunConfig default_config() {
  RunConfig cfg;
  if (const char* env = std::getenv("REALITY_DOMAIN_CONFIG"))
    if (*env) load_config_file(cfg, env);
  return cfg;
}

// 17 significant digits: lossless double round-trips, byte-stable output.
inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline const char* agree_str(bool agree) { return agree ? "true" : "false"; }

inline void write_scan_csv(std::ostream& os, const ClassifiedGrid& grid) {
  os << "a,c,f,A,C,verdict,slack,oracle_class,agree\n";
  for (const GridCell& cell : grid.cells) {
    const SecularQuartic q = secular_quartic(Couplings(cell.a, cell.c, grid.spec.fixed_f));
    os << fmt(cell.a) << ',' << fmt(cell.c) << ',' << fmt(grid.spec.fixed_f) << ','
       << fmt(q.A) << ',' << fmt(q.C) << ',' << to_string(cell.verdict) << ','
       << fmt(cell.slack) << ','
       << (cell.eigen_ok ? to_string(cell.oracle) : "Failed") << ','
       << agree_str(cell.agree) << '\n';
  }
}

inline void write_trace_csv(std::ostream& os, const BoundaryTrace& trace) {
  os << "ray_angle,a,c,slack\n";
  for (const TracePoint& p : trace.points)
    os << fmt(p.ray_angle) << ',' << fmt(p.a) << ',' << fmt(p.c) << ','
       << fmt(p.slack) << '\n';
}

inline void write_figure_csv(std::ostream& os, const CurveData& cd) {
  os << "x,curve_left,curve_right\n";
  for (std::size_t i = 0; i < cd.x.size(); ++i)
    os << fmt(cd.x[i]) << ',' << fmt(cd.left[i]) << ',' << fmt(cd.right[i]) << '\n';
}

inline nlohmann::json config_json(const RunConfig& cfg) {
  return {{"abs_tol", cfg.abs_tol},   {"rel_tol", cfg.rel_tol},
          {"boundary_band", cfg.boundary_band}, {"res", cfg.res},
          {"rays", cfg.rays},         {"tol", cfg.tol},
          {"format", cfg.format},     {"out", cfg.out}};
}

inline nlohmann::json summary_json(const ScanSummary& s) {
  return {{"inside", s.inside},
          {"outside", s.outside},
          {"boundary", s.boundary},
          {"all_real", s.all_real},
          {"one_pair", s.one_pair},
          {"two_pairs", s.two_pairs},
          {"degenerate", s.degenerate},
          {"eigen_failures", s.eigen_failures},
          {"compared", s.compared},
          {"disagreements", s.disagreements},
          {"exclusion_band", s.exclusion_band},
          {"agreement_rate", s.agreement_rate}};
}

// JSON mirrors the CSV columns one-to-one.
inline nlohmann::json scan_json(const RunConfig& cfg, const ClassifiedGrid& grid) {
  nlohmann::json rows = nlohmann::json::array();
  for (const GridCell& cell : grid.cells) {
    const SecularQuartic q = secular_quartic(Couplings(cell.a, cell.c, grid.spec.fixed_f));
    rows.push_back({{"a", cell.a},
                    {"c", cell.c},
                    {"f", grid.spec.fixed_f},
                    {"A", q.A},
                    {"C", q.C},
                    {"verdict", to_string(cell.verdict)},
                    {"slack", cell.slack},
                    {"oracle_class", cell.eigen_ok ? to_string(cell.oracle) : "Failed"},
                    {"agree", cell.agree}});
  }
  return {{"config", config_json(cfg)}, {"summary", summary_json(grid.summary)},
          {"rows", rows}};
}

inline nlohmann::json trace_json(const RunConfig& cfg, const BoundaryTrace& trace) {
  nlohmann::json rows = nlohmann::json::array();
  for (const TracePoint& p : trace.points)
    rows.push_back({{"ray_angle", p.ray_angle}, {"a", p.a}, {"c", p.c},
                    {"slack", p.slack}});
  nlohmann::json summary = {{"fixed_f", trace.fixed_f},
                            {"points", trace.points.size()},
                            {"method_tol", trace.method_tol},
                            {"seed_a", trace.seed_a},
                            {"seed_c", trace.seed_c}};
  return {{"config", config_json(cfg)}, {"summary", summary}, {"rows", rows}};
}

inline nlohmann::json figure_json(const RunConfig& cfg, const CurveData& cd) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < cd.x.size(); ++i)
    rows.push_back({{"x", cd.x[i]}, {"curve_left", cd.left[i]},
                    {"curve_right", cd.right[i]}});
  nlohmann::json summary = {{"samples", cd.x.size()}};
  return {{"config", config_json(cfg)}, {"summary", summary}, {"rows", rows}};
}

}  // namespace rdom
