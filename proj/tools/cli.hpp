#pragma once

// Command-line front end: run, solve, analyze, demo.

#include <cstdio>
#include <filesystem>
#include <future>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "slitsim/slitsim.hpp"

namespace slitsim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerdictFailed = 1;
inline constexpr int kExitError = 2;

inline void print_summary(std::ostream& out, const RunRecord& r) {
  out << "context     " << to_string(r.context) << '\n'
      << "seed        " << r.seed << '\n'
      << "emitted     " << r.n_emitted << '\n'
      << "blocked     " << r.n_blocked << '\n'
      << "registered  " << r.n_registered << '\n'
      << "displaced   " << r.n_displaced << '\n';
  if (r.n_registered > 0) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", fringe_score(r.total));
    out << "fringe      " << buf << '\n';
  }
}

inline void print_report(std::ostream& out, const AnalysisReport& rep) {
  char buf[96];
  const auto section = [&](const char* name, const std::map<std::string, double>& m) {
    out << name << '\n';
    for (const auto& [k, v] : m) {
      std::snprintf(buf, sizeof buf, "  %-24s %.6f\n", k.c_str(), v);
      out << buf;
    }
  };
  section("fringe_scores", rep.fringe_scores);
  section("tv_distances", rep.tv_distances);
  section("symmetry_defects", rep.symmetry_defects);
  section("displaced_fractions", rep.displaced_fractions);
  out << "verdicts\n";
  for (const auto& [k, v] : rep.verdicts) {
    std::snprintf(buf, sizeof buf, "  %-24s %s\n", k.c_str(), v ? "pass" : "FAIL");
    out << buf;
  }
}

inline void write_outputs(const RunRecord& rec, const RunConfig& cfg) {
  if (!cfg.csv_path.empty()) write_csv(rec, cfg.csv_path);
  if (!cfg.json_path.empty()) write_json(rec, nullptr, cfg.json_path);
  if (!cfg.svg_path.empty()) render_plot(rec, cfg.svg_path, PlotFormat::Svg);
  if (!cfg.ascii_path.empty()) render_plot(rec, cfg.ascii_path, PlotFormat::Ascii);
}

struct DemoResult {
  RunRecord s1, s2, both, sequential;
  AnalysisReport report;
};

/// Runs all four contexts concurrently and writes the figure set to `dir`.
inline DemoResult run_demo(const std::filesystem::path& dir, std::uint64_t particles,
                           std::uint64_t seed, const ModelParams& params = {}) {
  std::filesystem::create_directories(dir);
  const auto launch = [&](ExperimentContext c) {
    return std::async(std::launch::async, [=] { return run(params, c, particles, seed); });
  };
  auto f1 = launch(ExperimentContext::S1Only);
  auto f2 = launch(ExperimentContext::S2Only);
  auto f12 = launch(ExperimentContext::BothRandom);
  auto fseq = launch(ExperimentContext::SequentialHalves);
  DemoResult d{f1.get(), f2.get(), f12.get(), fseq.get(), {}};
  d.report = contextual_report(d.s1, d.s2, d.both);

  for (const RunRecord* r : {&d.s1, &d.s2, &d.both, &d.sequential}) {
    const std::string stem = (dir / ("run_" + std::string(to_string(r->context)))).string();
    write_csv(*r, stem + ".csv");
    write_json(*r, r == &d.both ? &d.report : nullptr, stem + ".json");
    render_plot(*r, stem + ".svg", PlotFormat::Svg);
    render_plot(*r, stem + ".txt", PlotFormat::Ascii);
  }
  render_plot(d.s1, (dir / "figure4_one_slit.svg").string(), PlotFormat::Svg,
              "Only slit 1 open: no interference");
  render_plot(d.both, (dir / "figure5_both_slits.svg").string(), PlotFormat::Svg,
              "Both slits open: interference");
  render_plot(d.sequential, (dir / "figure_sequential.svg").string(), PlotFormat::Svg,
              "Slit 1 then slit 2: no interference");
  detail::write_file((dir / "report.json").string(), report_json(d.report).dump(2) + "\n");
  return d;
}

inline int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Contextual two-slit Monte Carlo simulator"};
  app.require_subcommand(1);

  // run
  auto* run_cmd = app.add_subcommand("run", "Simulate one experimental context");
  std::string config_file;
  std::vector<std::string> overrides;
  std::string context, spins, csv, json, svg, ascii;
  std::string particles, seed, radius, orbits;
  run_cmd->add_option("--config", config_file, "key=value config file")->check(CLI::ExistingFile);
  run_cmd->add_option("--context", context, "s1|s2|both|sequential");
  run_cmd->add_option("--particles", particles, "Number of emitted particles");
  run_cmd->add_option("--seed", seed, "64-bit seed");
  run_cmd->add_option("--radius", radius, "Atom radius");
  run_cmd->add_option("--orbits", orbits, "Number of orbits");
  run_cmd->add_option("--spins", spins, "alternating|spin1|spin2");
  run_cmd->add_option("--csv", csv, "Histogram CSV output");
  run_cmd->add_option("--json", json, "Run record JSON output");
  run_cmd->add_option("--svg", svg, "SVG plot output");
  run_cmd->add_option("--ascii", ascii, "ASCII plot output");
  run_cmd->add_option("settings", overrides, "Extra key=value settings");

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "Solve y + sin(y) = x");
  double solve_x = 0.0;
  SolverSettings solver;
  solve_cmd->add_option("--x", solve_x, "Right-hand side x >= 0")->required();
  solve_cmd->add_option("--tolerance", solver.abs_tolerance, "Absolute residual tolerance");
  solve_cmd->add_option("--max-iterations", solver.max_iterations, "Iteration cap");

  // analyze
  auto* analyze_cmd = app.add_subcommand("analyze", "Contextual report over s1/s2/both runs");
  std::string s1_path, s2_path, both_path, report_path;
  analyze_cmd->add_option("--s1", s1_path, "JSON record of the s1 run")->required();
  analyze_cmd->add_option("--s2", s2_path, "JSON record of the s2 run")->required();
  analyze_cmd->add_option("--both", both_path, "JSON record of the both run")->required();
  analyze_cmd->add_option("--json", report_path, "Write the report as JSON");

  // demo
  auto* demo_cmd = app.add_subcommand("demo", "Run all four contexts and write a figure set");
  std::string demo_dir = "demo_out";
  std::uint64_t demo_particles = 200000;
  std::uint64_t demo_seed = 42;
  demo_cmd->add_option("--out", demo_dir, "Output directory");
  demo_cmd->add_option("--particles", demo_particles, "Particles per context")
      ->check(CLI::PositiveNumber);
  demo_cmd->add_option("--seed", demo_seed, "64-bit seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitError;
  }

  try {
    if (*run_cmd) {
      std::vector<std::string> entries;
      if (!config_file.empty()) entries = config_entries(detail::read_file(config_file));
      const std::pair<const char*, const std::string*> flags[] = {
          {"context", &context}, {"particles", &particles}, {"seed", &seed},
          {"radius", &radius},   {"orbits", &orbits},       {"spins", &spins},
          {"csv", &csv},         {"json", &json},           {"svg", &svg},
          {"ascii", &ascii}};
      for (const auto& [key, value] : flags)
        if (!value->empty()) entries.push_back(std::string(key) + "=" + *value);
      entries.insert(entries.end(), overrides.begin(), overrides.end());
      const RunConfig cfg = parse_config(entries);
      const RunRecord rec = run(cfg.params, cfg.context, cfg.particles, cfg.seed);
      write_outputs(rec, cfg);
      print_summary(out, rec);
      return kExitOk;
    }
    if (*solve_cmd) {
      const double y = solve_displacement(solve_x, solver);
      char buf[96];
      std::snprintf(buf, sizeof buf, "%.17g\nresidual %.3e\n", y, y + std::sin(y) - solve_x);
      out << buf;
      return kExitOk;
    }
    if (*analyze_cmd) {
      const RunRecord s1 = read_json(s1_path).record;
      const RunRecord s2 = read_json(s2_path).record;
      const RunRecord both = read_json(both_path).record;
      const AnalysisReport rep = contextual_report(s1, s2, both);
      print_report(out, rep);
      if (!report_path.empty())
        detail::write_file(report_path, report_json(rep).dump(2) + "\n");
      return rep.all_pass() ? kExitOk : kExitVerdictFailed;
    }
    if (*demo_cmd) {
      const DemoResult d = run_demo(demo_dir, demo_particles, demo_seed);
      for (const RunRecord* r : {&d.s1, &d.s2, &d.both, &d.sequential}) {
        print_summary(out, *r);
        out << '\n';
      }
      print_report(out, d.report);
      out << "wrote figure set to " << demo_dir << '\n';
      return kExitOk;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

}  // namespace slitsim::cli
