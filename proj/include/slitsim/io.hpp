#pragma once

// Configuration parsing and the CSV / JSON / SVG / ASCII output formats.

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "slitsim/analysis.hpp"
#include "slitsim/model.hpp"

namespace slitsim {

// ---------------------------------------------------------------------------
// Configuration

struct RunConfig {
  ModelParams params;
  ExperimentContext context = ExperimentContext::BothRandom;
  std::uint64_t particles = 200000;
  std::uint64_t seed = 42;
  std::string csv_path;
  std::string json_path;
  std::string svg_path;
  std::string ascii_path;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <class T>
T parse_number(const std::string& key, std::string_view text) {
  T value{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc{} || ptr != end)
    throw ConfigError(key, "malformed number '" + std::string(text) + "'");
  return value;
}

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) throw IoError("failed writing '" + path + "'");
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace detail

inline constexpr std::string_view kConfigKeys[] = {
    "radius",    "orbits",    "spins",     "slit1_min", "slit1_max",
    "slit2_min", "slit2_max", "context",   "particles", "seed",
    "csv",       "json",      "svg",       "ascii"};

/// Builds a RunConfig from `key=value` entries; later entries win. Absent
/// keys take defaults; slit bounds default to the halves of [-R, R].
inline RunConfig parse_config(const std::vector<std::string>& entries) {
  std::map<std::string, std::string, std::less<>> kv;
  for (const auto& raw : entries) {
    const std::string_view line = detail::trim(raw);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError(std::string(line), "expected key=value");
    std::string key(detail::trim(line.substr(0, eq)));
    const std::string_view value = detail::trim(line.substr(eq + 1));
    bool known = false;
    for (auto k : kConfigKeys) known = known || k == key;
    if (!known) throw ConfigError(key, "unknown key");
    kv[key] = std::string(value);
  }

  const auto get = [&](std::string_view key) -> const std::string* {
    auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };

  RunConfig cfg;
  double radius = 1.0;
  int orbits = 10;
  SpinPattern spins = SpinPattern::Alternating;
  if (auto v = get("radius")) {
    radius = detail::parse_number<double>("radius", *v);
    if (!(radius > 0.0) || !std::isfinite(radius)) throw ConfigError("radius", "must be positive");
  }
  if (auto v = get("orbits")) {
    orbits = detail::parse_number<int>("orbits", *v);
    if (orbits < 1) throw ConfigError("orbits", "must be at least 1");
  }
  if (auto v = get("spins")) {
    auto p = parse_spin_pattern(*v);
    if (!p) throw ConfigError("spins", "expected alternating|spin1|spin2, got '" + *v + "'");
    spins = *p;
  }
  cfg.params = ModelParams::with_geometry(radius, orbits, spins);

  std::string first_slit_key;
  const auto slit_bound = [&](const char* key, double& target) {
    if (auto v = get(key)) {
      target = detail::parse_number<double>(key, *v);
      if (first_slit_key.empty()) first_slit_key = key;
    }
  };
  slit_bound("slit1_min", cfg.params.slit1.lower);
  slit_bound("slit1_max", cfg.params.slit1.upper);
  slit_bound("slit2_min", cfg.params.slit2.lower);
  slit_bound("slit2_max", cfg.params.slit2.upper);
  try {
    cfg.params.validate();
  } catch (const DomainError& e) {
    throw ConfigError(first_slit_key.empty() ? "radius" : first_slit_key, e.what());
  }

  if (auto v = get("context")) {
    auto c = parse_context(*v);
    if (!c) throw ConfigError("context", "expected s1|s2|both|sequential, got '" + *v + "'");
    cfg.context = *c;
  }
  if (auto v = get("particles")) {
    if (!v->empty() && (*v)[0] == '-') throw ConfigError("particles", "must be positive");
    cfg.particles = detail::parse_number<std::uint64_t>("particles", *v);
    if (cfg.particles == 0) throw ConfigError("particles", "must be positive");
  }
  if (auto v = get("seed")) cfg.seed = detail::parse_number<std::uint64_t>("seed", *v);
  if (auto v = get("csv")) cfg.csv_path = *v;
  if (auto v = get("json")) cfg.json_path = *v;
  if (auto v = get("svg")) cfg.svg_path = *v;
  if (auto v = get("ascii")) cfg.ascii_path = *v;
  return cfg;
}

/// Splits a config file body into entries, dropping blank and `#` lines.
inline std::vector<std::string> config_entries(std::string_view text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = detail::trim(line);
    if (!line.empty()) out.emplace_back(line);
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return out;
}

inline RunConfig parse_config_text(std::string_view text) {
  return parse_config(config_entries(text));
}

/// Inverse of parse_config_text, one `key=value` per line.
inline std::string render_config(const RunConfig& cfg) {
  std::ostringstream out;
  const ModelParams& p = cfg.params;
  out << "radius=" << detail::format_double(p.atom_radius) << '\n'
      << "orbits=" << p.n_orbits << '\n'
      << "spins=" << to_string(p.initial_spins) << '\n'
      << "slit1_min=" << detail::format_double(p.slit1.lower) << '\n'
      << "slit1_max=" << detail::format_double(p.slit1.upper) << '\n'
      << "slit2_min=" << detail::format_double(p.slit2.lower) << '\n'
      << "slit2_max=" << detail::format_double(p.slit2.upper) << '\n'
      << "context=" << to_string(cfg.context) << '\n'
      << "particles=" << cfg.particles << '\n'
      << "seed=" << cfg.seed << '\n';
  if (!cfg.csv_path.empty()) out << "csv=" << cfg.csv_path << '\n';
  if (!cfg.json_path.empty()) out << "json=" << cfg.json_path << '\n';
  if (!cfg.svg_path.empty()) out << "svg=" << cfg.svg_path << '\n';
  if (!cfg.ascii_path.empty()) out << "ascii=" << cfg.ascii_path << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------
// CSV

inline constexpr std::string_view kCsvHeader = "angle_deg,slit1,slit2,total";

inline std::string to_csv(const RunRecord& r) {
  std::string out(kCsvHeader);
  out += '\n';
  for (int b = kFirstBin; b <= kLastBin; ++b) {
    out += std::to_string(b);
    out += ',';
    out += std::to_string(r.slit1.at_bin(b));
    out += ',';
    out += std::to_string(r.slit2.at_bin(b));
    out += ',';
    out += std::to_string(r.total.at_bin(b));
    out += '\n';
  }
  return out;
}

inline void write_csv(const RunRecord& r, const std::string& path) {
  detail::write_file(path, to_csv(r));
}

// ---------------------------------------------------------------------------
// JSON
//
// {
//   "schema": "slitsim.run/1",
//   "prng": "<generator identity>",
//   "params": {"atom_radius", "n_orbits", "initial_spins",
//              "slit1": {"lower","upper","lower_closed","upper_closed"}, "slit2": {...}},
//   "context": "s1" | "s2" | "both" | "sequential",
//   "seed": uint64,
//   "counters": {"emitted","blocked","registered","displaced"},
//   "register": {"spins": [1|2, ...], "flip_counts": [...]},   // orbit 1 first
//   "histograms": {"first_bin_deg": -90, "slit1": [180], "slit2": [180], "total": [180]},
//   "report": {...}                                             // optional
// }

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kJsonSchema = "slitsim.run/1";

namespace detail {

inline Json aperture_json(const Aperture& a) {
  return Json{{"lower", a.lower},
              {"upper", a.upper},
              {"lower_closed", a.lower_closed},
              {"upper_closed", a.upper_closed}};
}

inline Aperture aperture_from(const Json& j) {
  return {j.at("lower").get<double>(), j.at("upper").get<double>(),
          j.at("lower_closed").get<bool>(), j.at("upper_closed").get<bool>()};
}

inline Json counts_json(const Histogram& h) {
  Json arr = Json::array();
  for (auto c : h.counts()) arr.push_back(c);
  return arr;
}

inline Histogram histogram_from(const Json& j) {
  if (!j.is_array() || j.size() != static_cast<std::size_t>(kScreenBins))
    throw IoError("histogram must be an array of 180 counts");
  Histogram h;
  for (std::size_t i = 0; i < h.counts().size(); ++i) h.counts()[i] = j[i].get<std::uint64_t>();
  return h;
}

}  // namespace detail

inline Json report_json(const AnalysisReport& rep) {
  return Json{{"fringe_scores", rep.fringe_scores},
              {"tv_distances", rep.tv_distances},
              {"symmetry_defects", rep.symmetry_defects},
              {"displaced_fractions", rep.displaced_fractions},
              {"verdicts", rep.verdicts}};
}

inline AnalysisReport report_from_json(const Json& j) {
  AnalysisReport rep;
  rep.fringe_scores = j.at("fringe_scores").get<std::map<std::string, double>>();
  rep.tv_distances = j.at("tv_distances").get<std::map<std::string, double>>();
  rep.symmetry_defects = j.at("symmetry_defects").get<std::map<std::string, double>>();
  rep.displaced_fractions = j.at("displaced_fractions").get<std::map<std::string, double>>();
  rep.verdicts = j.at("verdicts").get<std::map<std::string, bool>>();
  return rep;
}

inline Json to_json(const RunRecord& r, const AnalysisReport* report = nullptr) {
  Json spins = Json::array();
  for (Spin s : r.final_register.spins()) spins.push_back(static_cast<int>(s));
  Json j;
  j["schema"] = kJsonSchema;
  j["prng"] = r.prng;
  j["params"] = Json{{"atom_radius", r.params.atom_radius},
                     {"n_orbits", r.params.n_orbits},
                     {"initial_spins", to_string(r.params.initial_spins)},
                     {"slit1", detail::aperture_json(r.params.slit1)},
                     {"slit2", detail::aperture_json(r.params.slit2)}};
  j["context"] = to_string(r.context);
  j["seed"] = r.seed;
  j["counters"] = Json{{"emitted", r.n_emitted},
                       {"blocked", r.n_blocked},
                       {"registered", r.n_registered},
                       {"displaced", r.n_displaced}};
  j["register"] = Json{{"spins", spins}, {"flip_counts", r.final_register.flip_counts()}};
  j["histograms"] = Json{{"first_bin_deg", kFirstBin},
                         {"slit1", detail::counts_json(r.slit1)},
                         {"slit2", detail::counts_json(r.slit2)},
                         {"total", detail::counts_json(r.total)}};
  if (report) j["report"] = report_json(*report);
  return j;
}

struct StoredRun {
  RunRecord record;
  std::optional<AnalysisReport> report;
};

inline StoredRun run_from_json(const Json& j) {
  try {
    if (j.at("schema").get<std::string>() != kJsonSchema)
      throw IoError("unsupported schema '" + j.at("schema").get<std::string>() + "'");
    StoredRun out;
    RunRecord& r = out.record;
    r.prng = j.at("prng").get<std::string>();
    const Json& p = j.at("params");
    r.params.atom_radius = p.at("atom_radius").get<double>();
    r.params.n_orbits = p.at("n_orbits").get<int>();
    auto pattern = parse_spin_pattern(p.at("initial_spins").get<std::string>());
    if (!pattern) throw IoError("unknown initial_spins");
    r.params.initial_spins = *pattern;
    r.params.slit1 = detail::aperture_from(p.at("slit1"));
    r.params.slit2 = detail::aperture_from(p.at("slit2"));
    auto ctx = parse_context(j.at("context").get<std::string>());
    if (!ctx) throw IoError("unknown context");
    r.context = *ctx;
    r.seed = j.at("seed").get<std::uint64_t>();
    const Json& c = j.at("counters");
    r.n_emitted = c.at("emitted").get<std::uint64_t>();
    r.n_blocked = c.at("blocked").get<std::uint64_t>();
    r.n_registered = c.at("registered").get<std::uint64_t>();
    r.n_displaced = c.at("displaced").get<std::uint64_t>();
    std::vector<Spin> spins;
    for (const auto& s : j.at("register").at("spins")) {
      const int v = s.get<int>();
      if (v != 1 && v != 2) throw IoError("spin values must be 1 or 2");
      spins.push_back(static_cast<Spin>(v));
    }
    r.final_register = OrbitRegister(
        std::move(spins), j.at("register").at("flip_counts").get<std::vector<std::uint64_t>>());
    const Json& h = j.at("histograms");
    r.slit1 = detail::histogram_from(h.at("slit1"));
    r.slit2 = detail::histogram_from(h.at("slit2"));
    r.total = detail::histogram_from(h.at("total"));
    if (j.contains("report")) out.report = report_from_json(j.at("report"));
    return out;
  } catch (const Json::exception& e) {
    throw IoError(std::string("malformed run JSON: ") + e.what());
  } catch (const DomainError& e) {
    throw IoError(std::string("malformed run JSON: ") + e.what());
  }
}

inline void write_json(const RunRecord& r, const AnalysisReport* report, const std::string& path) {
  detail::write_file(path, to_json(r, report).dump(2) + "\n");
}

inline StoredRun read_json(const std::string& path) {
  Json j;
  try {
    j = Json::parse(detail::read_file(path));
  } catch (const Json::parse_error& e) {
    throw IoError("'" + path + "' is not valid JSON: " + e.what());
  }
  return run_from_json(j);
}

// ---------------------------------------------------------------------------
// Plots

enum class PlotFormat { Svg, Ascii };

struct Series {
  const char* id;
  const char* name;
  const char* colour;
  const Histogram* hist;
};

/// Three overlaid polylines (slit 1, slit 2, total) over a -90..90 degree axis.
inline std::string render_svg(const RunRecord& r, std::string_view title = {}) {
  constexpr double width = 960, height = 420;
  constexpr double left = 60, right = 20, top = 40, bottom = 50;
  constexpr double plot_w = width - left - right, plot_h = height - top - bottom;
  const double base = top + plot_h;

  std::uint64_t peak = 0;
  for (auto c : r.total.counts()) peak = std::max(peak, c);
  const double scale = peak == 0 ? 0.0 : plot_h / static_cast<double>(peak);
  const auto x_of = [&](double deg) { return left + (deg + 90.0) / 180.0 * plot_w; };

  char buf[160];
  std::string s;
  const auto put = [&](const char* fmt, auto... args) {
    std::snprintf(buf, sizeof buf, fmt, args...);
    s += buf;
  };
  put("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" "
      "viewBox=\"0 0 %.0f %.0f\">\n", width, height, width, height);
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!title.empty()) {
    put("<text x=\"%.1f\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" "
        "text-anchor=\"middle\">", width / 2);
    for (char ch : title) {
      if (ch == '<') s += "&lt;";
      else if (ch == '>') s += "&gt;";
      else if (ch == '&') s += "&amp;";
      else s += ch;
    }
    s += "</text>\n";
  }
  // Axes and ticks.
  put("<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"black\"/>\n",
      left, base, left + plot_w, base);
  put("<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"black\"/>\n",
      left, top, left, base);
  for (int deg = -90; deg <= 90; deg += 30) {
    put("<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"black\"/>\n",
        x_of(deg), base, x_of(deg), base + 5);
    put("<text x=\"%.2f\" y=\"%.2f\" font-family=\"sans-serif\" font-size=\"12\" "
        "text-anchor=\"middle\">%d</text>\n", x_of(deg), base + 20, deg);
  }
  put("<text x=\"%.2f\" y=\"%.2f\" font-family=\"sans-serif\" font-size=\"12\" "
      "text-anchor=\"middle\">angle (degrees)</text>\n", left + plot_w / 2, height - 8);
  put("<text x=\"%.2f\" y=\"%.2f\" font-family=\"sans-serif\" font-size=\"12\" "
      "text-anchor=\"end\">%llu</text>\n", left - 6, top + 4, static_cast<unsigned long long>(peak));
  put("<text x=\"%.2f\" y=\"%.2f\" font-family=\"sans-serif\" font-size=\"12\" "
      "text-anchor=\"end\">0</text>\n", left - 6, base + 4);

  const Series series[] = {{"slit1", "slit 1", "green", &r.slit1},
                           {"slit2", "slit 2", "red", &r.slit2},
                           {"total", "total", "blue", &r.total}};
  for (const auto& sr : series) {
    put("<polyline id=\"%s\" fill=\"none\" stroke=\"%s\" stroke-width=\"1.2\" points=\"",
        sr.id, sr.colour);
    for (int b = kFirstBin; b <= kLastBin; ++b) {
      const double y = base - scale * static_cast<double>(sr.hist->at_bin(b));
      put("%s%.2f,%.2f", b == kFirstBin ? "" : " ", x_of(b + 0.5), y);
    }
    s += "\"/>\n";
  }
  // Legend.
  double ly = top + 6;
  for (const auto& sr : series) {
    put("<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"%s\" stroke-width=\"3\"/>\n",
        width - 130, ly, width - 105, ly, sr.colour);
    put("<text x=\"%.2f\" y=\"%.2f\" font-family=\"sans-serif\" font-size=\"12\">%s</text>\n",
        width - 98, ly + 4, sr.name);
    ly += 18;
  }
  s += "</svg>\n";
  return s;
}

/// Three 180-column strips, one character per degree, scaled to the peak of
/// the total series.
inline std::string render_ascii(const RunRecord& r) {
  static constexpr std::string_view levels = " .:-=+*#%@";
  std::uint64_t peak = 0;
  for (auto c : r.total.counts()) peak = std::max(peak, c);

  std::string s;
  const Series series[] = {{"slit1", "slit1", "", &r.slit1},
                           {"slit2", "slit2", "", &r.slit2},
                           {"total", "total", "", &r.total}};
  for (const auto& sr : series) {
    s += sr.name;
    s += '\n';
    for (auto c : sr.hist->counts()) {
      // Any nonzero count shows at least the lowest mark.
      const std::uint64_t top = levels.size() - 1;
      const std::uint64_t level = peak == 0 ? 0 : (c * top + peak - 1) / peak;
      s += levels[static_cast<std::size_t>(std::min(level, top))];
    }
    s += '\n';
  }
  s += "-90";
  s += std::string(kScreenBins - 5, ' ');
  s += "+90\n";
  return s;
}

inline void render_plot(const RunRecord& r, const std::string& path, PlotFormat format,
                        std::string_view title = {}) {
  detail::write_file(path, format == PlotFormat::Svg ? render_svg(r, title) : render_ascii(r));
}

}  // namespace slitsim
