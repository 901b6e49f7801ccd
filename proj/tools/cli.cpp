#include "cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <json.hpp>
#include <numbers>
#include <stdexcept>

#include "qfslice/errors.hpp"
#include "qfslice/export.hpp"
#include "qfslice/render.hpp"
#include "qfslice/repr.hpp"
#include "qfslice/traces.hpp"
#include "qfslice/version.hpp"

namespace qfslice::cli {

namespace {

using nlohmann::ordered_json;

constexpr double kPi = std::numbers::pi;

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

int default_workers() {
  if (const char* env = std::getenv("QFSLICE_WORKERS")) {
    try {
      const int n = std::stoi(env);
      if (n >= 1) return n;
    } catch (const std::exception&) {
    }
  }
  return 1;
}

ordered_json config_json(const RunConfig& c) {
  ordered_json j;
  j["command"] = c.command;
  j["l"] = c.l;
  j["window"] = {{"re_min", c.window.re_min}, {"re_max", c.window.re_max}, {"im_min", c.window.im_min},
                 {"im_max", c.window.im_max}, {"nx", c.window.nx},         {"ny", c.window.ny}};
  j["bq"] = {{"explore_cutoff", c.params.explore_cutoff},
             {"node_cap", c.params.node_cap},
             {"real_band_eps", c.params.real_band_eps},
             {"saturation", c.params.saturation},
             {"jorgensen_bound", c.params.jorgensen_bound}};
  if (c.command == "ray") j["slope"] = c.slope;
  if (c.command == "limitset") {
    j["tau"] = c.tau;
    j["max_word_len"] = c.max_word_len;
    j["image_size"] = c.image_size;
  }
  if (c.command == "verify") j["samples"] = c.samples;
  j["outputs"] = {{"out", c.out}, {"csv", c.csv}, {"report", c.report}};
  return j;
}

ordered_json histogram(const SliceScan& s) {
  std::size_t qf = 0, notqf = 0, unknown = 0;
  for (VerdictKind k : s.cells) {
    qf += k == VerdictKind::QF;
    notqf += k == VerdictKind::NotQF;
    unknown += k == VerdictKind::Unknown;
  }
  return {{"QF", qf}, {"NotQF", notqf}, {"Unknown", unknown}};
}

void validate(const RunConfig& c) {
  if (!(c.l > 0.0) || !std::isfinite(c.l)) throw ConfigError("--l must be a positive real");
  if (!c.window.is_valid()) throw ConfigError("invalid window (need re-min < re-max, -pi <= im-min < im-max <= pi, nx, ny > 0)");
  if (!c.params.is_valid()) throw ConfigError("search parameters must be positive");
  if (c.workers < 1) throw ConfigError("--workers must be >= 1");
  if (c.command == "verify" && c.samples < 1) throw ConfigError("--samples must be >= 1");
  if (c.command == "limitset") {
    if (c.max_word_len < 0 || c.max_word_len > 20) throw ConfigError("--max-word-len must be in [0, 20]");
    if (c.image_size < 1) throw ConfigError("--size must be positive");
  }
}

ordered_json envelope(const RunConfig& c, std::chrono::steady_clock::time_point start) {
  ordered_json j;
  j["artifact"] = "qfslice";
  j["version"] = kVersion;
  j["config"] = config_json(c);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  j["runtime"] = {{"workers", c.workers}, {"wall_clock_seconds", secs}};
  return j;
}

void emit(const RunConfig& c, const ordered_json& j, std::ostream& out) {
  out << j.dump(2) << '\n';
  if (!c.report.empty()) write_text_file(c.report, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
}

ordered_json components_json(const ComponentReport& r) {
  ordered_json comps = ordered_json::array();
  for (const ComponentBox& b : r.components) {
    comps.push_back({{"id", b.id},
                     {"re_min", b.re_min},
                     {"re_max", b.re_max},
                     {"im_min", b.im_min},
                     {"im_max", b.im_max},
                     {"cells", b.cells},
                     {"standard", b.standard},
                     {"truncated", b.truncated},
                     {"counted", b.counted}});
  }
  return {{"standard", r.standard}, {"nonstandard_count", r.nonstandard_count}, {"truncated", r.truncated},
          {"components", comps}};
}

int cmd_scan(const RunConfig& c, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const SliceScan s = scan(c.l, c.window, c.params, c.workers);
  Overlays ov;
  ov.pp_band = c.overlay_pp;
  if (!c.out.empty()) write_pnm(rasterize(s, {}, ov), c.out);
  if (!c.csv.empty()) write_text_file(c.csv, [&](std::ostream& os) { write_scan_csv(os, s); });
  ordered_json j = envelope(c, start);
  j["histogram"] = histogram(s);
  j["components"] = s.component_count;
  j["standard_present"] = s.standard_id.has_value();
  emit(c, j, out);
  return kOk;
}

int cmd_components(const RunConfig& c, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  if (c.window.re_min > -c.l / 4.0 || c.window.re_max < 5.0 * c.l / 4.0) {
    throw ConfigError("window must span [-l/4, 5l/4] in Re tau");
  }
  const SliceScan s = scan(c.l, c.window, c.params, c.workers);
  const ComponentReport r = count_components(s);
  if (!c.out.empty()) write_pnm(rasterize(s), c.out);
  if (!c.csv.empty()) write_text_file(c.csv, [&](std::ostream& os) { write_scan_csv(os, s); });
  ordered_json j = envelope(c, start);
  j["histogram"] = histogram(s);
  j["report"] = components_json(r);
  emit(c, j, out);
  return kOk;
}

int cmd_ray(const RunConfig& c, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const Slope slope = Slope::parse(c.slope);
  if (slope.is_infinity()) throw ConfigError("pleating rays are defined for slopes other than 1/0");
  const SliceScan s = scan(c.l, c.window, c.params, c.workers);
  const auto rays = pleating_ray(s, slope);
  if (!c.csv.empty()) write_text_file(c.csv, [&](std::ostream& os) { write_rays_csv(os, rays); });
  if (!c.out.empty()) {
    Overlays ov;
    ov.rays = rays;
    ov.pp_band = c.overlay_pp;
    write_pnm(rasterize(s, {}, ov), c.out);
  }
  ordered_json j = envelope(c, start);
  j["histogram"] = histogram(s);
  std::size_t points = 0;
  for (const auto& r : rays) points += r.polyline.size();
  j["segments"] = rays.size();
  j["points"] = points;
  emit(c, j, out);
  return kOk;
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const VerifyReport r = verify(c.l, c.samples, c.params, c.workers);
  ordered_json j = envelope(c, start);
  j["report"] = {{"pp_region_qf_fraction", r.pp_region_qf_fraction},
                 {"pp_region_unknown", r.pp_region_unknown},
                 {"band_notqf_fraction", r.band_notqf_fraction},
                 {"band_witness_fraction", r.band_witness_fraction},
                 {"cusp_trace_errors", r.cusp_trace_errors},
                 {"twist_agreement", r.twist_agreement},
                 {"twist_pairs", r.twist_pairs},
                 {"conjugation_agreement", r.conjugation_agreement},
                 {"conjugation_pairs", r.conjugation_pairs},
                 {"passed", r.passed()}};
  emit(c, j, out);
  return r.passed() ? kOk : kVerifyFailed;
}

int cmd_limitset(const RunConfig& c, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const Complex tau = parse_complex(c.tau);
  const PointCloud cloud = limit_set({Complex{c.l, 0.0}, tau}, c.max_word_len);
  if (!c.csv.empty()) write_text_file(c.csv, [&](std::ostream& os) { write_point_cloud_csv(os, cloud); });
  const ViewBox view = default_view(cloud);
  if (!c.out.empty()) write_pnm(rasterize_points(cloud, view, c.image_size, c.image_size), c.out);
  ordered_json j = envelope(c, start);
  j["points"] = cloud.size();
  j["view"] = {{"re_min", view.re_min}, {"re_max", view.re_max}, {"im_min", view.im_min}, {"im_max", view.im_max}};
  j["circle_fit_residual"] = circle_fit_residual(cloud);
  emit(c, j, out);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"qfslice: linear slices of quasi-Fuchsian punctured-torus groups"};
  app.require_subcommand(1);
  RunConfig cfg;
  cfg.workers = default_workers();
  std::optional<double> re_min, re_max;

  const auto add_common = [&](CLI::App* sub, bool window, bool search) {
    sub->add_option("--l", cfg.l, "real length of the 1/0 curve")->required();
    if (window) {
      sub->add_option("--re-min", re_min, "window Re tau minimum (default -l/2)");
      sub->add_option("--re-max", re_max, "window Re tau maximum (default 3l/2)");
      sub->add_option("--im-min", cfg.window.im_min, "window Im tau minimum")->capture_default_str();
      sub->add_option("--im-max", cfg.window.im_max, "window Im tau maximum")->capture_default_str();
      sub->add_option("--nx", cfg.window.nx, "grid columns")->capture_default_str();
      sub->add_option("--ny", cfg.window.ny, "grid rows")->capture_default_str();
    }
    if (search) {
      sub->add_option("--explore-cutoff", cfg.params.explore_cutoff)->capture_default_str();
      sub->add_option("--node-cap", cfg.params.node_cap)->capture_default_str();
      sub->add_option("--real-band-eps", cfg.params.real_band_eps)->capture_default_str();
      sub->add_option("--saturation", cfg.params.saturation)->capture_default_str();
      sub->add_option("--jorgensen-bound", cfg.params.jorgensen_bound, "0 disables the small-trace test")
          ->capture_default_str();
      sub->add_option("--workers", cfg.workers, "worker threads (default $QFSLICE_WORKERS or 1)");
    }
    sub->add_option("--report", cfg.report, "also write the JSON report to this path");
  };
  cfg.window.nx = 400;
  cfg.window.ny = 300;
  cfg.window.im_min = -kPi;
  cfg.window.im_max = kPi;

  auto* scan_cmd = app.add_subcommand("scan", "classify a grid over the tau-strip");
  add_common(scan_cmd, true, true);
  scan_cmd->add_option("--out", cfg.out, "PGM/PPM image path");
  scan_cmd->add_option("--csv", cfg.csv, "per-cell CSV path");
  scan_cmd->add_flag("--overlay-pp", cfg.overlay_pp, "draw the Parker-Parkkonen band");

  auto* comp_cmd = app.add_subcommand("components", "count standard and non-standard components");
  add_common(comp_cmd, true, true);
  comp_cmd->add_option("--out", cfg.out, "PGM image path");
  comp_cmd->add_option("--csv", cfg.csv, "per-cell CSV path");

  auto* ray_cmd = app.add_subcommand("ray", "trace a rational pleating ray");
  add_common(ray_cmd, true, true);
  ray_cmd->add_option("--slope", cfg.slope, "slope p/q")->required();
  ray_cmd->add_option("--out", cfg.out, "overlay image path (PPM)");
  ray_cmd->add_option("--csv", cfg.csv, "polyline CSV path");
  ray_cmd->add_flag("--overlay-pp", cfg.overlay_pp, "draw the Parker-Parkkonen band");

  auto* verify_cmd = app.add_subcommand("verify", "check the slice against its known regions");
  add_common(verify_cmd, false, true);
  verify_cmd->add_option("--samples", cfg.samples)->capture_default_str();

  auto* limit_cmd = app.add_subcommand("limitset", "plot the limit set at one point");
  add_common(limit_cmd, false, false);
  limit_cmd->add_option("--tau", cfg.tau, "twist parameter, e.g. 0.4+0.4i")->required();
  limit_cmd->add_option("--max-word-len", cfg.max_word_len)->capture_default_str();
  limit_cmd->add_option("--size", cfg.image_size, "image width and height")->capture_default_str();
  limit_cmd->add_option("--out", cfg.out, "PGM image path");
  limit_cmd->add_option("--csv", cfg.csv, "point CSV path");

  std::vector<std::string> storage{"qfslice"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kConfigError;
  }

  for (CLI::App* sub : app.get_subcommands()) cfg.command = sub->get_name();
  cfg.window.re_min = re_min.value_or(-cfg.l / 2.0);
  cfg.window.re_max = re_max.value_or(1.5 * cfg.l);

  try {
    validate(cfg);
    if (cfg.command == "scan") return cmd_scan(cfg, out);
    if (cfg.command == "components") return cmd_components(cfg, out);
    if (cfg.command == "ray") return cmd_ray(cfg, out);
    if (cfg.command == "verify") return cmd_verify(cfg, out);
    if (cfg.command == "limitset") return cmd_limitset(cfg, out);
    err << "error: unknown command\n";
    return kConfigError;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const WindowTooNarrow& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DegenerateLength& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  }
}

}  // namespace qfslice::cli
