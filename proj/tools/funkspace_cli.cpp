#include "funkspace/commands.hpp"
#include "funkspace/error.hpp"
#include "funkspace/scene.hpp"
#include "funkspace/verify.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

using funkspace::Error;
using funkspace::ErrorCode;
namespace io = funkspace::io;

constexpr std::uint64_t kDefaultSeed = 42;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("FUNKSPACE_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, "FUNKSPACE_SEED must be an unsigned integer");
    }
  }
  return kDefaultSeed;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IOError, "cannot open " + path + " for writing");
  out << text;
  if (!out) throw Error(ErrorCode::IOError, "failed writing " + path);
}

bool ends_with(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream in(s);
  for (std::string part; std::getline(in, part, sep);) parts.push_back(part);
  return parts;
}

// center:radius:metric[:samples]
io::RenderOptions::Ball parse_ball(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.size() != 3 && parts.size() != 4) {
    throw Error(ErrorCode::InvalidArgument, "--ball expects center:radius:metric[:samples]");
  }
  io::RenderOptions::Ball ball;
  ball.center = parts[0];
  try {
    ball.radius = std::stod(parts[1]);
    if (parts.size() == 4) ball.samples = std::stoi(parts[3]);
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidArgument, "bad number in --ball " + spec);
  }
  ball.metric = io::parse_metric(parts[2]);
  return ball;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Funk and Hilbert metrics on convex bodies and hyperbolic domains"};
  app.require_subcommand(1);

  std::string scene_path, from, to, metric_name = "f1";
  bool as_json = false;
  io::DistOptions dist_options;
  auto* dist = app.add_subcommand("dist", "Distance between two named points");
  dist->add_option("--scene", scene_path, "Scene JSON file")->required();
  dist->add_option("--from", from, "Source point name")->required();
  dist->add_option("--to", to, "Target point name")->required();
  dist->add_option("--metric", metric_name,
                   "f1, f2, f3, hilbert, cross-ratio, phi1, wp-f1, wp-f2, wp-f3, wp-hilbert")
      ->capture_default_str();
  dist->add_flag("--json", as_json, "Print the full JSON record");
  dist->add_option("--knots", dist_options.knot_count, "Movable knots for path estimates")
      ->capture_default_str();
  dist->add_option("--restarts", dist_options.restarts, "Restarts for path estimates")
      ->capture_default_str();

  std::string center, out_path;
  double radius = 0.0;
  int samples = 128;
  auto* ball = app.add_subcommand("ball", "Boundary of a metric ball as CSV or SVG");
  ball->add_option("--scene", scene_path, "Scene JSON file")->required();
  ball->add_option("--center", center, "Center point name")->required();
  ball->add_option("--radius", radius, "Ball radius")->required();
  ball->add_option("--samples", samples, "Number of ray directions")->capture_default_str();
  ball->add_option("--metric", metric_name, "f1, f2, hilbert, phi1, wp-f2, wp-hilbert")
      ->capture_default_str();
  ball->add_option("--out", out_path, "Output path; .svg renders, anything else is CSV")->required();

  funkspace::verify::SuiteOptions suite;
  std::optional<std::uint64_t> seed;
  std::string dims = "2,3", report_path;
  bool timing = false;
  auto* verify = app.add_subcommand("verify", "Run the seeded property suites");
  verify->add_option("--suite", suite.suite, "euclid, hyperbolic or all")->capture_default_str();
  verify->add_option("--trials", suite.trials, "Base trial count")->capture_default_str();
  verify->add_option("--seed", seed, "RNG seed (default: FUNKSPACE_SEED or 42)");
  verify->add_option("--dims", dims, "Comma-separated dimensions")->capture_default_str();
  verify->add_option("--report", report_path, "Write the JSON report here instead of stdout");
  verify->add_flag("--timing", timing, "Include wall time in the report");

  io::RenderOptions render_options;
  std::vector<std::string> ball_specs, geodesic_specs;
  auto* render = app.add_subcommand("render", "Render a scene as SVG");
  render->add_option("--scene", scene_path, "Scene JSON file")->required();
  render->add_option("--out", out_path, "Output SVG path")->required();
  render->add_option("--ball", ball_specs, "Ball overlay center:radius:metric[:samples]");
  render->add_option("--geodesic", geodesic_specs, "Geodesic overlay A:B");
  render->add_option("--size", render_options.size, "Canvas size in pixels")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*dist) {
      const auto scene = io::load_scene(scene_path);
      const auto rec = io::cmd_dist(scene, from, to, io::parse_metric(metric_name), dist_options);
      if (as_json) {
        std::cout << rec.dump(2) << '\n';
      } else {
        std::printf("%.15g\n", rec.at("value").get<double>());
      }
    } else if (*ball) {
      const auto scene = io::load_scene(scene_path);
      const auto result = io::cmd_ball(scene, center, radius, samples, io::parse_metric(metric_name));
      write_file(out_path, ends_with(out_path, ".svg") ? io::ball_svg(scene, result) : io::ball_csv(result));
      std::size_t unbounded = 0;
      for (const auto& s : result.samples) unbounded += s.unbounded ? 1 : 0;
      if (unbounded > 0) {
        std::cerr << "RadiusUnreachable: " << unbounded << " of " << result.samples.size()
                  << " directions never reach the radius\n";
      }
    } else if (*verify) {
      suite.seed = seed ? *seed : default_seed();
      suite.dims.clear();
      for (const auto& d : split(dims, ',')) {
        try {
          suite.dims.push_back(std::stoi(d));
        } catch (const std::exception&) {
          throw Error(ErrorCode::InvalidArgument, "bad --dims value " + dims);
        }
      }
      const auto report = funkspace::verify::run_suite(suite);
      const std::string text = report.to_json(timing).dump(2) + "\n";
      if (report_path.empty()) {
        std::cout << text;
      } else {
        write_file(report_path, text);
      }
      for (const auto& p : report.properties) {
        std::cerr << (p.passed() ? (p.asserted ? "PASS " : "NOTE ") : "FAIL ") << p.name << " checks="
                  << p.checks << " failures=" << p.failures << " worst=" << p.worst << " time=" << p.wall_seconds << "s\n";
      }
      std::cerr << "wall time " << report.wall_seconds << " s\n";
      return report.passed() ? 0 : 1;
    } else if (*render) {
      const auto scene = io::load_scene(scene_path);
      for (const auto& spec : ball_specs) render_options.balls.push_back(parse_ball(spec));
      for (const auto& spec : geodesic_specs) {
        const auto parts = split(spec, ':');
        if (parts.size() != 2) throw Error(ErrorCode::InvalidArgument, "--geodesic expects A:B");
        render_options.geodesics.emplace_back(parts[0], parts[1]);
      }
      write_file(out_path, io::render_svg(scene, render_options));
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
