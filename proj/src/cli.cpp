#include "tropweight/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>
#include <vector>

#include <CLI11.hpp>

#include "tropweight/holomap.hpp"
#include "tropweight/json_io.hpp"
#include "tropweight/numerics.hpp"
#include "tropweight/thinning.hpp"
#include "tropweight/tropical.hpp"

namespace tropweight {
namespace {

namespace fs = std::filesystem;

// Chain terms kept beyond the certified range so the dropped tail sits
// provably >= 40 log-units below the dominant term on that range.
std::size_t tail_margin_terms(double h) {
  const double tau = 40.0 + std::log(3.0 / (1.0 - std::exp(-h)));
  return 3 * static_cast<std::size_t>(std::ceil(tau / h)) + 3;
}

std::vector<double> seeded_phases(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.0, 2.0 * std::numbers::pi);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out.push_back(dist(rng));
  return out;
}

struct Pipeline {
  LogTransform w;
  TropicalSeries minorant;
  ThinnedChain chain;
  double grid_lo = 0.0;
  double grid_hi = 0.0;
};

Pipeline build_pipeline(const RunConfig& cfg) {
  Pipeline p;
  p.w = make_weight(cfg.weight);
  p.minorant = monomial_minorant(p.w);
  p.chain = thin(p.minorant, cfg.h, cfg.k_max + tail_margin_terms(cfg.h));
  p.grid_lo = cfg.grid.user_set ? cfg.grid.x_min : p.w.x_floor;
  if (cfg.grid.user_set) {
    p.grid_hi = cfg.grid.x_max;
  } else {
    const std::size_t crossings = p.chain.breakpoints_x.size() - 1;
    p.grid_hi = crossings == 0
                    ? p.w.x_floor + 10.0
                    : p.chain.breakpoints_x[std::min(cfg.k_max, crossings)];
  }
  if (!(p.grid_hi > p.grid_lo)) p.grid_hi = p.grid_lo + 10.0;
  return p;
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << j.dump(2) << '\n';
}

int cmd_classify(const RunConfig& cfg, std::ostream& out) {
  const LogTransform w = make_weight(cfg.weight);
  ClassifyParams params;
  if (cfg.grid.user_set) {
    params.ratio_grid =
        linspace(cfg.grid.x_min, cfg.grid.x_max, cfg.grid.points);
  }
  const ClassificationReport rep = classify(w, params);
  json j = classification_to_json(rep);
  j["weight"] = weight_spec_to_json(cfg.weight);
  if (cfg.out.empty()) {
    out << j.dump(2) << '\n';
  } else {
    write_json(cfg.out, j);
    out << to_string(rep.verdict) << '\n';
  }
  return rep.verdict == Verdict::inconclusive ? 2 : 0;
}

int cmd_build(const RunConfig& cfg, std::ostream& out) {
  const Pipeline p = build_pipeline(cfg);
  const std::vector<double> grid =
      linspace(p.grid_lo, p.grid_hi, cfg.grid.points);
  const std::vector<double> phases = seeded_phases(cfg.phases, cfg.seed);
  const auto g = split(p.chain);

  bool all_passed = true;
  json checks;

  if (p.chain.size() >= 4) {
    const SeparationReport sep = verify_separation(p.chain, grid);
    checks["separation"] = separation_to_json(sep);
    all_passed = all_passed && sep.passed;
  } else {
    checks["separation"] = {{"skipped", "chain shorter than 4 terms"}};
  }

  json cert_json;
  try {
    const ChainBoundsReport bounds = verify_chain_bounds(p.chain, p.w, grid);
    checks["chain_bounds"] = chain_bounds_to_json(bounds);
    all_passed = all_passed && bounds.passed;

    const EquivalenceCertificate cert =
        verify_equivalence(g, p.w, cfg.h, grid, phases);
    cert_json = certificate_to_json(cert);
    all_passed = all_passed && cert.passed;
  } catch (const std::runtime_error& e) {
    cert_json["h"] = cfg.h;
    cert_json["error"] = e.what();
    cert_json["passed"] = false;
    all_passed = false;
  }
  cert_json["grid"] = {{"x_min", p.grid_lo},
                       {"x_max", p.grid_hi},
                       {"points", cfg.grid.points},
                       {"phases", cfg.phases},
                       {"seed", cfg.seed}};
  cert_json["weight"] = weight_spec_to_json(cfg.weight);
  cert_json["chain_checks"] = std::move(checks);

  const fs::path dir = cfg.out.empty() ? fs::path("tropweight_out")
                                       : fs::path(cfg.out);
  fs::create_directories(dir);
  write_json(dir / "chain.json", chain_to_json(p.chain));
  write_json(dir / "g1.json", log_power_series_to_json(g[0]));
  write_json(dir / "g2.json", log_power_series_to_json(g[1]));
  write_json(dir / "g3.json", log_power_series_to_json(g[2]));
  write_json(dir / "certificate.json", cert_json);

  // positive-axis profile of the certified quantity for plotting
  {
    std::ofstream f(dir / "equivalence.csv");
    f << "x,phi,log_sum\n";
    for (double x : grid) {
      std::vector<double> comps;
      for (const auto& s : g) {
        if (s.empty()) continue;
        const auto v = eval_log_modulus(s, x, 0.0);
        if (v && *v > kNegInf) comps.push_back(*v);
      }
      f << format_g17(x) << ',' << format_g17(p.w.phi(x)) << ','
        << format_g17(log_sum_exp(comps)) << '\n';
    }
  }

  out << (all_passed ? "certified" : "verification FAILED (see certificate)")
      << ": " << dir.string() << '\n';
  return all_passed ? 0 : 3;
}

int cmd_export_plotdata(const RunConfig& cfg, std::ostream& out) {
  const Pipeline p = build_pipeline(cfg);
  const std::vector<double> grid =
      linspace(p.grid_lo, p.grid_hi, cfg.grid.points);

  std::string csv = "x,phi,minorant,chain_envelope\n";
  json rows = json::array();
  for (double x : grid) {
    const double phi = p.w.phi(x);
    const double minorant = p.minorant.eval(x).value;
    const double env =
        p.chain.selected[p.chain.segment_of(x)].at(x);
    if (cfg.format == OutputFormat::csv) {
      csv += format_g17(x) + ',' + format_g17(phi) + ',' + format_g17(minorant) +
             ',' + format_g17(env) + '\n';
    } else {
      rows.push_back({x, phi, minorant, env});
    }
  }

  if (cfg.format == OutputFormat::csv) {
    if (cfg.out.empty()) {
      out << csv;
    } else {
      std::ofstream f(cfg.out);
      if (!f) throw std::runtime_error("cannot open " + cfg.out);
      f << csv;
    }
  } else {
    json j;
    j["columns"] = {"x", "phi", "minorant", "chain_envelope"};
    j["rows"] = std::move(rows);
    if (cfg.out.empty()) {
      out << j.dump(2) << '\n';
    } else {
      write_json(cfg.out, j);
    }
  }
  return 0;
}

void add_common_options(CLI::App* cmd, RunConfig& cfg, std::string& weight_arg,
                        std::string& grid_arg, std::string& format_arg) {
  cmd->set_help_flag("--help", "print help");  // frees -h/--h for the parameter
  cmd->add_option("--weight", weight_arg,
                  "family:params (e.g. log_power:alpha=2.5) or a spec .json")
      ->required();
  cmd->add_option("--h", cfg.h, "separation parameter (>= 4)");
  cmd->add_option("--kmax", cfg.k_max, "certified chain breakpoints");
  cmd->add_option("--grid", grid_arg, "xmin:xmax:n (default spans the chain)");
  cmd->add_option("--phases", cfg.phases, "number of random phases");
  cmd->add_option("--seed", cfg.seed, "seed for random phases/check grids");
  cmd->add_option("--out", cfg.out, "output file or directory");
  cmd->add_option("--format", format_arg, "json|csv (plot data only)");
}

void parse_grid_arg(const std::string& s, GridSpec& grid) {
  const auto c1 = s.find(':');
  const auto c2 = s.find(':', c1 == std::string::npos ? c1 : c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    throw std::invalid_argument("--grid expects xmin:xmax:n");
  grid.x_min = std::stod(s.substr(0, c1));
  grid.x_max = std::stod(s.substr(c1 + 1, c2 - c1 - 1));
  const long long n = std::stoll(s.substr(c2 + 1));
  if (n < 2 || !(grid.x_max > grid.x_min))
    throw std::invalid_argument("--grid expects xmin < xmax and n >= 2");
  grid.points = static_cast<std::size_t>(n);
  grid.user_set = true;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"radial weight vs log-tropical weight toolkit"};
  app.set_help_flag("--help", "print help");
  app.require_subcommand(1);

  RunConfig cfg;
  std::string weight_arg, grid_arg, format_arg;

  auto* classify_cmd =
      app.add_subcommand("classify", "probe rapidity, tangent gaps and the "
                                     "minorant ratio; emit a verdict");
  auto* build_cmd = app.add_subcommand(
      "build", "thin the minorant, split it into three lacunary series and "
               "certify the equivalence bounds");
  auto* export_cmd = app.add_subcommand(
      "export-plotdata", "emit (x, phi, minorant, chain envelope) samples");
  for (auto* cmd : {classify_cmd, build_cmd, export_cmd})
    add_common_options(cmd, cfg, weight_arg, grid_arg, format_arg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << '\n';
    return 1;
  }

  try {
    // Validate everything before touching the filesystem.
    cfg.weight = parse_weight_argument(weight_arg);
    if (!grid_arg.empty()) parse_grid_arg(grid_arg, cfg.grid);
    if (!format_arg.empty()) {
      if (format_arg == "json") {
        cfg.format = OutputFormat::json;
      } else if (format_arg == "csv") {
        cfg.format = OutputFormat::csv;
      } else {
        throw std::invalid_argument("--format must be json or csv");
      }
    }
    if (!(cfg.h >= 4.0)) throw std::invalid_argument("h must be >= 4");
    if (cfg.k_max < 1) throw std::invalid_argument("kmax must be >= 1");
    if (cfg.grid.points < 2) throw std::invalid_argument("grid needs >= 2 points");
    if (cfg.phases < 1) throw std::invalid_argument("phases must be >= 1");
    make_weight(cfg.weight);  // reject bad parameters up front
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  try {
    if (classify_cmd->parsed()) return cmd_classify(cfg, out);
    if (build_cmd->parsed()) return cmd_build(cfg, out);
    return cmd_export_plotdata(cfg, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace tropweight
