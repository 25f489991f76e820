#include "posorbit/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "posorbit/hypotheses.hpp"
#include "posorbit/problem_file.hpp"
#include "posorbit/report.hpp"
#include "posorbit/solver.hpp"

namespace posorbit {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::optional<double> tol;
  std::string out_dir;
  bool json = false;
};

std::optional<std::string> configured_out_dir(const Globals& g) {
  if (!g.out_dir.empty()) return g.out_dir;
  if (const char* env = std::getenv(kOutDirEnv); env && *env) return std::string(env);
  return std::nullopt;
}

fs::path out_dir(const Globals& g) { return configured_out_dir(g).value_or("."); }

void write_file(const fs::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write " + path.string());
  f << content;
  if (!f.flush()) throw IoError("failed writing " + path.string());
}

// A path on disk, or the name of a bundled example.
ProblemFile resolve_problem(const std::string& arg) {
  if (fs::exists(arg)) return load_problem(arg);
  std::string stem = fs::path(arg).filename().string();
  if (stem.ends_with(".problem")) stem.resize(stem.size() - 8);
  for (const char* id : {"4.1", "4.2", "4.3"}) {
    std::string bundled_stem = std::string("example4") + id[2];
    if (stem == bundled_stem || stem == id) return parse_problem(*bundled_problem(id), bundled_stem);
  }
  throw IoError("cannot open " + arg);
}

std::string json_text(const json& j) { return j.dump(2) + "\n"; }

int cmd_check(const Globals& g, const std::string& file, std::ostream& out, std::ostream& err) {
  const ProblemFile pf = resolve_problem(file);
  const Certificate cert = certify(pf.spec);
  const json doc = certificate_json(pf.spec, cert);
  write_file(out_dir(g) / (pf.spec.name + ".certificate.json"), json_text(doc));
  out << (g.json ? json_text(doc) : render_text(doc));
  if (cert.resonant) {
    err << "error: " << cert.reason << "\n";
    return kExitResonance;
  }
  if (!cert.verdict) {
    err << "no certificate: " << cert.reason << "\n";
    return kExitVerdictFalse;
  }
  return kExitOk;
}

int cmd_greens(const Globals& g, const std::string& file, int n, std::ostream& out) {
  if (n < 2) throw UsageError("--n must be at least 2");
  const ProblemFile pf = resolve_problem(file);
  const GreensFunction green = select_green(pf.spec, n);
  const json constants = green_constants_json(green);
  const fs::path dir = out_dir(g);
  write_file(dir / (pf.spec.name + ".greens.csv"), greens_csv(green));
  write_file(dir / (pf.spec.name + ".constants.txt"), key_value_block(constants));
  out << (g.json ? json_text(constants) : key_value_block(constants));
  return kExitOk;
}

SolverOptions solver_options(const Globals& g, const ProblemFile& pf) {
  SolverOptions opts;
  if (pf.tol) opts.tol = *pf.tol;
  if (g.tol) opts.tol = *g.tol;
  return opts;
}

std::optional<State> guess_from(const ProblemFile& pf, std::optional<double> x0, std::optional<double> v0) {
  if (!x0) x0 = pf.guess_x0;
  if (!v0) v0 = pf.guess_v0;
  if (!x0 && !v0) return std::nullopt;
  return State{0.0, x0.value_or(natural_amplitude(pf.spec)), v0.value_or(0.0)};
}

void write_orbit_files(const fs::path& dir, const ProblemSpec& spec, const Orbit& orbit, bool svg) {
  write_file(dir / (spec.name + ".trajectory.csv"), trajectory_csv(spec, orbit));
  if (svg) {
    write_file(dir / (spec.name + ".phase.svg"), svg_phase(orbit.samples, spec.name + ": phase portrait"));
    write_file(dir / (spec.name + ".series.svg"), svg_series(orbit.samples, spec.name + ": time series"));
  }
}

int cmd_solve(const Globals& g, const std::string& file, std::optional<double> x0, std::optional<double> v0, bool svg,
              std::ostream& out) {
  const ProblemFile pf = resolve_problem(file);
  const Orbit orbit = find_periodic(pf.spec, guess_from(pf, x0, v0), solver_options(g, pf));
  write_orbit_files(out_dir(g), pf.spec, orbit, svg);
  const json doc = orbit_json(pf.spec, orbit);
  out << (g.json ? json_text(doc) : render_text(doc));
  return kExitOk;
}

// Values printed in the source example (identical linear part for all three).
struct Reference {
  std::string id;
  Theorem theorem;
  double x0;
};

const Reference kReferences[] = {
    {"4.1", Theorem::T3_1, 399.93015},
    {"4.2", Theorem::T3_2, 399.8941},
    {"4.3", Theorem::T3_3_II, 399.9045},
};

struct Check {
  std::string name;
  bool pass;
  std::string detail;
};

std::string g10(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

json reproduce_one(const Globals& g, const Reference& ref, bool write_files) {
  const double s3 = std::sqrt(3.0);
  const double paper_g_max = 4.0 / std::sqrt(2.0 - s3);
  const double paper_g_min = 2.0 * std::sqrt(2.0 + s3) / std::sqrt(2.0 - s3);
  const double paper_d_max = std::sqrt(2.0 - s3) / 2.0;
  const double paper_sigma = 4.0 * std::sqrt(2.0 + s3) / (10.0 - s3);
  const double paper_delta = (2.0 - s3) / (4.0 * std::sqrt(2.0 + s3));
  const double paper_b_plus = 2.0 / 3.0 + s3 / std::numbers::pi;

  const std::string stem = std::string("example4") + ref.id[2];
  const ProblemFile pf = parse_problem(*bundled_problem(ref.id), stem);
  const ProblemSpec& spec = pf.spec;
  const Certificate cert = certify(spec);
  const Constants& k = cert.primary.constants;

  std::vector<Check> checks;
  auto check = [&](std::string name, bool pass, std::string detail) {
    checks.push_back({std::move(name), pass, std::move(detail)});
  };

  json comparison = json::array();
  auto compare = [&](const std::string& q, double computed, std::optional<double> paper) {
    comparison.push_back(json{{"quantity", q}, {"computed", computed}, {"paper", paper ? json(*paper) : json(nullptr)}});
  };
  compare("G_max", k.g_max, paper_g_max);
  compare("G_min", k.g_min, paper_g_min);
  compare("D_max", k.d_max, paper_d_max);
  compare("sigma", k.sigma, paper_sigma);
  compare("delta", k.delta, paper_delta);
  if (ref.id == "4.3") compare("b_plus_mean", k.b_plus_mean, paper_b_plus);

  check("certificate", cert.verdict, cert.verdict ? "verdict true" : cert.reason);
  check("theorem", cert.theorem == ref.theorem, to_string(cert.theorem) + " (expected " + to_string(ref.theorem) + ")");
  check("G_max", std::abs(k.g_max - paper_g_max) <= 1e-6, g10(k.g_max) + " vs " + g10(paper_g_max));
  check("G_min", std::abs(k.g_min - paper_g_min) <= 1e-6, g10(k.g_min) + " vs " + g10(paper_g_min));
  check("D_max", std::abs(k.d_max - 0.5) <= 1e-4,
        "measured " + g10(k.d_max) + ", analytic 0.5, stated " + g10(paper_d_max));
  const bool h2_both = cert.primary.h2.ok && cert.reported && cert.reported->h2.ok;
  check("H2 under both constant sets", h2_both,
        "measured " + g10(cert.primary.h2.value) +
            (cert.reported ? ", stated D_max " + g10(cert.reported->h2.value) : std::string(", stated D_max missing")));
  if (ref.id == "4.3") {
    check("b_plus_mean", std::abs(k.b_plus_mean - paper_b_plus) <= 1e-9,
          g10(k.b_plus_mean) + " vs 2/3 + sqrt(3)/pi = " + g10(paper_b_plus));
  }

  json orbit_doc = nullptr;
  json cross = nullptr;
  try {
    SolverOptions opts = solver_options(g, pf);
    const Orbit orbit = find_periodic(spec, std::nullopt, opts);
    orbit_doc = orbit_json(spec, orbit);
    if (write_files) write_orbit_files(out_dir(g), spec, orbit, true);
    const double e_max = k.e_max;
    check("orbit converged",
          orbit.periodicity_residual <= opts.tol && orbit.min_x > 0.0 && orbit.ode_residual <= 1e-4 * e_max,
          "periodicity " + g10(orbit.periodicity_residual) + ", min x " + g10(orbit.min_x) + ", ode residual " +
              g10(orbit.ode_residual));
    check("x(0)", std::abs(orbit.initial.x - ref.x0) <= 0.5,
          g10(orbit.initial.x) + " vs " + g10(ref.x0) + " (v(0) = " + g10(orbit.initial.v) + ")");

    const GreensFunction green = select_green(spec, 200);
    const SampledFunction y = y_samples(spec, orbit.initial, green.n);
    const double defect = fixed_point_defect(green, to_y_equation(spec), y);
    const ConeCheck cone = cone_check(y, green.sigma, green.delta);
    const double r_lo = cert.primary.r_interval ? cert.primary.r_interval->lo : 0.0;
    const std::optional<double> R = cert.primary.R_witness;
    cross = json{{"fixed_point_defect", defect},
                 {"in_cone", cone.in_cone},
                 {"cone_min_margin", cone.min_margin},
                 {"cone_slope_margin", cone.slope_margin},
                 {"norm_y", orbit.norm_y},
                 {"r_lo", r_lo},
                 {"R_witness", R ? json(*R) : json(nullptr)},
                 {"norm_y_le_R", R ? json(orbit.norm_y <= *R) : json(nullptr)}};
    check("fixed point", defect <= 1e-3, "||y - Ty|| / ||y|| = " + g10(defect));
    check("norm above r_lo", r_lo <= orbit.norm_y, "r_lo " + g10(r_lo) + " <= ||y|| " + g10(orbit.norm_y));
  } catch (const std::exception& e) {
    check("orbit converged", false, e.what());
  }
  if (write_files) write_file(out_dir(g) / (stem + ".certificate.json"), json_text(certificate_json(spec, cert)));

  json check_doc = json::array();
  bool all = true;
  for (const auto& c : checks) {
    all = all && c.pass;
    check_doc.push_back(json{{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  }
  json evals = json::array();
  for (const Evaluation* ev : {&cert.primary, cert.reported ? &*cert.reported : nullptr}) {
    if (!ev) continue;
    evals.push_back(json{{"label", ev->label},
                         {"D_max", ev->constants.d_max},
                         {"H2", ev->h2.value},
                         {"r_lo", ev->r_interval ? json(ev->r_interval->lo) : json(nullptr)},
                         {"r_hi", ev->r_interval ? json(ev->r_interval->hi) : json(nullptr)},
                         {"R_witness", ev->R_witness ? json(*ev->R_witness) : json(nullptr)},
                         {"verdict", ev->verdict}});
  }
  return json{{"id", ref.id},
              {"name", stem},
              {"theorem", to_string(cert.theorem)},
              {"comparison", comparison},
              {"evaluations", evals},
              {"orbit", orbit_doc},
              {"cross_checks", cross},
              {"checks", check_doc},
              {"pass", all}};
}

std::string reproduce_text(const json& r) {
  std::ostringstream s;
  s << "== Example " << r["id"].get<std::string>() << " (" << r["name"].get<std::string>() << "), theorem "
    << r["theorem"].get<std::string>() << "\n";
  char buf[160];
  std::snprintf(buf, sizeof buf, "  %-14s %-22s %-22s\n", "quantity", "computed", "paper");
  s << buf;
  for (const auto& c : r["comparison"]) {
    std::snprintf(buf, sizeof buf, "  %-14s %-22.12g %-22s\n", c["quantity"].get<std::string>().c_str(),
                  c["computed"].get<double>(), c["paper"].is_null() ? "-" : g10(c["paper"].get<double>()).c_str());
    s << buf;
  }
  for (const auto& ev : r["evaluations"]) {
    s << "  constants (" << ev["label"].get<std::string>() << "): D_max " << g10(ev["D_max"].get<double>()) << ", H2 "
      << g10(ev["H2"].get<double>());
    if (!ev["r_lo"].is_null()) s << ", r in [" << g10(ev["r_lo"].get<double>()) << ", " << g10(ev["r_hi"].get<double>()) << "]";
    if (!ev["R_witness"].is_null()) s << ", R " << g10(ev["R_witness"].get<double>());
    s << ", verdict " << (ev["verdict"].get<bool>() ? "true" : "false") << "\n";
  }
  if (!r["orbit"].is_null()) {
    s << "  orbit: x(0) " << g10(r["orbit"]["x0"].get<double>()) << ", v(0) " << g10(r["orbit"]["v0"].get<double>())
      << ", ||y|| " << g10(r["orbit"]["norm_y"].get<double>()) << "\n";
  }
  if (!r["cross_checks"].is_null()) {
    const auto& c = r["cross_checks"];
    s << "  cone membership (report only): " << (c["in_cone"].get<bool>() ? "inside" : "outside") << ", margins "
      << g10(c["cone_min_margin"].get<double>()) << ", " << g10(c["cone_slope_margin"].get<double>()) << "\n";
    if (!c["norm_y_le_R"].is_null()) {
      s << "  ||y|| <= R_witness (report only): " << (c["norm_y_le_R"].get<bool>() ? "true" : "false") << "\n";
    }
  }
  for (const auto& c : r["checks"]) {
    s << "  [" << (c["pass"].get<bool>() ? "PASS" : "FAIL") << "] " << c["name"].get<std::string>() << ": "
      << c["detail"].get<std::string>() << "\n";
  }
  return s.str();
}

int cmd_reproduce(const Globals& g, const std::string& which, std::ostream& out, std::ostream& err) {
  std::vector<const Reference*> selected;
  for (const auto& ref : kReferences) {
    if (which == "all" || which == ref.id) selected.push_back(&ref);
  }
  if (selected.empty()) throw UsageError("unknown example '" + which + "' (expected 4.1, 4.2, 4.3 or all)");
  const bool write_files = configured_out_dir(g).has_value();

  json reports = json::array();
  for (const Reference* ref : selected) reports.push_back(reproduce_one(g, *ref, write_files));

  bool all = true;
  std::string text;
  for (const auto& r : reports) {
    text += reproduce_text(r);
    all = all && r["pass"].get<bool>();
  }
  for (const auto& r : reports) {
    text += std::string(r["pass"].get<bool>() ? "PASS" : "FAIL") + " " + r["id"].get<std::string>() + "\n";
  }
  const json doc{{"examples", reports}, {"pass", all}};
  if (write_files) write_file(out_dir(g) / "reproduce.json", json_text(doc));
  out << (g.json ? json_text(doc) : text);
  if (!all) {
    for (const auto& r : reports) {
      for (const auto& c : r["checks"]) {
        if (!c["pass"].get<bool>()) {
          err << "failed: example " << r["id"].get<std::string>() << " " << c["name"].get<std::string>() << ": "
              << c["detail"].get<std::string>() << "\n";
        }
      }
    }
    return kExitVerdictFalse;
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Positive periodic solutions of singular second-order equations", "posorbit"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--tol", g.tol, "Periodicity tolerance for the orbit solver")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out_dir, std::string("Output directory (default $") + kOutDirEnv + " or .)");
  app.add_flag("--json", g.json, "Print JSON instead of text");

  std::string file;
  auto* check = app.add_subcommand("check", "Certify existence of a positive periodic solution");
  check->add_option("file", file, "Problem file or bundled example name")->required();

  int n = 200;
  auto* greens = app.add_subcommand("greens", "Tabulate the Green's function of the transformed linear part");
  greens->add_option("file", file, "Problem file or bundled example name")->required();
  greens->add_option("--n", n, "Grid intervals per period");

  std::optional<double> x0, v0;
  bool svg = false;
  auto* solve = app.add_subcommand("solve", "Find a periodic orbit by Newton shooting");
  solve->add_option("file", file, "Problem file or bundled example name")->required();
  solve->add_option("--x0", x0, "Initial guess for x(0)");
  solve->add_option("--v0", v0, "Initial guess for x'(0)");
  solve->add_flag("--svg", svg, "Also write phase and time-series plots");

  std::string which;
  auto* reproduce = app.add_subcommand("reproduce", "Re-run the bundled examples and compare with stated values");
  reproduce->add_option("which", which, "4.1, 4.2, 4.3 or all")->required();

  // Global flags are accepted after the subcommand as well.
  for (auto* sub : {check, greens, solve, reproduce}) sub->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*check) return cmd_check(g, file, out, err);
    if (*greens) return cmd_greens(g, file, n, out);
    if (*solve) return cmd_solve(g, file, x0, v0, svg, out);
    return cmd_reproduce(g, which, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ProblemFileError& e) {
    err << file << ": " << e.what() << "\n";
    return kExitInput;
  } catch (const ValidationError& e) {
    err << "invalid problem: " << e.what() << "\n";
    return kExitInput;
  } catch (const DomainError& e) {
    err << "invalid problem: " << e.what() << "\n";
    return kExitInput;
  } catch (const ResonanceError& e) {
    err << "resonance: " << e.what() << "\n";
    return kExitResonance;
  } catch (const NoConvergence& e) {
    err << "no convergence: " << e.what() << " (last residual " << fmt17(e.last_residual) << ")\n";
    return kExitNoConvergence;
  } catch (const SingularityError& e) {
    err << "singularity: " << e.what() << "\n";
    return kExitSingularity;
  } catch (const BlowUpError& e) {
    err << "blow-up: " << e.what() << " (last state t=" << fmt17(e.t) << " x=" << fmt17(e.x) << " v=" << fmt17(e.v)
        << ")\n";
    return kExitSingularity;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::ios_base::failure& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitIo;
  }
}

}  // namespace posorbit
