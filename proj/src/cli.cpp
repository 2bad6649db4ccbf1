#include "hawking/cli.hpp"

#include <unistd.h>

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <sstream>

#include "hawking/errors.hpp"
#include "hawking/graph_surface.hpp"
#include "hawking/json_io.hpp"
#include "hawking/sweep_runner.hpp"
#include "hawking/variation_forms.hpp"
#include "hawking/warp_ode.hpp"

namespace hawking {

namespace {

struct Globals {
  double tol = 1e-10;
  int lmax = 32;
  std::string out;
  std::string format = "json";
  std::uint64_t seed = 42;
};

struct Artifact {
  std::string body;
  std::string summary;
};

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::string fmt(double v, int digits = 10) {
  std::ostringstream os;
  os << std::setprecision(digits) << v;
  return os.str();
}

void write_atomic(const std::string& path, const std::string& body) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    f << body;
    f.flush();
    if (!f) throw std::runtime_error("write to " + tmp.string() + " failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot rename onto " + path + ": " + ec.message());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot read " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

HarmonicField load_field(const std::string& path) {
  Json j;
  try {
    j = Json::parse(read_file(path));
  } catch (const Json::parse_error& e) {
    throw UsageError(path + ": " + e.what());
  }
  return field_from_json(j);
}

/// Solved far enough for one period and for |r| + 1.
WarpFactor solve_for(double a, double r, double tol) {
  WarpFactor w = solve_warp_periods(a, 1.0, tol);
  if (w.in_range(std::abs(r) + 1.0)) return w;
  return solve_warp_factor(a, std::abs(r) + 1.0, tol);
}

void require_json(const Globals& g, const char* what) {
  if (g.format != "json") throw UsageError(std::string("--format csv is not available for ") + what);
}

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string error_line(const char* kind, const std::string& message, int code, const Json* record = nullptr) {
  Json j = {{"error", kind}, {"message", message}, {"exit_code", code}};
  if (record) j["record"] = *record;
  return j.dump(-1, ' ', false, Json::error_handler_t::replace);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Globals g;
  CLI::App app{"Hawking mass toolkit for the deSitter-Schwarzschild family", "hawking"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--tol", g.tol, "ODE tolerance")->check(CLI::PositiveNumber);
  app.add_option("--lmax", g.lmax, "Band limit")->check(CLI::Range(1, 512));
  app.add_option("--out", g.out, "Write the artifact to this file");
  app.add_option("--format", g.format, "Artifact format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--seed", g.seed, "Master seed");

  std::function<Artifact()> action;
  double a = 0.5, r = 0.0, rmax = 10.0, h = 1e-3, eps = 1e-2, slack = 0.1, assert_tol = 1e-4;
  int n = 100, slices = 64, workers = 0, grid_lmax = 0, stencil = 3;
  std::string phi_path, mode = "both";

  auto add_a = [&](CLI::App* c) { c->add_option("--a", a, "Warp parameter (minimum of u)")->required(); };
  auto add_r = [&](CLI::App* c) { c->add_option("--r", r, "Slice coordinate"); };

  // metric solve
  auto* metric = app.add_subcommand("metric", "Warp factors")->require_subcommand(1);
  auto* metric_solve = metric->add_subcommand("solve", "Integrate the warp equation");
  add_a(metric_solve);
  metric_solve->add_option("--rmax", rmax, "Integration range")->required();
  metric_solve->callback([&] {
    action = [&] {
      const WarpFactor w = solve_warp_factor(a, rmax, g.tol);
      const double drift = w.max_mass_drift();
      std::string summary = "mass=" + fmt(w.mass()) + " range=[" + fmt(w.u_min()) + ", " + fmt(w.u_max()) +
                            "] period=" + (w.period() ? fmt(*w.period()) : std::string("none")) +
                            " drift=" + fmt(drift, 3) + " samples=" + std::to_string(w.samples().size());
      if (drift > 10.0 * g.tol) {
        throw InvariantViolation("conserved mass drift exceeds 10 tol",
                                 Json({{"a", a}, {"drift", drift}, {"tol", g.tol}}).dump());
      }
      std::string body;
      if (g.format == "csv") {
        body = "r,u,uprime\r\n";
        for (const auto& s : w.samples()) body += fmt(s.r, 17) + ',' + fmt(s.u, 17) + ',' + fmt(s.du, 17) + "\r\n";
      } else {
        body = to_json(w).dump() + "\n";
      }
      return Artifact{body, summary};
    };
  });

  // slice info
  auto* slice = app.add_subcommand("slice", "Slices {r} x S2")->require_subcommand(1);
  auto* slice_info = slice->add_subcommand("info", "Closed-form slice geometry");
  add_a(slice_info);
  add_r(slice_info);
  slice_info->callback([&] {
    action = [&] {
      require_json(g, "slice info");
      const WarpFactor w = solve_for(a, r, g.tol);
      const SliceGeometry s = slice_geometry(w, r);
      Json j = to_json(s);
      j["a"] = a;
      j["mass"] = w.mass();
      j["mass_derivative"] = slice_mass_derivative(w, r);
      return Artifact{j.dump() + "\n", "area=" + fmt(s.area) + " H=" + fmt(s.H) + " hawking=" + fmt(s.hawking)};
    };
  });

  // mass graph
  auto* mass = app.add_subcommand("mass", "Hawking mass of surfaces")->require_subcommand(1);
  auto* mass_graph = mass->add_subcommand("graph", "Normal graph over a slice");
  add_a(mass_graph);
  add_r(mass_graph);
  mass_graph->add_option("--phi", phi_path, "HarmonicField JSON")->required();
  mass_graph->add_option("--grid-lmax", grid_lmax, "Geometry grid band limit (0: automatic)");
  mass_graph->callback([&] {
    action = [&] {
      require_json(g, "mass graph");
      const HarmonicField phi = load_field(phi_path);
      const WarpFactor w = solve_for(a, r, g.tol);
      const GraphSurface s = build_graph(w, r, phi, GraphOptions{grid_lmax});
      Json j = surface_report(s);
      const auto cls = critical_point_classifier(s, 1e-7);
      j["mass_deficit"] = mass_deficit(s);
      j["critical"] = cls.critical;
      j["class"] = to_string(cls.cls);
      j["slice"] = cls.slice;
      return Artifact{j.dump() + "\n", "hawking_mass=" + fmt(j["hawking_mass"].get<double>()) +
                                           " deficit=" + fmt(j["mass_deficit"].get<double>(), 6) +
                                           " class=" + to_string(cls.cls)};
    };
  });

  // spectrum jacobi
  auto* spectrum = app.add_subcommand("spectrum", "Spectra")->require_subcommand(1);
  auto* spectrum_jacobi = spectrum->add_subcommand("jacobi", "Jacobi operator eigenvalues on a slice");
  add_a(spectrum_jacobi);
  add_r(spectrum_jacobi);
  spectrum_jacobi->callback([&] {
    action = [&] {
      require_json(g, "spectrum jacobi");
      const WarpFactor w = solve_for(a, r, g.tol);
      const JacobiSpectrum s = jacobi_spectrum(w, r, g.lmax);
      const SliceGeometry sg = slice_geometry(w, r);
      Json j = to_json(s);
      j["a"] = a;
      const double lambda1 = s.lambda_by_degree[0];
      if (lambda1 >= 0.0) j["area_bound_margin"] = area_bound_check(sg.area, lambda1);
      return Artifact{j.dump() + "\n", "lambda_0=" + fmt(lambda1) +
                                           (s.lambda_by_degree.size() > 1 ? " lambda_1=" + fmt(s.lambda_by_degree[1]) : "")};
    };
  });

  // variation second | form
  auto* variation = app.add_subcommand("variation", "Second variation of the Hawking mass")->require_subcommand(1);
  auto* variation_second = variation->add_subcommand("second", "Second variation along a graph function");
  add_a(variation_second);
  add_r(variation_second);
  variation_second->add_option("--phi", phi_path, "HarmonicField JSON")->required();
  variation_second->add_option("--mode", mode, "spectral, fd or both")->check(CLI::IsMember({"spectral", "fd", "both"}));
  variation_second->add_option("--step", h, "Finite-difference step")->check(CLI::PositiveNumber);
  variation_second->add_option("--stencil", stencil, "3 or 5 point stencil")->check(CLI::IsMember({3, 5}));
  variation_second->add_option("--assert-tol", assert_tol, "Largest accepted |fd - spectral| in both mode");
  variation_second->callback([&] {
    action = [&] {
      require_json(g, "variation second");
      const HarmonicField phi = load_field(phi_path);
      const WarpFactor w = solve_for(a, r, g.tol);
      Json j = {{"a", a}, {"r", r}, {"mode", mode}};
      std::string summary;
      double spectral = 0.0, fd = 0.0;
      if (mode != "fd") {
        spectral = slice_second_variation(w, r, phi);
        j["spectral"] = spectral;
        summary += "spectral=" + fmt(spectral) + " ";
      }
      if (mode != "spectral") {
        fd = fd_second_variation(w, r, phi, h, stencil == 5 ? Stencil::five_point : Stencil::three_point);
        j["fd"] = fd;
        j["h"] = h;
        j["stencil"] = stencil;
        summary += "fd=" + fmt(fd) + " ";
      }
      if (mode == "both") {
        j["difference"] = fd - spectral;
        summary += "diff=" + fmt(fd - spectral, 3);
        if (!(std::abs(fd - spectral) <= assert_tol)) {
          throw InvariantViolation("finite-difference and spectral second variations disagree", j.dump());
        }
      }
      return Artifact{j.dump() + "\n", summary};
    };
  });
  auto* variation_form = variation->add_subcommand("form", "Per-degree coefficients of the slice form");
  add_a(variation_form);
  add_r(variation_form);
  variation_form->callback([&] {
    action = [&] {
      require_json(g, "variation form");
      const WarpFactor w = solve_for(a, r, g.tol);
      const QuadraticFormReport q = quadratic_form_report(w, r, g.lmax);
      return Artifact{to_json(q).dump() + "\n",
                      "C_est=" + fmt(q.C_est) + " definite=" + (q.definite ? "true" : "false")};
    };
  });

  // sweep perturb
  auto* sweep = app.add_subcommand("sweep", "Seeded experiments")->require_subcommand(1);
  auto* sweep_perturb = sweep->add_subcommand("perturb", "Random graphs around a slice");
  add_a(sweep_perturb);
  add_r(sweep_perturb);
  sweep_perturb->add_option("--eps", eps, "C2 radius")->check(CLI::PositiveNumber);
  sweep_perturb->add_option("--n", n, "Number of samples")->check(CLI::PositiveNumber);
  sweep_perturb->add_option("--workers", workers, "Threads (0: runtime default)")->check(CLI::NonNegativeNumber);
  sweep_perturb->add_option("--slack", slack, "Accepted shortfall of the quadratic bound ratio");
  sweep_perturb->callback([&] {
    action = [&] {
      SweepConfig cfg;
      cfg.a = a;
      cfg.base_r = r;
      cfg.epsilon = eps;
      cfg.n_samples = n;
      cfg.master_seed = g.seed;
      cfg.lmax = g.lmax;
      cfg.ode_tol = g.tol;
      cfg.ratio_slack = slack;
      cfg.workers = workers;
      cfg.validate();
      const SweepReport rep = perturbation_sweep(cfg, solve_for(a, r, g.tol));
      std::string body;
      if (g.format == "csv") {
        body = sweep_csv(rep);
      } else {
        Json j = to_json(rep);
        j["metadata"] = {{"generated_at", utc_now()}, {"workers", workers}};
        body = j.dump() + "\n";
      }
      std::string summary = "samples=" + std::to_string(rep.records.size()) + " pass=" + std::to_string(rep.n_pass) +
                            " C_est=" + fmt(rep.C_est);
      if (!rep.all_pass) {
        for (const auto& rec : rep.records) {
          if (!rec.pass) throw InvariantViolation("sweep sample failed", to_json(rec).dump());
        }
      }
      return Artifact{body, summary};
    };
  });

  // scan foliation
  auto* scan = app.add_subcommand("scan", "Scans over the slice foliation")->require_subcommand(1);
  auto* scan_foliation = scan->add_subcommand("foliation", "Mass, mean curvature and stability along slices");
  add_a(scan_foliation);
  scan_foliation->add_option("--slices", slices, "Slices over one period")->check(CLI::Range(4, 100000));
  scan_foliation->callback([&] {
    action = [&] {
      const WarpFactor w = solve_warp_periods(a, 1.0, g.tol);
      const FoliationScan s = foliation_scan(w, slices);
      std::string body;
      if (g.format == "csv") {
        body = "r,H,hawking\r\n";
        for (std::size_t i = 0; i < s.r.size(); ++i) {
          body += fmt(s.r[i], 17) + ',' + fmt(s.H[i], 17) + ',' + fmt(s.hawking[i], 17) + "\r\n";
        }
      } else {
        body = to_json(s).dump() + "\n";
      }
      std::string summary = "mass_deviation=" + fmt(s.max_mass_deviation, 3) +
                            " dH_dr_0=" + fmt(s.dH_dr_at_0) + " lambda0=" + fmt(s.lambda0) +
                            " flip_radius=" + (s.weak_stability.flip_radius ? fmt(*s.weak_stability.flip_radius) : "none");
      if (s.max_mass_deviation > 1e-8 || !s.H_negative_on_half_period || !s.H_odd) {
        throw InvariantViolation("foliation scan invariant failed",
                                 Json({{"max_mass_deviation", s.max_mass_deviation},
                                       {"H_negative_on_half_period", s.H_negative_on_half_period},
                                       {"H_odd", s.H_odd}}).dump());
      }
      return Artifact{body, summary};
    };
  });

  // study convergence
  auto* study = app.add_subcommand("study", "Resolution studies")->require_subcommand(1);
  auto* study_convergence = study->add_subcommand("convergence", "Band limit and step refinement");
  add_a(study_convergence);
  add_r(study_convergence);
  study_convergence->callback([&] {
    action = [&] {
      require_json(g, "study convergence");
      const WarpFactor w = solve_for(a, r, g.tol);
      const ConvergenceReport c = convergence_study(w, r, g.seed);
      return Artifact{to_json(c).dump() + "\n",
                      "fd_slope=" + fmt(c.fd_slope, 4) +
                          " mass_change_64_32=" + fmt(std::abs(c.mass_by_lmax[2] - c.mass_by_lmax[1]), 3)};
    };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::Success&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << error_line("usage", e.what(), kExitUsage) << "\n";
    return kExitUsage;
  }

  try {
    const Artifact art = action();
    if (g.out.empty()) {
      out << art.body;
      err << art.summary << "\n";
    } else {
      write_atomic(g.out, art.body);
      out << art.summary << "\n";
    }
    return kExitOk;
  } catch (const InvariantViolation& e) {
    const Json record = Json::parse(e.record(), nullptr, false);
    err << error_line("invariant", e.what(), kExitInvariant, &record) << "\n";
    return kExitInvariant;
  } catch (const std::out_of_range& e) {
    err << error_line("computation", e.what(), kExitFailure) << "\n";
    return kExitFailure;
  } catch (const std::invalid_argument& e) {
    err << error_line("usage", e.what(), kExitUsage) << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << error_line("computation", e.what(), kExitFailure) << "\n";
    return kExitFailure;
  }
}

}  // namespace hawking
