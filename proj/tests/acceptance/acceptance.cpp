// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "hawking/graph_surface.hpp"
#include "hawking/json_io.hpp"
#include "hawking/sweep_runner.hpp"
#include "hawking/variation_forms.hpp"
#include "hawking/warp_ode.hpp"

using namespace hawking;

namespace {

constexpr double kPi = std::numbers::pi;
const std::vector<double> kParameters = {0.3, 0.5, 0.7, 0.9};

int failures = 0;

void report(int id, bool ok, const std::string& what, const std::string& detail) {
  std::printf("[%s] criterion %2d: %s (%s)\n", ok ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
  std::fflush(stdout);
  failures += !ok;
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void criterion_1() {
  double worst = 0.0, slowest = 0.0;
  for (double a : kParameters) {
    const auto t0 = std::chrono::steady_clock::now();
    const WarpFactor w = solve_warp_periods(a, 2.0, 1e-12);
    const double m = (a / 2.0) * (1.0 - a * a / 3.0);
    const double span = 2.0 * *w.period();
    constexpr int n = 4000;
    for (int i = 0; i <= n; ++i) {
      const auto s = w.evaluate(span * i / n);
      worst = std::max(worst, std::abs(warp_first_integral(s.u, s.du) - m));
    }
    for (const auto& s : w.samples()) worst = std::max(worst, std::abs(warp_first_integral(s.u, s.du) - m));
    slowest = std::max(slowest, seconds_since(t0));
  }
  report(1, worst < 1e-9 && slowest < 1.0, "conserved mass over two periods",
         "max drift " + sci(worst) + ", slowest " + sci(slowest) + " s");
}

void criterion_2() {
  double worst = 0.0;
  for (double a : kParameters) {
    const WarpFactor w = solve_warp_factor(a, 1.0, 1e-12);
    const SliceGeometry s = slice_geometry(w, 0.0);
    const double lambda1 = jacobi_spectrum(w, 0.0, 0).lambda_by_degree[0];
    const double expected = (1.0 - a * a) / (a * a);
    worst = std::max({worst, std::abs(area_bound_check(s.area, lambda1)), std::abs(lambda1 - expected),
                      std::abs(s.A_norm_sq), std::abs(s.gauss - 4.0 * kPi / s.area), std::abs(s.ric_nn + lambda1)});
  }
  report(2, worst < 1e-10, "area bound equality and rigidity data at minimal slices", "max error " + sci(worst));
}

void criterion_3() {
  double dev = 0.0, deriv = 0.0;
  for (double a : kParameters) {
    const auto scan = foliation_scan(solve_warp_periods(a, 1.0, 1e-10), 64);
    dev = std::max(dev, scan.max_mass_deviation);
    deriv = std::max(deriv, scan.max_mass_derivative);
  }
  report(3, dev < 1e-8 && deriv < 1e-8, "slice mass constancy over 64 slices",
         "mass deviation " + sci(dev) + ", derivative " + sci(deriv));
}

void criterion_4() {
  double worst = 0.0;
  for (double a : {0.5, 0.8}) {
    const WarpFactor w = solve_warp_factor(a, 1.0, 1e-12);
    for (std::uint64_t i = 0; i < 20; ++i) {
      HarmonicField phi = random_field(sample_seed(2024, i), 24);
      phi(0, 0) = 0.1 * static_cast<double>(i);
      worst = std::max(worst, std::abs(slice_second_variation(w, 0.0, phi) - second_variation_minimal(w, phi)));
    }
  }
  const WarpFactor w = solve_warp_factor(0.5, 1.0, 1e-12);
  const auto y1 = HarmonicField::single(4, 1, 0, 2.0);
  const double spot = std::max(std::abs(slice_second_variation(w, 0.0, y1) + 2.75 / kPi),
                               std::abs(second_variation_minimal(w, y1) + 2.75 / kPi));
  report(4, worst < 1e-10 && spot < 1e-10, "slice and minimal second-variation forms agree",
         "max difference " + sci(worst) + ", spot value error " + sci(spot));
}

void criterion_5() {
  const auto t0 = std::chrono::steady_clock::now();
  const WarpFactor w = solve_warp_periods(0.5, 1.0, 1e-12);
  const std::vector<double> steps = {1e-2, 1e-3, 1e-4};
  bool ok = true;
  std::string detail;
  struct Case {
    double r;
    HarmonicField phi;
  };
  HarmonicField mixed = random_field(77, 12).without_mean();
  mixed *= 0.5;
  for (const auto& c : {Case{0.0, HarmonicField::single(4, 1, 0, 2.0)}, Case{0.4, mixed}}) {
    const double spectral = slice_second_variation(w, c.r, c.phi);
    std::vector<double> err;
    for (double h : steps) err.push_back(std::abs(fd_second_variation(w, c.r, c.phi, h) - spectral));
    const double slope = loglog_slope(steps, err);
    ok = ok && err[1] < 1e-4 && std::abs(slope - 2.0) <= 0.2;
    detail += "r=" + sci(c.r) + ": err(1e-3) " + sci(err[1]) + ", slope " + sci(slope) + "; ";
  }
  const double elapsed = seconds_since(t0);
  ok = ok && elapsed < 30.0;
  report(5, ok, "finite-difference oracle and O(h^2) order", detail + "time " + sci(elapsed) + " s");
}

void criterion_6() {
  const WarpFactor w = solve_warp_periods(0.5, 1.0, 1e-10);
  int negative = 0, total = 0;
  double worst_ratio = 0.0;
  for (double r : {0.0, 0.4}) {
    SweepConfig cfg;
    cfg.base_r = r;
    cfg.epsilon = 1e-2;
    cfg.n_samples = 100;
    cfg.master_seed = 42;
    const SweepReport rep = perturbation_sweep(cfg, w);
    for (const auto& rec : rep.records) {
      total += 1;
      negative += rec.deficit < 0.0;
    }
    for (int l = 1; l <= 6; ++l) {
      const double u = w.evaluate(r).u;
      const auto phi = HarmonicField::single(8, l, l / 2, 1.0 / u);
      const auto pts = quadratic_scaling(w, r, phi, {1e-3});
      worst_ratio = std::max(worst_ratio, std::abs(pts[0].ratio - 1.0));
    }
  }
  report(6, negative == total && worst_ratio < 0.05, "perturbation sweeps give strict mass deficits",
         std::to_string(negative) + "/" + std::to_string(total) + " negative, worst |deficit/(Q eps^2/2) - 1| " +
             sci(worst_ratio));
}

void criterion_7() {
  double worst_zero = 0.0, min_positive = INFINITY;
  for (double a : kParameters) {
    const WarpFactor w = solve_warp_factor(a, 1.0, 1e-12);
    worst_zero = std::max(worst_zero, std::abs(strict_stability_inequality_check(w, HarmonicField::constant(4, 1.0 / a))));
    for (int l = 1; l <= 8; ++l) {
      min_positive = std::min(min_positive, strict_stability_inequality_check(w, HarmonicField::single(8, l, 0, 1.0 / a)));
    }
  }
  report(7, worst_zero < 1e-10 && min_positive > 0.0, "strict stability slack",
         "constant slack " + sci(worst_zero) + ", smallest l>=1 slack " + sci(min_positive));
}

void criterion_8() {
  double worst = 0.0;
  for (double a : {0.3, 0.5, 0.8}) {
    const WarpFactor w = solve_warp_periods(a, 1.0, 1e-12);
    const double P = *w.period();
    for (int i = 0; i < 16; ++i) {
      worst = std::max(worst, max_abs(el_residual(build_graph(w, P * i / 16.0, HarmonicField(8)))));
    }
  }
  const WarpFactor w = solve_warp_periods(0.5, 1.0, 1e-12);
  const double control = max_abs(el_residual(build_graph(w, 0.3, HarmonicField::single(8, 2, 0, 0.05))));
  report(8, worst < 1e-7 && control > 1e-3, "Euler-Lagrange residual on slices and negative control",
         "slices " + sci(worst) + ", control " + sci(control));
}

void criterion_9() {
  bool ok = true;
  std::string detail;
  for (double a : {0.5, 0.8}) {
    const FoliationScan s = foliation_scan(solve_warp_periods(a, 1.0, 1e-12), 64);
    const double slope_err = std::abs(s.dH_dr_at_0 + s.lambda0);
    const auto& ws = s.weak_stability;
    const bool margin_ok = ws.margin.front() > 0.0 && ws.margin[1] > 0.0;
    ok = ok && s.H_negative_on_half_period && s.H_odd && slope_err < 1e-6 && margin_ok;
    if (!detail.empty()) detail += "; ";
    detail += "a=" + sci(a) + ": dH/dr+lambda " + sci(slope_err) + ", margin>0 on [0, " +
              (ws.flip_radius ? sci(*ws.flip_radius) : sci(0.5 * s.period)) + ")";
  }
  report(9, ok, "foliation sign structure and weak stability", detail);
}

void criterion_10() {
  const WarpFactor w = solve_warp_periods(0.5, 1.0, 1e-10);
  SweepConfig cfg;
  cfg.n_samples = 40;
  cfg.master_seed = 1234;
  std::vector<std::string> payloads;
  for (int workers : {1, 2, 8}) {
    cfg.workers = workers;
    payloads.push_back(to_json(perturbation_sweep(cfg, w)).at("records").dump());
  }
  const bool ok = payloads[0] == payloads[1] && payloads[0] == payloads[2];
  report(10, ok, "sweep records identical under 1, 2 and 8 workers",
         std::to_string(payloads[0].size()) + " bytes per payload");
}

}  // namespace

int main() {
  const std::vector<void (*)()> criteria = {criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
                                            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10};
  int id = 0;
  for (auto c : criteria) {
    ++id;
    try {
      c();
    } catch (const std::exception& e) {
      report(id, false, "exception", e.what());
    }
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
