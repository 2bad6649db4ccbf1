#include "hawking/sweep_runner.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <random>
#include <sstream>
#include <stdexcept>

#include "hawking/errors.hpp"

namespace hawking {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double w22_norm_sq(const HarmonicField& f, double u) {
  const auto e = f.degree_energy();
  double s = 0.0;
  for (int l = 1; l <= f.lmax(); ++l) s += w22_degree_weight(l, u) * u * u * e[l];
  return s;
}

}  // namespace

void SweepConfig::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument("sweep config: " + msg); };
  if (!(a >= kMinWarpParameter && a <= kMaxWarpParameter)) fail("a outside [1e-3, 1-1e-6]");
  if (!(epsilon > 0.0)) fail("epsilon must be positive");
  if (n_samples < 1) fail("n_samples must be >= 1");
  if (lmax < 2) fail("lmax must be >= 2");
  if (!(fd_step > 0.0)) fail("fd_step must be positive");
  if (!(ode_tol > 0.0) || !(tol > 0.0)) fail("tolerances must be positive");
  if (!(ratio_slack >= 0.0 && ratio_slack < 1.0)) fail("ratio_slack must lie in [0, 1)");
  if (workers < 0) fail("workers must be >= 0");
  if (!std::isfinite(base_r)) fail("base_r must be finite");
}

std::uint64_t sample_seed(std::uint64_t master_seed, std::uint64_t index) {
  return splitmix64(splitmix64(master_seed) ^ (index + 1));
}

HarmonicField random_field(std::uint64_t seed, int lmax) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  HarmonicField f(lmax);
  const int top = std::max(1, lmax / 2);
  for (int l = 1; l <= top; ++l) {
    for (int m = -l; m <= l; ++m) f(l, m) = normal(rng) / (static_cast<double>(l) * l);
  }
  return f;
}

SweepRecord evaluate_sample(const SweepConfig& cfg, const WarpFactor& w, const QuadraticFormReport& form, int index,
                            std::uint64_t seed, const HarmonicField& phi) {
  const double u = w.evaluate(cfg.base_r).u;
  const HarmonicField centred = phi.without_mean();
  SweepRecord rec{};
  rec.index = index;
  rec.seed = seed;
  rec.c2_norm = sobolev_norms(phi, u).c2_norm();
  const double w22_sq = w22_norm_sq(centred, u);
  rec.w22_norm = std::sqrt(w22_sq);
  rec.deficit = mass_deficit(build_graph(w, cfg.base_r, phi));
  rec.prediction = 0.5 * slice_second_variation(w, cfg.base_r, phi);
  const double bound = 0.25 * form.C_est * w22_sq;
  rec.ratio = bound > 0.0 ? rec.deficit / -bound : 0.0;
  if (std::sqrt(centred.norm_sq()) < kSliceThreshold) {
    rec.classification = "slice";
    rec.pass = true;
  } else {
    rec.classification = "graph";
    rec.pass = rec.deficit < 0.0 && rec.ratio >= 1.0 - cfg.ratio_slack;
  }
  return rec;
}

SweepReport perturbation_sweep(const SweepConfig& cfg) {
  cfg.validate();
  const WarpFactor w = solve_warp_periods(cfg.a, 1.0, cfg.ode_tol);
  return perturbation_sweep(cfg, w);
}

SweepReport perturbation_sweep(const SweepConfig& cfg, const WarpFactor& w) {
  cfg.validate();
  if (!w.in_range(cfg.base_r)) throw std::out_of_range("sweep base_r outside the warp range");
  const SliceGeometry slice = slice_geometry(w, cfg.base_r);
  const QuadraticFormReport form = quadratic_form_report(w, cfg.base_r, cfg.lmax);

  SweepReport rep;
  rep.config = cfg;
  rep.slice_mass = slice.hawking;
  rep.C_est = form.C_est;
  rep.records.resize(cfg.n_samples);
  std::vector<std::exception_ptr> errors(cfg.n_samples);

  const int threads = cfg.workers > 0 ? cfg.workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (int i = 0; i < cfg.n_samples; ++i) {
    try {
      const std::uint64_t seed = sample_seed(cfg.master_seed, static_cast<std::uint64_t>(i));
      std::mt19937_64 rng(seed);
      HarmonicField phi = random_field(splitmix64(seed), cfg.lmax).without_mean();
      const double c2 = sobolev_norms(phi, slice.u).c2_norm();
      const double target = cfg.epsilon * (1.0 - std::uniform_real_distribution<double>(0.0, 1.0)(rng));
      phi *= target / c2;
      SweepRecord rec = evaluate_sample(cfg, w, form, i, seed, phi);
      rep.records[i] = std::move(rec);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  rep.n_pass = static_cast<int>(std::count_if(rep.records.begin(), rep.records.end(), [](const auto& r) { return r.pass; }));
  rep.all_pass = rep.n_pass == cfg.n_samples;
  return rep;
}

std::vector<ScalingPoint> quadratic_scaling(const WarpFactor& w, double r, const HarmonicField& phi,
                                            const std::vector<double>& epsilons) {
  const double u = w.evaluate(r).u;
  const double q = slice_second_variation(w, r, phi);
  const double w22_sq = w22_norm_sq(phi.without_mean(), u);
  std::vector<ScalingPoint> out;
  for (double eps : epsilons) {
    if (!(eps > 0.0)) throw std::invalid_argument("scaling epsilons must be positive");
    ScalingPoint p{};
    p.epsilon = eps;
    p.deficit = mass_deficit(build_graph(w, r, eps * phi));
    p.prediction = 0.5 * q * eps * eps;
    p.ratio = p.deficit / p.prediction;
    p.normalized = std::abs(p.deficit) / (eps * eps * w22_sq);
    out.push_back(p);
  }
  return out;
}

FoliationScan foliation_scan(const WarpFactor& w, int n_slices) {
  if (n_slices < 4) throw std::invalid_argument("foliation scan needs at least 4 slices");
  if (!w.period()) throw SolverError("foliation scan needs a detected period");
  const double P = *w.period();
  if (!w.in_range(P)) throw std::out_of_range("warp factor does not cover one period");

  FoliationScan s{};
  s.a = w.a();
  s.mass = mass_of_parameter(w.a());
  s.period = P;
  s.H_negative_on_half_period = true;
  s.H_odd = true;
  for (int i = 0; i < n_slices; ++i) {
    const double r = P * i / n_slices;
    const SliceGeometry g = slice_geometry(w, r);
    s.r.push_back(r);
    s.H.push_back(g.H);
    s.hawking.push_back(g.hawking);
    s.max_mass_deviation = std::max(s.max_mass_deviation, std::abs(g.hawking - s.mass));
    s.max_mass_derivative = std::max(s.max_mass_derivative, std::abs(slice_mass_derivative(w, r)));
    if (r > 0.0 && r < 0.5 * P) {
      s.H_negative_on_half_period = s.H_negative_on_half_period && g.H < 0.0;
      s.H_odd = s.H_odd && g.H * slice_geometry(w, -r).H < 0.0;
    }
  }
  constexpr double h = 1e-4;
  s.dH_dr_at_0 = (slice_geometry(w, h).H - slice_geometry(w, -h).H) / (2.0 * h);
  s.lambda0 = jacobi_spectrum(w, 0.0, 0).lambda_by_degree[0];
  s.weak_stability = weak_stability_profile(w, n_slices);
  return s;
}

std::string to_string(CriticalClass c) {
  switch (c) {
    case CriticalClass::slice: return "slice";
    case CriticalClass::minimal: return "minimal";
    case CriticalClass::none: return "none";
  }
  return "none";
}

CriticalPointResult critical_point_classifier(const GraphSurface& s, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("classifier tolerance must be positive");
  CriticalPointResult res{};
  res.residual_max = max_abs(el_residual(s));
  res.critical = res.residual_max < tol;
  res.slice = std::sqrt(s.phi().without_mean().norm_sq()) < kSliceThreshold;
  if (max_abs(s.mean_curvature()) < tol) {
    res.cls = CriticalClass::minimal;
  } else if (res.slice) {
    res.cls = CriticalClass::slice;
  } else {
    res.cls = CriticalClass::none;
  }
  return res;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("slope fit needs matching samples");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ConvergenceReport convergence_study(const WarpFactor& w, double r, std::uint64_t seed) {
  constexpr int kDegree = 8;
  const double u = w.evaluate(r).u;
  HarmonicField phi = random_field(seed, 2 * kDegree).without_mean();
  phi *= 1e-2 / sobolev_norms(phi, u).c2_norm();

  ConvergenceReport rep{};
  rep.a = w.a();
  rep.r = r;
  rep.lmax_values = {16, 32, 64};
  for (int L : rep.lmax_values) {
    const HarmonicField p = phi.resized(L);
    rep.mass_by_lmax.push_back(hawking_mass(build_graph(w, r, p, GraphOptions{2 * L})));
    rep.spectral_by_lmax.push_back(slice_second_variation(w, r, p));
  }
  // Step sweep on the unit-norm direction so the errors stay above roundoff.
  const HarmonicField dir = 1e2 * phi;
  rep.spectral_value = slice_second_variation(w, r, dir);
  rep.steps = {1e-2, 1e-3, 1e-4};
  for (double h : rep.steps) rep.fd_error.push_back(std::abs(fd_second_variation(w, r, dir, h) - rep.spectral_value));
  rep.fd_slope = loglog_slope(rep.steps, rep.fd_error);
  return rep;
}

}  // namespace hawking
