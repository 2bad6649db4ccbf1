#pragma once

// Seeded numerical experiments over the model family: random perturbation
// sweeps around a slice, quadratic scaling studies, foliation scans,
// critical-point classification and resolution convergence.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hawking/graph_surface.hpp"
#include "hawking/variation_forms.hpp"

namespace hawking {

struct SweepConfig {
  double a = 0.5;
  double base_r = 0.0;
  double epsilon = 1e-2;  // C^2 radius
  int n_samples = 100;
  std::uint64_t master_seed = 42;
  int lmax = 32;
  double fd_step = 1e-3;
  double ode_tol = 1e-10;
  double tol = 1e-8;
  /// Accepted shortfall of the quadratic lower bound ratio.
  double ratio_slack = 0.1;
  /// OpenMP threads for the sample loop; 0 uses the runtime default.
  int workers = 0;

  void validate() const;
};

/// Per-sample seed; depends only on the master seed and the index.
std::uint64_t sample_seed(std::uint64_t master_seed, std::uint64_t index);

/// Random smooth field: N(0,1) l^-2 coefficients in degrees 1..lmax/2.
HarmonicField random_field(std::uint64_t seed, int lmax);

struct SweepRecord {
  int index;
  std::uint64_t seed;
  double c2_norm;
  double w22_norm;    // of phi - mean(phi)
  double deficit;     // m_H(graph) - m_H(slice)
  double prediction;  // half the slice second variation
  double ratio;       // deficit / (-(C_est/4) |phi - mean|^2_{W22})
  std::string classification;  // "slice" or "graph"
  bool pass;
};

struct SweepReport {
  SweepConfig config;
  double slice_mass;
  double C_est;
  std::vector<SweepRecord> records;
  int n_pass;
  bool all_pass;
};

/// Scores one graph function over the configured slice.
SweepRecord evaluate_sample(const SweepConfig& cfg, const WarpFactor& w, const QuadraticFormReport& form, int index,
                            std::uint64_t seed, const HarmonicField& phi);

SweepReport perturbation_sweep(const SweepConfig& cfg);
/// Same, reusing an already solved warp factor.
SweepReport perturbation_sweep(const SweepConfig& cfg, const WarpFactor& w);

struct ScalingPoint {
  double epsilon;
  double deficit;
  double prediction;  // epsilon^2 / 2 times the second variation of phi
  double ratio;       // deficit / prediction
  double normalized;  // |deficit| / |epsilon (phi - mean)|^2_{W22}
};

/// Deficits of graphs epsilon * phi at each epsilon.
std::vector<ScalingPoint> quadratic_scaling(const WarpFactor& w, double r, const HarmonicField& phi,
                                            const std::vector<double>& epsilons);

struct FoliationScan {
  double a;
  double mass;
  double period;
  std::vector<double> r;
  std::vector<double> H;
  std::vector<double> hawking;
  double max_mass_deviation;
  double max_mass_derivative;
  bool H_negative_on_half_period;  // H < 0 on every scanned r in (0, P/2)
  bool H_odd;                      // H(r) H(-r) < 0 there as well
  double dH_dr_at_0;
  double lambda0;
  WeakStabilityProfile weak_stability;
};

FoliationScan foliation_scan(const WarpFactor& w, int n_slices);

enum class CriticalClass { slice, minimal, none };
std::string to_string(CriticalClass c);

struct CriticalPointResult {
  bool critical;
  CriticalClass cls;
  bool slice;  // phi - mean(phi) below the slice threshold
  double residual_max;
};

inline constexpr double kSliceThreshold = 1e-8;

CriticalPointResult critical_point_classifier(const GraphSurface& s, double tol);

struct ConvergenceReport {
  double a;
  double r;
  std::vector<int> lmax_values;
  std::vector<double> mass_by_lmax;
  std::vector<double> spectral_by_lmax;
  std::vector<double> steps;
  std::vector<double> fd_error;
  double fd_slope;
  double spectral_value;
};

/// Fixed suite: a seeded degree-8 field over the slice at r.
ConvergenceReport convergence_study(const WarpFactor& w, double r, std::uint64_t seed);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace hawking
