#pragma once

// Warp factors u(r) of the rotationally symmetric metrics dr^2 + u(r)^2 g_S2
// with scalar curvature 2 (the deSitter-Schwarzschild family), together with
// the closed-form geometry of the slices {r} x S^2.

#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace hawking {

/// Lower bound of the ambient scalar curvature; fixed for the whole family.
inline constexpr double kLambda = 2.0;

/// Accepted range of the minimum a of u. Outside it period detection and the
/// Taylor continuation degenerate.
inline constexpr double kMinWarpParameter = 1e-3;
inline constexpr double kMaxWarpParameter = 1.0 - 1e-6;

/// u'' eliminated through the scalar-curvature-2 equation.
inline double warp_acceleration(double u, double du) {
  return 0.5 * (1.0 - du * du) / u - 0.5 * u;
}

/// First integral (u/2)(1 - u'^2 - u^2/3) of the warp equation.
inline double warp_first_integral(double u, double du) {
  return 0.5 * u * (1.0 - du * du - u * u / 3.0);
}

/// Closed-form mass of the member with minimum a.
inline double mass_of_parameter(double a) { return 0.5 * a * (1.0 - a * a / 3.0); }

struct WarpSample {
  double r;
  double u;
  double du;
};

struct WarpState {
  double u;
  double du;
  double ddu;
};

/// Exact trajectory of the warp equation through a given state, evaluated by
/// Taylor series (recentred when the offset leaves the convergence disc).
/// Increments relative to the centre are returned without cancellation, which
/// the graph mass deficit relies on.
class LocalWarp {
 public:
  struct Value {
    double u;
    double du;
    double ddu;
    double delta_u;   // u(s) - u(0)
    double delta_du;  // u'(s) - u'(0)
  };

  LocalWarp(double u0, double du0);

  double u0() const { return u0_; }
  double du0() const { return du0_; }

  Value operator()(double s) const;

 private:
  struct Series {
    std::vector<double> coeffs;
    double step;  // safe evaluation radius
  };
  static Series expand(double u0, double du0);

  double u0_;
  double du0_;
  Series series_;
};

/// A solved warp factor on [0, r_max], extended evenly to [-r_max, r_max].
/// Immutable after construction.
class WarpFactor {
 public:
  /// Rebuilds from stored samples (e.g. deserialized). Validates the table.
  WarpFactor(double a, double mass, std::optional<double> period, std::vector<WarpSample> samples);

  /// The a -> 1 limit: the round cylinder u = 1 with mass 1/3.
  static WarpFactor cylinder(double r_max);

  double a() const { return a_; }
  double mass() const { return mass_; }
  double u_min() const { return range_.first; }
  double u_max() const { return range_.second; }
  std::pair<double, double> range() const { return range_; }
  std::optional<double> period() const { return period_; }
  double r_max() const { return samples_.back().r; }
  std::span<const WarpSample> samples() const { return samples_; }

  bool in_range(double r) const;

  /// Dense output: Taylor continuation from the nearest stored sample, u''
  /// from the equation. Throws std::out_of_range outside [-r_max, r_max].
  WarpState evaluate(double r) const;

  /// Exact local trajectory through the dense-output state at r.
  LocalWarp local(double r) const;

  /// Largest |first integral - mass| over the stored samples.
  double max_mass_drift() const;

  /// Zeros of u' in (0, r_max], in increasing order.
  const std::vector<double>& critical_radii() const { return zeros_; }

 private:
  void detect_period(double tol);
  friend WarpFactor solve_warp_factor(double, double, double);

  double a_;
  double mass_;
  std::pair<double, double> range_;
  std::optional<double> period_;
  std::vector<WarpSample> samples_;
  std::vector<double> zeros_;
};

/// Adaptive Dormand-Prince 5(4) integration of the warp equation from
/// u(0) = a, u'(0) = 0. tol is used as absolute and relative tolerance.
WarpFactor solve_warp_factor(double a, double r_max, double tol);

/// Solves far enough to contain the requested number of periods.
WarpFactor solve_warp_periods(double a, double periods, double tol);

struct SliceGeometry {
  double r;
  double u;
  double u_prime;
  double area;
  double H;          // -2u'/u, normal d/dr
  double A_norm_sq;  // H^2/2
  double gauss;      // 1/u^2
  double ric_nn;     // -2u''/u
  double hawking;
};

double conserved_mass(const WarpFactor& w, double r);
SliceGeometry slice_geometry(const WarpFactor& w, double r);
SliceGeometry slice_geometry(double r, const WarpState& state);

/// d/dr of the slice Hawking mass, (1/2)u'(1 - u'^2 - u^2 - 2uu'').
double slice_mass_derivative(const WarpFactor& w, double r);
double slice_mass_derivative(const WarpState& state);

/// Positive roots a0 < b0 of 1 - r^2/3 - 2m/r for 0 < m < 1/3.
std::pair<double, double> static_chart_roots(double mass);

}  // namespace hawking
