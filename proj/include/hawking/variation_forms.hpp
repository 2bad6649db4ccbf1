#pragma once

// Closed-form spectral evaluation of second-variation quantities on slices:
// Jacobi spectra, the slice second-variation form of the Hawking mass, its
// minimal-slice form, area and stability identities, and a finite-difference
// oracle on the nonlinear mass.

#include <optional>
#include <vector>

#include "hawking/sphere_spectral.hpp"
#include "hawking/warp_ode.hpp"

namespace hawking {

/// Eigenvalues under L phi + lambda phi = 0, L = Delta + Ric(nu,nu) + |A|^2.
struct JacobiSpectrum {
  double r;
  double u;
  double potential;  // Ric(nu,nu) + |A|^2
  std::vector<double> lambda_by_degree;
};

JacobiSpectrum jacobi_spectrum(const WarpFactor& w, double r, int lmax);

/// 4 pi / (lambda_1 + 1) - area.
double area_bound_check(double area, double lambda1);

/// Per-degree coefficient of the slice second variation of the Hawking mass,
/// i.e. its value on a degree-l harmonic of unit slice L^2 norm.
double slice_form_coefficient(const SliceGeometry& slice, double mass, int l);

/// Second variation of m_H along graphs t * phi over the slice at r.
double slice_second_variation(const WarpFactor& w, double r, const HarmonicField& phi);

struct QuadraticFormReport {
  double a;
  double r;
  int lmax;
  std::vector<double> Q_by_degree;
  std::vector<double> weights;  // W^{2,2} weight of a unit-norm degree-l harmonic
  double C_est;
  bool definite;  // Q_l < 0 for every 1 <= l <= lmax
};

QuadraticFormReport quadratic_form_report(const WarpFactor& w, double r, int lmax);

/// The same second variation at the minimal slice r = 0, written through
/// the Jacobi operator.
double second_variation_minimal(const WarpFactor& w, const HarmonicField& phi);

enum class Stencil { three_point, five_point };

/// Second difference of m_H(graph(t phi)) at t = 0. The three-point stencil
/// is the default; both need the graphs at +-2h inside the warp range.
double fd_second_variation(const WarpFactor& w, double r, const HarmonicField& phi, double h,
                           Stencil stencil = Stencil::three_point);

/// 2|S| int (L phi)^2 - (8 pi - 2|S|)(-int phi L phi) at the minimal slice,
/// for phi inside a single eigenspace of L.
double strict_stability_inequality_check(const WarpFactor& w, const HarmonicField& phi);

/// min_{l >= 1} lambda_l(r) - lambda_0(r = 0).
double weak_stability_margin(const WarpFactor& w, double r);

struct WeakStabilityProfile {
  std::vector<double> r;
  std::vector<double> margin;
  /// First radius in (0, half period] where the margin reaches zero.
  std::optional<double> flip_radius;
};

WeakStabilityProfile weak_stability_profile(const WarpFactor& w, int n_points);

}  // namespace hawking
