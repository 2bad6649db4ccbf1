#pragma once

// Normal graphs r = base_r + phi(x) over a slice of dr^2 + u(r)^2 g_S2: induced
// geometry on a dealiased quadrature grid, Hawking mass, and the
// Euler-Lagrange residual of the Hawking mass.

#include <memory>
#include <span>
#include <vector>

#include "hawking/sphere_spectral.hpp"
#include "hawking/warp_ode.hpp"

namespace hawking {

struct GraphOptions {
  /// Geometry grid band limit; 0 selects max(2 * phi.lmax(), 16). Must be at
  /// least twice the highest degree present in phi.
  int grid_lmax = 0;
};

class GraphSurface {
 public:
  double base_r() const { return base_r_; }
  double a() const { return a_; }
  double ambient_mass() const { return ambient_mass_; }
  const HarmonicField& phi() const { return phi_; }
  const SphereGrid& grid() const { return *grid_; }
  const SliceGeometry& base_slice() const { return base_; }

  // Node fields. area_element is the density of d sigma relative to the unit
  // round sphere, u(rho)^2 W with W = sqrt(1 + |grad rho|^2 / u^2).
  std::span<const double> rho() const { return rho_; }
  std::span<const double> area_element() const { return area_element_; }
  std::span<const double> tilt() const { return tilt_; }  // <d/dr, nu> = 1/W
  std::span<const double> mean_curvature() const { return H_; }
  std::span<const double> second_fundamental_sq() const { return A_sq_; }
  std::span<const double> gauss_curvature() const { return K_; }
  std::span<const double> ric_nn() const { return ric_nn_; }

  double area() const { return area_; }
  double h2_integral() const { return h2_integral_; }
  /// Area and int H^2 minus their base-slice values, summed without cancellation.
  double area_increment() const { return area_increment_; }
  double h2_integral_increment() const { return h2_increment_; }

  /// Integral of node samples against d sigma.
  double integrate(std::span<const double> samples) const;

 private:
  friend GraphSurface build_graph(const WarpFactor&, double, const HarmonicField&, GraphOptions);
  friend std::vector<double> el_residual(const GraphSurface&);

  double base_r_ = 0.0;
  double a_ = 0.0;
  double ambient_mass_ = 0.0;
  HarmonicField phi_;
  std::shared_ptr<const SphereGrid> grid_;
  SliceGeometry base_{};
  std::vector<double> rho_, area_element_, tilt_, H_, A_sq_, K_, ric_nn_;
  // Inverse induced metric in the round orthonormal frame, scaled by u^2.
  std::vector<double> hinv_tt_, hinv_tp_, hinv_pp_;
  double area_ = 0.0, h2_integral_ = 0.0, area_increment_ = 0.0, h2_increment_ = 0.0;
};

GraphSurface build_graph(const WarpFactor& warp, double base_r, const HarmonicField& phi,
                         GraphOptions options = {});

/// (|S|/16pi)^(1/2) (1 - int H^2 / 16pi - Lambda |S| / 24pi), Lambda = 2.
double hawking_mass(const GraphSurface& s);
double hawking_mass(double area, double h2_integral);

/// m_H(graph) - m_H(base slice), evaluated from the increments so that small
/// deficits keep full relative precision.
double mass_deficit(const GraphSurface& s);

/// Delta_S H + Q H at the nodes.
std::vector<double> el_residual(const GraphSurface& s);
double max_abs(std::span<const double> values);

/// Pointwise Q = 4pi/|S| - K + (R-2)/2 + (2|A|^2 - int H^2 / |S|)/4.
std::vector<double> q_field(const GraphSurface& s);
double q_integral(const GraphSurface& s);

}  // namespace hawking
