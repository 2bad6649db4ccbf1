#pragma once

// Real spherical-harmonic representation of scalar fields on the unit round
// sphere: Gauss-Legendre x uniform-azimuth grids, transforms, differential
// operators and slice Sobolev norms.
//
// Basis: Y_{l,0} = P_l^0, Y_{l,m} = sqrt(2) P_l^m cos(m phi) for m > 0 and
// Y_{l,-m} = sqrt(2) P_l^m sin(m phi), where P_l^m(theta) are the orthonormal
// associated Legendre functions of std::sph_legendre (Condon-Shortley phase
// included). The basis is orthonormal on the unit sphere.

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace hawking {

class SphereGrid {
 public:
  explicit SphereGrid(int lmax);

  int lmax() const { return lmax_; }
  int n_theta() const { return lmax_ + 1; }
  int n_phi() const { return 2 * lmax_ + 1; }
  std::size_t size() const { return static_cast<std::size_t>(n_theta()) * n_phi(); }
  std::size_t node(int k, int j) const { return static_cast<std::size_t>(k) * n_phi() + j; }

  double theta(int k) const { return theta_[k]; }
  double cos_theta(int k) const { return cos_theta_[k]; }
  double sin_theta(int k) const { return sin_theta_[k]; }
  double phi(int j) const { return phi_[j]; }
  /// Gauss-Legendre weight of colatitude row k (sums to 2).
  double row_weight(int k) const { return row_weight_[k]; }
  double azimuth_weight() const { return azimuth_weight_; }
  /// Quadrature weight of a node; all weights sum to 4 pi.
  double weight(std::size_t n) const { return row_weight_[n / n_phi()] * azimuth_weight_; }

  /// Orthonormal associated Legendre function P_l^m(theta_k), m >= 0.
  double legendre(int k, int l, int m) const { return legendre_[row_offset(k) + tri(l, m)]; }
  double legendre_dtheta(int k, int l, int m) const { return dlegendre_[row_offset(k) + tri(l, m)]; }
  double cos_m(int m, int j) const { return cos_[static_cast<std::size_t>(m) * n_phi() + j]; }
  double sin_m(int m, int j) const { return sin_[static_cast<std::size_t>(m) * n_phi() + j]; }

  /// Quadrature of node samples against the area element of the unit sphere.
  double integrate(std::span<const double> samples) const;

 private:
  static std::size_t tri(int l, int m) { return static_cast<std::size_t>(l) * (l + 1) / 2 + m; }
  std::size_t row_offset(int k) const { return static_cast<std::size_t>(k) * tri(lmax_ + 1, 0); }

  int lmax_;
  std::vector<double> theta_, cos_theta_, sin_theta_, row_weight_, phi_;
  double azimuth_weight_;
  std::vector<double> legendre_, dlegendre_;
  std::vector<double> cos_, sin_;
};

/// Shared immutable grid for a band limit; construction is cached.
std::shared_ptr<const SphereGrid> sphere_grid(int lmax);

/// Real coefficients c_{l,m}, 0 <= l <= lmax, -l <= m <= l.
class HarmonicField {
 public:
  HarmonicField() : HarmonicField(0) {}
  explicit HarmonicField(int lmax);

  static HarmonicField constant(int lmax, double value);
  static HarmonicField single(int lmax, int l, int m, double amplitude = 1.0);

  static std::size_t index(int l, int m) { return static_cast<std::size_t>(l) * l + l + m; }
  static std::size_t count(int lmax) { return static_cast<std::size_t>(lmax + 1) * (lmax + 1); }

  int lmax() const { return lmax_; }
  double operator()(int l, int m) const { return coeffs_[index(l, m)]; }
  double& operator()(int l, int m) { return coeffs_[index(l, m)]; }
  std::span<const double> coeffs() const { return coeffs_; }
  std::span<double> coeffs() { return coeffs_; }

  /// Copy with a different band limit; dropping nonzero content throws.
  HarmonicField resized(int lmax) const;
  /// Highest degree carrying a nonzero coefficient (0 for the zero field).
  int degree() const;

  /// Mean over the unit sphere, c_{0,0}/sqrt(4 pi).
  double mean() const;
  HarmonicField without_mean() const;
  /// sum c^2 = integral of f^2 over the unit sphere.
  double norm_sq() const;
  /// sum_m c_{l,m}^2 per degree.
  std::vector<double> degree_energy() const;

  HarmonicField& operator+=(const HarmonicField& other);
  HarmonicField& operator*=(double s);
  friend HarmonicField operator+(HarmonicField a, const HarmonicField& b) { return a += b; }
  friend HarmonicField operator*(double s, HarmonicField f) { return f *= s; }
  friend bool operator==(const HarmonicField&, const HarmonicField&) = default;

 private:
  int lmax_;
  std::vector<double> coeffs_;
};

/// Values and first/second derivatives in the orthonormal frame
/// (d_theta, d_phi / sin theta) of the round metric. hess_* is the covariant
/// Hessian in that frame.
struct FieldDerivatives {
  std::vector<double> value, d_theta, d_phi, hess_tt, hess_tp, hess_pp;
};

HarmonicField analyze(const SphereGrid& grid, std::span<const double> samples);
HarmonicField analyze(const SphereGrid& grid, std::span<const double> samples, int lmax_out);
std::vector<double> synthesize(const SphereGrid& grid, const HarmonicField& f);
FieldDerivatives synthesize_derivatives(const SphereGrid& grid, const HarmonicField& f);

/// Coefficients of div V from the weak form -int <grad Y, V> on the unit
/// sphere; V given by frame components at the nodes.
HarmonicField weak_divergence(const SphereGrid& grid, std::span<const double> v_theta,
                              std::span<const double> v_phi, int lmax_out);

/// Unit-sphere Laplacian, c_{l,m} -> -l(l+1) c_{l,m}. Divide by u^2 for a slice.
HarmonicField laplacian_unit(const HarmonicField& f);

/// integral |grad f|^2 = sum l(l+1) c^2; identical on every slice.
double gradient_norm_sq_integral(const HarmonicField& f);

/// W^{2,2} weight of a degree-l harmonic with unit slice L^2 norm.
double w22_degree_weight(int l, double u);

struct SobolevNorms {
  double l2;
  double w12;
  double w22;
  double c0;  // grid max |f|
  double c1;  // grid max |grad f|, slice metric
  double c2;  // grid max |Hess f|, slice metric
  double c2_norm() const { return c0 + c1 + c2; }
};

/// Norms on the slice u^2 g_S2. Integral norms are exact; the C^k values are
/// maxima over a grid of twice the field's band limit.
SobolevNorms sobolev_norms(const HarmonicField& f, double u);

/// Serial, direct-summation versions of the transforms, kept as the
/// independent reference for the parallel kernels.
namespace reference {

double real_harmonic(int l, int m, double theta, double phi);
std::vector<double> synthesize(const SphereGrid& grid, const HarmonicField& f);
HarmonicField analyze(const SphereGrid& grid, std::span<const double> samples);
FieldDerivatives synthesize_derivatives(const SphereGrid& grid, const HarmonicField& f);

}  // namespace reference

}  // namespace hawking
