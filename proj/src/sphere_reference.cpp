// Direct summation over every (node, harmonic) pair with values from
// std::sph_legendre. Quadratically slower than the separated kernels; used by
// tests and the kernel benchmark only.

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hawking/sphere_spectral.hpp"

namespace hawking::reference {

namespace {

struct HarmonicDerivs {
  double value, d_theta, d_phi, d_tt, d_tp, d_pp;
};

double legendre_dtheta(int l, int m, double theta) {
  const double c = std::cos(theta);
  double v = l * c * std::sph_legendre(l, m, theta);
  if (l > m) {
    v -= std::sqrt((2.0 * l + 1.0) * (static_cast<double>(l) * l - m * m) / (2.0 * l - 1.0)) *
         std::sph_legendre(l - 1, m, theta);
  }
  return v / std::sin(theta);
}

HarmonicDerivs harmonic_derivs(int l, int m, double theta, double phi) {
  const int am = std::abs(m);
  const double p = std::sph_legendre(l, am, theta);
  const double dp = legendre_dtheta(l, am, theta);
  const double s = std::sin(theta);
  const double cot = std::cos(theta) / s;
  // Legendre equation in theta.
  const double ddp = -cot * dp - (l * (l + 1.0) - am * am / (s * s)) * p;
  double t = 1.0, dt = 0.0, ddt = 0.0;
  if (m > 0) {
    t = std::sqrt(2.0) * std::cos(m * phi);
    dt = -std::sqrt(2.0) * m * std::sin(m * phi);
    ddt = -static_cast<double>(m) * m * t;
  } else if (m < 0) {
    t = std::sqrt(2.0) * std::sin(am * phi);
    dt = std::sqrt(2.0) * am * std::cos(am * phi);
    ddt = -static_cast<double>(am) * am * t;
  }
  return {p * t, dp * t, p * dt, ddp * t, dp * dt, p * ddt};
}

}  // namespace

double real_harmonic(int l, int m, double theta, double phi) {
  if (l < 0 || m < -l || m > l) throw std::invalid_argument("harmonic index out of range");
  const int am = std::abs(m);
  const double p = std::sph_legendre(l, am, theta);
  if (m == 0) return p;
  return std::sqrt(2.0) * p * (m > 0 ? std::cos(m * phi) : std::sin(am * phi));
}

std::vector<double> synthesize(const SphereGrid& grid, const HarmonicField& f) {
  if (f.lmax() > grid.lmax()) throw std::invalid_argument("field band limit exceeds grid");
  std::vector<double> out(grid.size(), 0.0);
  for (int k = 0; k < grid.n_theta(); ++k) {
    for (int j = 0; j < grid.n_phi(); ++j) {
      double v = 0.0;
      for (int l = 0; l <= f.lmax(); ++l) {
        for (int m = -l; m <= l; ++m) v += f(l, m) * real_harmonic(l, m, grid.theta(k), grid.phi(j));
      }
      out[grid.node(k, j)] = v;
    }
  }
  return out;
}

HarmonicField analyze(const SphereGrid& grid, std::span<const double> samples) {
  if (samples.size() != grid.size()) throw std::invalid_argument("sample count does not match grid");
  HarmonicField out(grid.lmax());
  for (int l = 0; l <= grid.lmax(); ++l) {
    for (int m = -l; m <= l; ++m) {
      double c = 0.0;
      for (int k = 0; k < grid.n_theta(); ++k) {
        for (int j = 0; j < grid.n_phi(); ++j) {
          const auto n = grid.node(k, j);
          c += grid.weight(n) * samples[n] * real_harmonic(l, m, grid.theta(k), grid.phi(j));
        }
      }
      out(l, m) = c;
    }
  }
  return out;
}

FieldDerivatives synthesize_derivatives(const SphereGrid& grid, const HarmonicField& f) {
  if (f.lmax() > grid.lmax()) throw std::invalid_argument("field band limit exceeds grid");
  FieldDerivatives d;
  for (auto* v : {&d.value, &d.d_theta, &d.d_phi, &d.hess_tt, &d.hess_tp, &d.hess_pp}) v->assign(grid.size(), 0.0);
  for (int k = 0; k < grid.n_theta(); ++k) {
    const double theta = grid.theta(k);
    const double s = std::sin(theta);
    const double cot = std::cos(theta) / s;
    for (int j = 0; j < grid.n_phi(); ++j) {
      HarmonicDerivs acc{};
      for (int l = 0; l <= f.lmax(); ++l) {
        for (int m = -l; m <= l; ++m) {
          const double c = f(l, m);
          if (c == 0.0) continue;
          const auto h = harmonic_derivs(l, m, theta, grid.phi(j));
          acc.value += c * h.value;
          acc.d_theta += c * h.d_theta;
          acc.d_phi += c * h.d_phi;
          acc.d_tt += c * h.d_tt;
          acc.d_tp += c * h.d_tp;
          acc.d_pp += c * h.d_pp;
        }
      }
      const auto n = grid.node(k, j);
      d.value[n] = acc.value;
      d.d_theta[n] = acc.d_theta;
      d.d_phi[n] = acc.d_phi / s;
      d.hess_tt[n] = acc.d_tt;
      d.hess_tp[n] = (acc.d_tp - cot * acc.d_phi) / s;
      d.hess_pp[n] = acc.d_pp / (s * s) + cot * acc.d_theta;
    }
  }
  return d;
}

}  // namespace hawking::reference
