#include "hawking/variation_forms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "hawking/errors.hpp"
#include "hawking/graph_surface.hpp"

namespace hawking {

namespace {

constexpr double kPi = std::numbers::pi;
// |H| below this counts as a minimal slice.
constexpr double kMinimalTol = 1e-10;

double jacobi_potential(const WarpState& s) {
  // Ric(nu,nu) = -2u''/u, |A|^2 = H^2/2 = 2u'^2/u^2.
  return -2.0 * s.ddu / s.u + 2.0 * s.du * s.du / (s.u * s.u);
}

double lambda_of(const WarpState& s, int l) { return l * (l + 1.0) / (s.u * s.u) - jacobi_potential(s); }

void require_single_eigenspace(const HarmonicField& phi) {
  const auto e = phi.degree_energy();
  int nonzero = 0;
  for (double v : e) nonzero += v != 0.0;
  if (nonzero > 1) throw std::invalid_argument("test function must lie in a single eigenspace of L");
}

}  // namespace

JacobiSpectrum jacobi_spectrum(const WarpFactor& w, double r, int lmax) {
  if (lmax < 0) throw std::invalid_argument("lmax must be nonnegative");
  const WarpState s = w.evaluate(r);
  JacobiSpectrum out{r, s.u, jacobi_potential(s), {}};
  out.lambda_by_degree.reserve(lmax + 1);
  for (int l = 0; l <= lmax; ++l) out.lambda_by_degree.push_back(lambda_of(s, l));
  return out;
}

double area_bound_check(double area, double lambda1) {
  if (!(lambda1 >= 0.0)) throw std::invalid_argument("area bound needs a stable surface (lambda_1 >= 0)");
  if (!(area > 0.0)) throw std::invalid_argument("area must be positive");
  return 4.0 * kPi / (lambda1 + 1.0) - area;
}

double slice_form_coefficient(const SliceGeometry& slice, double mass, int l) {
  if (l == 0) return 0.0;
  const double area = slice.area;
  const double mu = l * (l + 1.0) / (slice.u * slice.u);
  return -std::sqrt(area) / (32.0 * std::pow(kPi, 1.5)) * mu * mu + mu / (4.0 * std::sqrt(kPi * area)) -
         1.5 * mass / area * mu + 0.75 * mass / area * slice.H * slice.H;
}

double slice_second_variation(const WarpFactor& w, double r, const HarmonicField& phi) {
  const SliceGeometry slice = slice_geometry(w, r);
  const double m = conserved_mass(w, r);
  const auto e = phi.degree_energy();
  double q = 0.0;
  for (int l = 1; l <= phi.lmax(); ++l) {
    if (e[l] == 0.0) continue;
    q += slice_form_coefficient(slice, m, l) * slice.u * slice.u * e[l];
  }
  return q;
}

QuadraticFormReport quadratic_form_report(const WarpFactor& w, double r, int lmax) {
  if (lmax < 1) throw std::invalid_argument("quadratic form needs lmax >= 1");
  const SliceGeometry slice = slice_geometry(w, r);
  const double m = conserved_mass(w, r);
  QuadraticFormReport rep{w.a(), r, lmax, {}, {}, std::numeric_limits<double>::infinity(), true};
  for (int l = 0; l <= lmax; ++l) {
    const double q = slice_form_coefficient(slice, m, l);
    const double wl = w22_degree_weight(l, slice.u);
    rep.Q_by_degree.push_back(q);
    rep.weights.push_back(wl);
    if (l >= 1) {
      rep.C_est = std::min(rep.C_est, std::abs(q) / wl);
      rep.definite = rep.definite && q < 0.0;
    }
  }
  return rep;
}

double second_variation_minimal(const WarpFactor& w, const HarmonicField& phi) {
  const WarpState s = w.evaluate(0.0);
  if (std::abs(2.0 * s.du / s.u) > kMinimalTol) throw std::invalid_argument("slice at r = 0 is not minimal");
  const double area = 4.0 * kPi * s.u * s.u;
  const auto e = phi.degree_energy();
  // int phi L phi and int (L phi)^2 on the slice, degree by degree.
  double phi_L_phi = 0.0, L_phi_sq = 0.0;
  for (int l = 0; l <= phi.lmax(); ++l) {
    const double lambda = lambda_of(s, l);
    const double energy = s.u * s.u * e[l];
    phi_L_phi -= lambda * energy;
    L_phi_sq += lambda * lambda * energy;
  }
  const double root = std::sqrt(area);
  const double pi32 = std::pow(kPi, 1.5);
  return -phi_L_phi * (16.0 * kPi - 4.0 / 3.0 * area) / (128.0 * pi32 * root) +
         root / (64.0 * pi32) * (-2.0 * L_phi_sq + 4.0 / 3.0 * phi_L_phi);
}

double fd_second_variation(const WarpFactor& w, double r, const HarmonicField& phi, double h, Stencil stencil) {
  if (!(h > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
  const auto grid = sphere_grid(std::max(2 * phi.lmax(), 16));
  const auto values = synthesize(*grid, phi);
  const double reach = 2.0 * h * max_abs(values);
  if (!w.in_range(r + reach) || !w.in_range(r - reach)) {
    std::ostringstream os;
    os.precision(17);
    os << "graphs at +-2h leave the warp range around r = " << r;
    throw std::out_of_range(os.str());
  }
  auto deficit = [&](double t) { return mass_deficit(build_graph(w, r, t * phi)); };
  const double d1 = deficit(h) + deficit(-h);
  if (stencil == Stencil::three_point) return d1 / (h * h);
  const double d2 = deficit(2.0 * h) + deficit(-2.0 * h);
  return (16.0 * d1 - d2) / (12.0 * h * h);
}

double strict_stability_inequality_check(const WarpFactor& w, const HarmonicField& phi) {
  require_single_eigenspace(phi);
  const WarpState s = w.evaluate(0.0);
  if (std::abs(2.0 * s.du / s.u) > kMinimalTol) throw std::invalid_argument("slice at r = 0 is not minimal");
  const double area = 4.0 * kPi * s.u * s.u;
  const auto e = phi.degree_energy();
  double phi_L_phi = 0.0, L_phi_sq = 0.0;
  for (int l = 0; l <= phi.lmax(); ++l) {
    const double lambda = lambda_of(s, l);
    phi_L_phi -= lambda * s.u * s.u * e[l];
    L_phi_sq += lambda * lambda * s.u * s.u * e[l];
  }
  return 2.0 * area * L_phi_sq - (8.0 * kPi - 2.0 * area) * (-phi_L_phi);
}

double weak_stability_margin(const WarpFactor& w, double r) {
  const WarpState s = w.evaluate(r);
  const WarpState s0 = w.evaluate(0.0);
  // lambda_l increases with l, so the minimum over l >= 1 sits at l = 1.
  return lambda_of(s, 1) - lambda_of(s0, 0);
}

WeakStabilityProfile weak_stability_profile(const WarpFactor& w, int n_points) {
  if (n_points < 2) throw std::invalid_argument("profile needs at least two points");
  if (!w.period()) throw SolverError("weak stability profile needs a detected period");
  const double half = 0.5 * *w.period();
  WeakStabilityProfile p;
  for (int i = 0; i < n_points; ++i) {
    const double r = half * i / (n_points - 1);
    p.r.push_back(r);
    p.margin.push_back(weak_stability_margin(w, r));
  }
  for (int i = 1; i < n_points; ++i) {
    if (p.margin[i] > 0.0) continue;
    double lo = p.r[i - 1], hi = p.r[i];
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
      const double mid = 0.5 * (lo + hi);
      (weak_stability_margin(w, mid) > 0.0 ? lo : hi) = mid;
    }
    p.flip_radius = 0.5 * (lo + hi);
    break;
  }
  return p;
}

}  // namespace hawking
