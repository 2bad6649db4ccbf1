#include "hawking/graph_surface.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace hawking {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMinGridLmax = 16;

double sum_rows(const SphereGrid& grid, std::span<const double> samples) { return grid.integrate(samples); }

}  // namespace

double GraphSurface::integrate(std::span<const double> samples) const {
  if (samples.size() != area_element_.size()) throw std::invalid_argument("sample count does not match surface grid");
  std::vector<double> weighted(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) weighted[i] = samples[i] * area_element_[i];
  return sum_rows(*grid_, weighted);
}

GraphSurface build_graph(const WarpFactor& warp, double base_r, const HarmonicField& phi, GraphOptions options) {
  const int degree = phi.degree();
  const int grid_lmax = options.grid_lmax > 0 ? options.grid_lmax : std::max(2 * phi.lmax(), kMinGridLmax);
  if (grid_lmax < 2 * degree) {
    std::ostringstream os;
    os << "graph function of degree " << degree << " needs a geometry grid of band limit >= " << 2 * degree
       << " (got " << grid_lmax << ")";
    throw std::invalid_argument(os.str());
  }

  GraphSurface s;
  s.base_r_ = base_r;
  s.a_ = warp.a();
  s.ambient_mass_ = warp.mass();
  s.phi_ = phi;
  s.grid_ = sphere_grid(grid_lmax);
  const SphereGrid& grid = *s.grid_;

  const LocalWarp local = warp.local(base_r);
  s.base_ = slice_geometry(base_r, warp.evaluate(base_r));
  const double u0 = local.u0();
  const double du0 = local.du0();
  const double H0 = -2.0 * du0 / u0;

  const HarmonicField phi_on_grid = degree <= grid_lmax ? phi.resized(std::min(phi.lmax(), grid_lmax)) : phi;
  const FieldDerivatives d = synthesize_derivatives(grid, phi_on_grid);

  const std::size_t n = grid.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double r = base_r + d.value[i];
    if (!warp.in_range(r)) {
      std::ostringstream os;
      os.precision(17);
      os << "graph leaves the tabulated warp range: r = " << r << " with r_max = " << warp.r_max();
      throw std::out_of_range(os.str());
    }
  }

  for (auto* v : {&s.rho_, &s.area_element_, &s.tilt_, &s.H_, &s.A_sq_, &s.K_, &s.ric_nn_, &s.hinv_tt_,
                  &s.hinv_tp_, &s.hinv_pp_}) {
    v->resize(n);
  }
  std::vector<double> d_area(n), d_h2(n), h2_density(n);

#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < n; ++i) {
    const auto v = local(d.value[i]);
    const double u = v.u, du = v.du, ddu = v.ddu;
    const double u2 = u * u;
    const double p1 = d.d_theta[i], p2 = d.d_phi[i];
    const double q = p1 * p1 + p2 * p2;
    const double t = q / u2;
    const double W = std::sqrt(1.0 + t);
    const double W_minus_1 = t / (W + 1.0);

    // Second fundamental form <nabla_{X_i} X_j, nu> in the round frame.
    const double c = u * du;
    const double k = 2.0 * du / u;
    const double ii_tt = (d.hess_tt[i] - c - k * p1 * p1) / W;
    const double ii_tp = (d.hess_tp[i] - k * p1 * p2) / W;
    const double ii_pp = (d.hess_pp[i] - c - k * p2 * p2) / W;
    // h^{-1} = (I - p p^T / (u^2 + q)) / u^2.
    const double denom = u2 + q;
    const double g_tt = (1.0 - p1 * p1 / denom) / u2;
    const double g_tp = (-p1 * p2 / denom) / u2;
    const double g_pp = (1.0 - p2 * p2 / denom) / u2;
    // Shape operator S = h^{-1} II.
    const double s_tt = g_tt * ii_tt + g_tp * ii_tp;
    const double s_tp = g_tt * ii_tp + g_tp * ii_pp;
    const double s_pt = g_tp * ii_tt + g_pp * ii_tp;
    const double s_pp = g_tp * ii_tp + g_pp * ii_pp;
    const double H = s_tt + s_pp;
    const double A_sq = s_tt * s_tt + 2.0 * s_tp * s_pt + s_pp * s_pp;

    // Ambient Ricci: -2u''/u along d/dr, (1-u'^2)/u^2 - u''/u along the sphere.
    const double radial = 1.0 / (W * W);
    const double ric = radial * (-2.0 * ddu / u) + (1.0 - radial) * ((1.0 - du * du) / u2 - ddu / u);
    // Gauss equation with R = 2.
    const double K = 0.5 * (kLambda - 2.0 * ric + H * H - A_sq);

    const double dA = u2 * W;
    s.rho_[i] = base_r + d.value[i];
    s.area_element_[i] = dA;
    s.tilt_[i] = 1.0 / W;
    s.H_[i] = H;
    s.A_sq_[i] = A_sq;
    s.K_[i] = K;
    s.ric_nn_[i] = ric;
    s.hinv_tt_[i] = g_tt;
    s.hinv_tp_[i] = g_tp;
    s.hinv_pp_[i] = g_pp;
    h2_density[i] = H * H * dA;

    // Increments against the base slice. H splits into a Hessian part and
    // -(u'/u) g(t) with g(t) = (2 + 3t) / (1 + t)^(3/2), g(0) = 2.
    const double delta_u2 = v.delta_u * (2.0 * u0 + v.delta_u);
    const double delta_dA = delta_u2 * W + u0 * u0 * W_minus_1;
    const double hess_part = (d.hess_tt[i] + d.hess_pp[i] - (p1 * p1 * d.hess_tt[i] + 2.0 * p1 * p2 * d.hess_tp[i] +
                                                             p2 * p2 * d.hess_pp[i]) /
                                                                denom) /
                             (W * u2);
    const double W3 = W * W * W;
    const double g = (2.0 + 3.0 * t) / W3;
    const double g_minus_2 = -t * t * (2.0 * W + 1.0) / ((W + 1.0) * (W + 1.0) * W3);
    const double delta_ratio = (v.delta_du * u0 - du0 * v.delta_u) / (u * u0);  // u'/u - u0'/u0
    const double delta_H = hess_part - delta_ratio * g - (du0 / u0) * g_minus_2;
    d_area[i] = delta_dA;
    d_h2[i] = H * H * delta_dA + u0 * u0 * delta_H * (2.0 * H0 + delta_H);
  }

  s.area_ = sum_rows(grid, s.area_element_);
  s.h2_integral_ = sum_rows(grid, h2_density);
  s.area_increment_ = sum_rows(grid, d_area);
  s.h2_increment_ = sum_rows(grid, d_h2);
  return s;
}

double hawking_mass(double area, double h2_integral) {
  return std::sqrt(area / (16.0 * kPi)) * (1.0 - h2_integral / (16.0 * kPi) - kLambda * area / (24.0 * kPi));
}

double hawking_mass(const GraphSurface& s) { return hawking_mass(s.area(), s.h2_integral()); }

double mass_deficit(const GraphSurface& s) {
  const auto& b = s.base_slice();
  const double A0 = 4.0 * kPi * b.u * b.u;
  const double I0 = 16.0 * kPi * b.u_prime * b.u_prime;
  const double dA = s.area_increment();
  const double dI = s.h2_integral_increment();
  const double root0 = std::sqrt(A0 / (16.0 * kPi));
  const double root = std::sqrt((A0 + dA) / (16.0 * kPi));
  const double bracket0 = 1.0 - I0 / (16.0 * kPi) - kLambda * A0 / (24.0 * kPi);
  const double d_root = dA / (16.0 * kPi * (root + root0));
  const double d_bracket = -dI / (16.0 * kPi) - kLambda * dA / (24.0 * kPi);
  return d_root * bracket0 + root * d_bracket;
}

std::vector<double> q_field(const GraphSurface& s) {
  const double area = s.area();
  const double mean_h2 = s.h2_integral() / area;
  const auto K = s.gauss_curvature();
  const auto A = s.second_fundamental_sq();
  std::vector<double> q(K.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    q[i] = 4.0 * kPi / area - K[i] + 0.5 * (kLambda - 2.0) + 0.25 * (2.0 * A[i] - mean_h2);
  }
  return q;
}

double q_integral(const GraphSurface& s) { return s.integrate(q_field(s)); }

std::vector<double> el_residual(const GraphSurface& s) {
  const SphereGrid& grid = s.grid();
  const std::size_t n = grid.size();
  // Delta_S H from the weak form: u^2 W Delta_S H = div_round(u^2 W h^{-1} grad H).
  const HarmonicField Hc = analyze(grid, s.H_);
  const FieldDerivatives dH = synthesize_derivatives(grid, Hc);
  std::vector<double> v_theta(n), v_phi(n);
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < n; ++i) {
    const double dA = s.area_element_[i];
    v_theta[i] = dA * (s.hinv_tt_[i] * dH.d_theta[i] + s.hinv_tp_[i] * dH.d_phi[i]);
    v_phi[i] = dA * (s.hinv_tp_[i] * dH.d_theta[i] + s.hinv_pp_[i] * dH.d_phi[i]);
  }
  const HarmonicField div = weak_divergence(grid, v_theta, v_phi, grid.lmax());
  const std::vector<double> lap = synthesize(grid, div);
  const std::vector<double> q = q_field(s);
  std::vector<double> residual(n);
  for (std::size_t i = 0; i < n; ++i) residual[i] = lap[i] / s.area_element_[i] + q[i] * s.H_[i];
  return residual;
}

double max_abs(std::span<const double> values) {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace hawking
