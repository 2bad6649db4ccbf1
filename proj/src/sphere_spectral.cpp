#include "hawking/sphere_spectral.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace hawking {

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt2 = std::sqrt(2.0);

void check_lmax(int lmax) {
  if (lmax < 0) throw std::invalid_argument("band limit must be nonnegative");
}

void check_fits(const SphereGrid& grid, const HarmonicField& f) {
  if (f.lmax() > grid.lmax()) {
    throw std::invalid_argument("field band limit " + std::to_string(f.lmax()) +
                                " exceeds grid band limit " + std::to_string(grid.lmax()));
  }
}

void check_samples(const SphereGrid& grid, std::size_t n) {
  if (n != grid.size()) {
    throw std::invalid_argument("sample count " + std::to_string(n) + " does not match grid size " +
                                std::to_string(grid.size()));
  }
}

// Nodes (descending in x = cos theta) and weights of n-point Gauss-Legendre.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  // P_n and its derivative by the three-term recurrence.
  auto legendre_n = [n](double z, double& dp) {
    double p1 = 1.0, p2 = 0.0;
    for (int j = 1; j <= n; ++j) {
      const double p3 = p2;
      p2 = p1;
      p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
    }
    dp = n * (z * p1 - p2) / (z * z - 1.0);
    return p1;
  };
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      const double dz = legendre_n(z, dp) / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    legendre_n(z, dp);
    x[i] = z;
    x[n - 1 - i] = -z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  if (n % 2 == 1) x[n / 2] = 0.0;
}

}  // namespace

// ---------------------------------------------------------------------------
// SphereGrid

SphereGrid::SphereGrid(int lmax) : lmax_(lmax) {
  check_lmax(lmax);
  const int nt = n_theta();
  const int np = n_phi();
  std::vector<double> x;
  gauss_legendre(nt, x, row_weight_);
  theta_.resize(nt);
  cos_theta_ = x;
  sin_theta_.resize(nt);
  for (int k = 0; k < nt; ++k) {
    theta_[k] = std::acos(x[k]);
    sin_theta_[k] = std::sqrt((1.0 - x[k]) * (1.0 + x[k]));
  }
  phi_.resize(np);
  for (int j = 0; j < np; ++j) phi_[j] = 2.0 * kPi * j / np;
  azimuth_weight_ = 2.0 * kPi / np;

  cos_.resize(static_cast<std::size_t>(lmax + 1) * np);
  sin_.resize(cos_.size());
  for (int m = 0; m <= lmax; ++m) {
    for (int j = 0; j < np; ++j) {
      cos_[static_cast<std::size_t>(m) * np + j] = std::cos(m * phi_[j]);
      sin_[static_cast<std::size_t>(m) * np + j] = std::sin(m * phi_[j]);
    }
  }

  const std::size_t per_row = tri(lmax + 1, 0);
  legendre_.assign(per_row * nt, 0.0);
  dlegendre_.assign(per_row * nt, 0.0);
  for (int k = 0; k < nt; ++k) {
    const double c = cos_theta_[k];
    const double s = sin_theta_[k];
    double* p = legendre_.data() + row_offset(k);
    double* dp = dlegendre_.data() + row_offset(k);
    double pmm = 1.0 / std::sqrt(4.0 * kPi);
    for (int m = 0; m <= lmax; ++m) {
      if (m > 0) pmm *= -std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s;
      p[tri(m, m)] = pmm;
      if (m + 1 <= lmax) p[tri(m + 1, m)] = std::sqrt(2.0 * m + 3.0) * c * pmm;
      for (int l = m + 2; l <= lmax; ++l) {
        const double alm = std::sqrt((4.0 * l * l - 1.0) / (static_cast<double>(l) * l - m * m));
        const double blm = std::sqrt(((l - 1.0) * (l - 1.0) - m * m) / (4.0 * (l - 1.0) * (l - 1.0) - 1.0));
        p[tri(l, m)] = alm * (c * p[tri(l - 1, m)] - blm * p[tri(l - 2, m)]);
      }
      // dP_l^m/dtheta = (l cos P_l^m - sqrt((2l+1)(l^2-m^2)/(2l-1)) P_{l-1}^m) / sin
      for (int l = m; l <= lmax; ++l) {
        double v = l * c * p[tri(l, m)];
        if (l > m) {
          v -= std::sqrt((2.0 * l + 1.0) * (static_cast<double>(l) * l - m * m) / (2.0 * l - 1.0)) *
               p[tri(l - 1, m)];
        }
        dp[tri(l, m)] = v / s;
      }
    }
  }
}

double SphereGrid::integrate(std::span<const double> samples) const {
  check_samples(*this, samples.size());
  // Fixed summation order: rows, then row totals.
  double total = 0.0;
  for (int k = 0; k < n_theta(); ++k) {
    double row = 0.0;
    for (int j = 0; j < n_phi(); ++j) row += samples[node(k, j)];
    total += row_weight_[k] * row;
  }
  return total * azimuth_weight_;
}

std::shared_ptr<const SphereGrid> sphere_grid(int lmax) {
  check_lmax(lmax);
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const SphereGrid>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[lmax];
  if (!slot) slot = std::make_shared<const SphereGrid>(lmax);
  return slot;
}

// ---------------------------------------------------------------------------
// HarmonicField

HarmonicField::HarmonicField(int lmax) : lmax_(lmax) {
  check_lmax(lmax);
  coeffs_.assign(count(lmax), 0.0);
}

HarmonicField HarmonicField::constant(int lmax, double value) {
  HarmonicField f(lmax);
  f(0, 0) = value * std::sqrt(4.0 * kPi);
  return f;
}

HarmonicField HarmonicField::single(int lmax, int l, int m, double amplitude) {
  if (l < 0 || l > lmax || m < -l || m > l) throw std::invalid_argument("harmonic index out of range");
  HarmonicField f(lmax);
  f(l, m) = amplitude;
  return f;
}

HarmonicField HarmonicField::resized(int lmax) const {
  HarmonicField out(lmax);
  for (int l = 0; l <= lmax_; ++l) {
    for (int m = -l; m <= l; ++m) {
      const double c = (*this)(l, m);
      if (l > lmax) {
        if (c != 0.0) throw std::invalid_argument("resizing would drop nonzero harmonic content");
        continue;
      }
      out(l, m) = c;
    }
  }
  return out;
}

int HarmonicField::degree() const {
  for (int l = lmax_; l > 0; --l) {
    for (int m = -l; m <= l; ++m) {
      if ((*this)(l, m) != 0.0) return l;
    }
  }
  return 0;
}

double HarmonicField::mean() const { return coeffs_[0] / std::sqrt(4.0 * kPi); }

HarmonicField HarmonicField::without_mean() const {
  HarmonicField out = *this;
  out.coeffs_[0] = 0.0;
  return out;
}

double HarmonicField::norm_sq() const {
  double s = 0.0;
  for (double c : coeffs_) s += c * c;
  return s;
}

std::vector<double> HarmonicField::degree_energy() const {
  std::vector<double> e(lmax_ + 1, 0.0);
  for (int l = 0; l <= lmax_; ++l) {
    for (int m = -l; m <= l; ++m) e[l] += (*this)(l, m) * (*this)(l, m);
  }
  return e;
}

HarmonicField& HarmonicField::operator+=(const HarmonicField& other) {
  if (other.lmax_ > lmax_) *this = resized(other.lmax_);
  for (std::size_t i = 0; i < other.coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

HarmonicField& HarmonicField::operator*=(double s) {
  for (double& c : coeffs_) c *= s;
  return *this;
}

// ---------------------------------------------------------------------------
// Parallel transforms. Each row (or each order m) is owned by one thread, so
// results do not depend on the thread count.

std::vector<double> synthesize(const SphereGrid& grid, const HarmonicField& f) {
  check_fits(grid, f);
  const int L = f.lmax();
  const int nt = grid.n_theta();
  const int np = grid.n_phi();
  std::vector<double> out(grid.size());
#pragma omp parallel for schedule(static)
  for (int k = 0; k < nt; ++k) {
    std::vector<double> a(L + 1, 0.0), b(L + 1, 0.0);
    for (int m = 0; m <= L; ++m) {
      double sa = 0.0, sb = 0.0;
      for (int l = m; l <= L; ++l) {
        const double p = grid.legendre(k, l, m);
        sa += f(l, m) * p;
        if (m > 0) sb += f(l, -m) * p;
      }
      a[m] = (m == 0) ? sa : kSqrt2 * sa;
      b[m] = kSqrt2 * sb;
    }
    for (int j = 0; j < np; ++j) {
      double v = a[0];
      for (int m = 1; m <= L; ++m) v += a[m] * grid.cos_m(m, j) + b[m] * grid.sin_m(m, j);
      out[grid.node(k, j)] = v;
    }
  }
  return out;
}

FieldDerivatives synthesize_derivatives(const SphereGrid& grid, const HarmonicField& f) {
  check_fits(grid, f);
  const int L = f.lmax();
  const int nt = grid.n_theta();
  const int np = grid.n_phi();
  FieldDerivatives d;
  for (auto* v : {&d.value, &d.d_theta, &d.d_phi, &d.hess_tt, &d.hess_tp, &d.hess_pp}) v->resize(grid.size());

#pragma omp parallel for schedule(static)
  for (int k = 0; k < nt; ++k) {
    // Per order m: value, theta-derivative and l(l+1)-weighted sums for the
    // cosine (a*) and sine (b*) parts.
    std::vector<double> a(L + 1), at(L + 1), al(L + 1), b(L + 1), bt(L + 1), bl(L + 1);
    for (int m = 0; m <= L; ++m) {
      double sa = 0, sat = 0, sal = 0, sb = 0, sbt = 0, sbl = 0;
      for (int l = m; l <= L; ++l) {
        const double p = grid.legendre(k, l, m);
        const double dp = grid.legendre_dtheta(k, l, m);
        const double ll = l * (l + 1.0);
        const double ca = f(l, m);
        sa += ca * p;
        sat += ca * dp;
        sal += ll * ca * p;
        if (m > 0) {
          const double cb = f(l, -m);
          sb += cb * p;
          sbt += cb * dp;
          sbl += ll * cb * p;
        }
      }
      const double s = (m == 0) ? 1.0 : kSqrt2;
      a[m] = s * sa, at[m] = s * sat, al[m] = s * sal;
      b[m] = s * sb, bt[m] = s * sbt, bl[m] = s * sbl;
    }
    const double sn = grid.sin_theta(k);
    const double cot = grid.cos_theta(k) / sn;
    for (int j = 0; j < np; ++j) {
      double v = 0, vt = 0, vl = 0, vp = 0, vpp = 0, vtp = 0;
      for (int m = 0; m <= L; ++m) {
        const double cm = grid.cos_m(m, j);
        const double sm = grid.sin_m(m, j);
        v += a[m] * cm + b[m] * sm;
        vt += at[m] * cm + bt[m] * sm;
        vl += al[m] * cm + bl[m] * sm;
        vp += m * (-a[m] * sm + b[m] * cm);
        vpp -= static_cast<double>(m) * m * (a[m] * cm + b[m] * sm);
        vtp += m * (-at[m] * sm + bt[m] * cm);
      }
      // Legendre equation: f_tt = -cot f_t - f_pp / sin^2 - sum l(l+1) c Y.
      const double vtt = -cot * vt - vpp / (sn * sn) - vl;
      const std::size_t n = grid.node(k, j);
      d.value[n] = v;
      d.d_theta[n] = vt;
      d.d_phi[n] = vp / sn;
      d.hess_tt[n] = vtt;
      d.hess_tp[n] = (vtp - cot * vp) / sn;
      d.hess_pp[n] = vpp / (sn * sn) + cot * vt;
    }
  }
  return d;
}

namespace {

// Azimuthal projections of one row: c[m] = sum_j v cos(m phi_j), s[m] likewise.
void row_fourier(const SphereGrid& grid, std::span<const double> v, int k, int L, double* c, double* s) {
  const int np = grid.n_phi();
  for (int m = 0; m <= L; ++m) {
    double sc = 0.0, ss = 0.0;
    for (int j = 0; j < np; ++j) {
      const double x = v[grid.node(k, j)];
      sc += x * grid.cos_m(m, j);
      ss += x * grid.sin_m(m, j);
    }
    c[m] = sc * grid.azimuth_weight();
    s[m] = ss * grid.azimuth_weight();
  }
}

}  // namespace

HarmonicField analyze(const SphereGrid& grid, std::span<const double> samples, int lmax_out) {
  check_samples(grid, samples.size());
  if (lmax_out < 0 || lmax_out > grid.lmax()) throw std::invalid_argument("analysis band limit exceeds grid");
  const int L = lmax_out;
  const int nt = grid.n_theta();
  std::vector<double> fc(static_cast<std::size_t>(nt) * (L + 1)), fs(fc.size());
#pragma omp parallel for schedule(static)
  for (int k = 0; k < nt; ++k) {
    row_fourier(grid, samples, k, L, &fc[static_cast<std::size_t>(k) * (L + 1)],
                &fs[static_cast<std::size_t>(k) * (L + 1)]);
  }
  HarmonicField out(L);
#pragma omp parallel for schedule(dynamic)
  for (int m = 0; m <= L; ++m) {
    const double s = (m == 0) ? 1.0 : kSqrt2;
    for (int l = m; l <= L; ++l) {
      double ca = 0.0, cb = 0.0;
      for (int k = 0; k < nt; ++k) {
        const double wp = grid.row_weight(k) * grid.legendre(k, l, m);
        ca += wp * fc[static_cast<std::size_t>(k) * (L + 1) + m];
        cb += wp * fs[static_cast<std::size_t>(k) * (L + 1) + m];
      }
      out(l, m) = s * ca;
      if (m > 0) out(l, -m) = s * cb;
    }
  }
  return out;
}

HarmonicField analyze(const SphereGrid& grid, std::span<const double> samples) {
  return analyze(grid, samples, grid.lmax());
}

HarmonicField weak_divergence(const SphereGrid& grid, std::span<const double> v_theta,
                              std::span<const double> v_phi, int lmax_out) {
  check_samples(grid, v_theta.size());
  check_samples(grid, v_phi.size());
  if (lmax_out < 0 || lmax_out > grid.lmax()) throw std::invalid_argument("analysis band limit exceeds grid");
  const int L = lmax_out;
  const int nt = grid.n_theta();
  const std::size_t stride = L + 1;
  std::vector<double> tc(nt * stride), ts(tc.size()), pc(tc.size()), ps(tc.size());
#pragma omp parallel for schedule(static)
  for (int k = 0; k < nt; ++k) {
    row_fourier(grid, v_theta, k, L, &tc[k * stride], &ts[k * stride]);
    row_fourier(grid, v_phi, k, L, &pc[k * stride], &ps[k * stride]);
  }
  HarmonicField out(L);
#pragma omp parallel for schedule(dynamic)
  for (int m = 0; m <= L; ++m) {
    const double s = (m == 0) ? 1.0 : kSqrt2;
    for (int l = m; l <= L; ++l) {
      double ca = 0.0, cb = 0.0;
      for (int k = 0; k < nt; ++k) {
        const double w = grid.row_weight(k);
        const double p = grid.legendre(k, l, m) / grid.sin_theta(k);
        const double dp = grid.legendre_dtheta(k, l, m);
        const std::size_t i = k * stride + m;
        // <grad Y, V> for cos(m phi) and sin(m phi) parts.
        ca += w * (dp * tc[i] - m * p * ps[i]);
        cb += w * (dp * ts[i] + m * p * pc[i]);
      }
      out(l, m) = -s * ca;
      if (m > 0) out(l, -m) = -s * cb;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Operators and norms

HarmonicField laplacian_unit(const HarmonicField& f) {
  HarmonicField out = f;
  for (int l = 0; l <= f.lmax(); ++l) {
    for (int m = -l; m <= l; ++m) out(l, m) *= -l * (l + 1.0);
  }
  return out;
}

double gradient_norm_sq_integral(const HarmonicField& f) {
  const auto e = f.degree_energy();
  double s = 0.0;
  for (int l = 0; l <= f.lmax(); ++l) s += l * (l + 1.0) * e[l];
  return s;
}

double w22_degree_weight(int l, double u) {
  const double mu = l * (l + 1.0) / (u * u);
  return 1.0 + mu + mu * mu;
}

SobolevNorms sobolev_norms(const HarmonicField& f, double u) {
  if (!(u > 0.0)) throw std::invalid_argument("slice warp value must be positive");
  const auto e = f.degree_energy();
  double l2 = 0.0, grad = 0.0, lap = 0.0;
  for (int l = 0; l <= f.lmax(); ++l) {
    const double ll = l * (l + 1.0);
    l2 += u * u * e[l];
    grad += ll * e[l];
    lap += ll * ll * e[l] / (u * u);
  }
  SobolevNorms n{};
  n.l2 = std::sqrt(l2);
  n.w12 = std::sqrt(l2 + grad);
  n.w22 = std::sqrt(l2 + grad + lap);

  const auto grid = sphere_grid(std::max(2 * f.lmax(), 8));
  const auto d = synthesize_derivatives(*grid, f);
  for (std::size_t i = 0; i < grid->size(); ++i) {
    n.c0 = std::max(n.c0, std::abs(d.value[i]));
    n.c1 = std::max(n.c1, std::hypot(d.d_theta[i], d.d_phi[i]) / u);
    const double hess = std::sqrt(d.hess_tt[i] * d.hess_tt[i] + 2.0 * d.hess_tp[i] * d.hess_tp[i] +
                                  d.hess_pp[i] * d.hess_pp[i]);
    n.c2 = std::max(n.c2, hess / (u * u));
  }
  return n;
}

}  // namespace hawking
