#include "hawking/warp_ode.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "hawking/errors.hpp"

namespace hawking {

namespace {

constexpr int kTaylorOrder = 40;
// Radius estimate uses the tail of the series.
constexpr int kTailBegin = kTaylorOrder - 6;
constexpr double kMaxStep = 0.05;

std::string describe(const char* what, double value) {
  std::ostringstream os;
  os.precision(17);
  os << what << " (got " << value << ")";
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// LocalWarp

LocalWarp::Series LocalWarp::expand(double u0, double du0) {
  // Coefficients a_k of u(s) = sum a_k s^k from 2 u u'' = 1 - u'^2 - u^2,
  // matched order by order; c_n are the coefficients of u''.
  Series series;
  auto& a = series.coeffs;
  a.assign(kTaylorOrder + 1, 0.0);
  std::array<double, kTaylorOrder + 1> c{};
  a[0] = u0;
  a[1] = du0;
  for (int n = 0; n + 2 <= kTaylorOrder; ++n) {
    double rhs = (n == 0) ? 1.0 : 0.0;
    for (int j = 0; j <= n; ++j) {
      const double bj = (j + 1) * a[j + 1];
      const double bnj = (n - j + 1) * a[n - j + 1];
      rhs -= bj * bnj + a[j] * a[n - j];
    }
    for (int j = 1; j <= n; ++j) rhs -= 2.0 * a[j] * c[n - j];
    c[n] = rhs / (2.0 * a[0]);
    a[n + 2] = c[n] / ((n + 1.0) * (n + 2.0));
  }

  double radius = std::numeric_limits<double>::infinity();
  for (int k = kTailBegin; k <= kTaylorOrder; ++k) {
    if (a[k] != 0.0) radius = std::min(radius, std::pow(std::abs(a[k]), -1.0 / k));
  }
  series.step = 0.3 * radius;
  return series;
}

LocalWarp::LocalWarp(double u0, double du0) : u0_(u0), du0_(du0), series_(expand(u0, du0)) {
  if (!(u0 > 0.0)) throw std::invalid_argument(describe("warp value must be positive", u0));
}

LocalWarp::Value LocalWarp::operator()(double s) const {
  double delta_u = 0.0;
  double delta_du = 0.0;
  const Series* series = &series_;
  Series recentred;
  double u = u0_;
  double du = du0_;
  double remaining = s;

  while (true) {
    const double step = std::abs(remaining) <= series->step
                            ? remaining
                            : std::copysign(series->step, remaining);
    const auto& a = series->coeffs;
    // Horner for sum_{k>=1} a_k t^k and sum_{k>=2} k a_k t^(k-1).
    double p = 0.0;
    double dp = 0.0;
    for (int k = kTaylorOrder; k >= 1; --k) p = p * step + a[k];
    p *= step;
    for (int k = kTaylorOrder; k >= 2; --k) dp = dp * step + k * a[k];
    dp *= step;
    delta_u += p;
    delta_du += dp;
    u = a[0] + p;
    du = a[1] + dp;
    remaining -= step;
    if (remaining == 0.0) break;
    recentred = expand(u, du);
    series = &recentred;
  }
  return {u, du, warp_acceleration(u, du), delta_u, delta_du};
}

// ---------------------------------------------------------------------------
// WarpFactor

WarpFactor::WarpFactor(double a, double mass, std::optional<double> period,
                       std::vector<WarpSample> samples)
    : a_(a), mass_(mass), period_(period), samples_(std::move(samples)) {
  const bool cylinder = (a == 1.0);
  if (!cylinder && !(a >= kMinWarpParameter && a <= kMaxWarpParameter)) {
    throw std::invalid_argument(describe("warp parameter a outside [1e-3, 1-1e-6]", a));
  }
  if (samples_.empty()) throw std::invalid_argument("warp factor needs at least one sample");
  const auto& first = samples_.front();
  if (first.r != 0.0 || first.u != a || first.du != 0.0) {
    throw std::invalid_argument("first warp sample must be (0, a, 0)");
  }
  const double expected_mass = cylinder ? 1.0 / 3.0 : mass_of_parameter(a);
  if (std::abs(mass - expected_mass) > 1e-12) {
    throw std::invalid_argument(describe("mass inconsistent with a", mass));
  }
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const auto& s = samples_[i];
    if (i > 0 && !(s.r > samples_[i - 1].r)) {
      throw std::invalid_argument("warp samples must be strictly increasing in r");
    }
    if (!(s.u > 0.0)) throw std::invalid_argument(describe("warp sample with u <= 0", s.u));
    if (!(s.du * s.du < 1.0)) throw std::invalid_argument(describe("warp sample with |u'| >= 1", s.du));
  }
  range_ = cylinder ? std::pair{1.0, 1.0} : std::pair{a, static_chart_roots(mass).second};
  if (!cylinder) {
    const auto given = period_;
    detect_period(1e-12);
    if (given) period_ = given;
  }
}

WarpFactor WarpFactor::cylinder(double r_max) {
  if (!(r_max > 0.0)) throw std::invalid_argument(describe("r_max must be positive", r_max));
  std::vector<WarpSample> samples;
  const int n = static_cast<int>(std::ceil(r_max / kMaxStep));
  for (int i = 0; i <= n; ++i) samples.push_back({r_max * i / n, 1.0, 0.0});
  return WarpFactor(1.0, 1.0 / 3.0, std::nullopt, std::move(samples));
}

bool WarpFactor::in_range(double r) const { return std::abs(r) <= r_max(); }

WarpState WarpFactor::evaluate(double r) const {
  if (!in_range(r)) {
    throw std::out_of_range(describe("radius outside the tabulated warp range", r));
  }
  const double ra = std::abs(r);
  auto it = std::lower_bound(samples_.begin(), samples_.end(), ra,
                             [](const WarpSample& s, double x) { return s.r < x; });
  if (it == samples_.end()) --it;
  if (it != samples_.begin() && (ra - std::prev(it)->r) < (it->r - ra)) --it;
  const LocalWarp local(it->u, it->du);
  const auto v = local(ra - it->r);
  const double du = (r < 0.0) ? -v.du : v.du;
  return {v.u, du, v.ddu};
}

LocalWarp WarpFactor::local(double r) const {
  const auto state = evaluate(r);
  return LocalWarp(state.u, state.du);
}

double WarpFactor::max_mass_drift() const {
  double drift = 0.0;
  for (const auto& s : samples_) drift = std::max(drift, std::abs(warp_first_integral(s.u, s.du) - mass_));
  return drift;
}

void WarpFactor::detect_period(double tol) {
  zeros_.clear();
  for (std::size_t i = 0; i + 1 < samples_.size(); ++i) {
    const double d0 = samples_[i].du;
    const double d1 = samples_[i + 1].du;
    if (d1 == 0.0) {
      zeros_.push_back(samples_[i + 1].r);
      continue;
    }
    // d0 == 0 is either r = 0 or a zero recorded on the previous interval.
    if (d0 == 0.0 || (d0 > 0.0) == (d1 > 0.0)) continue;
    double lo = samples_[i].r;
    double hi = samples_[i + 1].r;
    const bool rising = d0 < 0.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
      const double mid = 0.5 * (lo + hi);
      const double dm = evaluate(mid).du;
      if ((dm < 0.0) == rising) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    zeros_.push_back(0.5 * (lo + hi));
  }

  period_.reset();
  if (zeros_.size() < 2) return;
  // u returns to its minimum at every second zero.
  const double amplitude = range_.second - range_.first;
  const double match = std::max(100.0 * tol, 1e-3 * amplitude);
  for (std::size_t k = 1; k < zeros_.size(); k += 2) {
    if (std::abs(evaluate(zeros_[k]).u - a_) > match) return;
  }
  period_ = 2.0 * zeros_.back() / static_cast<double>(zeros_.size());
}

// ---------------------------------------------------------------------------
// Integration

WarpFactor solve_warp_factor(double a, double r_max, double tol) {
  if (!(a >= kMinWarpParameter && a <= kMaxWarpParameter)) {
    throw std::invalid_argument(describe("warp parameter a outside [1e-3, 1-1e-6]", a));
  }
  if (!(r_max > 0.0)) throw std::invalid_argument(describe("r_max must be positive", r_max));
  if (!(tol > 0.0)) throw std::invalid_argument(describe("tolerance must be positive", tol));

  // Dormand-Prince 5(4) tableau.
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                   b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  using State = std::array<double, 2>;
  auto rhs = [](const State& y) -> State { return {y[1], warp_acceleration(y[0], y[1])}; };
  auto axpy = [](const State& y, double h, std::initializer_list<std::pair<double, const State*>> terms) {
    State out = y;
    for (const auto& [coef, k] : terms) {
      out[0] += h * coef * (*k)[0];
      out[1] += h * coef * (*k)[1];
    }
    return out;
  };

  std::vector<WarpSample> samples{{0.0, a, 0.0}};
  State y{a, 0.0};
  State k1 = rhs(y);
  double r = 0.0;
  double h = std::min(kMaxStep, 1e-2 * a);

  while (r < r_max) {
    bool last = false;
    if (r + h >= r_max) {
      h = r_max - r;
      last = true;
    }
    const State k2 = rhs(axpy(y, h, {{a21, &k1}}));
    const State k3 = rhs(axpy(y, h, {{a31, &k1}, {a32, &k2}}));
    const State k4 = rhs(axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    const State k5 = rhs(axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    const State k6 = rhs(axpy(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
    const State y_new = axpy(y, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    const State k7 = rhs(y_new);

    double err = 0.0;
    for (int i = 0; i < 2; ++i) {
      const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double scale = tol + tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
      err = std::max(err, std::abs(e) / scale);
    }
    // Keep (u, u') inside the admissible region; reject steps that leave it.
    const bool admissible = y_new[0] > 0.0 && y_new[1] * y_new[1] < 1.0;

    if (err <= 1.0 && admissible) {
      r = last ? r_max : r + h;
      y = y_new;
      k1 = k7;
      samples.push_back({r, y[0], y[1]});
      const double grow = (err == 0.0) ? 5.0 : std::min(5.0, 0.9 * std::pow(err, -0.2));
      h = std::min(kMaxStep, h * grow);
    } else {
      const double shrink = admissible ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.2;
      h *= shrink;
    }
    if (h < 1e-14 * std::max(1.0, r)) {
      throw SolverError(describe("warp integration step size underflow at r", r));
    }
  }

  WarpFactor w(a, mass_of_parameter(a), std::nullopt, std::move(samples));
  w.detect_period(tol);
  return w;
}

WarpFactor solve_warp_periods(double a, double periods, double tol) {
  if (!(periods > 0.0)) throw std::invalid_argument(describe("number of periods must be positive", periods));
  double r_max = 8.0;
  for (;;) {
    WarpFactor probe = solve_warp_factor(a, r_max, tol);
    if (const auto p = probe.period()) {
      const double needed = periods * *p + 0.05 * *p;
      if (needed <= r_max) return probe;
      return solve_warp_factor(a, needed, tol);
    }
    r_max *= 2.0;
    if (r_max > 1e4) throw SolverError("no warp period detected below r = 1e4");
  }
}

// ---------------------------------------------------------------------------
// Slices

double conserved_mass(const WarpFactor& w, double r) {
  const auto s = w.evaluate(r);
  return warp_first_integral(s.u, s.du);
}

SliceGeometry slice_geometry(double r, const WarpState& s) {
  constexpr double pi = std::numbers::pi;
  SliceGeometry g{};
  g.r = r;
  g.u = s.u;
  g.u_prime = s.du;
  g.area = 4.0 * pi * s.u * s.u;
  g.H = -2.0 * s.du / s.u;
  g.A_norm_sq = 0.5 * g.H * g.H;
  g.gauss = 1.0 / (s.u * s.u);
  g.ric_nn = -2.0 * s.ddu / s.u;
  const double h2_integral = g.H * g.H * g.area;
  g.hawking = std::sqrt(g.area / (16.0 * pi)) *
              (1.0 - h2_integral / (16.0 * pi) - kLambda * g.area / (24.0 * pi));
  return g;
}

SliceGeometry slice_geometry(const WarpFactor& w, double r) { return slice_geometry(r, w.evaluate(r)); }

double slice_mass_derivative(const WarpState& s) {
  return 0.5 * s.du * (1.0 - s.du * s.du - s.u * s.u - 2.0 * s.u * s.ddu);
}

double slice_mass_derivative(const WarpFactor& w, double r) { return slice_mass_derivative(w.evaluate(r)); }

std::pair<double, double> static_chart_roots(double mass) {
  if (!(mass > 0.0 && mass < 1.0 / 3.0)) {
    throw std::invalid_argument(describe("mass outside (0, 1/3): no static region", mass));
  }
  // Trigonometric form of the three real roots of r^3 - 3r + 6m.
  constexpr double pi = std::numbers::pi;
  const double theta = std::acos(-3.0 * mass) / 3.0;
  double lo = 2.0 * std::cos(theta - 2.0 * pi / 3.0);
  double hi = 2.0 * std::cos(theta);
  auto polish = [mass](double x) {
    for (int i = 0; i < 3; ++i) {
      const double d = 3.0 * x * x - 3.0;
      if (std::abs(d) < 1e-8) break;
      x -= (x * x * x - 3.0 * x + 6.0 * mass) / d;
    }
    return x;
  };
  lo = polish(lo);
  hi = polish(hi);
  return {lo, hi};
}

}  // namespace hawking
