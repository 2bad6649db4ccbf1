#include "hawking/json_io.hpp"

#include <cstdio>
#include <stdexcept>

namespace hawking {

namespace {

double get_number(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw std::invalid_argument(std::string("missing numeric field '") + key + "'");
  }
  return j.at(key).get<double>();
}

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Json to_json(const WarpFactor& w) {
  Json samples = Json::array();
  for (const auto& s : w.samples()) samples.push_back({s.r, s.u, s.du});
  Json j;
  j["a"] = w.a();
  j["mass"] = w.mass();
  j["period"] = w.period() ? Json(*w.period()) : Json(nullptr);
  j["samples"] = std::move(samples);
  return j;
}

WarpFactor warp_from_json(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("warp factor JSON must be an object");
  const double a = get_number(j, "a");
  const double mass = get_number(j, "mass");
  std::optional<double> period;
  if (j.contains("period") && !j.at("period").is_null()) period = get_number(j, "period");
  if (!j.contains("samples") || !j.at("samples").is_array()) throw std::invalid_argument("missing 'samples' array");
  std::vector<WarpSample> samples;
  samples.reserve(j.at("samples").size());
  for (const auto& row : j.at("samples")) {
    if (!row.is_array() || row.size() != 3) throw std::invalid_argument("samples must be [r, u, uprime] triples");
    samples.push_back({row[0].get<double>(), row[1].get<double>(), row[2].get<double>()});
  }
  return WarpFactor(a, mass, period, std::move(samples));
}

Json to_json(const HarmonicField& f) {
  Json coeffs = Json::array();
  for (int l = 0; l <= f.lmax(); ++l) {
    for (int m = -l; m <= l; ++m) {
      if (f(l, m) != 0.0) coeffs.push_back({l, m, f(l, m)});
    }
  }
  return {{"lmax", f.lmax()}, {"coeffs", std::move(coeffs)}};
}

HarmonicField field_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("lmax") || !j.at("lmax").is_number_integer()) {
    throw std::invalid_argument("harmonic field JSON needs an integer 'lmax'");
  }
  const int lmax = j.at("lmax").get<int>();
  if (lmax < 0) throw std::invalid_argument("lmax must be nonnegative");
  HarmonicField f(lmax);
  if (!j.contains("coeffs")) return f;
  for (const auto& c : j.at("coeffs")) {
    if (!c.is_array() || c.size() != 3 || !c[0].is_number_integer() || !c[1].is_number_integer() ||
        !c[2].is_number()) {
      throw std::invalid_argument("coeffs entries must be [l, m, value]");
    }
    const int l = c[0].get<int>(), m = c[1].get<int>();
    if (l < 0 || l > lmax || m < -l || m > l) throw std::invalid_argument("coefficient index outside band limit");
    f(l, m) = c[2].get<double>();
  }
  return f;
}

Json to_json(const SliceGeometry& s) {
  return {{"r", s.r},         {"u", s.u},         {"u_prime", s.u_prime},     {"area", s.area},
          {"H", s.H},         {"A_norm_sq", s.A_norm_sq}, {"gauss", s.gauss}, {"ric_nn", s.ric_nn},
          {"hawking", s.hawking}};
}

Json to_json(const JacobiSpectrum& s) {
  return {{"r", s.r}, {"u", s.u}, {"potential", s.potential}, {"lambda_by_degree", s.lambda_by_degree}};
}

Json to_json(const QuadraticFormReport& q) {
  return {{"a", q.a},           {"r", q.r},         {"lmax", q.lmax},         {"Q_by_degree", q.Q_by_degree},
          {"weights", q.weights}, {"C_est", q.C_est}, {"definite", q.definite}};
}

Json to_json(const SweepConfig& c) {
  return {{"a", c.a},
          {"base_r", c.base_r},
          {"epsilon", c.epsilon},
          {"n_samples", c.n_samples},
          {"master_seed", c.master_seed},
          {"lmax", c.lmax},
          {"fd_step", c.fd_step},
          {"ode_tol", c.ode_tol},
          {"tol", c.tol},
          {"ratio_slack", c.ratio_slack}};
}

Json to_json(const SweepRecord& r) {
  return {{"index", r.index},       {"seed", r.seed},     {"c2_norm", r.c2_norm},
          {"w22_norm", r.w22_norm}, {"deficit", r.deficit}, {"prediction", r.prediction},
          {"ratio", r.ratio},       {"classification", r.classification}, {"pass", r.pass}};
}

Json to_json(const SweepReport& r) {
  Json records = Json::array();
  for (const auto& rec : r.records) records.push_back(to_json(rec));
  return {{"config", to_json(r.config)}, {"slice_mass", r.slice_mass}, {"C_est", r.C_est},
          {"records", std::move(records)}, {"n_pass", r.n_pass},       {"all_pass", r.all_pass}};
}

Json to_json(const FoliationScan& s) {
  Json weak = {{"r", s.weak_stability.r}, {"margin", s.weak_stability.margin}};
  weak["flip_radius"] = s.weak_stability.flip_radius ? Json(*s.weak_stability.flip_radius) : Json(nullptr);
  return {{"a", s.a},
          {"mass", s.mass},
          {"period", s.period},
          {"r", s.r},
          {"H", s.H},
          {"hawking", s.hawking},
          {"max_mass_deviation", s.max_mass_deviation},
          {"max_mass_derivative", s.max_mass_derivative},
          {"H_negative_on_half_period", s.H_negative_on_half_period},
          {"H_odd", s.H_odd},
          {"dH_dr_at_0", s.dH_dr_at_0},
          {"lambda0", s.lambda0},
          {"weak_stability", std::move(weak)}};
}

Json to_json(const ConvergenceReport& c) {
  return {{"a", c.a},
          {"r", c.r},
          {"lmax_values", c.lmax_values},
          {"mass_by_lmax", c.mass_by_lmax},
          {"spectral_by_lmax", c.spectral_by_lmax},
          {"steps", c.steps},
          {"fd_error", c.fd_error},
          {"fd_slope", c.fd_slope},
          {"spectral_value", c.spectral_value}};
}

Json surface_report(const GraphSurface& s) {
  return {{"base_r", s.base_r()},
          {"a", s.a()},
          {"area", s.area()},
          {"hawking_mass", hawking_mass(s)},
          {"el_residual_max", max_abs(el_residual(s))},
          {"q_integral", q_integral(s)},
          {"phi", to_json(s.phi())}};
}

std::string csv_field(std::string_view v) {
  if (v.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(v);
  std::string out = "\"";
  for (char c : v) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string sweep_csv(const SweepReport& r) {
  std::string out = "index,seed,c2_norm,w22_norm,deficit,prediction,ratio,classification,pass\r\n";
  for (const auto& rec : r.records) {
    out += std::to_string(rec.index) + ',' + std::to_string(rec.seed) + ',' + number(rec.c2_norm) + ',' +
           number(rec.w22_norm) + ',' + number(rec.deficit) + ',' + number(rec.prediction) + ',' +
           number(rec.ratio) + ',' + csv_field(rec.classification) + ',' + (rec.pass ? "true" : "false") + "\r\n";
  }
  return out;
}

}  // namespace hawking
