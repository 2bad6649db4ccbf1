#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "hawking/errors.hpp"
#include "hawking/json_io.hpp"
#include "hawking/sweep_runner.hpp"

using namespace hawking;
using doctest::Approx;

namespace {

const WarpFactor& warp05() {
  static const WarpFactor w = solve_warp_periods(0.5, 1.0, 1e-12);
  return w;
}

SweepConfig small_config() {
  SweepConfig c;
  c.n_samples = 12;
  c.lmax = 16;
  return c;
}

}  // namespace

TEST_CASE("seeds depend only on master seed and index") {
  CHECK(sample_seed(42, 0) == sample_seed(42, 0));
  CHECK(sample_seed(42, 0) != sample_seed(42, 1));
  CHECK(sample_seed(42, 0) != sample_seed(43, 0));
  CHECK(random_field(7, 16) == random_field(7, 16));
  const auto f = random_field(7, 16);
  CHECK(f.degree() == 8);
  CHECK(f(0, 0) == 0.0);
}

TEST_CASE("config validation") {
  SweepConfig c;
  c.epsilon = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = SweepConfig{};
  c.n_samples = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = SweepConfig{};
  c.a = 1.2;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  CHECK_NOTHROW(SweepConfig{}.validate());
}

TEST_CASE("sweep deficits are negative and bounded") {
  for (double r : {0.0, 0.4}) {
    auto cfg = small_config();
    cfg.base_r = r;
    const auto rep = perturbation_sweep(cfg, warp05());
    CHECK(rep.all_pass);
    CHECK(rep.n_pass == cfg.n_samples);
    for (const auto& rec : rep.records) {
      CHECK(rec.deficit < 0.0);
      CHECK(rec.c2_norm <= cfg.epsilon * (1 + 1e-12));
      CHECK(rec.classification == "graph");
      CHECK(rec.deficit == Approx(rec.prediction).epsilon(0.05));
    }
  }
}

TEST_CASE("sweep records do not depend on the worker count") {
  auto cfg = small_config();
  cfg.workers = 1;
  const auto one = to_json(perturbation_sweep(cfg, warp05())).dump();
  cfg.workers = 3;
  CHECK(to_json(perturbation_sweep(cfg, warp05())).at("records").dump() == Json::parse(one).at("records").dump());
}

TEST_CASE("constant sample is a slice") {
  const auto cfg = small_config();
  const auto form = quadratic_form_report(warp05(), 0.0, cfg.lmax);
  const auto rec = evaluate_sample(cfg, warp05(), form, 0, 1, HarmonicField::constant(8, 1e-3));
  CHECK(rec.classification == "slice");
  CHECK(rec.pass);
  CHECK(std::abs(rec.deficit) < 1e-15);
}

TEST_CASE("quadratic scaling") {
  const auto phi = HarmonicField::single(6, 3, 2, 2.0);
  const auto pts = quadratic_scaling(warp05(), 0.4, phi, {1e-2, 1e-3, 1e-4});
  for (const auto& p : pts) CHECK(p.deficit < 0.0);
  CHECK(pts[1].ratio == Approx(1.0).epsilon(0.05));
  CHECK(pts[2].normalized == Approx(pts[1].normalized).epsilon(0.05));
  CHECK(std::abs(pts[2].ratio - 1.0) < std::abs(pts[0].ratio - 1.0) + 1e-12);
}

TEST_CASE("foliation scan") {
  const auto s = foliation_scan(warp05(), 64);
  CHECK(s.r.size() == 64);
  CHECK(s.max_mass_deviation < 1e-8);
  CHECK(s.max_mass_derivative < 1e-8);
  CHECK(s.H_negative_on_half_period);
  CHECK(s.H_odd);
  CHECK(s.dH_dr_at_0 == Approx(-s.lambda0).epsilon(1e-6));
  CHECK(s.weak_stability.margin.front() > 0.0);
  CHECK_THROWS_AS(foliation_scan(solve_warp_factor(0.5, 1.0, 1e-10), 64), SolverError);
}

TEST_CASE("critical point classifier") {
  const auto slice = critical_point_classifier(build_graph(warp05(), 0.7, HarmonicField(4)), 1e-7);
  CHECK(slice.critical);
  CHECK(slice.cls == CriticalClass::slice);
  const auto minimal = critical_point_classifier(build_graph(warp05(), 0.0, HarmonicField(4)), 1e-7);
  CHECK(minimal.critical);
  CHECK(minimal.cls == CriticalClass::minimal);
  CHECK(minimal.slice);
  const auto none = critical_point_classifier(build_graph(warp05(), 0.3, HarmonicField::single(8, 2, 0, 0.05)), 1e-7);
  CHECK_FALSE(none.critical);
  CHECK(none.cls == CriticalClass::none);
  for (std::uint64_t seed = 1; seed < 6; ++seed) {
    auto phi = random_field(seed, 8);
    phi *= 1e-3;
    CHECK_FALSE(critical_point_classifier(build_graph(warp05(), 0.5, phi), 1e-7).critical);
  }
}

TEST_CASE("convergence study") {
  const auto c = convergence_study(warp05(), 0.3, 5);
  CHECK(c.fd_slope == Approx(2.0).epsilon(0.1));
  CHECK(std::abs(c.mass_by_lmax[2] - c.mass_by_lmax[1]) < 1e-9);
  CHECK(std::abs(c.spectral_by_lmax[2] - c.spectral_by_lmax[0]) < 1e-12);
  CHECK(loglog_slope({1, 10, 100}, {1, 100, 10000}) == Approx(2.0));
}
