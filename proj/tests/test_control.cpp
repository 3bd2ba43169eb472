#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "conjmap/control.hpp"
#include "conjmap/upo.hpp"

#include <cmath>

using namespace conjmap;

TEST_CASE("dead-beat gain: scalar case") {
  Mat a(1, 1);
  a << 3.0;
  Vec b(1);
  b << 1.0;
  Vec k = dead_beat_gain(a, b);
  CHECK(k[0] == 3.0);  // kick row is -k, closing the loop to exactly zero
  CHECK(a(0, 0) - b[0] * k[0] == 0.0);
}

TEST_CASE("dead-beat gain: companion pair is nilpotent in two steps") {
  Mat a(2, 2);
  a << 0.0, 1.0, -0.24, 1.1;
  Vec b(2);
  b << 0.0, 1.0;
  Vec k = dead_beat_gain(a, b);
  Mat closed = a - b * k.transpose();
  // characteristic polynomial z^2: trace and determinant both zero
  CHECK(std::abs(closed.trace()) < 1e-13);
  CHECK(std::abs(closed.determinant()) < 1e-13);
  CHECK((closed * closed).norm() < 1e-12);
}

TEST_CASE("dead-beat gain: generic 2x2 closes to nilpotent") {
  Mat a(2, 2);
  a << 1.7, -0.3, 0.9, 0.4;
  Vec b(2);
  b << 0.5, -1.2;
  Vec k = dead_beat_gain(a, b);
  Mat closed = a - b * k.transpose();
  CHECK((closed * closed).norm() < 1e-12);
}

TEST_CASE("uncontrollable pair is rejected") {
  Mat a = Mat::Identity(2, 2);
  Vec b = Vec::Zero(2);
  CHECK_THROWS_AS(dead_beat_gain(a, b), std::invalid_argument);
}

TEST_CASE("rossler period-1 orbit: unstable multiplier and lock-on" *
          doctest::timeout(1200)) {
  SystemSpec sys = rossler_system(11.0);
  SectionSpec section = rossler_section_full();
  Vec x0(3);
  x0 << 0.0, -15.0, 0.0;
  SectionDataset ds = collect_section_data(sys, x0, section, 1200);

  SectionDataset normalized = ds;
  auto degenerate = normalize(normalized);
  CHECK(degenerate.empty());

  // locate the period-1 orbit from the best close return
  std::string labels(ds.size(), '.');
  auto seeds = seed_from_recurrences(ds, sys, section, labels, ".", 3);
  REQUIRE(!seeds.empty());
  UpoOptions opts;
  opts.mesh = 256;
  UpoResult orbit = solve_upo(sys, seeds[0], opts);
  REQUIRE(orbit.converged);

  auto states = orbit_section_states(sys, section, orbit.states.front(), orbit.period);
  REQUIRE(states.size() == 1);

  OgyController ctl = build_controller(sys, section, states, "c", 0.05,
                                       normalized.normalization);
  // the orbit is unstable: at least one multiplier outside the unit circle
  CHECK(ctl.targets[0].a.eigenvalues().cwiseAbs().maxCoeff() > 1.0);

  ControlRun run = run_ogy(sys, section, ctl, x0, 250);
  REQUIRE(run.captured_at >= 0);
  CHECK(static_cast<int>(run.steps.size()) - run.captured_at >= 50);
  int post_lock_outside = 0;
  for (size_t n = run.captured_at; n < run.steps.size(); ++n) {
    const auto& step = run.steps[n];
    if (step.distance >= ctl.eta) ++post_lock_outside;
    if (step.target >= 0) {
      CHECK(std::abs(step.kick) <=
            ctl.targets[step.target].gain.norm() * ctl.eta + 1e-12);
    }
  }
  CHECK(post_lock_outside == 0);
}

TEST_CASE("zero gains never lock on" * doctest::timeout(600)) {
  SystemSpec sys = rossler_system(11.0);
  SectionSpec section = rossler_section_full();
  Vec x0(3);
  x0 << 0.0, -15.0, 0.0;
  SectionDataset ds = collect_section_data(sys, x0, section, 400);
  SectionDataset normalized = ds;
  normalize(normalized);

  std::string labels(ds.size(), '.');
  auto seeds = seed_from_recurrences(ds, sys, section, labels, ".", 1);
  REQUIRE(!seeds.empty());
  UpoResult orbit = solve_upo(sys, seeds[0], {});
  REQUIRE(orbit.converged);
  auto states = orbit_section_states(sys, section, orbit.states.front(), orbit.period);
  OgyController ctl = build_controller(sys, section, states, "c", 0.05,
                                       normalized.normalization);
  for (auto& t : ctl.targets) t.gain.setZero();

  ControlRun run = run_ogy(sys, section, ctl, x0, 120);
  // without kicks the chaotic orbit keeps leaving the capture ball
  int outside = 0;
  for (const auto& step : run.steps) outside += step.distance >= ctl.eta ? 1 : 0;
  CHECK(outside > 20);
  for (const auto& step : run.steps) CHECK(step.kick == 0.0);
}
