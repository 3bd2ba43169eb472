#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "conjmap/sections.hpp"

#include <cmath>
#include <cstdio>
#include <random>

using namespace conjmap;

namespace {

SystemSpec drift2() {
  SystemSpec s;
  s.name = "drift2";
  s.dimension = 2;
  s.custom_rhs = [](const Vec&) {
    Vec f(2);
    f << 1.0, 0.0;
    return f;
  };
  return s;
}

SystemSpec harmonic() {
  SystemSpec s;
  s.name = "harmonic";
  s.dimension = 2;
  s.custom_rhs = [](const Vec& x) {
    Vec f(2);
    f << x[1], -x[0];
    return f;
  };
  return s;
}

SectionSpec plane(int coord, double offset, int direction, std::vector<int> store) {
  SectionSpec sec;
  sec.name = "plane";
  sec.normal = Vec::Zero(2);
  sec.normal[coord] = 1.0;
  sec.offset = offset;
  sec.direction = direction;
  sec.store_coords = std::move(store);
  return sec;
}

}  // namespace

TEST_CASE("linear flow crossing") {
  SystemSpec sys = drift2();
  Vec x0(2);
  x0 << -0.5, 7.0;
  Trajectory traj = flow(sys, x0, 0.0, 1.0);
  SectionDataset ds = detect_crossings(traj, sys, plane(0, 0.0, +1, {1}));
  REQUIRE(ds.size() == 1);
  CHECK(ds.times[0] == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(ds.points[0][0] == doctest::Approx(7.0).epsilon(1e-10));
}

TEST_CASE("harmonic oscillator first decreasing crossing of x = 0") {
  SystemSpec sys = harmonic();
  Vec x0(2);
  x0 << 1.0, 0.0;
  Trajectory traj = flow(sys, x0, 0.0, 4.0);
  SectionDataset ds = detect_crossings(traj, sys, plane(0, 0.0, -1, {1}));
  REQUIRE(ds.size() >= 1);
  CHECK(ds.times[0] == doctest::Approx(M_PI / 2).epsilon(1e-9));
  CHECK(ds.points[0][0] == doctest::Approx(-1.0).epsilon(1e-7));
}

TEST_CASE("crossing refinement and direction") {
  SystemSpec sys = rossler_system(18.0);
  SectionSpec sec = rossler_section();
  Vec x0(3);
  x0 << 0.0, -15.0, 0.0;
  SectionDataset ds = collect_section_data(sys, x0, sec, 60);
  REQUIRE(ds.size() == 60);
  for (int n = 0; n < ds.size(); ++n) {
    CHECK(std::abs(sec.value(sys, ds.full_states[n])) < 1e-9);
    // event derivative along the flow matches the requested direction
    Vec f = eval_rhs(sys, ds.full_states[n]);
    CHECK(sec.normal.dot(f) * sec.direction > 0.0);
  }
}

TEST_CASE("rossler mean return time is about 7") {
  SystemSpec sys = rossler_system(18.0);
  Vec x0(3);
  x0 << 0.0, -15.0, 0.0;
  SectionDataset ds = collect_section_data(sys, x0, rossler_section(), 120);
  double mean = (ds.times.back() - ds.times.front()) / (ds.size() - 1);
  CHECK(mean > 5.5);
  CHECK(mean < 8.5);
}

TEST_CASE("normalization basics") {
  SectionDataset ds;
  ds.section_name = "toy";
  for (double v : {0.0, 2.0, 4.0}) {
    Vec p(1);
    p << v;
    ds.points.push_back(p);
    ds.times.push_back(v);
  }
  auto degenerate = normalize(ds);
  CHECK(degenerate.empty());
  CHECK(ds.points[0][0] == 0.0);
  CHECK(ds.points[1][0] == 0.5);
  CHECK(ds.points[2][0] == 1.0);
  REQUIRE(ds.normalization.has_value());
  CHECK(ds.normalization->scale[0] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(ds.normalization->offset[0] == 0.0);
}

TEST_CASE("normalization round trip is exact") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> dist(3.0, 11.0);
  SectionDataset ds;
  std::vector<Vec> raw;
  for (int n = 0; n < 100; ++n) {
    Vec p(3);
    p << dist(rng), dist(rng), dist(rng);
    raw.push_back(p);
    ds.points.push_back(p);
    ds.times.push_back(n);
  }
  normalize(ds);
  for (int n = 0; n < 100; ++n) {
    CHECK((denormalize(ds.points[n], *ds.normalization) - raw[n]).norm() <
          1e-12 * raw[n].norm());
    for (int i = 0; i < 3; ++i) {
      CHECK(ds.points[n][i] >= -1e-12);
      CHECK(ds.points[n][i] <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("constant coordinate passes through unscaled") {
  SectionDataset ds;
  for (int n = 0; n < 4; ++n) {
    Vec p(2);
    p << static_cast<double>(n), 3.0;
    ds.points.push_back(p);
    ds.times.push_back(n);
  }
  auto degenerate = normalize(ds);
  REQUIRE(degenerate.size() == 1);
  CHECK(degenerate[0] == 1);
  CHECK(ds.points[2][1] == 3.0);
  CHECK(ds.normalization->scale[1] == 1.0);
}

TEST_CASE("dataset extraction is deterministic") {
  SystemSpec sys = lorenz_system();
  Vec x0(3);
  x0 << 2.0, 0.0, 27.0;
  SectionDataset a = collect_section_data(sys, x0, lorenz_section(), 40);
  SectionDataset b = collect_section_data(sys, x0, lorenz_section(), 40);
  REQUIRE(a.size() == b.size());
  for (int n = 0; n < a.size(); ++n) {
    CHECK(a.times[n] == b.times[n]);
    CHECK((a.points[n] - b.points[n]).norm() == 0.0);
  }
}

TEST_CASE("mackey-glass section guards hold") {
  SystemSpec sys = mackey_glass_system();
  SectionSpec sec = mackey_glass_section(2);
  SectionDataset ds =
      collect_section_data_dde(sys, [](double) { return 0.5; }, sec, 120);
  REQUIRE(ds.size() == 120);
  for (const Vec& s : ds.full_states) CHECK(s[0] < 0.8);
}

TEST_CASE("csv round trip") {
  SystemSpec sys = rossler_system(13.0);
  Vec x0(3);
  x0 << 0.0, -15.0, 0.0;
  SectionDataset ds = collect_section_data(sys, x0, rossler_section_full(), 50);
  normalize(ds);
  const std::string csv = "/tmp/conjmap_test_sections.csv";
  const std::string sidecar = "/tmp/conjmap_test_sections.json";
  save_dataset_csv(ds, csv, sidecar);
  SectionDataset back = load_dataset_csv(csv, sidecar);
  REQUIRE(back.size() == ds.size());
  REQUIRE(back.normalization.has_value());
  for (int n = 0; n < ds.size(); ++n) {
    CHECK((back.points[n] - ds.points[n]).norm() < 1e-14);
  }
  CHECK((back.normalization->scale - ds.normalization->scale).norm() < 1e-14);
  std::remove(csv.c_str());
  std::remove(sidecar.c_str());
}

TEST_CASE("flow_to_section returns the refined hit") {
  SystemSpec sys = harmonic();
  Vec x0(2);
  x0 << 1.0, 0.0;
  SectionHit hit = flow_to_section(sys, x0, plane(0, 0.0, -1, {1}), 0.0, 10.0);
  CHECK(hit.time == doctest::Approx(M_PI / 2).epsilon(1e-9));
  CHECK(hit.state[1] == doctest::Approx(-1.0).epsilon(1e-7));
}
