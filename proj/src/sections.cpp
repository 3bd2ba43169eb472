#include "conjmap/sections.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace conjmap {

double SectionSpec::value(const SystemSpec& sys, const Vec& state,
                          const Vec* delayed) const {
  switch (kind) {
    case Kind::Hyperplane: {
      const Vec z = transform ? transform(state) : state;
      return normal.dot(z) - offset;
    }
    case Kind::MgEqualDelay:
      if (!delayed) throw std::invalid_argument("section needs delayed state");
      return state[0] - (*delayed)[0];
    case Kind::MgDerivZero:
      if (!delayed) throw std::invalid_argument("section needs delayed state");
      return eval_rhs(sys, state, *delayed)[0];
  }
  throw std::logic_error("unreachable");
}

Vec SectionSpec::coordinates(const Vec& state) const {
  const Vec z = transform ? transform(state) : state;
  Vec out(static_cast<Eigen::Index>(store_coords.size()));
  for (size_t i = 0; i < store_coords.size(); ++i) out[i] = z[store_coords[i]];
  return out;
}

bool SectionSpec::guards_hold(const Vec& state) const {
  for (const auto& g : guards) {
    if (!g(state)) return false;
  }
  return true;
}

SectionSpec rossler_section() {
  SectionSpec s;
  s.name = "rossler_x1";
  s.normal = Vec::Zero(3);
  s.normal[0] = 1.0;
  s.direction = +1;
  s.store_coords = {1};
  return s;
}

SectionSpec rossler_section_full() {
  SectionSpec s = rossler_section();
  s.name = "rossler_x1_full";
  s.store_coords = {1, 2};
  return s;
}

SectionSpec lorenz_section() {
  SectionSpec s;
  s.name = "lorenz_x3";
  s.normal = Vec::Zero(3);
  s.normal[2] = 1.0;
  s.offset = 27.0;
  s.direction = -1;
  s.store_coords = {0, 1};
  return s;
}

SectionSpec gissinger_section(double mu, double nu, double gamma) {
  SectionSpec s;
  s.name = "gissinger_diag";
  s.normal = Vec::Zero(3);
  s.normal[0] = 1.0;
  s.normal[1] = 1.0;
  s.direction = +1;
  s.transform = [mu, nu, gamma](const Vec& x) -> Vec {
    return gissinger_rescale(Eigen::Vector3d(x[0], x[1], x[2]), mu, nu, gamma);
  };
  s.store_coords = {1, 2};  // (x2_hat, x3_hat)
  return s;
}

SectionSpec kse_section(int modes) {
  SectionSpec s;
  s.name = "kse_x1";
  s.normal = Vec::Zero(modes);
  s.normal[0] = 1.0;
  s.direction = +1;
  s.store_coords.resize(modes - 1);
  for (int i = 1; i < modes; ++i) s.store_coords[i - 1] = i;
  return s;
}

SectionSpec mackey_glass_section(int which) {
  SectionSpec s;
  s.store_coords = {0};
  s.direction = +1;
  if (which == 1) {
    s.name = "mg_equal_delay";
    s.kind = SectionSpec::Kind::MgEqualDelay;
    s.guards.push_back([](const Vec& x) { return x[0] < 0.96; });
  } else if (which == 2) {
    s.name = "mg_deriv_zero";
    s.kind = SectionSpec::Kind::MgDerivZero;
    s.guards.push_back([](const Vec& x) { return x[0] < 0.8; });
  } else {
    throw std::invalid_argument("mackey_glass_section: which must be 1 or 2");
  }
  return s;
}

SectionSpec section_by_name(const std::string& name, const SystemSpec& sys) {
  if (name == "rossler" || name == "rossler_x1") return rossler_section();
  if (name == "rossler_full") return rossler_section_full();
  if (name == "lorenz" || name == "lorenz_x3") return lorenz_section();
  if (name == "gissinger" || name == "gissinger_diag") {
    return gissinger_section(sys.param("mu"), sys.param("nu"), sys.param("gamma"));
  }
  if (name == "kse" || name == "kse_x1") return kse_section(sys.dimension);
  if (name == "mg1" || name == "mg_equal_delay") return mackey_glass_section(1);
  if (name == "mg2" || name == "mg_deriv_zero") return mackey_glass_section(2);
  throw std::invalid_argument("unknown section '" + name + "'");
}

Vec NormalizationRecord::to_normalized(const Vec& raw) const {
  return (raw - offset).cwiseProduct(scale);
}

Vec NormalizationRecord::to_raw(const Vec& normalized) const {
  return normalized.cwiseQuotient(scale) + offset;
}

namespace {

// Bisect l to zero on [ta, tb] given opposite signs at the ends.
double bisect_event(const std::function<double(double)>& lfun, double ta, double tb,
                    double la, double refine_tol) {
  double a = ta, b = tb, fa = la;
  double tm = 0.5 * (a + b);
  for (int it = 0; it < 200; ++it) {
    tm = 0.5 * (a + b);
    const double fm = lfun(tm);
    if (std::abs(fm) <= refine_tol || (b - a) < 1e-15 * std::max(1.0, std::abs(tm))) {
      return tm;
    }
    if ((fa < 0) == (fm < 0)) {
      a = tm;
      fa = fm;
    } else {
      b = tm;
    }
  }
  return tm;
}

struct CrossingScan {
  const SystemSpec& sys;
  const SectionSpec& section;
  double refine_tol;
  double last_value = 0;
  bool have_last = false;

  // Evaluate the event along the dense output; `state_at` must return the
  // full state at an arbitrary time within the current segment.
  template <typename StateAt>
  std::optional<double> scan(double t0, double t1, const StateAt& state_at) {
    auto lfun = [&](double t) {
      const Vec y = state_at(t);
      if (sys.kind == SystemKind::Dde) {
        const Vec yd = state_at(t - sys.delay);
        return section.value(sys, y, &yd);
      }
      return section.value(sys, y);
    };
    const double l0 = have_last ? last_value : lfun(t0);
    const double l1 = lfun(t1);
    last_value = l1;
    have_last = true;
    const bool crossed = section.direction > 0 ? (l0 < 0 && l1 >= 0) : (l0 > 0 && l1 <= 0);
    if (!crossed) return std::nullopt;
    return bisect_event(lfun, t0, t1, l0, refine_tol);
  }
};

}  // namespace

SectionDataset detect_crossings(const Trajectory& traj, const SystemSpec& sys,
                                const SectionSpec& section, double refine_tol) {
  if (refine_tol <= 0) throw std::invalid_argument("refine_tol must be positive");
  SectionDataset ds;
  ds.section_name = section.name;
  auto state_at = [&](double t) { return traj.at(t); };
  CrossingScan scan{sys, section, refine_tol};
  // DDE events need the delayed state, so start one delay in.
  const double t_start = traj.t_begin() + (sys.kind == SystemKind::Dde ? sys.delay : 0.0);
  for (size_t i = 0; i + 1 < traj.times.size(); ++i) {
    if (traj.times[i] < t_start) continue;
    auto hit = scan.scan(traj.times[i], traj.times[i + 1], state_at);
    if (!hit) continue;
    const Vec state = traj.at(*hit);
    if (!section.guards_hold(state)) continue;
    ds.times.push_back(*hit);
    ds.points.push_back(section.coordinates(state));
    ds.full_states.push_back(state);
  }
  if (ds.points.empty()) throw std::runtime_error("no section crossings found");
  return ds;
}

SectionDataset collect_section_data(const SystemSpec& sys, const Vec& x0,
                                    const SectionSpec& section, int n_points,
                                    double transient, Tolerances tol, double refine_tol,
                                    double t_cap) {
  SectionDataset ds;
  ds.section_name = section.name;
  auto rhs = [&sys](double, const Vec& y, Vec& dy) { dy = eval_rhs(sys, y); };
  Dopri5Stepper stepper(rhs, x0, 0.0, tol, 1.0);
  CrossingScan scan{sys, section, refine_tol};
  bool dropped_first = false;
  while (static_cast<int>(ds.points.size()) < n_points) {
    if (stepper.time() >= t_cap) {
      throw IntegrationError("time cap reached before collecting section data",
                             stepper.time());
    }
    const StepRecord& rec = stepper.step(t_cap);
    if (rec.t1 < transient) continue;
    auto hit = scan.scan(rec.t0, rec.t1, [&](double t) { return rec.at(t); });
    if (!hit) continue;
    const Vec state = rec.at(*hit);
    if (!section.guards_hold(state)) continue;
    if (!dropped_first) {  // boundary artifact next to the transient window
      dropped_first = true;
      continue;
    }
    ds.times.push_back(*hit);
    ds.points.push_back(section.coordinates(state));
    ds.full_states.push_back(state);
  }
  return ds;
}

SectionDataset collect_section_data_dde(const SystemSpec& sys,
                                        const std::function<double(double)>& history,
                                        const SectionSpec& section, int n_points,
                                        double transient, Tolerances tol,
                                        double refine_tol) {
  // Integrate in chunks until enough crossings accumulate. MG states are
  // scalar, so storing the whole trajectory is cheap.
  double t_end = transient + 6.0 * n_points;
  Trajectory traj = flow_dde(sys, history, 0.0, t_end, tol);
  for (int round = 0; round < 6; ++round) {
    SectionDataset all = detect_crossings(traj, sys, section, refine_tol);
    SectionDataset ds;
    ds.section_name = section.name;
    bool dropped_first = false;
    for (int i = 0; i < all.size(); ++i) {
      if (all.times[i] < transient) continue;
      if (!dropped_first) {
        dropped_first = true;
        continue;
      }
      if (ds.size() >= n_points) break;
      ds.times.push_back(all.times[i]);
      ds.points.push_back(all.points[i]);
      ds.full_states.push_back(all.full_states[i]);
    }
    if (ds.size() >= n_points) return ds;
    const double t_more = t_end * 1.8;
    // extend by restarting from scratch over a longer span (simple and
    // deterministic; MG integration is fast)
    t_end = t_more;
    traj = flow_dde(sys, history, 0.0, t_end, tol);
  }
  throw std::runtime_error("collect_section_data_dde: not enough crossings");
}

std::vector<int> normalize(SectionDataset& ds) {
  if (ds.size() < 2) throw std::invalid_argument("normalize: need at least 2 points");
  const int d = ds.dim();
  Vec lo = ds.points.front(), hi = ds.points.front();
  for (const auto& p : ds.points) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  NormalizationRecord rec;
  rec.scale = Vec::Ones(d);
  rec.offset = Vec::Zero(d);
  std::vector<int> degenerate;
  for (int j = 0; j < d; ++j) {
    const double range = hi[j] - lo[j];
    if (range <= 1e-12 * std::max(1.0, std::abs(hi[j]))) {
      degenerate.push_back(j);  // constant coordinate: pass through unscaled
    } else {
      rec.scale[j] = 1.0 / range;
      rec.offset[j] = lo[j];
    }
  }
  for (auto& p : ds.points) p = rec.to_normalized(p);
  ds.normalization = rec;
  return degenerate;
}

Vec denormalize(const Vec& point, const NormalizationRecord& record) {
  return record.to_raw(point);
}

SectionHit flow_to_section(const SystemSpec& sys, const Vec& x0,
                           const SectionSpec& section, double t_min, double t_max,
                           Tolerances tol, double refine_tol) {
  auto rhs = [&sys](double, const Vec& y, Vec& dy) { dy = eval_rhs(sys, y); };
  Dopri5Stepper stepper(rhs, x0, 0.0, tol, t_max);
  CrossingScan scan{sys, section, refine_tol};
  while (stepper.time() < t_max) {
    const StepRecord& rec = stepper.step(t_max);
    auto hit = scan.scan(rec.t0, rec.t1, [&](double t) { return rec.at(t); });
    if (!hit || *hit < t_min) continue;
    const Vec state = rec.at(*hit);
    if (!section.guards_hold(state)) continue;
    return {state, *hit};
  }
  throw IntegrationError("no section crossing before t_max", stepper.time());
}

void save_dataset_csv(const SectionDataset& ds, const std::string& csv_path,
                      const std::string& sidecar_json_path) {
  std::ofstream out(csv_path);
  if (!out) throw std::runtime_error("cannot open " + csv_path);
  out.precision(17);
  out << "t";
  for (int j = 0; j < ds.dim(); ++j) out << ",x" << (j + 1);
  out << "\n";
  for (int i = 0; i < ds.size(); ++i) {
    out << ds.times[i];
    for (int j = 0; j < ds.dim(); ++j) out << "," << ds.points[i][j];
    out << "\n";
  }
  if (!sidecar_json_path.empty()) {
    nlohmann::json j;
    j["section"] = ds.section_name;
    if (ds.normalization) {
      j["scale"] = std::vector<double>(ds.normalization->scale.begin(),
                                       ds.normalization->scale.end());
      j["offset"] = std::vector<double>(ds.normalization->offset.begin(),
                                        ds.normalization->offset.end());
    }
    std::ofstream js(sidecar_json_path);
    js << j.dump(2) << "\n";
  }
}

SectionDataset load_dataset_csv(const std::string& csv_path,
                                const std::string& sidecar_json_path) {
  std::ifstream in(csv_path);
  if (!in) throw std::runtime_error("cannot open " + csv_path);
  SectionDataset ds;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (row.empty()) continue;
    ds.times.push_back(row[0]);
    Vec p(static_cast<Eigen::Index>(row.size()) - 1);
    for (size_t j = 1; j < row.size(); ++j) p[j - 1] = row[j];
    ds.points.push_back(p);
  }
  if (!sidecar_json_path.empty()) {
    std::ifstream js(sidecar_json_path);
    if (js) {
      nlohmann::json j;
      js >> j;
      ds.section_name = j.value("section", "");
      if (j.contains("scale")) {
        NormalizationRecord rec;
        auto sc = j["scale"].get<std::vector<double>>();
        auto of = j["offset"].get<std::vector<double>>();
        rec.scale = Eigen::Map<Vec>(sc.data(), static_cast<Eigen::Index>(sc.size()));
        rec.offset = Eigen::Map<Vec>(of.data(), static_cast<Eigen::Index>(of.size()));
        ds.normalization = rec;
      }
    }
  }
  return ds;
}

}  // namespace conjmap
