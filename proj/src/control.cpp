#include "conjmap/control.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace conjmap {

Vec dead_beat_gain(const Mat& a, const Vec& b) {
  const auto m = a.rows();
  if (a.cols() != m || b.size() != m)
    throw std::invalid_argument("dead_beat_gain: dimension mismatch");
  Mat ctrb(m, m);
  Vec col = b;
  for (Eigen::Index k = 0; k < m; ++k) {
    ctrb.col(k) = col;
    col = a * col;
  }
  Eigen::FullPivLU<Mat> lu(ctrb);
  if (!lu.isInvertible())
    throw std::invalid_argument("dead_beat_gain: pair is not controllable");
  Mat a_pow = Mat::Identity(m, m);
  for (Eigen::Index k = 0; k < m; ++k) a_pow = a_pow * a;
  // Ackermann with desired polynomial z^m: c = e_m^T Ctrb^{-1} A^m
  Vec e_m = Vec::Zero(m);
  e_m[m - 1] = 1.0;
  return a_pow.transpose() * lu.inverse().transpose() * e_m;
}

namespace {

Vec normalized_coords(const SectionSpec& section, const Vec& state,
                      const std::optional<NormalizationRecord>& rec) {
  Vec c = section.coordinates(state);
  if (rec) c = rec->to_normalized(c);
  return c;
}

Vec raw_from_normalized_delta(const Vec& delta,
                              const std::optional<NormalizationRecord>& rec) {
  if (!rec) return delta;
  return delta.cwiseQuotient(rec->scale);
}

}  // namespace

OgyController build_controller(const SystemSpec& sys, const SectionSpec& section,
                               const std::vector<Vec>& orbit_states,
                               const std::string& parameter, double eta,
                               std::optional<NormalizationRecord> normalization,
                               double delta_state, double delta_param) {
  if (orbit_states.empty())
    throw std::invalid_argument("build_controller: no orbit states");
  if (!sys.parameters.count(parameter))
    throw std::invalid_argument("build_controller: unknown parameter '" + parameter + "'");

  OgyController ctl;
  ctl.parameter = parameter;
  ctl.mu_bar = sys.parameters.at(parameter);
  ctl.eta = eta;
  ctl.normalization = normalization;

  const int p = static_cast<int>(orbit_states.size());
  const int d = static_cast<int>(section.store_coords.size());

  auto return_coords = [&](const SystemSpec& s, const Vec& state) {
    SectionHit hit = flow_to_section(s, state, section, 1e-3, 1e4);
    return normalized_coords(section, hit.state, normalization);
  };

  for (int k = 0; k < p; ++k) {
    ControlTarget tgt;
    tgt.state_raw = orbit_states[k];
    tgt.coords = normalized_coords(section, orbit_states[k], normalization);

    tgt.a.resize(d, d);
    for (int j = 0; j < d; ++j) {
      Vec delta = Vec::Zero(d);
      delta[j] = delta_state;
      const Vec raw_delta = raw_from_normalized_delta(delta, normalization);
      Vec xp = orbit_states[k];
      Vec xm = orbit_states[k];
      xp[section.store_coords[j]] += raw_delta[j];
      xm[section.store_coords[j]] -= raw_delta[j];
      tgt.a.col(j) =
          (return_coords(sys, xp) - return_coords(sys, xm)) / (2 * delta_state);
    }

    SystemSpec sp = sys, sm = sys;
    sp.parameters[parameter] = ctl.mu_bar + delta_param;
    sm.parameters[parameter] = ctl.mu_bar - delta_param;
    tgt.b = (return_coords(sp, orbit_states[k]) -
             return_coords(sm, orbit_states[k])) /
            (2 * delta_param);

    tgt.gain = -dead_beat_gain(tgt.a, tgt.b);
    ctl.targets.push_back(std::move(tgt));
  }
  return ctl;
}

ControlRun run_ogy(const SystemSpec& sys, const SectionSpec& section,
                   const OgyController& controller, const Vec& x0,
                   int n_crossings, double t_max_per_leg) {
  ControlRun run;
  SystemSpec current = sys;
  current.parameters[controller.parameter] = controller.mu_bar;

  Vec state = x0;
  for (int n = 0; n < n_crossings; ++n) {
    SectionHit hit = flow_to_section(current, state, section, 1e-3, t_max_per_leg);
    state = hit.state;

    ControlStep step;
    step.crossing = n;
    step.coords = normalized_coords(section, state, controller.normalization);

    double best = std::numeric_limits<double>::infinity();
    for (size_t k = 0; k < controller.targets.size(); ++k) {
      const double dist = (step.coords - controller.targets[k].coords).norm();
      if (dist < best) {
        best = dist;
        step.target = static_cast<int>(k);
      }
    }
    step.distance = best;

    double kick = 0;
    if (best < controller.eta) {
      const ControlTarget& tgt = controller.targets[step.target];
      kick = tgt.gain.dot(step.coords - tgt.coords);
      const double cap = tgt.gain.norm() * controller.eta;
      kick = std::clamp(kick, -cap, cap);
    } else {
      step.target = -1;
    }
    step.kick = kick;
    run.steps.push_back(step);

    current.parameters[controller.parameter] = controller.mu_bar + kick;
  }

  for (int n = static_cast<int>(run.steps.size()); n-- > 0;) {
    if (run.steps[n].distance < controller.eta) {
      run.captured_at = n;
    } else {
      break;
    }
  }
  return run;
}

std::vector<Vec> orbit_section_states(const SystemSpec& sys,
                                      const SectionSpec& section, const Vec& x0,
                                      double period) {
  Trajectory traj = flow(sys, x0, 0.0, period);
  SectionDataset crossings = detect_crossings(traj, sys, section);
  std::vector<Vec> out;
  out.push_back(x0);
  // the last detected crossing closes the loop at x0
  for (int i = 0; i + 1 < crossings.size(); ++i) {
    out.push_back(crossings.full_states[i]);
  }
  return out;
}

}  // namespace conjmap
