#pragma once

#include "conjmap/sections.hpp"

#include <optional>
#include <string>
#include <vector>

namespace conjmap {

/// Dead-beat gain for the pair (A, b): the row c such that A - b c^T has
/// all eigenvalues at zero (Ackermann with characteristic polynomial z^m).
/// Throws if (A, b) is not controllable.
Vec dead_beat_gain(const Mat& a, const Vec& b);

/// One target crossing of the orbit being stabilized, with the local
/// linearization of the section-to-section return in normalized section
/// coordinates: dx_{n+1} = a dx_n + b dmu.
struct ControlTarget {
  Vec state_raw;   // full phase-space state on the section
  Vec coords;      // normalized section coordinates
  Mat a;
  Vec b;
  Vec gain;        // kick row: dmu = gain . (x_n - coords)
};

struct OgyController {
  std::vector<ControlTarget> targets;  // one per crossing, in return order
  std::string parameter;
  double mu_bar = 0;
  double eta = 0.05;                   // capture radius, normalized units
  std::optional<NormalizationRecord> normalization;
};

/// Linearize the return map at each orbit crossing by central differences
/// (state columns and the control parameter), then attach dead-beat gains.
/// `orbit_states` are the full states at consecutive crossings of the
/// orbit, in return order.
OgyController build_controller(const SystemSpec& sys, const SectionSpec& section,
                               const std::vector<Vec>& orbit_states,
                               const std::string& parameter, double eta = 0.05,
                               std::optional<NormalizationRecord> normalization = {},
                               double delta_state = 1e-5,
                               double delta_param = 1e-5);

struct ControlStep {
  int crossing = 0;
  int target = -1;        // matched orbit crossing, -1 when outside eta
  double distance = 0;    // to the matched target, normalized units
  double kick = 0;        // mu_n - mu_bar applied on the following leg
  Vec coords;             // normalized section coordinates at the crossing
};

struct ControlRun {
  std::vector<ControlStep> steps;
  int captured_at = -1;   // first crossing of the longest trailing captured run
};

/// Run the controlled system for `n_crossings` section returns starting at
/// x0. Kicks are applied only inside the capture radius and are clamped to
/// |gain| * eta; the parameter is held constant between crossings.
ControlRun run_ogy(const SystemSpec& sys, const SectionSpec& section,
                   const OgyController& controller, const Vec& x0,
                   int n_crossings, double t_max_per_leg = 100.0);

/// Full states at the section crossings of a periodic orbit, flowing from
/// `x0` over one period (x0 itself is the first crossing).
std::vector<Vec> orbit_section_states(const SystemSpec& sys,
                                      const SectionSpec& section, const Vec& x0,
                                      double period);

}  // namespace conjmap
