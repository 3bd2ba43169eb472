#pragma once

#include "conjmap/integrate.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace conjmap {

/// Poincare section: a zero crossing of an event functional in a fixed
/// direction, subject to guard predicates. Hyperplane events cover the ODE
/// presets; the two Mackey-Glass events need the delayed state.
struct SectionSpec {
  enum class Kind { Hyperplane, MgEqualDelay, MgDerivZero };

  std::string name;
  Kind kind = Kind::Hyperplane;
  Vec normal;          // event l(x) = normal . T(x) - offset (hyperplane)
  double offset = 0;
  int direction = +1;  // required sign of dl/dt at the crossing
  std::vector<std::function<bool(const Vec&)>> guards;  // on the raw state

  /// Optional observable transform applied before the event and before
  /// extracting coordinates (Gissinger hatted variables).
  std::function<Vec(const Vec&)> transform;

  /// Indices into the (transformed) state kept as section coordinates.
  std::vector<int> store_coords;

  /// Event value at a state; `delayed` is required by the MG kinds.
  double value(const SystemSpec& sys, const Vec& state, const Vec* delayed = nullptr) const;

  Vec coordinates(const Vec& state) const;
  bool guards_hold(const Vec& state) const;
};

SectionSpec rossler_section();        // x1 = 0, x1' > 0; stores x2
SectionSpec rossler_section_full();   // same event; stores (x2, x3)
SectionSpec lorenz_section();         // x3 = 27, x3' < 0; stores (x1, x2)
SectionSpec gissinger_section(double mu = 0.12, double nu = 0.1, double gamma = 0.85);
SectionSpec kse_section(int modes = 14);  // x1 = 0, x1' > 0; stores x2..xN
SectionSpec mackey_glass_section(int which);  // 1 or 2
SectionSpec section_by_name(const std::string& name, const SystemSpec& sys);

/// Per-coordinate affine record: normalized = (raw - offset) * scale.
struct NormalizationRecord {
  Vec scale;
  Vec offset;
  Vec to_normalized(const Vec& raw) const;
  Vec to_raw(const Vec& normalized) const;
};

struct SectionDataset {
  std::string section_name;
  std::vector<Vec> points;        // section coordinates, in crossing order
  std::vector<double> times;      // refined crossing times
  std::vector<Vec> full_states;   // full phase-space state at each crossing
  std::optional<NormalizationRecord> normalization;

  int dim() const { return points.empty() ? 0 : static_cast<int>(points.front().size()); }
  int size() const { return static_cast<int>(points.size()); }
};

/// Extract refined crossings from a stored trajectory.
SectionDataset detect_crossings(const Trajectory& traj, const SystemSpec& sys,
                                const SectionSpec& section, double refine_tol = 1e-12);

/// Integrate and collect section crossings without storing the trajectory.
/// Discards `transient` time units first, then drops the first crossing.
SectionDataset collect_section_data(const SystemSpec& sys, const Vec& x0,
                                    const SectionSpec& section, int n_points,
                                    double transient = 100.0, Tolerances tol = {},
                                    double refine_tol = 1e-12,
                                    double t_cap = 1e7);

/// DDE variant (trajectory-backed; MG runs are small).
SectionDataset collect_section_data_dde(const SystemSpec& sys,
                                        const std::function<double(double)>& history,
                                        const SectionSpec& section, int n_points,
                                        double transient = 100.0, Tolerances tol = {},
                                        double refine_tol = 1e-12);

/// Rescale every coordinate to [0, 1]; constant coordinates pass through
/// unscaled (scale 1, offset 0) and are reported via the return value.
std::vector<int> normalize(SectionDataset& ds);
Vec denormalize(const Vec& point, const NormalizationRecord& record);

/// Flow an ODE from x0 until the next section crossing (ignoring crossings
/// before t_min). Returns the full state at the refined crossing and the
/// elapsed time. Throws IntegrationError if no crossing occurs by t_max.
struct SectionHit {
  Vec state;
  double time;
};
SectionHit flow_to_section(const SystemSpec& sys, const Vec& x0,
                           const SectionSpec& section, double t_min, double t_max,
                           Tolerances tol = {}, double refine_tol = 1e-12);

void save_dataset_csv(const SectionDataset& ds, const std::string& csv_path,
                      const std::string& sidecar_json_path = "");
SectionDataset load_dataset_csv(const std::string& csv_path,
                                const std::string& sidecar_json_path = "");

}  // namespace conjmap
