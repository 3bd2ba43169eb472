#pragma once

#include "conjmap/conjnet.hpp"
#include "conjmap/latentmap.hpp"
#include "conjmap/sections.hpp"

#include <string>
#include <vector>

namespace conjmap {

/// Initial guess for a periodic orbit: a closed loop of states sampled
/// uniformly in time over one period.
struct UpoSeed {
  std::vector<Vec> states;
  double period = 0;
  std::string symbols;
};

struct UpoOptions {
  int mesh = 512;            // collocation points per orbit (resampled from seed)
  double tol = 1e-11;        // Newton stop on the max-norm of the residual
  int max_newton = 60;
  double min_damping = 1e-4;
  bool richardson = false;   // re-solve at 2x mesh and extrapolate the period
};

struct UpoResult {
  std::vector<Vec> states;   // mesh points, uniformly spaced in rescaled time
  double period = 0;
  int newton_iterations = 0;
  double residual = 0;       // final max-norm collocation defect
  bool converged = false;
  std::string symbols;
};

/// Periodic boundary-value solve: trapezoidal collocation of
/// dx/ds = T f(x) on s in [0,1) with an integral phase condition anchored
/// at the seed, damped Newton with a sparse LU on each step.
UpoResult solve_upo(const SystemSpec& sys, const UpoSeed& seed,
                    const UpoOptions& opts = {});

/// Seed a UPO from a trained model: decode a latent periodic orbit onto
/// the section, then flow between consecutive decoded crossings.
UpoSeed seed_guess(const ConjugacyModel& model, const SystemSpec& sys,
                   const SectionSpec& section, const PeriodicOrbitPoints& orbit,
                   int samples_per_crossing = 64);

/// Seeds from close returns in recorded section data: windows of `period`
/// consecutive crossings whose endpoints nearly coincide, ranked by the
/// return distance. `labels` gives each crossing a symbol; only windows
/// whose label string matches a rotation of `symbols` are kept.
std::vector<UpoSeed> seed_from_recurrences(const SectionDataset& dataset,
                                           const SystemSpec& sys,
                                           const SectionSpec& section,
                                           const std::string& labels,
                                           const std::string& symbols,
                                           int max_seeds = 3,
                                           int samples_per_crossing = 64);

/// Zero-pad every seed state to `dim` entries (for solving a truncated
/// Galerkin orbit inside a larger truncation).
UpoSeed embed_seed(const UpoSeed& seed, int dim);

/// Shooting check: integrate from states[0] over one period and return
/// the closure distance.
double verify_upo(const SystemSpec& sys, const UpoResult& orbit,
                  const Tolerances& tol = {});

/// Symbol string of a solved orbit read off its section crossings, one
/// character per crossing via `label(state)`.
std::string orbit_symbols(const SystemSpec& sys, const UpoResult& orbit,
                          const SectionSpec& section,
                          const std::function<char(const Vec&)>& label);

}  // namespace conjmap
