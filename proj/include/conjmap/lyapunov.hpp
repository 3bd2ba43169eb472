#pragma once

#include "conjmap/integrate.hpp"

#include <vector>

namespace conjmap {

struct LyapunovSpectrum {
  Vec exponents;   // sorted descending, 1/time units
  double d_ky = 0;
  int latent_dim = 1;
  bool converged = true;
  // running estimates at each renormalization, for convergence plots
  std::vector<double> sample_times;
  std::vector<Vec> running;
};

struct LyapunovOptions {
  double t_total = 5000.0;
  double renorm_interval = 0.5;
  double transient = 100.0;
  Tolerances tol{1e-9, 1e-9};
  double drift_tol = 0.05;  // allowed drift of lambda_1 over the last 20%
  bool keep_running = false;
};

/// Benettin-style tangent-space evolution with periodic QR
/// re-orthonormalization. ODE systems only.
LyapunovSpectrum lyapunov_spectrum(const SystemSpec& sys, const Vec& x0,
                                   const LyapunovOptions& opts = {});

/// D_KY = k + (sum of k largest exponents) / |lambda_{k+1}|, with k the
/// largest index whose partial sum is nonnegative. Expects descending order.
double kaplan_yorke(const Vec& exponents);

/// d = round(D_KY - 1), half away from zero, floored at 1.
int latent_dim_from_dky(double d_ky);

}  // namespace conjmap
