#pragma once

#include "conjmap/dynamics.hpp"

#include <complex>
#include <string>
#include <vector>

namespace conjmap {

/// sgn with sgn(0) := +1.
inline double sgn(double v) { return v < 0 ? -1.0 : 1.0; }

/// One library term: sgn(y1)^s * prod_c y_c^{powers[c]}. The factor
/// |y1| y1 is expressed as powers = {2} with with_sgn = true.
struct LatentTerm {
  std::vector<int> powers;
  bool with_sgn = false;

  double value(const Vec& y) const;
  double partial(const Vec& y, int coord) const;  // sgn treated as constant
  std::string describe() const;
};

/// Latent map g on R^d as a coefficient vector over a term library.
struct LatentMap {
  int dim = 1;
  std::vector<std::vector<LatentTerm>> terms;   // per output component
  std::vector<std::vector<double>> coeffs;      // aligned with terms
  std::vector<std::vector<bool>> trainable;     // aligned with terms

  Vec eval(const Vec& y) const;
  Mat jacobian(const Vec& y) const;
  int n_trainable() const;

  static LatentMap quadratic_1d(double c1 = 0, double c2 = 0);
  static LatentMap cubic_1d(double c1 = 0, double c2 = 0, double c3 = 0);
  /// g1 = -sgn(y1) + c1 y1 + c2 |y1| y1 ;  g2 = d0 sgn(y1) + d1 y2.
  static LatentMap lorenz_skew(double c1 = 0, double c2 = 0, double d0 = 0,
                               double d1 = 0);
  static LatentMap quadratic_2d();  // full quadratic in (y1, y2) per output
  static LatentMap logistic(double r);
  static LatentMap from_name(const std::string& name);
};

struct PeriodicOrbitPoints {
  int period = 1;
  std::vector<Vec> points;
  std::vector<std::complex<double>> multipliers;
  std::string symbols;
  bool near_discontinuity = false;  // within 1e-10 of a sgn switch
};

struct PeriodicPointOptions {
  double lo = -0.1, hi = 1.1;   // search box per coordinate
  int grid = 10000;             // 1d bracketing grid / 2d seeds become 50x50
  double dedup_tol = 1e-8;
  int max_period = 8;
};

/// All primitive period-p orbits of g inside the search box.
std::vector<PeriodicOrbitPoints> periodic_points(const LatentMap& map, int period,
                                                 const PeriodicPointOptions& opts = {});

/// 'L'/'R' labels: unimodal rule (side of the interior maximum) for d = 1,
/// sign-of-y1 rule for the Lorenz skew form. Canonical rotation applied.
std::string symbolic_label(const PeriodicOrbitPoints& orbit, const LatentMap& map,
                           const PeriodicPointOptions& opts = {});

/// r such that c1 y + c2 y^2 is linearly conjugate to r y (1 - y).
double conjugate_to_logistic(double c1, double c2);

std::string lexicographically_minimal_rotation(const std::string& s);

}  // namespace conjmap
