#pragma once

#include "conjmap/dynamics.hpp"

#include <functional>
#include <stdexcept>
#include <vector>

namespace conjmap {

struct Tolerances {
  double abs = 1e-10;
  double rel = 1e-10;
};

struct IntegrationError : std::runtime_error {
  double last_time;
  IntegrationError(const std::string& what, double t)
      : std::runtime_error(what), last_time(t) {}
};

/// One accepted step with cubic-Hermite dense output over [t0, t1].
struct StepRecord {
  double t0 = 0, t1 = 0;
  Vec y0, y1, f0, f1;
  Vec at(double t) const;
  Vec deriv_at(double t) const;
};

/// Adaptive Dormand-Prince 5(4) stepper over a generic rhs f(t, y, dy).
/// The caller drives it step by step; nothing is stored internally beyond
/// the last accepted step, so arbitrarily long runs are cheap in memory.
class Dopri5Stepper {
 public:
  using Rhs = std::function<void(double, const Vec&, Vec&)>;

  Dopri5Stepper(Rhs rhs, Vec y0, double t0, Tolerances tol, double hmax);

  /// Advance one accepted step, never stepping past t_limit.
  const StepRecord& step(double t_limit);

  double time() const { return t_; }
  const Vec& state() const { return y_; }
  const Vec& deriv() const { return f_; }
  long accepted_steps() const { return n_accepted_; }

 private:
  Rhs rhs_;
  Vec y_, f_;
  double t_;
  double h_;
  Tolerances tol_;
  double hmax_;
  StepRecord last_;
  long n_accepted_ = 0;
  std::vector<Vec> k_;
};

/// Knot-based trajectory with cubic-Hermite dense output.
struct Trajectory {
  std::vector<double> times;
  std::vector<Vec> states;
  std::vector<Vec> derivs;

  double t_begin() const { return times.front(); }
  double t_end() const { return times.back(); }
  Vec at(double t) const;
  Vec deriv_at(double t) const;

 private:
  int segment_index(double t) const;
};

/// Integrate an ODE system over [t0, t1], storing every accepted step.
Trajectory flow(const SystemSpec& sys, const Vec& x0, double t0, double t1,
                Tolerances tol = {});

/// Integrate a DDE by the method of steps. `history(t)` supplies the state
/// for t in [t0 - tau, t0]; beyond that the trajectory's own dense output
/// is used. The returned trajectory includes the initial history knots so
/// delayed lookups stay valid.
Trajectory flow_dde(const SystemSpec& sys, const std::function<double(double)>& history,
                    double t0, double t1, Tolerances tol = {});

}  // namespace conjmap
