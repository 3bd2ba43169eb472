#include "conjmap/integrate.hpp"

#include <algorithm>
#include <cmath>

namespace conjmap {

namespace {

Vec hermite(double t, double t0, double t1, const Vec& y0, const Vec& y1,
            const Vec& f0, const Vec& f1) {
  const double h = t1 - t0;
  const double s = (t - t0) / h;
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1;
  const double h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2;
  const double h11 = s3 - s2;
  return h00 * y0 + (h10 * h) * f0 + h01 * y1 + (h11 * h) * f1;
}

Vec hermite_deriv(double t, double t0, double t1, const Vec& y0, const Vec& y1,
                  const Vec& f0, const Vec& f1) {
  const double h = t1 - t0;
  const double s = (t - t0) / h;
  const double s2 = s * s;
  const double d00 = (6 * s2 - 6 * s) / h;
  const double d10 = 3 * s2 - 4 * s + 1;
  const double d01 = (-6 * s2 + 6 * s) / h;
  const double d11 = 3 * s2 - 2 * s;
  return d00 * y0 + d10 * f0 + d01 * y1 + d11 * f1;
}

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = b1 - 5179.0 / 57600, e3 = b3 - 7571.0 / 16695,
                 e4 = b4 - 393.0 / 640, e5 = b5 + 92097.0 / 339200,
                 e6 = b6 - 187.0 / 2100, e7 = -1.0 / 40;

}  // namespace

Vec StepRecord::at(double t) const { return hermite(t, t0, t1, y0, y1, f0, f1); }
Vec StepRecord::deriv_at(double t) const {
  return hermite_deriv(t, t0, t1, y0, y1, f0, f1);
}

Dopri5Stepper::Dopri5Stepper(Rhs rhs, Vec y0, double t0, Tolerances tol, double hmax)
    : rhs_(std::move(rhs)), y_(std::move(y0)), t_(t0), tol_(tol), hmax_(hmax) {
  if (tol_.abs <= 0 || tol_.rel <= 0) {
    throw std::invalid_argument("integrator tolerances must be positive");
  }
  f_.resize(y_.size());
  rhs_(t_, y_, f_);
  if (!f_.allFinite()) throw IntegrationError("non-finite rhs at initial state", t_);
  k_.assign(7, Vec(y_.size()));
  h_ = std::min(hmax_, 1e-2);
}

const StepRecord& Dopri5Stepper::step(double t_limit) {
  const auto n = y_.size();
  Vec ytmp(n), ynew(n), err(n);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    double h = std::min({h_, hmax_, t_limit - t_});
    if (h <= 0) throw IntegrationError("step requested past t_limit", t_);
    if (h < 1e-14 * std::max(1.0, std::abs(t_))) {
      throw IntegrationError("step-size underflow", t_);
    }
    k_[0] = f_;  // FSAL
    ytmp = y_ + h * (a21 * k_[0]);
    rhs_(t_ + c2 * h, ytmp, k_[1]);
    ytmp = y_ + h * (a31 * k_[0] + a32 * k_[1]);
    rhs_(t_ + c3 * h, ytmp, k_[2]);
    ytmp = y_ + h * (a41 * k_[0] + a42 * k_[1] + a43 * k_[2]);
    rhs_(t_ + c4 * h, ytmp, k_[3]);
    ytmp = y_ + h * (a51 * k_[0] + a52 * k_[1] + a53 * k_[2] + a54 * k_[3]);
    rhs_(t_ + c5 * h, ytmp, k_[4]);
    ytmp = y_ + h * (a61 * k_[0] + a62 * k_[1] + a63 * k_[2] + a64 * k_[3] + a65 * k_[4]);
    rhs_(t_ + h, ytmp, k_[5]);
    ynew = y_ + h * (b1 * k_[0] + b3 * k_[2] + b4 * k_[3] + b5 * k_[4] + b6 * k_[5]);
    rhs_(t_ + h, ynew, k_[6]);
    err = h * (e1 * k_[0] + e3 * k_[2] + e4 * k_[3] + e5 * k_[4] + e6 * k_[5] + e7 * k_[6]);

    double errnorm;
    if (!ynew.allFinite() || !err.allFinite()) {
      errnorm = 1e10;
    } else {
      double acc = 0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double sc = tol_.abs + tol_.rel * std::max(std::abs(y_[i]), std::abs(ynew[i]));
        const double q = err[i] / sc;
        acc += q * q;
      }
      errnorm = std::sqrt(acc / static_cast<double>(n));
    }

    if (errnorm <= 1.0) {
      last_.t0 = t_;
      last_.t1 = t_ + h;
      last_.y0 = y_;
      last_.y1 = ynew;
      last_.f0 = f_;
      last_.f1 = k_[6];
      t_ += h;
      y_.swap(ynew);
      f_ = k_[6];
      ++n_accepted_;
      const double fac = std::clamp(0.9 * std::pow(std::max(errnorm, 1e-10), -0.2), 0.2, 5.0);
      h_ = h * fac;
      if (!y_.allFinite()) throw IntegrationError("trajectory blow-up", t_);
      return last_;
    }
    const double fac = std::clamp(0.9 * std::pow(errnorm, -0.2), 0.1, 1.0);
    h_ = h * fac;
  }
  throw IntegrationError("step repeatedly rejected", t_);
}

int Trajectory::segment_index(double t) const {
  if (times.size() < 2) throw std::runtime_error("trajectory has no segments");
  const double lo = times.front(), hi = times.back();
  if (t < lo - 1e-12 * std::max(1.0, std::abs(lo)) ||
      t > hi + 1e-12 * std::max(1.0, std::abs(hi))) {
    throw std::out_of_range("dense evaluation outside trajectory span");
  }
  auto it = std::upper_bound(times.begin(), times.end(), t);
  int idx = static_cast<int>(it - times.begin()) - 1;
  idx = std::clamp(idx, 0, static_cast<int>(times.size()) - 2);
  return idx;
}

Vec Trajectory::at(double t) const {
  const int i = segment_index(t);
  if (t == times[i]) return states[i];
  return hermite(t, times[i], times[i + 1], states[i], states[i + 1], derivs[i],
                 derivs[i + 1]);
}

Vec Trajectory::deriv_at(double t) const {
  const int i = segment_index(t);
  return hermite_deriv(t, times[i], times[i + 1], states[i], states[i + 1], derivs[i],
                       derivs[i + 1]);
}

Trajectory flow(const SystemSpec& sys, const Vec& x0, double t0, double t1,
                Tolerances tol) {
  if (sys.kind == SystemKind::Dde) {
    throw std::invalid_argument("flow: use flow_dde for delay systems");
  }
  if (t1 <= t0) throw std::invalid_argument("flow: empty time span");
  auto rhs = [&sys](double, const Vec& y, Vec& dy) { dy = eval_rhs(sys, y); };
  Dopri5Stepper stepper(rhs, x0, t0, tol, t1 - t0);
  Trajectory traj;
  traj.times.push_back(t0);
  traj.states.push_back(x0);
  traj.derivs.push_back(stepper.deriv());
  while (stepper.time() < t1) {
    const StepRecord& rec = stepper.step(t1);
    traj.times.push_back(rec.t1);
    traj.states.push_back(rec.y1);
    traj.derivs.push_back(rec.f1);
  }
  return traj;
}

Trajectory flow_dde(const SystemSpec& sys, const std::function<double(double)>& history,
                    double t0, double t1, Tolerances tol) {
  if (sys.kind != SystemKind::Dde) {
    throw std::invalid_argument("flow_dde: system is not a DDE");
  }
  if (t1 <= t0) throw std::invalid_argument("flow_dde: empty time span");
  const double tau = sys.delay;

  Trajectory traj;
  // Seed the trajectory with the initial history sampled on a fine grid so
  // delayed lookups before t0 + tau interpolate the supplied function.
  const int nh = 64;
  for (int i = 0; i <= nh; ++i) {
    const double t = t0 - tau + tau * i / nh;
    traj.times.push_back(t);
    Vec y(1);
    y[0] = history(t);
    traj.states.push_back(y);
    // finite-difference slope of the history; exact for constant histories
    const double dh = tau / (8.0 * nh);
    Vec dy(1);
    const double tl = std::max(t - dh, t0 - tau), tr = std::min(t + dh, t0);
    dy[0] = (history(tr) - history(tl)) / (tr - tl);
    traj.derivs.push_back(dy);
  }

  auto rhs = [&](double t, const Vec& y, Vec& dy) {
    const double td = t - tau;
    Vec delayed = traj.at(td);
    dy = eval_rhs(sys, y, delayed);
  };

  Vec y0(1);
  y0[0] = history(t0);
  Dopri5Stepper stepper(rhs, y0, t0, tol, 0.45 * tau);
  // replace slope at the t0 knot with the actual rhs
  traj.derivs.back() = stepper.deriv();
  while (stepper.time() < t1) {
    const StepRecord& rec = stepper.step(t1);
    traj.times.push_back(rec.t1);
    traj.states.push_back(rec.y1);
    traj.derivs.push_back(rec.f1);
  }
  return traj;
}

}  // namespace conjmap
