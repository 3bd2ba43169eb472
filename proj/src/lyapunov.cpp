#include "conjmap/lyapunov.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>

namespace conjmap {

LyapunovSpectrum lyapunov_spectrum(const SystemSpec& sys, const Vec& x0,
                                   const LyapunovOptions& opts) {
  if (sys.kind == SystemKind::Dde) {
    throw std::invalid_argument("lyapunov_spectrum: DDE spectra not supported");
  }
  if (!has_jacobian(sys)) {
    throw std::invalid_argument("lyapunov_spectrum: system has no jacobian");
  }
  if (opts.renorm_interval <= 0 || opts.t_total <= 10 * opts.renorm_interval) {
    throw std::invalid_argument("lyapunov_spectrum: need t_total >> renorm_interval > 0");
  }
  const int d = sys.dimension;

  // settle onto the attractor first
  Vec x = x0;
  if (opts.transient > 0) x = flow(sys, x0, 0.0, opts.transient, opts.tol).states.back();

  // joint state + tangent frame, column-major tangent block
  auto rhs = [&](double, const Vec& z, Vec& dz) {
    const Vec state = z.head(d);
    const Mat jac = eval_jacobian(sys, state);
    dz.resize(d + d * d);
    dz.head(d) = eval_rhs(sys, state);
    Eigen::Map<const Mat> m(z.data() + d, d, d);
    Eigen::Map<Mat> dm(dz.data() + d, d, d);
    dm = jac * m;
  };

  Vec z(d + d * d);
  z.head(d) = x;
  Eigen::Map<Mat>(z.data() + d, d, d) = Mat::Identity(d, d);

  Dopri5Stepper stepper(rhs, z, 0.0, opts.tol, opts.renorm_interval);
  Vec log_sums = Vec::Zero(d);
  LyapunovSpectrum out;

  const int n_renorm = static_cast<int>(std::round(opts.t_total / opts.renorm_interval));
  const int step_80 = std::max(1, (4 * n_renorm) / 5);
  double drift_check = 0.0;
  Vec at_80 = Vec::Zero(d);
  for (int step = 1; step <= n_renorm; ++step) {
    const double t_target = step * opts.renorm_interval;
    while (stepper.time() < t_target - 1e-12) stepper.step(t_target);

    Vec zc = stepper.state();
    Eigen::Map<Mat> m(zc.data() + d, d, d);
    Eigen::HouseholderQR<Mat> qr(m);
    Mat q = qr.householderQ() * Mat::Identity(d, d);
    Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < d; ++j) {
      // keep R diagonal positive by flipping columns of Q
      if (r(j, j) < 0) q.col(j) *= -1.0;
      log_sums[j] += std::log(std::abs(r(j, j)));
    }
    m = q;

    // restart the stepper from the renormalized frame
    stepper = Dopri5Stepper(rhs, zc, stepper.time(), opts.tol, opts.renorm_interval);

    if (opts.keep_running || step == n_renorm || step == step_80) {
      Vec est = log_sums / t_target;
      if (step == step_80) at_80 = est;
      if (opts.keep_running) {
        out.sample_times.push_back(t_target);
        out.running.push_back(est);
      }
      if (step == n_renorm) drift_check = std::abs(est[0] - at_80[0]);
    }
  }

  Vec exps = log_sums / opts.t_total;
  std::sort(exps.begin(), exps.end(), std::greater<double>());
  out.exponents = exps;
  out.d_ky = kaplan_yorke(exps);
  out.latent_dim = latent_dim_from_dky(std::max(out.d_ky, 1.0));
  out.converged = drift_check <= opts.drift_tol;
  return out;
}

double kaplan_yorke(const Vec& exponents) {
  const int d = static_cast<int>(exponents.size());
  for (int i = 1; i < d; ++i) {
    if (exponents[i] > exponents[i - 1] + 1e-12) {
      throw std::invalid_argument("kaplan_yorke: exponents must be sorted descending");
    }
  }
  if (d == 0) return 0.0;
  if (exponents[0] < 0) return 0.0;
  double partial = 0.0;
  int k = 0;
  for (int i = 0; i < d; ++i) {
    if (partial + exponents[i] >= 0) {
      partial += exponents[i];
      k = i + 1;
    } else {
      break;
    }
  }
  if (k >= d) return static_cast<double>(d);  // all sums nonnegative
  return k + partial / std::abs(exponents[k]);
}

int latent_dim_from_dky(double d_ky) {
  if (d_ky < 1.0) throw std::invalid_argument("latent_dim: need D_KY >= 1");
  const double v = d_ky - 1.0;
  const int r = static_cast<int>(std::floor(v + 0.5));  // half away from zero (v >= 0)
  return std::max(r, 1);
}

}  // namespace conjmap
