#include "conjmap/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace conjmap {

double SystemSpec::param(const std::string& key) const {
  auto it = parameters.find(key);
  if (it == parameters.end()) {
    throw std::invalid_argument("system '" + name + "' has no parameter '" + key + "'");
  }
  return it->second;
}

SystemSpec rossler_system(double c) {
  SystemSpec s;
  s.name = "rossler";
  s.preset = Preset::Rossler;
  s.dimension = 3;
  s.parameters = {{"c", c}};
  return s;
}

SystemSpec lorenz_system() {
  SystemSpec s;
  s.name = "lorenz";
  s.preset = Preset::Lorenz;
  s.dimension = 3;
  s.parameters = {{"sigma", 10.0}, {"rho", 28.0}, {"beta", 8.0 / 3.0}};
  return s;
}

SystemSpec gissinger_system(double mu, double nu, double gamma) {
  SystemSpec s;
  s.name = "gissinger";
  s.preset = Preset::Gissinger;
  s.dimension = 3;
  s.parameters = {{"mu", mu}, {"nu", nu}, {"gamma", gamma}};
  return s;
}

SystemSpec kse_system(int modes, double nu) {
  if (modes < 1) throw std::invalid_argument("kse: modes must be >= 1");
  SystemSpec s;
  s.name = "kse";
  s.preset = Preset::Kse;
  s.dimension = modes;
  s.parameters = {{"nu", nu}, {"modes", static_cast<double>(modes)}};
  return s;
}

SystemSpec mackey_glass_system(double p, double tau) {
  if (tau <= 0) throw std::invalid_argument("mackey_glass: tau must be positive");
  SystemSpec s;
  s.name = "mackey_glass";
  s.kind = SystemKind::Dde;
  s.preset = Preset::MackeyGlass;
  s.dimension = 1;
  s.parameters = {{"p", p}, {"tau", tau}};
  s.delay = tau;
  return s;
}

SystemSpec make_system(const std::string& name,
                       const std::map<std::string, double>& overrides) {
  auto get = [&](const std::string& key, double fallback) {
    auto it = overrides.find(key);
    return it == overrides.end() ? fallback : it->second;
  };
  SystemSpec s;
  if (name == "rossler") {
    s = rossler_system(get("c", 18.0));
  } else if (name == "lorenz") {
    s = lorenz_system();
  } else if (name == "gissinger") {
    s = gissinger_system(get("mu", 0.12), get("nu", 0.1), get("gamma", 0.85));
  } else if (name == "kse") {
    s = kse_system(static_cast<int>(get("modes", 14)), get("nu", 0.0298));
  } else if (name == "mackey_glass") {
    s = mackey_glass_system(get("p", 9.65), get("tau", 2.0));
  } else {
    throw std::invalid_argument("unknown system preset '" + name + "'");
  }
  return s;
}

namespace {

Vec rossler_rhs(const SystemSpec& s, const Vec& x) {
  const double c = s.param("c");
  Vec f(3);
  f[0] = -x[1] - x[2];
  f[1] = x[0] + 0.1 * x[1];
  f[2] = 0.1 + x[2] * (x[0] - c);
  return f;
}

Vec lorenz_rhs(const SystemSpec& s, const Vec& x) {
  const double sigma = s.param("sigma"), rho = s.param("rho"), beta = s.param("beta");
  Vec f(3);
  f[0] = sigma * (x[1] - x[0]);
  f[1] = x[0] * (rho - x[2]) - x[1];
  f[2] = x[0] * x[1] - beta * x[2];
  return f;
}

Vec gissinger_rhs(const SystemSpec& s, const Vec& x) {
  const double mu = s.param("mu"), nu = s.param("nu"), gamma = s.param("gamma");
  Vec f(3);
  f[0] = mu * x[0] - x[1] * x[2];
  f[1] = -nu * x[1] + x[0] * x[2];
  f[2] = gamma - x[2] + x[0] * x[1];
  return f;
}

// Galerkin projection of the KSE onto odd periodic modes:
//   xk' = k^2 (1 - nu k^2) xk + (k/2) sum_{i=1}^{N-k} x_i x_{k+i}
//                             - (k/4) sum_{j=1}^{k-1} x_j x_{k-j}
Vec kse_rhs(const SystemSpec& s, const Vec& x) {
  const double nu = s.param("nu");
  const int n = s.dimension;
  Vec f(n);
  for (int k = 1; k <= n; ++k) {
    const double kk = static_cast<double>(k);
    double v = kk * kk * (1.0 - nu * kk * kk) * x[k - 1];
    double conv = 0.0;
    for (int i = 1; i <= n - k; ++i) conv += x[i - 1] * x[k + i - 1];
    v += 0.5 * kk * conv;
    double self = 0.0;
    for (int j = 1; j <= k - 1; ++j) self += x[j - 1] * x[k - j - 1];
    v -= 0.25 * kk * self;
    f[k - 1] = v;
  }
  return f;
}

Vec mackey_glass_rhs(const SystemSpec& s, const Vec& x, const Vec& xd) {
  const double p = s.param("p");
  Vec f(1);
  const double xt = xd[0];
  f[0] = 2.0 * xt / (1.0 + std::pow(xt, p)) - x[0];
  return f;
}

}  // namespace

Vec eval_rhs(const SystemSpec& sys, const Vec& state) {
  if (state.size() != sys.dimension) {
    throw std::invalid_argument("eval_rhs: state dimension mismatch for '" + sys.name + "'");
  }
  if (sys.kind == SystemKind::Dde) {
    throw std::invalid_argument("eval_rhs: DDE system requires a delayed state");
  }
  switch (sys.preset) {
    case Preset::Rossler: return rossler_rhs(sys, state);
    case Preset::Lorenz: return lorenz_rhs(sys, state);
    case Preset::Gissinger: return gissinger_rhs(sys, state);
    case Preset::Kse: return kse_rhs(sys, state);
    case Preset::Custom:
      if (!sys.custom_rhs) throw std::invalid_argument("custom system has no rhs");
      return sys.custom_rhs(state);
    default:
      throw std::invalid_argument("eval_rhs: unsupported preset");
  }
}

Vec eval_rhs(const SystemSpec& sys, const Vec& state, const Vec& delayed) {
  if (sys.kind != SystemKind::Dde) return eval_rhs(sys, state);
  if (state.size() != sys.dimension || delayed.size() != sys.dimension) {
    throw std::invalid_argument("eval_rhs: state dimension mismatch for '" + sys.name + "'");
  }
  if (sys.preset != Preset::MackeyGlass) {
    throw std::invalid_argument("eval_rhs: unsupported DDE preset");
  }
  return mackey_glass_rhs(sys, state, delayed);
}

bool has_jacobian(const SystemSpec& sys) {
  if (sys.kind == SystemKind::Dde) return false;
  return sys.preset != Preset::Custom || static_cast<bool>(sys.custom_jacobian);
}

Mat eval_jacobian(const SystemSpec& sys, const Vec& x) {
  if (x.size() != sys.dimension) {
    throw std::invalid_argument("eval_jacobian: state dimension mismatch");
  }
  switch (sys.preset) {
    case Preset::Rossler: {
      const double c = sys.param("c");
      Mat j(3, 3);
      j << 0, -1, -1,
           1, 0.1, 0,
           x[2], 0, x[0] - c;
      return j;
    }
    case Preset::Lorenz: {
      const double sigma = sys.param("sigma"), rho = sys.param("rho"),
                   beta = sys.param("beta");
      Mat j(3, 3);
      j << -sigma, sigma, 0,
           rho - x[2], -1, -x[0],
           x[1], x[0], -beta;
      return j;
    }
    case Preset::Gissinger: {
      const double mu = sys.param("mu"), nu = sys.param("nu");
      Mat j(3, 3);
      j << mu, -x[2], -x[1],
           x[2], -nu, x[0],
           x[1], x[0], -1;
      return j;
    }
    case Preset::Kse: {
      const double nu = sys.param("nu");
      const int n = sys.dimension;
      Mat j = Mat::Zero(n, n);
      for (int k = 1; k <= n; ++k) {
        const double kk = static_cast<double>(k);
        j(k - 1, k - 1) += kk * kk * (1.0 - nu * kk * kk);
        for (int m = 1; m <= n; ++m) {
          double v = 0.0;
          if (k + m <= n) v += 0.5 * kk * x[k + m - 1];
          if (m > k) v += 0.5 * kk * x[m - k - 1];
          if (m < k) v -= 0.5 * kk * x[k - m - 1];
          j(k - 1, m - 1) += v;
        }
      }
      return j;
    }
    case Preset::Custom:
      if (sys.custom_jacobian) return sys.custom_jacobian(x);
      throw std::invalid_argument("custom system has no jacobian");
    default:
      throw std::invalid_argument("eval_jacobian: unsupported preset");
  }
}

namespace {
void gissinger_scales(double mu, double nu, double gamma, double& e1, double& e2,
                      double& e3) {
  if (mu <= 0 || nu <= 0) {
    throw std::invalid_argument("gissinger_rescale: mu and nu must be positive");
  }
  e1 = std::sqrt(nu + gamma * std::sqrt(nu / mu));
  e2 = std::sqrt(mu + gamma * std::sqrt(mu / nu));
  e3 = -std::sqrt(mu * nu) - gamma;
}
}  // namespace

Eigen::Vector3d gissinger_rescale(const Eigen::Vector3d& x, double mu, double nu,
                                  double gamma) {
  double e1, e2, e3;
  gissinger_scales(mu, nu, gamma, e1, e2, e3);
  return {x[0] / e1, x[1] / e2, (x[2] - gamma) / e3};
}

Eigen::Vector3d gissinger_rescale_inverse(const Eigen::Vector3d& xhat, double mu,
                                          double nu, double gamma) {
  double e1, e2, e3;
  gissinger_scales(mu, nu, gamma, e1, e2, e3);
  return {xhat[0] * e1, xhat[1] * e2, xhat[2] * e3 + gamma};
}

}  // namespace conjmap
