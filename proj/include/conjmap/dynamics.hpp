#pragma once

#include <Eigen/Dense>

#include <functional>
#include <map>
#include <string>

namespace conjmap {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class SystemKind { Ode, Dde };

enum class Preset { Rossler, Lorenz, Gissinger, Kse, MackeyGlass, Custom };

/// A named flow (ODE or DDE) with parameters and right-hand side.
struct SystemSpec {
  std::string name;
  SystemKind kind = SystemKind::Ode;
  Preset preset = Preset::Custom;
  int dimension = 0;
  std::map<std::string, double> parameters;
  double delay = 0.0;  // dde only

  // custom systems (used heavily by the test suites)
  std::function<Vec(const Vec&)> custom_rhs;
  std::function<Mat(const Vec&)> custom_jacobian;

  double param(const std::string& key) const;
};

SystemSpec rossler_system(double c = 18.0);
SystemSpec lorenz_system();
SystemSpec gissinger_system(double mu = 0.12, double nu = 0.1, double gamma = 0.85);
SystemSpec kse_system(int modes = 14, double nu = 0.0298);
SystemSpec mackey_glass_system(double p = 9.65, double tau = 2.0);

/// Build a preset by name ("rossler", "lorenz", "gissinger", "kse",
/// "mackey_glass") with parameter overrides merged in.
SystemSpec make_system(const std::string& name,
                       const std::map<std::string, double>& overrides = {});

/// F(x) for ODE systems. Throws on dimension mismatch or if the system
/// is a DDE (which needs the delayed state).
Vec eval_rhs(const SystemSpec& sys, const Vec& state);

/// F(x, x_tau) for DDE systems.
Vec eval_rhs(const SystemSpec& sys, const Vec& state, const Vec& delayed);

/// dF/dx for ODE systems; analytic for all presets.
Mat eval_jacobian(const SystemSpec& sys, const Vec& state);

bool has_jacobian(const SystemSpec& sys);

/// Affine change of variable taking the Gissinger system to hatted
/// coordinates where the equilibria sit at the origin and (+-1, -+1, 1).
Eigen::Vector3d gissinger_rescale(const Eigen::Vector3d& x, double mu, double nu,
                                  double gamma);
Eigen::Vector3d gissinger_rescale_inverse(const Eigen::Vector3d& xhat, double mu,
                                          double nu, double gamma);

}  // namespace conjmap
