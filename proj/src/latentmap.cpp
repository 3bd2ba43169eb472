#include "conjmap/latentmap.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace conjmap {

double LatentTerm::value(const Vec& y) const {
  double v = with_sgn ? sgn(y[0]) : 1.0;
  for (size_t c = 0; c < powers.size(); ++c) {
    for (int p = 0; p < powers[c]; ++p) v *= y[static_cast<Eigen::Index>(c)];
  }
  return v;
}

double LatentTerm::partial(const Vec& y, int coord) const {
  const int p = coord < static_cast<int>(powers.size()) ? powers[coord] : 0;
  if (p == 0) return 0.0;
  double v = with_sgn ? sgn(y[0]) : 1.0;
  v *= p;
  for (size_t c = 0; c < powers.size(); ++c) {
    const int pc = powers[c] - (static_cast<int>(c) == coord ? 1 : 0);
    for (int q = 0; q < pc; ++q) v *= y[static_cast<Eigen::Index>(c)];
  }
  return v;
}

std::string LatentTerm::describe() const {
  std::ostringstream os;
  if (with_sgn) os << "sgn(y1)";
  bool any = with_sgn;
  for (size_t c = 0; c < powers.size(); ++c) {
    if (powers[c] == 0) continue;
    if (any) os << "*";
    os << "y" << (c + 1);
    if (powers[c] > 1) os << "^" << powers[c];
    any = true;
  }
  if (!any) os << "1";
  return os.str();
}

Vec LatentMap::eval(const Vec& y) const {
  Vec out = Vec::Zero(dim);
  for (int i = 0; i < dim; ++i) {
    double acc = 0;
    for (size_t k = 0; k < terms[i].size(); ++k) acc += coeffs[i][k] * terms[i][k].value(y);
    out[i] = acc;
  }
  return out;
}

Mat LatentMap::jacobian(const Vec& y) const {
  Mat j = Mat::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int c = 0; c < dim; ++c) {
      double acc = 0;
      for (size_t k = 0; k < terms[i].size(); ++k) {
        acc += coeffs[i][k] * terms[i][k].partial(y, c);
      }
      j(i, c) = acc;
    }
  }
  return j;
}

int LatentMap::n_trainable() const {
  int n = 0;
  for (const auto& row : trainable) {
    for (bool t : row) n += t ? 1 : 0;
  }
  return n;
}

LatentMap LatentMap::quadratic_1d(double c1, double c2) {
  LatentMap m;
  m.dim = 1;
  m.terms = {{LatentTerm{{1}, false}, LatentTerm{{2}, false}}};
  m.coeffs = {{c1, c2}};
  m.trainable = {{true, true}};
  return m;
}

LatentMap LatentMap::cubic_1d(double c1, double c2, double c3) {
  LatentMap m;
  m.dim = 1;
  m.terms = {{LatentTerm{{1}, false}, LatentTerm{{2}, false}, LatentTerm{{3}, false}}};
  m.coeffs = {{c1, c2, c3}};
  m.trainable = {{true, true, true}};
  return m;
}

LatentMap LatentMap::lorenz_skew(double c1, double c2, double d0, double d1) {
  LatentMap m;
  m.dim = 2;
  m.terms = {
      {LatentTerm{{0, 0}, true}, LatentTerm{{1, 0}, false}, LatentTerm{{2, 0}, true}},
      {LatentTerm{{0, 0}, true}, LatentTerm{{0, 1}, false}}};
  m.coeffs = {{-1.0, c1, c2}, {d0, d1}};
  m.trainable = {{false, true, true}, {true, true}};
  return m;
}

LatentMap LatentMap::quadratic_2d() {
  LatentMap m;
  m.dim = 2;
  std::vector<LatentTerm> row = {LatentTerm{{0, 0}, false}, LatentTerm{{1, 0}, false},
                                 LatentTerm{{0, 1}, false}, LatentTerm{{2, 0}, false},
                                 LatentTerm{{1, 1}, false}, LatentTerm{{0, 2}, false}};
  m.terms = {row, row};
  m.coeffs = {std::vector<double>(row.size(), 0.0), std::vector<double>(row.size(), 0.0)};
  m.trainable = {std::vector<bool>(row.size(), true), std::vector<bool>(row.size(), true)};
  return m;
}

LatentMap LatentMap::logistic(double r) { return quadratic_1d(r, -r); }

LatentMap LatentMap::from_name(const std::string& name) {
  if (name == "quadratic_1d") return quadratic_1d();
  if (name == "cubic_1d") return cubic_1d();
  if (name == "lorenz_skew") return lorenz_skew();
  if (name == "quadratic_2d") return quadratic_2d();
  throw std::invalid_argument("unknown latent map template '" + name + "'");
}

namespace {

Vec iterate(const LatentMap& map, Vec y, int n) {
  for (int i = 0; i < n; ++i) y = map.eval(y);
  return y;
}

bool uses_sgn(const LatentMap& map) {
  for (const auto& row : map.terms) {
    for (const auto& t : row) {
      if (t.with_sgn) return true;
    }
  }
  return false;
}

PeriodicOrbitPoints build_orbit(const LatentMap& map, const Vec& y0, int period) {
  PeriodicOrbitPoints orbit;
  orbit.period = period;
  Vec y = y0;
  Mat prod = Mat::Identity(map.dim, map.dim);
  const bool sgn_map = uses_sgn(map);
  for (int k = 0; k < period; ++k) {
    orbit.points.push_back(y);
    if (sgn_map && std::abs(y[0]) < 1e-10) orbit.near_discontinuity = true;
    prod = map.jacobian(y) * prod;
    y = map.eval(y);
  }
  Eigen::EigenSolver<Mat> es(prod);
  for (int i = 0; i < map.dim; ++i) orbit.multipliers.push_back(es.eigenvalues()[i]);
  std::sort(orbit.multipliers.begin(), orbit.multipliers.end(),
            [](auto a, auto b) { return std::abs(a) > std::abs(b); });
  return orbit;
}

// minimal period of the orbit through y0 among divisors of p
bool is_primitive(const LatentMap& map, const Vec& y0, int p, double tol) {
  for (int q = 1; q < p; ++q) {
    if (p % q != 0) continue;
    if ((iterate(map, y0, q) - y0).lpNorm<Eigen::Infinity>() < tol) return false;
  }
  return true;
}

std::vector<PeriodicOrbitPoints> periodic_points_1d(const LatentMap& map, int period,
                                                    const PeriodicPointOptions& opts) {
  auto G = [&](double y) {
    Vec v(1);
    v[0] = y;
    return iterate(map, v, period)[0] - y;
  };
  std::vector<double> roots;
  double prev_y = opts.lo, prev_g = G(prev_y);
  for (int i = 1; i <= opts.grid; ++i) {
    const double y = opts.lo + (opts.hi - opts.lo) * i / opts.grid;
    const double gy = G(y);
    if (prev_g == 0.0) roots.push_back(prev_y);
    if ((prev_g < 0) != (gy < 0)) {
      // bisection to 1e-14
      double a = prev_y, b = y, fa = prev_g;
      for (int it = 0; it < 100 && (b - a) > 1e-14; ++it) {
        const double m = 0.5 * (a + b), fm = G(m);
        if ((fa < 0) == (fm < 0)) {
          a = m;
          fa = fm;
        } else {
          b = m;
        }
      }
      roots.push_back(0.5 * (a + b));
    }
    prev_y = y;
    prev_g = gy;
  }
  std::vector<PeriodicOrbitPoints> orbits;
  std::vector<double> seen;  // representatives of already collected orbits
  for (double r : roots) {
    if (std::abs(G(r)) > 1e-9) continue;  // sign flip across a discontinuity
    Vec y0(1);
    y0[0] = r;
    if (!is_primitive(map, y0, period, 1e-8)) continue;
    // canonical representative: smallest point on the orbit
    double rep = r;
    Vec y = y0;
    for (int k = 1; k < period; ++k) {
      y = map.eval(y);
      rep = std::min(rep, y[0]);
    }
    bool dup = false;
    for (double s : seen) {
      if (std::abs(s - rep) < opts.dedup_tol) dup = true;
    }
    if (dup) continue;
    seen.push_back(rep);
    Vec start(1);
    start[0] = rep;
    orbits.push_back(build_orbit(map, start, period));
  }
  return orbits;
}

std::vector<PeriodicOrbitPoints> periodic_points_nd(const LatentMap& map, int period,
                                                    const PeriodicPointOptions& opts) {
  const int d = map.dim;
  const int n_seed = 50;
  std::vector<Vec> found;
  int nonconverged = 0;
  auto G = [&](const Vec& y) { return iterate(map, y, period) - y; };
  auto JG = [&](const Vec& y) {
    Mat prod = Mat::Identity(d, d);
    Vec z = y;
    for (int k = 0; k < period; ++k) {
      prod = map.jacobian(z) * prod;
      z = map.eval(z);
    }
    return Mat(prod - Mat::Identity(d, d));
  };

  std::vector<Vec> seeds;
  if (d == 2) {
    for (int i = 0; i < n_seed; ++i) {
      for (int j = 0; j < n_seed; ++j) {
        Vec s(2);
        s[0] = opts.lo + (opts.hi - opts.lo) * (i + 0.5) / n_seed;
        s[1] = opts.lo + (opts.hi - opts.lo) * (j + 0.5) / n_seed;
        seeds.push_back(s);
      }
    }
  } else {
    throw std::invalid_argument("periodic_points: only d <= 2 supported");
  }

  for (const Vec& seed : seeds) {
    Vec y = seed;
    bool ok = false;
    for (int it = 0; it < 60; ++it) {
      const Vec r = G(y);
      if (!r.allFinite()) break;
      if (r.lpNorm<Eigen::Infinity>() < 1e-12) {
        ok = true;
        break;
      }
      Eigen::FullPivLU<Mat> lu(JG(y));
      if (!lu.isInvertible()) break;
      Vec dy = lu.solve(-r);
      // damped step: keep iterates from flying far outside the box
      double lam = 1.0;
      const double r0 = r.norm();
      for (int half = 0; half < 20; ++half) {
        Vec cand = y + lam * dy;
        if (cand.allFinite() && G(cand).norm() < r0) {
          y = cand;
          break;
        }
        lam *= 0.5;
        if (half == 19) it = 60;  // give up on this seed
      }
    }
    if (!ok) {
      ++nonconverged;
      continue;
    }
    const double margin = 0.5 * (opts.hi - opts.lo);
    if (y.minCoeff() < opts.lo - margin || y.maxCoeff() > opts.hi + margin) continue;
    if (!is_primitive(map, y, period, 1e-8)) continue;
    bool dup = false;
    for (const Vec& f : found) {
      Vec z = y;
      for (int k = 0; k < period && !dup; ++k) {
        if ((z - f).lpNorm<Eigen::Infinity>() < opts.dedup_tol) dup = true;
        z = map.eval(z);
      }
    }
    if (!dup) found.push_back(y);
  }
  std::vector<PeriodicOrbitPoints> orbits;
  for (const Vec& y : found) orbits.push_back(build_orbit(map, y, period));
  return orbits;
}

}  // namespace

std::vector<PeriodicOrbitPoints> periodic_points(const LatentMap& map, int period,
                                                 const PeriodicPointOptions& opts) {
  if (period < 1 || period > opts.max_period) {
    throw std::invalid_argument("periodic_points: period outside configured maximum");
  }
  if (map.dim == 1) return periodic_points_1d(map, period, opts);
  return periodic_points_nd(map, period, opts);
}

std::string lexicographically_minimal_rotation(const std::string& s) {
  std::string best = s;
  for (size_t i = 1; i < s.size(); ++i) {
    std::string rot = s.substr(i) + s.substr(0, i);
    if (rot < best) best = rot;
  }
  return best;
}

std::string symbolic_label(const PeriodicOrbitPoints& orbit, const LatentMap& map,
                           const PeriodicPointOptions& opts) {
  std::string sym;
  if (uses_sgn(map)) {
    for (const Vec& y : orbit.points) sym += (y[0] < 0 ? 'L' : 'R');
  } else if (map.dim == 1) {
    // interior maximum of the unimodal map
    double best_y = opts.lo, best_g = -1e300;
    const int n = 4000;
    for (int i = 0; i <= n; ++i) {
      const double y = opts.lo + (opts.hi - opts.lo) * i / n;
      Vec v(1);
      v[0] = y;
      const double g = map.eval(v)[0];
      if (g > best_g) {
        best_g = g;
        best_y = y;
      }
    }
    const double edge = (opts.hi - opts.lo) / n;
    if (best_y <= opts.lo + edge || best_y >= opts.hi - edge) {
      throw std::runtime_error("symbolic_label: map has no interior maximum");
    }
    for (const Vec& y : orbit.points) sym += (y[0] < best_y ? 'L' : 'R');
  } else {
    throw std::invalid_argument("symbolic_label: unsupported map form");
  }
  return lexicographically_minimal_rotation(sym);
}

double conjugate_to_logistic(double c1, double c2) {
  if (c2 >= 0) {
    throw std::invalid_argument("conjugate_to_logistic: requires c2 < 0");
  }
  return c1;
}

}  // namespace conjmap
