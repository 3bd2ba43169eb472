#include "conjmap/upo.hpp"

#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace conjmap {

namespace {

Mat system_jacobian(const SystemSpec& sys, const Vec& x) {
  if (has_jacobian(sys)) return eval_jacobian(sys, x);
  const auto d = x.size();
  Mat j(d, d);
  Vec xp = x, xm = x;
  for (Eigen::Index k = 0; k < d; ++k) {
    const double eps = 1e-6 * std::max(1.0, std::abs(x[k]));
    xp[k] = x[k] + eps;
    xm[k] = x[k] - eps;
    j.col(k) = (eval_rhs(sys, xp) - eval_rhs(sys, xm)) / (2 * eps);
    xp[k] = xm[k] = x[k];
  }
  return j;
}

/// Periodic linear interpolation of a loop onto a uniform mesh of size m.
std::vector<Vec> resample_loop(const std::vector<Vec>& states, int m) {
  const int k = static_cast<int>(states.size());
  if (k < 3) throw std::invalid_argument("upo: seed needs at least 3 states");
  std::vector<Vec> out(m);
  for (int i = 0; i < m; ++i) {
    const double s = static_cast<double>(i) * k / m;
    const int lo = static_cast<int>(std::floor(s));
    const double w = s - lo;
    out[i] = (1.0 - w) * states[lo % k] + w * states[(lo + 1) % k];
  }
  return out;
}

struct Residual {
  Vec r;           // m*d collocation rows + 1 phase row
  double norm_inf; // of r
};

Residual evaluate_residual(const SystemSpec& sys, const std::vector<Vec>& x,
                           double period, const std::vector<Vec>& f_ref,
                           const std::vector<Vec>& x_ref,
                           std::vector<Vec>* f_out) {
  const int m = static_cast<int>(x.size());
  const auto d = x.front().size();
  const double h = 1.0 / m;
  std::vector<Vec> f(m);
  for (int i = 0; i < m; ++i) f[i] = eval_rhs(sys, x[i]);
  Residual res;
  res.r.resize(m * d + 1);
  for (int i = 0; i < m; ++i) {
    const int ip = (i + 1) % m;
    res.r.segment(i * d, d) =
        x[ip] - x[i] - (h * period / 2.0) * (f[i] + f[ip]);
  }
  double phase = 0;
  for (int i = 0; i < m; ++i) phase += f_ref[i].dot(x[i] - x_ref[i]);
  res.r[m * d] = phase / m;
  res.norm_inf = res.r.lpNorm<Eigen::Infinity>();
  if (f_out) *f_out = std::move(f);
  return res;
}

}  // namespace

UpoResult solve_upo(const SystemSpec& sys, const UpoSeed& seed,
                    const UpoOptions& opts) {
  if (sys.kind != SystemKind::Ode)
    throw std::invalid_argument("solve_upo: only ODE systems are supported");
  if (!(seed.period > 0))
    throw std::invalid_argument("solve_upo: seed period must be positive");

  const int m = opts.mesh;
  std::vector<Vec> x = resample_loop(seed.states, m);
  const auto d = x.front().size();
  double period = seed.period;

  const std::vector<Vec> x_ref = x;
  std::vector<Vec> f_ref(m);
  for (int i = 0; i < m; ++i) f_ref[i] = eval_rhs(sys, x_ref[i]);

  const double h = 1.0 / m;
  const int n_unknowns = static_cast<int>(m * d) + 1;

  UpoResult result;
  result.symbols = seed.symbols;

  std::vector<Vec> f;
  Residual res = evaluate_residual(sys, x, period, f_ref, x_ref, &f);

  Eigen::SparseMatrix<double> a(n_unknowns, n_unknowns);
  std::vector<Eigen::Triplet<double>> trip;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;

  for (int it = 0; it < opts.max_newton; ++it) {
    if (res.norm_inf < opts.tol) {
      result.converged = true;
      break;
    }

    trip.clear();
    for (int i = 0; i < m; ++i) {
      const int ip = (i + 1) % m;
      const Mat ji = system_jacobian(sys, x[i]);
      const Mat jp = system_jacobian(sys, x[ip]);
      for (Eigen::Index r = 0; r < d; ++r) {
        for (Eigen::Index c = 0; c < d; ++c) {
          double v = -(h * period / 2.0) * ji(r, c);
          if (r == c) v -= 1.0;
          trip.emplace_back(i * d + r, i * d + c, v);
          v = -(h * period / 2.0) * jp(r, c);
          if (r == c) v += 1.0;
          trip.emplace_back(i * d + r, ip * d + c, v);
        }
        trip.emplace_back(i * d + r, m * d, -(h / 2.0) * (f[i][r] + f[ip][r]));
      }
      for (Eigen::Index c = 0; c < d; ++c) {
        trip.emplace_back(m * d, i * d + c, f_ref[i][c] / m);
      }
    }
    a.setFromTriplets(trip.begin(), trip.end());
    lu.compute(a);
    if (lu.info() != Eigen::Success)
      throw std::runtime_error("solve_upo: singular collocation Jacobian");
    Vec dz = lu.solve(-res.r);

    double alpha = 1.0;
    bool accepted = false;
    std::vector<Vec> x_new(m);
    while (alpha >= opts.min_damping) {
      for (int i = 0; i < m; ++i) x_new[i] = x[i] + alpha * dz.segment(i * d, d);
      const double period_new = period + alpha * dz[m * d];
      if (period_new > 0) {
        std::vector<Vec> f_new;
        Residual cand =
            evaluate_residual(sys, x_new, period_new, f_ref, x_ref, &f_new);
        if (std::isfinite(cand.norm_inf) &&
            (cand.norm_inf < (1.0 - 0.25 * alpha) * res.norm_inf ||
             cand.norm_inf < opts.tol)) {
          x = std::move(x_new);
          x_new.resize(m);
          period = period_new;
          f = std::move(f_new);
          res = std::move(cand);
          accepted = true;
          break;
        }
      }
      alpha /= 2.0;
    }
    ++result.newton_iterations;
    if (!accepted) break;
  }
  if (!result.converged && res.norm_inf < opts.tol) result.converged = true;

  result.states = x;
  result.period = period;
  result.residual = res.norm_inf;

  if (opts.richardson && result.converged) {
    UpoSeed fine;
    fine.states = x;
    fine.period = period;
    fine.symbols = seed.symbols;
    UpoOptions fopts = opts;
    fopts.mesh = 2 * m;
    fopts.richardson = false;
    UpoResult refined = solve_upo(sys, fine, fopts);
    if (refined.converged) {
      // trapezoidal period error is O(h^2): eliminate the leading term
      refined.period = (4.0 * refined.period - period) / 3.0;
      refined.newton_iterations = result.newton_iterations;
      refined.symbols = seed.symbols;
      return refined;
    }
  }
  return result;
}

namespace {

/// Reconstruct the full on-section state from stored section coordinates
/// (hyperplane sections without an observable transform).
Vec section_unproject(const SectionSpec& section, const Vec& coords, int dim) {
  if (section.transform)
    throw std::invalid_argument("section_unproject: transformed sections unsupported");
  Vec state = Vec::Zero(dim);
  std::vector<bool> stored(dim, false);
  for (size_t i = 0; i < section.store_coords.size(); ++i) {
    state[section.store_coords[i]] = coords[static_cast<Eigen::Index>(i)];
    stored[section.store_coords[i]] = true;
  }
  int missing = -1;
  for (int i = 0; i < dim; ++i) {
    if (!stored[i] && section.normal[i] != 0) {
      if (missing >= 0)
        throw std::invalid_argument("section_unproject: underdetermined state");
      missing = i;
    }
  }
  if (missing >= 0) {
    double acc = section.offset;
    for (int i = 0; i < dim; ++i) {
      if (i != missing) acc -= section.normal[i] * state[i];
    }
    state[missing] = acc / section.normal[missing];
  }
  return state;
}

/// Flow through `hits` consecutive section states, sampling each leg
/// uniformly in time. Legs restart from the recorded anchors, so small
/// decoding errors do not accumulate around the loop.
UpoSeed loop_from_crossings(const SystemSpec& sys, const std::vector<Vec>& hits,
                            const SectionSpec& section,
                            int samples_per_crossing) {
  UpoSeed seed;
  const int p = static_cast<int>(hits.size());
  double total = 0;
  for (int k = 0; k < p; ++k) {
    const double t_leg =
        flow_to_section(sys, hits[k], section, 1e-3, 1e4).time;
    Trajectory traj = flow(sys, hits[k], 0.0, t_leg);
    for (int i = 0; i < samples_per_crossing; ++i) {
      seed.states.push_back(traj.at(t_leg * i / samples_per_crossing));
    }
    total += t_leg;
  }
  seed.period = total;
  return seed;
}

}  // namespace

UpoSeed seed_guess(const ConjugacyModel& model, const SystemSpec& sys,
                   const SectionSpec& section, const PeriodicOrbitPoints& orbit,
                   int samples_per_crossing) {
  std::vector<Vec> hits;
  for (const Vec& y : orbit.points) {
    Vec coords = decode(model, y);
    if (model.normalization) coords = model.normalization->to_raw(coords);
    hits.push_back(section_unproject(section, coords, sys.dimension));
  }
  UpoSeed seed = loop_from_crossings(sys, hits, section, samples_per_crossing);
  seed.symbols = orbit.symbols;
  return seed;
}

std::vector<UpoSeed> seed_from_recurrences(const SectionDataset& dataset,
                                           const SystemSpec& sys,
                                           const SectionSpec& section,
                                           const std::string& labels,
                                           const std::string& symbols,
                                           int max_seeds,
                                           int samples_per_crossing) {
  const int p = static_cast<int>(symbols.size());
  const int n = dataset.size();
  if (static_cast<int>(labels.size()) != n)
    throw std::invalid_argument("seed_from_recurrences: one label per crossing");
  if (dataset.full_states.empty())
    throw std::invalid_argument("seed_from_recurrences: dataset lacks full states");

  std::vector<std::string> rotations;
  for (int r = 0; r < p; ++r)
    rotations.push_back(symbols.substr(r) + symbols.substr(0, r));

  struct Candidate {
    int start;
    double dist;
  };
  std::vector<Candidate> cands;
  for (int i = 0; i + p < n; ++i) {
    const std::string window = labels.substr(i, p);
    if (std::find(rotations.begin(), rotations.end(), window) == rotations.end())
      continue;
    const double dist = (dataset.points[i + p] - dataset.points[i]).norm();
    // primitivity: a window that nearly closes after a proper divisor of p
    // is a shorter orbit traversed repeatedly
    bool repeated = false;
    for (int q = 1; q < p; ++q) {
      if (p % q) continue;
      const double sub = (dataset.points[i + q] - dataset.points[i]).norm();
      if (sub < std::max(5.0 * dist, 1e-4)) repeated = true;
    }
    if (repeated) continue;
    cands.push_back({i, dist});
  }
  std::sort(cands.begin(), cands.end(),
            [](const Candidate& a, const Candidate& b) { return a.dist < b.dist; });

  std::vector<UpoSeed> seeds;
  std::vector<int> taken;
  for (const Candidate& c : cands) {
    if (static_cast<int>(seeds.size()) >= max_seeds) break;
    bool overlap = false;
    for (int t : taken) overlap = overlap || std::abs(t - c.start) < p;
    if (overlap) continue;
    std::vector<Vec> hits(dataset.full_states.begin() + c.start,
                          dataset.full_states.begin() + c.start + p);
    UpoSeed seed = loop_from_crossings(sys, hits, section, samples_per_crossing);
    seed.symbols = labels.substr(c.start, p);
    seeds.push_back(std::move(seed));
    taken.push_back(c.start);
  }
  return seeds;
}

UpoSeed embed_seed(const UpoSeed& seed, int dim) {
  UpoSeed out;
  out.period = seed.period;
  out.symbols = seed.symbols;
  for (const Vec& x : seed.states) {
    if (x.size() > dim) throw std::invalid_argument("embed_seed: target too small");
    Vec y = Vec::Zero(dim);
    y.head(x.size()) = x;
    out.states.push_back(y);
  }
  return out;
}

double verify_upo(const SystemSpec& sys, const UpoResult& orbit,
                  const Tolerances& tol) {
  Trajectory traj = flow(sys, orbit.states.front(), 0.0, orbit.period, tol);
  return (traj.at(orbit.period) - orbit.states.front()).norm();
}

std::string orbit_symbols(const SystemSpec& sys, const UpoResult& orbit,
                          const SectionSpec& section,
                          const std::function<char(const Vec&)>& label) {
  Trajectory traj = flow(sys, orbit.states.front(), 0.0, orbit.period);
  SectionDataset crossings = detect_crossings(traj, sys, section);
  std::string out;
  out.push_back(label(orbit.states.front()));
  // skip the t = 0 crossing (the anchor sits on the section) and the final
  // one that closes the loop back at states[0]
  const double eps = 1e-3 * orbit.period;
  for (int i = 0; i < crossings.size(); ++i) {
    if (crossings.times[i] > eps && crossings.times[i] < orbit.period - eps) {
      out.push_back(label(crossings.full_states[i]));
    }
  }
  return out;
}

}  // namespace conjmap
