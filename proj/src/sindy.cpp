#include "conjmap/sindy.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace conjmap {

namespace {

void enumerate_powers(int dim, int degree_left, std::vector<int>& current,
                      std::vector<std::vector<int>>& out) {
  if (static_cast<int>(current.size()) == dim) {
    out.push_back(current);
    return;
  }
  for (int p = 0; p <= degree_left; ++p) {
    current.push_back(p);
    enumerate_powers(dim, degree_left - p, current, out);
    current.pop_back();
  }
}

double term_value(const std::vector<int>& powers, const Vec& x) {
  double v = 1.0;
  for (size_t c = 0; c < powers.size(); ++c) {
    for (int p = 0; p < powers[c]; ++p) v *= x[static_cast<Eigen::Index>(c)];
  }
  return v;
}

}  // namespace

std::vector<std::vector<int>> monomial_library(int dim, int max_degree) {
  std::vector<std::vector<int>> out;
  std::vector<int> current;
  enumerate_powers(dim, max_degree, current, out);
  // sort by total degree, then lexicographic, so the constant term is first
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    int da = 0, db = 0;
    for (int p : a) da += p;
    for (int p : b) db += p;
    if (da != db) return da < db;
    return a < b;
  });
  return out;
}

Vec SparseFit::predict(const Vec& x) const {
  Vec theta(static_cast<Eigen::Index>(term_powers.size()));
  for (size_t k = 0; k < term_powers.size(); ++k) theta[k] = term_value(term_powers[k], x);
  return coeffs.transpose() * theta;
}

std::string SparseFit::describe() const {
  std::ostringstream os;
  os.precision(5);
  for (int j = 0; j < out_dim; ++j) {
    if (out_dim > 1) os << "g" << (j + 1) << "(y) = ";
    else os << "g(y) = ";
    bool first = true;
    for (size_t k = 0; k < term_powers.size(); ++k) {
      if (!active(static_cast<Eigen::Index>(k), j)) continue;
      const double c = coeffs(static_cast<Eigen::Index>(k), j);
      if (!first) os << (c < 0 ? " - " : " + ");
      else if (c < 0) os << "-";
      os << std::abs(c);
      std::string mono;
      for (size_t d = 0; d < term_powers[k].size(); ++d) {
        if (term_powers[k][d] == 0) continue;
        mono += "*y" + std::to_string(d + 1);
        if (term_powers[k][d] > 1) mono += "^" + std::to_string(term_powers[k][d]);
      }
      os << mono;
      first = false;
    }
    if (first) os << "0";
    os << "\n";
  }
  return os.str();
}

SparseFit stls_fit(const std::vector<Vec>& inputs, const std::vector<Vec>& targets,
                   int max_degree, double threshold, double ridge) {
  if (inputs.size() != targets.size() || inputs.empty()) {
    throw std::invalid_argument("stls_fit: inputs and targets must pair up");
  }
  if (threshold < 0) throw std::invalid_argument("stls_fit: threshold must be >= 0");
  SparseFit fit;
  fit.in_dim = static_cast<int>(inputs.front().size());
  fit.out_dim = static_cast<int>(targets.front().size());
  fit.max_degree = max_degree;
  fit.term_powers = monomial_library(fit.in_dim, max_degree);
  const int n = static_cast<int>(inputs.size());
  const int m = static_cast<int>(fit.term_powers.size());
  if (n < m) throw std::invalid_argument("stls_fit: fewer samples than library terms");

  Mat theta(n, m);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < m; ++k) theta(i, k) = term_value(fit.term_powers[k], inputs[i]);
  }
  Mat y(n, fit.out_dim);
  for (int i = 0; i < n; ++i) y.row(i) = targets[i].transpose();

  {
    Eigen::JacobiSVD<Mat> svd(theta);
    const double smin = svd.singularValues()(svd.singularValues().size() - 1);
    fit.condition_estimate = smin > 0 ? svd.singularValues()(0) / smin : 1e300;
    if (fit.condition_estimate > 1e12) {
      throw std::runtime_error("stls_fit: rank-deficient library matrix, cond ~ " +
                               std::to_string(fit.condition_estimate));
    }
  }

  fit.coeffs = Mat::Zero(m, fit.out_dim);
  fit.active.setConstant(m, fit.out_dim, true);

  // ridge-stabilized least squares restricted to the active mask, iterated
  // with small-coefficient thresholding until the mask is a fixed point
  for (int round = 0; round < 2 * m + 2; ++round) {
    fit.coeffs.setZero();
    for (int j = 0; j < fit.out_dim; ++j) {
      std::vector<int> idx;
      for (int k = 0; k < m; ++k) {
        if (fit.active(k, j)) idx.push_back(k);
      }
      if (idx.empty()) continue;
      Mat sub(n, static_cast<int>(idx.size()));
      for (size_t k = 0; k < idx.size(); ++k) sub.col(static_cast<int>(k)) = theta.col(idx[k]);
      Mat normal = sub.transpose() * sub;
      normal.diagonal().array() += ridge;
      Vec sol = normal.ldlt().solve(sub.transpose() * y.col(j));
      for (size_t k = 0; k < idx.size(); ++k) fit.coeffs(idx[k], j) = sol[static_cast<int>(k)];
    }
    bool changed = false;
    for (int j = 0; j < fit.out_dim; ++j) {
      for (int k = 0; k < m; ++k) {
        if (fit.active(k, j) && std::abs(fit.coeffs(k, j)) < threshold) {
          fit.active(k, j) = false;
          fit.coeffs(k, j) = 0.0;
          changed = true;
        }
      }
    }
    if (!changed) break;
  }

  fit.residual_mse = (theta * fit.coeffs - y).squaredNorm() / (n * fit.out_dim);
  return fit;
}

std::vector<double> one_step_error(const std::function<Vec(const Vec&)>& mapping,
                                   const std::vector<Vec>& points) {
  if (points.size() < 2) throw std::invalid_argument("one_step_error: need >= 2 points");
  std::vector<double> errs;
  errs.reserve(points.size() - 1);
  for (size_t i = 0; i + 1 < points.size(); ++i) {
    errs.push_back((mapping(points[i]) - points[i + 1]).norm());
  }
  return errs;
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of empty set");
  std::sort(values.begin(), values.end());
  const size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace conjmap
