#pragma once

#include "conjmap/dynamics.hpp"

#include <functional>
#include <string>
#include <vector>

namespace conjmap {

/// Sparse polynomial fit x_{n+1} ~ Theta(x_n) Xi obtained by sequentially
/// thresholded least squares over a monomial library.
struct SparseFit {
  int in_dim = 1;
  int out_dim = 1;
  int max_degree = 2;
  std::vector<std::vector<int>> term_powers;  // one exponent tuple per library term
  Mat coeffs;                                 // terms x out_dim; masked entries exactly 0
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> active;
  double residual_mse = 0;
  double condition_estimate = 0;

  Vec predict(const Vec& x) const;
  std::string describe() const;
};

/// Monomial exponent tuples of total degree <= max_degree (constant first).
std::vector<std::vector<int>> monomial_library(int dim, int max_degree);

SparseFit stls_fit(const std::vector<Vec>& inputs, const std::vector<Vec>& targets,
                   int max_degree, double threshold, double ridge = 1e-12);

/// |predicted x_{n+1} - observed x_{n+1}| per consecutive pair.
std::vector<double> one_step_error(const std::function<Vec(const Vec&)>& mapping,
                                   const std::vector<Vec>& points);

double median(std::vector<double> values);

}  // namespace conjmap
