#include "conjmap/conjnet.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace conjmap {

namespace {
constexpr double kSeluLambda = 1.0507009873554805;
constexpr double kSeluAlpha = 1.6732632423543772;
}  // namespace

double selu(double x) {
  return x > 0 ? kSeluLambda * x : kSeluLambda * kSeluAlpha * (std::exp(x) - 1.0);
}

double selu_deriv(double x) {
  return x > 0 ? kSeluLambda : kSeluLambda * kSeluAlpha * std::exp(x);
}

Mlp Mlp::make(int in_dim, int width, int out_dim, int hidden, std::mt19937_64& rng) {
  if (hidden < 1) throw std::invalid_argument("Mlp: need at least one hidden layer");
  Mlp net;
  net.in_dim = in_dim;
  net.width = width;
  net.out_dim = out_dim;
  net.hidden = hidden;
  auto init_layer = [&rng](int rows, int cols) {
    std::normal_distribution<double> dist(0.0, std::sqrt(1.0 / cols));
    Mat w(rows, cols);
    for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = dist(rng);
    return w;
  };
  for (int l = 0; l <= hidden; ++l) {
    const int rows = (l == hidden) ? out_dim : width;
    const int cols = (l == 0) ? in_dim : width;
    net.W.push_back(init_layer(rows, cols));
    net.b.push_back(Vec::Zero(rows));
  }
  return net;
}

Mat Mlp::forward(const Mat& x, Cache* cache) const {
  if (x.rows() != in_dim) throw std::invalid_argument("Mlp: input width mismatch");
  if (cache) {
    cache->input = x;
    cache->z.clear();
    cache->a.clear();
  }
  Mat a = x;
  for (int l = 0; l < hidden; ++l) {
    Mat z = (W[l] * a).colwise() + b[l];
    Mat act = z.unaryExpr([](double v) { return selu(v); });
    if (cache) {
      cache->z.push_back(z);
      cache->a.push_back(act);
    }
    a = std::move(act);
  }
  return (W[hidden] * a).colwise() + b[hidden];
}

Mat Mlp::backward(const Mat& dy, const Cache& cache, std::vector<Mat>& gw,
                  std::vector<Vec>& gb) const {
  Mat dz = dy;
  for (int l = hidden; l >= 0; --l) {
    const Mat& a_prev = (l == 0) ? cache.input : cache.a[l - 1];
    gw[l].noalias() += dz * a_prev.transpose();
    gb[l] += dz.rowwise().sum();
    if (l == 0) return W[0].transpose() * dz;
    Mat da = W[l].transpose() * dz;
    dz = da.cwiseProduct(cache.z[l - 1].unaryExpr([](double v) { return selu_deriv(v); }));
  }
  return {};
}

TrainingConfig default_config(const std::string& key) {
  TrainingConfig c;
  auto set = [&c](int width, int layers, int steps, double lr) {
    c.layer_width = width;
    c.layers_in = c.layers_out = layers;
    c.steps = steps;
    c.learning_rate = lr;
  };
  if (key == "rossler_c9" || key == "rossler_c18") set(100, 1, 2, 5e-3);
  else if (key == "rossler_c11" || key == "rossler_c13") set(80, 1, 2, 5e-3);
  else if (key == "lorenz") {
    set(200, 3, 2, 1e-3);
    c.latent_dim = 2;
    c.latent_template = "lorenz_skew";
    c.w5 = 0;  // the skew form needs the latent attractor to straddle y1 = 0
  } else if (key == "gissinger") {
    set(100, 2, 1, 1e-3);
    c.latent_template = "cubic_1d";
  } else if (key == "kse_1d") set(200, 4, 1, 1e-4);
  else if (key == "kse_2d") {
    set(200, 4, 1, 1e-4);
    c.latent_dim = 2;
    c.latent_template = "quadratic_2d";
  } else if (key == "mg1") set(200, 4, 2, 5e-4);
  else if (key == "mg2") set(300, 4, 2, 1e-4);
  else throw std::invalid_argument("default_config: unknown key '" + key + "'");
  return c;
}

Vec encode(const ConjugacyModel& model, const Vec& x) {
  return model.encoder.forward(x);
}

Vec decode(const ConjugacyModel& model, const Vec& y) {
  return model.decoder.forward(y);
}

void ModelGrads::zero_like(const ConjugacyModel& model) {
  auto zero_net = [](const Mlp& net, std::vector<Mat>& gw, std::vector<Vec>& gb) {
    gw.clear();
    gb.clear();
    for (size_t l = 0; l < net.W.size(); ++l) {
      gw.push_back(Mat::Zero(net.W[l].rows(), net.W[l].cols()));
      gb.push_back(Vec::Zero(net.b[l].size()));
    }
  };
  zero_net(model.encoder, enc_w, enc_b);
  zero_net(model.decoder, dec_w, dec_b);
  latent.clear();
  for (const auto& row : model.latent.coeffs) latent.push_back(std::vector<double>(row.size(), 0.0));
}

namespace {

Mat gather(const Mat& points, const std::vector<int>& starts, int shift) {
  Mat out(points.rows(), static_cast<Eigen::Index>(starts.size()));
  for (size_t i = 0; i < starts.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = points.col(starts[i] + shift);
  return out;
}

Mat latent_forward(const LatentMap& map, const Mat& y) {
  const int d = map.dim;
  const auto B = y.cols();
  Mat g = Mat::Zero(d, B);
  for (Eigen::Index n = 0; n < B; ++n) {
    for (int i = 0; i < d; ++i) {
      double acc = 0;
      for (size_t k = 0; k < map.terms[i].size(); ++k) {
        acc += map.coeffs[i][k] * map.terms[i][k].value(y.col(n));
      }
      g(i, n) = acc;
    }
  }
  return g;
}

// Backprop through g: upstream dG, inputs y. Accumulates coefficient
// gradients and returns dLoss/dY. sgn factors are constants in backprop.
Mat latent_backward(const LatentMap& map, const Mat& y, const Mat& dg,
                    std::vector<std::vector<double>>& gcoef) {
  const int d = map.dim;
  const auto B = y.cols();
  Mat dy = Mat::Zero(d, B);
  for (Eigen::Index n = 0; n < B; ++n) {
    for (int i = 0; i < d; ++i) {
      const double u = dg(i, n);
      if (u == 0.0) continue;
      for (size_t k = 0; k < map.terms[i].size(); ++k) {
        const LatentTerm& term = map.terms[i][k];
        gcoef[i][k] += u * term.value(y.col(n));
        for (int c = 0; c < d; ++c) {
          dy(c, n) += map.coeffs[i][k] * u * term.partial(y.col(n), c);
        }
      }
    }
  }
  return dy;
}

double elastic_net(const Mlp& net, double l1, double l2, std::vector<Mat>* gw,
                   double w4) {
  double acc = 0;
  for (size_t l = 0; l < net.W.size(); ++l) {
    acc += l1 * net.W[l].cwiseAbs().sum() + l2 * net.W[l].squaredNorm();
    if (gw) {
      (*gw)[l] += w4 * (l1 * net.W[l].unaryExpr([](double v) {
                          return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0);
                        }) +
                        2.0 * l2 * net.W[l]);
    }
  }
  return acc;
}

}  // namespace

LossBreakdown loss_and_gradient(const ConjugacyModel& model, const Mat& points,
                                const std::vector<int>& starts,
                                const TrainingConfig& cfg, ModelGrads* grads) {
  const int s = cfg.steps;
  if (s < 1) throw std::invalid_argument("loss: steps must be >= 1");
  const auto obs_dim = points.rows();
  const auto B = static_cast<Eigen::Index>(starts.size());
  if (B == 0) throw std::invalid_argument("loss: empty batch");
  const int d = model.latent.dim;

  LossBreakdown out;

  // forward
  Mat x0 = gather(points, starts, 0);
  Mlp::Cache cache_e0;
  std::vector<Mat> y(s + 1);
  y[0] = model.encoder.forward(x0, grads ? &cache_e0 : nullptr);
  Mlp::Cache cache_d0;
  Mat recon = model.decoder.forward(y[0], grads ? &cache_d0 : nullptr);
  out.reconstruction = (recon - x0).squaredNorm() / static_cast<double>(B * obs_dim);

  std::vector<Mat> xj(s + 1), dj(s + 1), ej(s + 1);
  std::vector<Mlp::Cache> cache_dj(s + 1), cache_ej(s + 1);
  for (int j = 1; j <= s; ++j) {
    y[j] = latent_forward(model.latent, y[j - 1]);
    xj[j] = gather(points, starts, j);
    dj[j] = model.decoder.forward(y[j], grads ? &cache_dj[j] : nullptr);
    ej[j] = model.encoder.forward(xj[j], grads ? &cache_ej[j] : nullptr);
    out.prediction += (dj[j] - xj[j]).squaredNorm() / static_cast<double>(B * obs_dim * s);
    out.latent += (ej[j] - y[j]).squaredNorm() / static_cast<double>(B * d * s);
  }

  // loss 5: stretch the latent attractor (and its image) across [0,1]^d
  std::vector<Eigen::Index> argmax0(d), argmin0(d), argmax1(d), argmin1(d);
  if (cfg.w5 != 0) {
    for (int jd = 0; jd < d; ++jd) {
      double v;
      v = y[0].row(jd).maxCoeff(&argmax0[jd]);
      out.stretch += (1.0 - v) * (1.0 - v);
      v = y[0].row(jd).minCoeff(&argmin0[jd]);
      out.stretch += v * v;
      v = y[1].row(jd).maxCoeff(&argmax1[jd]);
      out.stretch += (1.0 - v) * (1.0 - v);
      v = y[1].row(jd).minCoeff(&argmin1[jd]);
      out.stretch += v * v;
    }
    out.stretch /= 4.0 * d;
  }

  out.regularization = elastic_net(model.encoder, cfg.elastic_l1, cfg.elastic_l2,
                                   grads ? &grads->enc_w : nullptr, cfg.w4) +
                       elastic_net(model.decoder, cfg.elastic_l1, cfg.elastic_l2,
                                   grads ? &grads->dec_w : nullptr, cfg.w4);

  out.total = cfg.w1 * out.reconstruction + cfg.w2 * out.prediction +
              cfg.w3 * out.latent + cfg.w4 * out.regularization + cfg.w5 * out.stretch;

  if (!grads) return out;

  // backward
  std::vector<Mat> u(s + 1);
  for (int j = 0; j <= s; ++j) u[j] = Mat::Zero(d, B);

  {
    Mat dr = (2.0 * cfg.w1 / static_cast<double>(B * obs_dim)) * (recon - x0);
    u[0] += model.decoder.backward(dr, cache_d0, grads->dec_w, grads->dec_b);
  }
  for (int j = 1; j <= s; ++j) {
    Mat dd = (2.0 * cfg.w2 / static_cast<double>(B * obs_dim * s)) * (dj[j] - xj[j]);
    u[j] += model.decoder.backward(dd, cache_dj[j], grads->dec_w, grads->dec_b);
    Mat diff = (2.0 * cfg.w3 / static_cast<double>(B * d * s)) * (ej[j] - y[j]);
    model.encoder.backward(diff, cache_ej[j], grads->enc_w, grads->enc_b);
    u[j] -= diff;
  }
  if (cfg.w5 != 0) {
    const double c5 = cfg.w5 / (4.0 * d);
    for (int jd = 0; jd < d; ++jd) {
      u[0](jd, argmax0[jd]) += c5 * (-2.0) * (1.0 - y[0](jd, argmax0[jd]));
      u[0](jd, argmin0[jd]) += c5 * 2.0 * y[0](jd, argmin0[jd]);
      u[1](jd, argmax1[jd]) += c5 * (-2.0) * (1.0 - y[1](jd, argmax1[jd]));
      u[1](jd, argmin1[jd]) += c5 * 2.0 * y[1](jd, argmin1[jd]);
    }
  }
  for (int j = s; j >= 1; --j) {
    u[j - 1] += latent_backward(model.latent, y[j - 1], u[j], grads->latent);
  }
  model.encoder.backward(u[0], cache_e0, grads->enc_w, grads->enc_b);
  return out;
}

LossBreakdown loss(const ConjugacyModel& model, const std::vector<Vec>& points,
                   const TrainingConfig& cfg) {
  const int n = static_cast<int>(points.size());
  if (n <= cfg.steps) throw std::invalid_argument("loss: steps exceed tuple length");
  Mat m(points.front().size(), n);
  for (int i = 0; i < n; ++i) m.col(i) = points[i];
  std::vector<int> starts(n - cfg.steps);
  std::iota(starts.begin(), starts.end(), 0);
  return loss_and_gradient(model, m, starts, cfg, nullptr);
}

namespace {

struct AdamState {
  ModelGrads m, v;
  long t = 0;
};

void adam_update(ConjugacyModel& model, const ModelGrads& g, AdamState& st,
                 double lr) {
  constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  st.t += 1;
  const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(st.t));
  const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(st.t));
  auto upd = [&](double& p, double grad, double& mm, double& vv) {
    mm = beta1 * mm + (1 - beta1) * grad;
    vv = beta2 * vv + (1 - beta2) * grad * grad;
    p -= lr * (mm / bc1) / (std::sqrt(vv / bc2) + eps);
  };
  auto upd_net = [&](Mlp& net, const std::vector<Mat>& gw, const std::vector<Vec>& gb,
                     std::vector<Mat>& mw, std::vector<Vec>& mb, std::vector<Mat>& vw,
                     std::vector<Vec>& vb) {
    for (size_t l = 0; l < net.W.size(); ++l) {
      for (Eigen::Index i = 0; i < net.W[l].size(); ++i) {
        upd(net.W[l].data()[i], gw[l].data()[i], mw[l].data()[i], vw[l].data()[i]);
      }
      for (Eigen::Index i = 0; i < net.b[l].size(); ++i) {
        upd(net.b[l].data()[i], gb[l].data()[i], mb[l].data()[i], vb[l].data()[i]);
      }
    }
  };
  upd_net(model.encoder, g.enc_w, g.enc_b, st.m.enc_w, st.m.enc_b, st.v.enc_w, st.v.enc_b);
  upd_net(model.decoder, g.dec_w, g.dec_b, st.m.dec_w, st.m.dec_b, st.v.dec_w, st.v.dec_b);
  for (size_t i = 0; i < model.latent.coeffs.size(); ++i) {
    for (size_t k = 0; k < model.latent.coeffs[i].size(); ++k) {
      if (!model.latent.trainable[i][k]) continue;
      upd(model.latent.coeffs[i][k], g.latent[i][k], st.m.latent[i][k], st.v.latent[i][k]);
    }
  }
}

}  // namespace

ConjugacyModel train(const SectionDataset& dataset, const LatentMap& latent_template,
                     const TrainingConfig& cfg) {
  const int n = dataset.size();
  if (n <= cfg.steps + 10) throw std::invalid_argument("train: dataset too small");
  const int obs_dim = dataset.dim();

  std::mt19937_64 rng(cfg.seed);
  ConjugacyModel model;
  model.encoder = Mlp::make(obs_dim, cfg.layer_width, cfg.latent_dim, cfg.layers_in, rng);
  model.decoder = Mlp::make(cfg.latent_dim, cfg.layer_width, obs_dim, cfg.layers_out, rng);
  model.latent = latent_template;
  model.normalization = dataset.normalization;
  model.config = cfg;
  {
    std::normal_distribution<double> dist(0.0, 0.5);
    bool skew = false;
    for (const auto& row : model.latent.terms) {
      for (const auto& t : row) skew = skew || t.with_sgn;
    }
    for (size_t i = 0; i < model.latent.coeffs.size(); ++i) {
      for (size_t k = 0; k < model.latent.coeffs[i].size(); ++k) {
        if (!model.latent.trainable[i][k]) continue;
        double v = dist(rng);
        if (skew) {
          // seed the assumed sign pattern of the skew form
          const bool negative = (i == 1 && model.latent.terms[i][k].with_sgn);
          v = negative ? -std::abs(v) : std::abs(v);
        }
        model.latent.coeffs[i][k] = v;
      }
    }
  }

  Mat points(obs_dim, n);
  for (int i = 0; i < n; ++i) points.col(i) = dataset.points[i];

  std::vector<int> all_starts(n - cfg.steps);
  std::iota(all_starts.begin(), all_starts.end(), 0);
  const int n_train = std::max(1, static_cast<int>((1.0 - cfg.val_fraction) * all_starts.size()));
  std::vector<int> train_starts(all_starts.begin(), all_starts.begin() + n_train);
  std::vector<int> val_starts(all_starts.begin() + n_train, all_starts.end());
  if (val_starts.empty()) val_starts = train_starts;

  AdamState adam;
  adam.m.zero_like(model);
  adam.v.zero_like(model);

  ConjugacyModel best = model;
  double best_val = std::numeric_limits<double>::infinity();
  int best_epoch = -1;

  const int batch = cfg.batch > 0 ? std::min(cfg.batch, n_train) : n_train;
  ModelGrads grads;
  std::vector<int> order = train_starts;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    LossBreakdown mean{};
    int n_batches = 0;
    for (int off = 0; off + batch <= static_cast<int>(order.size()); off += batch) {
      std::vector<int> idx(order.begin() + off, order.begin() + off + batch);
      grads.zero_like(model);
      LossBreakdown lb = loss_and_gradient(model, points, idx, cfg, &grads);
      if (!std::isfinite(lb.total)) {
        model.diverged = true;
        break;
      }
      adam_update(model, grads, adam, cfg.learning_rate);
      mean.total += lb.total;
      mean.reconstruction += lb.reconstruction;
      mean.prediction += lb.prediction;
      mean.latent += lb.latent;
      mean.regularization += lb.regularization;
      mean.stretch += lb.stretch;
      ++n_batches;
    }
    if (model.diverged) break;
    if (n_batches > 0) {
      const double inv = 1.0 / n_batches;
      mean.total *= inv;
      mean.reconstruction *= inv;
      mean.prediction *= inv;
      mean.latent *= inv;
      mean.regularization *= inv;
      mean.stretch *= inv;
    }
    LossBreakdown val = loss_and_gradient(model, points, val_starts, cfg, nullptr);
    model.log.push_back({epoch, mean, val.total});
    if (val.total < best_val) {
      best_val = val.total;
      best_epoch = epoch;
      best.encoder = model.encoder;
      best.decoder = model.decoder;
      best.latent = model.latent;
    }
  }

  best.log = model.log;
  best.diverged = model.diverged;
  best.normalization = model.normalization;
  best.config = cfg;
  // stagnation: no validation improvement over the last half of the run
  best.stagnated = !model.diverged && best_epoch >= 0 &&
                   best_epoch < cfg.epochs / 2 && cfg.epochs >= 100;
  return best;
}

std::vector<Vec> one_step_forecast(const ConjugacyModel& model, const Vec& x,
                                   int n_steps) {
  std::vector<Vec> out;
  Vec y = encode(model, x);
  out.push_back(decode(model, y));
  for (int i = 0; i < n_steps; ++i) {
    y = model.latent.eval(y);
    out.push_back(decode(model, y));
  }
  return out;
}

namespace {

nlohmann::json mat_to_json(const Mat& m) {
  nlohmann::json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  std::vector<double> data;
  data.reserve(static_cast<size_t>(m.size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
  }
  j["data"] = data;  // row-major
  return j;
}

Mat mat_from_json(const nlohmann::json& j) {
  Mat m(j["rows"].get<Eigen::Index>(), j["cols"].get<Eigen::Index>());
  auto data = j["data"].get<std::vector<double>>();
  size_t i = 0;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = data[i++];
  }
  return m;
}

nlohmann::json mlp_to_json(const Mlp& net) {
  nlohmann::json j;
  j["in"] = net.in_dim;
  j["width"] = net.width;
  j["out"] = net.out_dim;
  j["hidden"] = net.hidden;
  for (size_t l = 0; l < net.W.size(); ++l) {
    j["W"].push_back(mat_to_json(net.W[l]));
    j["b"].push_back(std::vector<double>(net.b[l].begin(), net.b[l].end()));
  }
  return j;
}

Mlp mlp_from_json(const nlohmann::json& j) {
  Mlp net;
  net.in_dim = j["in"];
  net.width = j["width"];
  net.out_dim = j["out"];
  net.hidden = j["hidden"];
  for (const auto& w : j["W"]) net.W.push_back(mat_from_json(w));
  for (const auto& b : j["b"]) {
    auto v = b.get<std::vector<double>>();
    net.b.push_back(Eigen::Map<Vec>(v.data(), static_cast<Eigen::Index>(v.size())));
  }
  return net;
}

nlohmann::json latent_to_json(const LatentMap& map) {
  nlohmann::json j;
  j["dim"] = map.dim;
  for (int i = 0; i < map.dim; ++i) {
    nlohmann::json row;
    for (size_t k = 0; k < map.terms[i].size(); ++k) {
      row.push_back({{"powers", map.terms[i][k].powers},
                     {"sgn", map.terms[i][k].with_sgn},
                     {"coef", map.coeffs[i][k]},
                     {"trainable", static_cast<bool>(map.trainable[i][k])}});
    }
    j["outputs"].push_back(row);
  }
  return j;
}

LatentMap latent_from_json(const nlohmann::json& j) {
  LatentMap map;
  map.dim = j["dim"];
  for (const auto& row : j["outputs"]) {
    std::vector<LatentTerm> terms;
    std::vector<double> coeffs;
    std::vector<bool> trainable;
    for (const auto& t : row) {
      terms.push_back({t["powers"].get<std::vector<int>>(), t["sgn"].get<bool>()});
      coeffs.push_back(t["coef"].get<double>());
      trainable.push_back(t["trainable"].get<bool>());
    }
    map.terms.push_back(terms);
    map.coeffs.push_back(coeffs);
    map.trainable.push_back(trainable);
  }
  return map;
}

}  // namespace

void save_model_json(const ConjugacyModel& model, const std::string& path) {
  nlohmann::json j;
  j["encoder"] = mlp_to_json(model.encoder);
  j["decoder"] = mlp_to_json(model.decoder);
  j["latent"] = latent_to_json(model.latent);
  if (model.normalization) {
    j["normalization"]["scale"] = std::vector<double>(model.normalization->scale.begin(),
                                                      model.normalization->scale.end());
    j["normalization"]["offset"] = std::vector<double>(
        model.normalization->offset.begin(), model.normalization->offset.end());
  }
  j["config"] = {{"layer_width", model.config.layer_width},
                 {"layers_in", model.config.layers_in},
                 {"layers_out", model.config.layers_out},
                 {"steps", model.config.steps},
                 {"learning_rate", model.config.learning_rate},
                 {"epochs", model.config.epochs},
                 {"batch", model.config.batch},
                 {"seed", model.config.seed},
                 {"latent_dim", model.config.latent_dim},
                 {"latent_template", model.config.latent_template}};
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << j.dump(2) << "\n";
}

ConjugacyModel load_model_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  nlohmann::json j;
  in >> j;
  ConjugacyModel model;
  model.encoder = mlp_from_json(j["encoder"]);
  model.decoder = mlp_from_json(j["decoder"]);
  model.latent = latent_from_json(j["latent"]);
  if (j.contains("normalization")) {
    NormalizationRecord rec;
    auto sc = j["normalization"]["scale"].get<std::vector<double>>();
    auto of = j["normalization"]["offset"].get<std::vector<double>>();
    rec.scale = Eigen::Map<Vec>(sc.data(), static_cast<Eigen::Index>(sc.size()));
    rec.offset = Eigen::Map<Vec>(of.data(), static_cast<Eigen::Index>(of.size()));
    model.normalization = rec;
  }
  const auto& c = j["config"];
  model.config.layer_width = c["layer_width"];
  model.config.layers_in = c["layers_in"];
  model.config.layers_out = c["layers_out"];
  model.config.steps = c["steps"];
  model.config.learning_rate = c["learning_rate"];
  model.config.epochs = c["epochs"];
  model.config.batch = c["batch"];
  model.config.seed = c["seed"];
  model.config.latent_dim = c["latent_dim"];
  model.config.latent_template = c["latent_template"];
  return model;
}

}  // namespace conjmap
