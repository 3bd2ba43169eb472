#pragma once

#include "conjmap/latentmap.hpp"
#include "conjmap/sections.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace conjmap {

double selu(double x);
double selu_deriv(double x);

/// Feedforward net: `hidden` SeLU layers of equal width plus a final
/// affine layer. Batches are column-major (one sample per column).
struct Mlp {
  int in_dim = 1, width = 1, out_dim = 1, hidden = 1;
  std::vector<Mat> W;
  std::vector<Vec> b;

  struct Cache {
    Mat input;
    std::vector<Mat> z;  // pre-activations of the hidden layers
    std::vector<Mat> a;  // activations of the hidden layers
  };

  static Mlp make(int in_dim, int width, int out_dim, int hidden, std::mt19937_64& rng);
  Mat forward(const Mat& x, Cache* cache = nullptr) const;
  /// Backprop: accumulates into (gw, gb), returns dLoss/dInput.
  Mat backward(const Mat& dy, const Cache& cache, std::vector<Mat>& gw,
               std::vector<Vec>& gb) const;
};

struct TrainingConfig {
  int layer_width = 100;
  int layers_in = 1;
  int layers_out = 1;
  int steps = 2;  // s of the prediction / latent-map losses
  double learning_rate = 5e-3;
  double w1 = 1, w2 = 1, w3 = 1, w4 = 1, w5 = 1;
  double elastic_l1 = 1e-5, elastic_l2 = 1e-6;
  int epochs = 3000;
  int batch = 0;  // 0 = full dataset
  std::uint64_t seed = 0;
  double val_fraction = 0.1;
  int latent_dim = 1;
  std::string latent_template = "quadratic_1d";
};

/// Per-system defaults (keys: rossler_c9, rossler_c11, rossler_c13,
/// rossler_c18, lorenz, gissinger, kse_1d, kse_2d, mg1, mg2).
TrainingConfig default_config(const std::string& key);

struct LossBreakdown {
  double total = 0;
  double reconstruction = 0;  // loss 1
  double prediction = 0;      // loss 2
  double latent = 0;          // loss 3
  double regularization = 0;  // loss 4
  double stretch = 0;         // loss 5
};

struct TrainingLogEntry {
  int epoch = 0;
  LossBreakdown train;
  double val_total = 0;
};

struct ConjugacyModel {
  Mlp encoder;   // h : R^{D-1} -> R^d
  Mlp decoder;   // h^{-1} : R^d -> R^{D-1}
  LatentMap latent;
  std::optional<NormalizationRecord> normalization;
  TrainingConfig config;
  std::vector<TrainingLogEntry> log;
  bool diverged = false;
  bool stagnated = false;
};

Vec encode(const ConjugacyModel& model, const Vec& x);
Vec decode(const ConjugacyModel& model, const Vec& y);

struct ModelGrads {
  std::vector<Mat> enc_w, dec_w;
  std::vector<Vec> enc_b, dec_b;
  std::vector<std::vector<double>> latent;
  void zero_like(const ConjugacyModel& model);
};

/// Total loss over the tuples starting at `starts` (columns of points),
/// with the per-component breakdown; fills gradients when asked.
LossBreakdown loss_and_gradient(const ConjugacyModel& model, const Mat& points,
                                const std::vector<int>& starts,
                                const TrainingConfig& cfg,
                                ModelGrads* grads = nullptr);

LossBreakdown loss(const ConjugacyModel& model, const std::vector<Vec>& points,
                   const TrainingConfig& cfg);

/// Train on a normalized section dataset. Chronological 90/10 split; the
/// returned model is the best validation-loss snapshot.
ConjugacyModel train(const SectionDataset& dataset, const LatentMap& latent_template,
                     const TrainingConfig& cfg);

/// x -> h^{-1}(g^n(h(x))) for n = 0..n_steps, in observation coordinates.
std::vector<Vec> one_step_forecast(const ConjugacyModel& model, const Vec& x,
                                   int n_steps);

void save_model_json(const ConjugacyModel& model, const std::string& path);
ConjugacyModel load_model_json(const std::string& path);

}  // namespace conjmap
