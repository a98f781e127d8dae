#pragma once

#include "deslab/dataset.hpp"
#include "deslab/metrics.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace deslab {

struct ModelConfig {
    int input_dim = 34;  // signal count + 1 (t_rel)
    int hidden = 64;     // H
    int lstm_layers = 1;
    int num_classes = 8;
    int window_length = 50; // N

    bool operator==(const ModelConfig&) const = default;
};

/// One LSTM layer. Gate blocks are stacked row-wise in the order
/// input (i), forget (f), cell candidate (g), output (o), H rows each.
struct LstmLayer {
    Eigen::MatrixXd w; // 4H x in
    Eigen::MatrixXd u; // 4H x H
    Eigen::VectorXd b; // 4H
};

struct Model {
    ModelConfig config;
    TimeScaling scaling = TimeScaling::divide(1000.0); // applied to t_rel at the input
    std::vector<LstmLayer> layers;
    Eigen::MatrixXd head_w; // classes x H
    Eigen::VectorXd head_b; // classes

    struct TensorRef {
        std::string name;
        double* data;
        Eigen::Index rows, cols;
    };
    std::vector<TensorRef> tensors();
    std::size_t parameter_count() const;
};

/// Weights uniform in (-1/sqrt(fan_in), 1/sqrt(fan_in)); biases zero except
/// the forget-gate block, initialized to 1. Deterministic under seed.
Model init_model(const ModelConfig& config, std::uint64_t seed,
                 const TimeScaling& scaling = TimeScaling::divide(1000.0));

/// Activations cached by forward for backpropagation through time.
struct ForwardCache {
    struct LayerCache {
        std::vector<Eigen::MatrixXd> i, f, g, o, c, tanh_c, h; // per step, H x B
    };
    std::vector<Eigen::MatrixXd> inputs; // per step, input_dim x B (layer 0 inputs)
    std::vector<LayerCache> layers;
    Eigen::MatrixXd logits; // classes x B
    Eigen::MatrixXd probs;  // classes x B, softmax columns
};

/// Batch as Eigen columns; column j of step t holds [values..., t_rel] of
/// sample j's t-th vector.
struct Batch {
    std::vector<Eigen::MatrixXd> steps; // N matrices, input_dim x B
    std::vector<int> labels;
    Eigen::Index size() const { return labels.empty() ? 0 : static_cast<Eigen::Index>(labels.size()); }
};

Batch make_batch(const Model& model, const std::vector<const WindowSample*>& samples);

ForwardCache forward_batch(const Model& model, const Batch& batch);

/// Probability distribution over the classes for one window.
Eigen::VectorXd forward(const Model& model, const WindowSample& sample);

/// -log(max(probs[label], 1e-12)).
double cce_loss(const Eigen::VectorXd& probs, int label);

/// Mean batch CCE in the fused log-softmax form (matches what backward
/// differentiates). Optional per-class weights scale each sample's term.
double batch_loss(const ForwardCache& cache, const std::vector<int>& labels,
                  const std::vector<double>* class_weights = nullptr);

struct Gradients {
    std::vector<LstmLayer> layers; // same shapes as the model
    Eigen::MatrixXd head_w;
    Eigen::VectorXd head_b;
};

/// Gradients of mean batch CCE for every parameter. Throws on non-finite
/// values.
Gradients backward_batch(const Model& model, const Batch& batch, const ForwardCache& cache,
                         const std::vector<double>* class_weights = nullptr);

/// Max relative error between analytic gradients and central finite
/// differences over every parameter. Test-scale models only.
double grad_check(Model& model, const WindowSample& sample, double eps);

struct TrainConfig {
    double learning_rate = 1e-3;
    int epochs = 30;
    int batch_size = 32;
    enum class Optimizer { Sgd, Adam } optimizer = Optimizer::Adam;
    double beta1 = 0.9, beta2 = 0.999, adam_eps = 1e-8;
    std::uint64_t seed = 1;
    std::optional<double> gradient_clip = 5.0; // global norm
    bool class_weighting = false;              // inverse-frequency loss weights
    int max_threads = 0;                       // fold parallelism cap, 0 = hardware
};

struct EpochRecord {
    int fold = 0;
    int epoch = 0;
    double train_cce = 0.0;
    double val_cce = 0.0;
    double val_ac = 0.0;
    std::array<std::optional<double>, 8> precision{};
    std::array<std::optional<double>, 8> recall{};
};

struct TrainResult {
    std::vector<Model> models;        // one per fold
    std::vector<EpochRecord> curves;  // fold-major, epoch-minor
};

/// Per fold j: trains on folds != j, validates on fold j. Folds may run in
/// parallel (each with its own derived seed); results are deterministic
/// regardless of scheduling.
TrainResult train(const Dataset& dataset, const FoldSplit& folds, const ModelConfig& model_cfg,
                  const TrainConfig& train_cfg);

/// Trains a single model on all samples (capacity/overfit checks).
Model train_single(const Dataset& dataset, const ModelConfig& model_cfg,
                   const TrainConfig& train_cfg, std::vector<double>* epoch_cce = nullptr);

struct Prediction {
    int cls = 0; // argmax, lowest index wins ties
    Eigen::VectorXd distribution;
};

Prediction predict(const Model& model, const WindowSample& sample);

/// Argmax accuracy-style evaluation of a model over selected samples.
ConfusionMatrix evaluate(const Model& model, const Dataset& dataset,
                         const std::vector<std::size_t>& indices);

// Checkpoint: `format=1`, config block, then one line per tensor:
// name rows cols and values with 17 significant digits (round-trip exact).
std::string write_checkpoint(const Model& model);
Model read_checkpoint(const std::string& text);
void save_checkpoint(const Model& model, const std::string& path);
Model load_checkpoint(const std::string& path);

// Curves CSV: fold,epoch,train_cce,val_cce,val_ac,p_0..p_7,r_0..r_7
// (undefined precision/recall written as `undefined`).
std::string write_curves_csv(const std::vector<EpochRecord>& curves);
std::vector<EpochRecord> read_curves_csv(const std::string& text);

} // namespace deslab
