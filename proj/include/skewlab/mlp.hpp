#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "skewlab/dataset.hpp"

namespace skewlab {

// Dense feedforward binary classifier with manual backpropagation.
// Hidden layers use the rectifier (subgradient 0 at 0), the output unit
// is logistic, and the loss is mean binary cross-entropy with
// probabilities clamped to [1e-12, 1 - 1e-12].

struct MlpConfig {
    int depth = 1;  // hidden layers
    int hidden_units = 8;
    int input_dim = 1;
    double learning_rate = 1e-3;
    int epochs = 300;
    int batch_size = 32;
    uint64_t seed = 0;

    void validate() const;  // throws std::invalid_argument
};

struct MlpModel {
    // sizes = input_dim, hidden..., 1. Parameters are stored flat, one
    // layer after another: weights (out x in, row-major) then biases.
    std::vector<int> sizes;
    std::vector<double> params;

    int input_dim() const { return sizes.front(); }
    size_t n_layers() const { return sizes.size() - 1; }
    size_t weight_offset(size_t layer) const;
    size_t bias_offset(size_t layer) const;
};

struct AdamState {
    static constexpr double beta1 = 0.9;
    static constexpr double beta2 = 0.999;
    static constexpr double eps = 1e-8;

    std::vector<double> m;  // first moment, one per parameter
    std::vector<double> v;  // second moment
    long t = 0;

    AdamState() = default;
    explicit AdamState(size_t n) : m(n, 0.0), v(n, 0.0) {}
};

/// Weights uniform on (-a, a) with a = sqrt(6/(fan_in+fan_out)), biases
/// zero; deterministic per cfg.seed.
MlpModel init_model(const MlpConfig& cfg);

/// Probabilities for each row, strictly inside (0, 1) barring extreme
/// saturation of the logistic itself.
std::vector<double> forward(const MlpModel& model, std::span<const double> X, size_t rows);

/// Mean clamped cross-entropy and its exact analytic gradient for every
/// parameter. grads must match model.params in size.
double loss_and_grads(const MlpModel& model, std::span<const double> X,
                      std::span<const int> y, std::span<double> grads);

double loss_only(const MlpModel& model, std::span<const double> X, std::span<const int> y);

/// Bias-corrected Adam update; increments state.t.
void adam_step(std::vector<double>& params, AdamState& state,
               std::span<const double> grads, double lr);

struct TrainReport {
    std::vector<double> epoch_loss;  // mean training loss per epoch
    double wall_ms = 0.0;
    uint64_t steps = 0;  // optimizer updates performed
};

// Full-epoch passes with per-epoch reshuffling from the run's seeded
// generator; mini-batches of cfg.batch_size (last one may be smaller).
// Deterministic per (cfg, dataset). Throws std::runtime_error if the
// training loss turns non-finite.
std::pair<MlpModel, TrainReport> train(const MlpConfig& cfg, const Dataset& ds);

/// Label 1 iff probability >= threshold.
std::vector<int> predict(const MlpModel& model, std::span<const double> X, size_t rows,
                         double threshold = 0.5);

// Max over parameters of the relative disagreement between analytic
// gradients and central finite differences on a fresh init_model(cfg).
// Central differences measure a one-sided slope when a pre-activation
// lies within h of a rectifier kink (the analytic side keeps the
// subgradient-0 convention), so callers pick batches clear of kinks.
double grad_check(const MlpConfig& cfg, std::span<const double> X, std::span<const int> y,
                  double h = 1e-5);

}  // namespace skewlab
