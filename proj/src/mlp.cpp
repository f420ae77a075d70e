#include "skewlab/mlp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "skewlab/rng.hpp"

namespace skewlab {

namespace {

constexpr uint64_t kInitStream = 0x696e6974;     // weight initialization
constexpr uint64_t kShuffleStream = 0x73687566;  // epoch shuffling
constexpr double kProbClamp = 1e-12;

double sigmoid(double z) {
    if (z >= 0.0) {
        const double e = std::exp(-z);
        return 1.0 / (1.0 + e);
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

void check_input(const MlpModel& model, std::span<const double> X, size_t rows) {
    const size_t d = static_cast<size_t>(model.input_dim());
    if (X.size() != rows * d) {
        throw std::invalid_argument("input has " + std::to_string(X.size()) +
                                    " values, expected " + std::to_string(rows * d));
    }
}

// Per-batch buffers. acts[l] holds the post-activation output of layer
// l (rows x sizes[l+1]); the rectifier mask is recovered from act > 0,
// which matches the subgradient-0-at-0 convention.
struct Scratch {
    std::vector<std::vector<double>> acts;
    std::vector<double> delta;
    std::vector<double> delta_prev;
};

/// Forward pass filling scratch.acts; returns the output probabilities
/// (last entry of acts, one column).
const std::vector<double>& forward_into(const MlpModel& model, std::span<const double> X,
                                        size_t rows, Scratch& sc) {
    const size_t L = model.n_layers();
    sc.acts.resize(L);
    size_t off = 0;
    const double* a_prev = X.data();
    for (size_t l = 0; l < L; ++l) {
        const size_t in = static_cast<size_t>(model.sizes[l]);
        const size_t out = static_cast<size_t>(model.sizes[l + 1]);
        const double* W = model.params.data() + off;
        const double* bias = W + out * in;
        off += out * in + out;
        auto& act = sc.acts[l];
        act.assign(rows * out, 0.0);
        const bool hidden = l + 1 < L;
        for (size_t r = 0; r < rows; ++r) {
            const double* ar = a_prev + r * in;
            double* zr = act.data() + r * out;
            for (size_t o = 0; o < out; ++o) {
                double z = bias[o];
                const double* w = W + o * in;
                for (size_t i = 0; i < in; ++i) {
                    z += w[i] * ar[i];
                }
                zr[o] = hidden ? (z > 0.0 ? z : 0.0) : sigmoid(z);
            }
        }
        a_prev = act.data();
    }
    return sc.acts.back();
}

double loss_and_grads_impl(const MlpModel& model, std::span<const double> X,
                           std::span<const int> y, double* grads, Scratch& sc) {
    const size_t rows = y.size();
    check_input(model, X, rows);
    if (rows == 0) {
        throw std::invalid_argument("empty batch");
    }
    const auto& probs = forward_into(model, X, rows, sc);

    double loss = 0.0;
    sc.delta.assign(rows, 0.0);
    for (size_t r = 0; r < rows; ++r) {
        if (y[r] != 0 && y[r] != 1) {
            throw std::invalid_argument("labels must be 0 or 1");
        }
        const double p = probs[r];
        const double pc = std::clamp(p, kProbClamp, 1.0 - kProbClamp);
        loss -= y[r] == 1 ? std::log(pc) : std::log(1.0 - pc);
        // The clamp is constant outside (clamp, 1-clamp), so its exact
        // gradient there is zero.
        if (p >= kProbClamp && p <= 1.0 - kProbClamp) {
            sc.delta[r] = (p - static_cast<double>(y[r])) / static_cast<double>(rows);
        }
    }
    loss /= static_cast<double>(rows);

    if (grads == nullptr) {
        return loss;
    }

    const size_t L = model.n_layers();
    // Walk layers backwards; delta holds dL/dz of the current layer.
    for (size_t l = L; l-- > 0;) {
        const size_t in = static_cast<size_t>(model.sizes[l]);
        const size_t out = static_cast<size_t>(model.sizes[l + 1]);
        const size_t w_off = model.weight_offset(l);
        const double* W = model.params.data() + w_off;
        const double* a_prev = l == 0 ? X.data() : sc.acts[l - 1].data();
        double* gW = grads + w_off;
        double* gB = gW + out * in;

        for (size_t r = 0; r < rows; ++r) {
            const double* dr = sc.delta.data() + r * out;
            const double* ar = a_prev + r * in;
            for (size_t o = 0; o < out; ++o) {
                const double d = dr[o];
                if (d == 0.0) continue;
                double* g = gW + o * in;
                for (size_t i = 0; i < in; ++i) {
                    g[i] += d * ar[i];
                }
                gB[o] += d;
            }
        }

        if (l == 0) break;
        sc.delta_prev.assign(rows * in, 0.0);
        for (size_t r = 0; r < rows; ++r) {
            const double* dr = sc.delta.data() + r * out;
            double* dp = sc.delta_prev.data() + r * in;
            const double* ap = a_prev + r * in;
            for (size_t o = 0; o < out; ++o) {
                const double d = dr[o];
                if (d == 0.0) continue;
                const double* w = W + o * in;
                for (size_t i = 0; i < in; ++i) {
                    dp[i] += d * w[i];
                }
            }
            for (size_t i = 0; i < in; ++i) {
                if (ap[i] <= 0.0) dp[i] = 0.0;  // rectifier subgradient
            }
        }
        std::swap(sc.delta, sc.delta_prev);
    }
    return loss;
}

}  // namespace

void MlpConfig::validate() const {
    if (depth < 1) throw std::invalid_argument("depth must be >= 1");
    if (hidden_units < 1) throw std::invalid_argument("hidden_units must be >= 1");
    if (input_dim < 1) throw std::invalid_argument("input_dim must be >= 1");
    if (!(learning_rate > 0.0)) throw std::invalid_argument("learning_rate must be > 0");
    if (epochs < 1) throw std::invalid_argument("epochs must be >= 1");
    if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
}

size_t MlpModel::weight_offset(size_t layer) const {
    size_t off = 0;
    for (size_t l = 0; l < layer; ++l) {
        off += static_cast<size_t>(sizes[l]) * sizes[l + 1] + sizes[l + 1];
    }
    return off;
}

size_t MlpModel::bias_offset(size_t layer) const {
    return weight_offset(layer) + static_cast<size_t>(sizes[layer]) * sizes[layer + 1];
}

MlpModel init_model(const MlpConfig& cfg) {
    cfg.validate();
    MlpModel model;
    model.sizes.push_back(cfg.input_dim);
    for (int l = 0; l < cfg.depth; ++l) {
        model.sizes.push_back(cfg.hidden_units);
    }
    model.sizes.push_back(1);

    size_t n_params = 0;
    for (size_t l = 0; l + 1 < model.sizes.size(); ++l) {
        n_params += static_cast<size_t>(model.sizes[l]) * model.sizes[l + 1] + model.sizes[l + 1];
    }
    model.params.assign(n_params, 0.0);

    Rng rng(derive_seed(cfg.seed, kInitStream));
    size_t off = 0;
    for (size_t l = 0; l + 1 < model.sizes.size(); ++l) {
        const size_t in = static_cast<size_t>(model.sizes[l]);
        const size_t out = static_cast<size_t>(model.sizes[l + 1]);
        const double a = std::sqrt(6.0 / static_cast<double>(in + out));
        for (size_t i = 0; i < out * in; ++i) {
            model.params[off + i] = rng.uniform(-a, a);
        }
        off += out * in + out;  // biases stay zero
    }
    return model;
}

std::vector<double> forward(const MlpModel& model, std::span<const double> X, size_t rows) {
    check_input(model, X, rows);
    if (rows == 0) return {};
    Scratch sc;
    return forward_into(model, X, rows, sc);
}

double loss_and_grads(const MlpModel& model, std::span<const double> X, std::span<const int> y,
                      std::span<double> grads) {
    if (grads.size() != model.params.size()) {
        throw std::invalid_argument("grads size must match parameter count");
    }
    std::fill(grads.begin(), grads.end(), 0.0);
    Scratch sc;
    return loss_and_grads_impl(model, X, y, grads.data(), sc);
}

double loss_only(const MlpModel& model, std::span<const double> X, std::span<const int> y) {
    Scratch sc;
    return loss_and_grads_impl(model, X, y, nullptr, sc);
}

void adam_step(std::vector<double>& params, AdamState& state, std::span<const double> grads,
               double lr) {
    if (state.m.size() != params.size() || state.v.size() != params.size() ||
        grads.size() != params.size()) {
        throw std::invalid_argument("adam_step: shape mismatch");
    }
    state.t += 1;
    const double c1 = 1.0 - std::pow(AdamState::beta1, static_cast<double>(state.t));
    const double c2 = 1.0 - std::pow(AdamState::beta2, static_cast<double>(state.t));
    for (size_t i = 0; i < params.size(); ++i) {
        const double g = grads[i];
        state.m[i] = AdamState::beta1 * state.m[i] + (1.0 - AdamState::beta1) * g;
        state.v[i] = AdamState::beta2 * state.v[i] + (1.0 - AdamState::beta2) * g * g;
        const double m_hat = state.m[i] / c1;
        const double v_hat = state.v[i] / c2;
        params[i] -= lr * m_hat / (std::sqrt(v_hat) + AdamState::eps);
    }
}

std::pair<MlpModel, TrainReport> train(const MlpConfig& cfg, const Dataset& ds) {
    cfg.validate();
    if (ds.rows() == 0) {
        throw std::invalid_argument("training set is empty");
    }
    if (ds.dim != cfg.input_dim) {
        throw std::invalid_argument("dataset dim " + std::to_string(ds.dim) +
                                    " != cfg.input_dim " + std::to_string(cfg.input_dim));
    }
    const auto t0 = std::chrono::steady_clock::now();

    MlpModel model = init_model(cfg);
    AdamState adam(model.params.size());
    Rng shuffle_rng(derive_seed(cfg.seed, kShuffleStream));

    const size_t n = ds.rows();
    const size_t d = static_cast<size_t>(ds.dim);
    const size_t bs = std::min(static_cast<size_t>(cfg.batch_size), n);

    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});
    std::vector<double> batch_x(bs * d);
    std::vector<int> batch_y(bs);
    std::vector<double> grads(model.params.size());
    Scratch sc;

    TrainReport report;
    report.epoch_loss.reserve(cfg.epochs);
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        shuffle_rng.shuffle(order);
        double loss_sum = 0.0;
        for (size_t start = 0; start < n; start += bs) {
            const size_t nb = std::min(bs, n - start);
            for (size_t r = 0; r < nb; ++r) {
                const size_t src = order[start + r];
                std::copy_n(ds.features.data() + src * d, d, batch_x.data() + r * d);
                batch_y[r] = ds.labels[src];
            }
            std::fill(grads.begin(), grads.end(), 0.0);
            const double loss = loss_and_grads_impl(
                model, {batch_x.data(), nb * d}, {batch_y.data(), nb}, grads.data(), sc);
            adam_step(model.params, adam, grads, cfg.learning_rate);
            loss_sum += loss * static_cast<double>(nb);
            ++report.steps;
        }
        const double epoch_mean = loss_sum / static_cast<double>(n);
        if (!std::isfinite(epoch_mean)) {
            throw std::runtime_error("non-finite training loss at epoch " + std::to_string(epoch));
        }
        report.epoch_loss.push_back(epoch_mean);
    }

    report.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return {std::move(model), std::move(report)};
}

std::vector<int> predict(const MlpModel& model, std::span<const double> X, size_t rows,
                         double threshold) {
    const auto probs = forward(model, X, rows);
    std::vector<int> labels(rows);
    for (size_t r = 0; r < rows; ++r) {
        labels[r] = probs[r] >= threshold ? 1 : 0;
    }
    return labels;
}

double grad_check(const MlpConfig& cfg, std::span<const double> X, std::span<const int> y,
                  double h) {
    MlpModel model = init_model(cfg);
    std::vector<double> analytic(model.params.size());
    loss_and_grads(model, X, y, analytic);

    double max_rel = 0.0;
    for (size_t i = 0; i < model.params.size(); ++i) {
        const double saved = model.params[i];
        model.params[i] = saved + h;
        const double lp = loss_only(model, X, y);
        model.params[i] = saved - h;
        const double lm = loss_only(model, X, y);
        model.params[i] = saved;
        const double numeric = (lp - lm) / (2.0 * h);
        const double rel = std::abs(analytic[i] - numeric) /
                           std::max({std::abs(analytic[i]), std::abs(numeric), 1e-8});
        max_rel = std::max(max_rel, rel);
    }
    return max_rel;
}

}  // namespace skewlab
