#include "nnlab/bp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nnlab/errors.hpp"
#include "nnlab/eval.hpp"
#include "nnlab/util.hpp"

namespace nnlab {

void BPConfig::validate() const {
    if (learning_factor <= 0.0) throw ConfigError("bp: learning_factor must be > 0");
    if (momentum < 0.0 || momentum >= 1.0) throw ConfigError("bp: momentum must be in [0,1)");
    if (epochs < 1) throw ConfigError("bp: epochs must be >= 1");
    if (init_range <= 0.0) throw ConfigError("bp: init_range must be > 0");
    if (curve_samples < 1) throw ConfigError("bp: curve_samples must be >= 1");
    if (weight_limit <= 0.0) throw ConfigError("bp: weight_limit must be > 0");
}

Gradients zero_gradients(const Network& net) {
    Gradients g;
    g.reserve(net.weights.size());
    for (const Matrix& m : net.weights) g.emplace_back(m.rows, m.cols);
    return g;
}

namespace {

struct ForwardTrace {
    std::vector<std::vector<double>> outputs; // per layer, index 0 = scaled inputs
    std::vector<std::vector<double>> pre;     // pre-activations per weight layer
};

void forward_trace(const Network& net, std::span<const double> input, ForwardTrace& tr) {
    const bool bias = net.topology.bias;
    tr.outputs.resize(net.weights.size() + 1);
    tr.pre.resize(net.weights.size());

    auto& layer0 = tr.outputs[0];
    layer0.resize(input.size());
    for (std::size_t i = 0; i < input.size(); ++i) layer0[i] = input[i] * net.input_enabled[i];

    for (std::size_t k = 0; k < net.weights.size(); ++k) {
        const Matrix& w = net.weights[k];
        const auto& prev = tr.outputs[k];
        auto& pre = tr.pre[k];
        auto& out = tr.outputs[k + 1];
        pre.resize(w.rows);
        out.resize(w.rows);
        for (std::size_t j = 0; j < w.rows; ++j) {
            double x = 0.0;
            for (std::size_t i = 0; i < prev.size(); ++i) x += w.at(j, i) * prev[i];
            if (bias) x += w.at(j, w.cols - 1);
            pre[j] = x;
            const NeuronConfig& cfg = net.neuron_configs[k][j];
            out[j] = cfg.output_scale * sigmoid(x, cfg.activation);
        }
    }
}

// deltas[k][j] = dE/d(pre-activation of neuron j in weight layer k)
void backward_deltas(const Network& net, const ForwardTrace& tr, std::span<const double> target,
                     std::vector<std::vector<double>>& deltas) {
    const std::size_t L = net.weights.size();
    deltas.resize(L);
    for (std::size_t k = 0; k < L; ++k) deltas[k].assign(net.weights[k].rows, 0.0);

    const auto& out = tr.outputs[L];
    for (std::size_t j = 0; j < out.size(); ++j) {
        const NeuronConfig& cfg = net.neuron_configs[L - 1][j];
        deltas[L - 1][j] = (out[j] - target[j]) * cfg.output_scale *
                           sigmoid_derivative(tr.pre[L - 1][j], cfg.activation);
    }
    for (std::size_t k = L - 1; k-- > 0;) {
        const Matrix& next = net.weights[k + 1];
        for (std::size_t j = 0; j < net.weights[k].rows; ++j) {
            double acc = 0.0;
            for (std::size_t m = 0; m < next.rows; ++m) acc += next.at(m, j) * deltas[k + 1][m];
            const NeuronConfig& cfg = net.neuron_configs[k][j];
            deltas[k][j] = acc * cfg.output_scale * sigmoid_derivative(tr.pre[k][j], cfg.activation);
        }
    }
}

} // namespace

Gradients error_gradients(const Network& net, std::span<const double> input,
                          std::span<const double> target) {
    if (target.size() != net.topology.n_outputs) {
        throw ConfigError("target arity: expected " + std::to_string(net.topology.n_outputs) +
                          " values, got " + std::to_string(target.size()));
    }
    ForwardTrace tr;
    forward_trace(net, input, tr);
    std::vector<std::vector<double>> deltas;
    backward_deltas(net, tr, target, deltas);

    Gradients g = zero_gradients(net);
    const bool bias = net.topology.bias;
    for (std::size_t k = 0; k < net.weights.size(); ++k) {
        const auto& prev = tr.outputs[k];
        for (std::size_t j = 0; j < net.weights[k].rows; ++j) {
            const double d = deltas[k][j];
            for (std::size_t i = 0; i < prev.size(); ++i) g[k].at(j, i) = d * prev[i];
            if (bias) g[k].at(j, g[k].cols - 1) = d;
        }
    }
    return g;
}

double case_error(const Network& net, std::span<const double> input,
                  std::span<const double> target) {
    const auto out = forward_output(net, input);
    double e = 0.0;
    for (std::size_t j = 0; j < out.size(); ++j) {
        const double diff = out[j] - target[j];
        e += diff * diff;
    }
    return 0.5 * e;
}

void bp_epoch(Network& net, const Dataset& data, const BPConfig& cfg, Gradients& velocity,
              std::mt19937_64* shuffle_rng, std::int64_t epoch) {
    if (data.size() == 0) throw ConfigError("bp: empty dataset");
    if (data.n_inputs() != net.topology.n_inputs || data.n_classes() != net.topology.n_outputs) {
        throw ConfigError("bp: dataset arity does not match topology");
    }
    if (velocity.size() != net.weights.size()) velocity = zero_gradients(net);

    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), 0);
    if (cfg.shuffle_each_epoch && shuffle_rng) {
        std::shuffle(order.begin(), order.end(), *shuffle_rng);
    }

    ForwardTrace tr;
    std::vector<std::vector<double>> deltas;
    const bool bias = net.topology.bias;

    for (std::size_t row : order) {
        forward_trace(net, data.inputs[row], tr);
        backward_deltas(net, tr, data.targets[row], deltas);
        for (std::size_t k = 0; k < net.weights.size(); ++k) {
            Matrix& w = net.weights[k];
            Matrix& v = velocity[k];
            const auto& prev = tr.outputs[k];
            for (std::size_t j = 0; j < w.rows; ++j) {
                const NeuronConfig& ncfg = net.neuron_configs[k][j];
                const double eta = cfg.learning_factor * ncfg.learning_factor_mult;
                const double d = deltas[k][j];
                for (std::size_t i = 0; i < prev.size(); ++i) {
                    const double dw = cfg.momentum * v.at(j, i) - eta * d * prev[i];
                    v.at(j, i) = dw;
                    w.at(j, i) += dw;
                }
                if (bias) {
                    const std::size_t bc = w.cols - 1;
                    const double dw = cfg.momentum * v.at(j, bc) - eta * d;
                    v.at(j, bc) = dw;
                    w.at(j, bc) += dw;
                }
            }
        }
    }

    for (const Matrix& w : net.weights) {
        for (double x : w.data) {
            if (!std::isfinite(x)) throw DivergenceError("divergence: non-finite weight", epoch);
            if (std::abs(x) > cfg.weight_limit) {
                throw DivergenceError("divergence: weight magnitude exceeded limit", epoch);
            }
        }
    }
}

BPTrainResult train_bp(const Topology& topology, const Dataset& data, const BPConfig& cfg) {
    topology.validate();
    cfg.validate();
    return train_bp_from(init_weights(topology, cfg.seed, cfg.init_range), data, cfg);
}

BPTrainResult train_bp_from(Network net, const Dataset& data, const BPConfig& cfg) {
    cfg.validate();
    Gradients velocity = zero_gradients(net);
    std::mt19937_64 shuffle_rng(mix_seed(cfg.seed, 1));

    const std::int64_t stride = std::max<std::int64_t>(1, cfg.epochs / cfg.curve_samples);
    LearningCurve curve;
    for (std::int64_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
        bp_epoch(net, data, cfg, velocity, cfg.shuffle_each_epoch ? &shuffle_rng : nullptr, epoch);
        if (epoch % stride == 0 || epoch == cfg.epochs) {
            curve.points.push_back({epoch, 100.0 - classification_success(net, data),
                                    sum_squared_error(net, data)});
        }
    }
    return {std::move(net), std::move(curve)};
}

} // namespace nnlab
