#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "nnlab/activation.hpp"

namespace nnlab {

// Per-neuron knobs for every hidden/output neuron.
struct NeuronConfig {
    ActivationParams activation{};
    double learning_factor_mult = 1.0; // scales the global learning factor for this neuron
    double output_scale = 1.0;         // in [0,1]; 0 = dead neuron, output forced to 0
};

// Layer sizes. Experiments use a single hidden layer, but any depth works.
struct Topology {
    std::size_t n_inputs = 0;
    std::vector<std::size_t> hidden_sizes;
    std::size_t n_outputs = 0;
    bool bias = true; // one extra weight per neuron fed by a constant 1

    // inputs, hidden..., outputs
    std::vector<std::size_t> layer_sizes() const;
    // number of weight layers (= hidden layers + 1)
    std::size_t n_weight_layers() const { return hidden_sizes.size() + 1; }
    std::size_t total_hidden() const;
    std::size_t weight_count() const;
    void validate() const; // throws ConfigError

    bool operator==(const Topology&) const = default;
};

// Dense row-major matrix; rows = neurons of this layer, cols = previous layer
// size (+1 bias column last when the topology uses bias).
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

struct Network {
    Topology topology;
    std::vector<Matrix> weights;                         // one per non-input layer
    std::vector<std::vector<NeuronConfig>> neuron_configs; // one list per non-input layer
    std::vector<double> input_enabled;                   // scale per input, 1 = on

    const NeuronConfig& config(std::size_t weight_layer, std::size_t neuron) const {
        return neuron_configs[weight_layer][neuron];
    }
    NeuronConfig& config(std::size_t weight_layer, std::size_t neuron) {
        return neuron_configs[weight_layer][neuron];
    }
};

// Zero weights, default configs, all inputs enabled.
Network make_network(const Topology& t);

// All weights (bias included) i.i.d. uniform in [-range, +range].
Network init_weights(const Topology& t, std::uint64_t seed, double range = 0.5);

// Output of every layer, index 0 = inputs scaled by input_enabled.
// Throws ConfigError("input arity...") on size mismatch.
std::vector<std::vector<double>> forward(const Network& net, std::span<const double> input);

// Just the last layer.
std::vector<double> forward_output(const Network& net, std::span<const double> input);

// Index of the maximum component; ties break to the lowest index.
std::size_t classify(std::span<const double> output);

} // namespace nnlab
