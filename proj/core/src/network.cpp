#include "nnlab/network.hpp"

#include <cmath>
#include <random>
#include <string>

#include "nnlab/errors.hpp"

namespace nnlab {

std::vector<std::size_t> Topology::layer_sizes() const {
    std::vector<std::size_t> sizes;
    sizes.reserve(hidden_sizes.size() + 2);
    sizes.push_back(n_inputs);
    sizes.insert(sizes.end(), hidden_sizes.begin(), hidden_sizes.end());
    sizes.push_back(n_outputs);
    return sizes;
}

std::size_t Topology::total_hidden() const {
    std::size_t n = 0;
    for (auto h : hidden_sizes) n += h;
    return n;
}

std::size_t Topology::weight_count() const {
    const auto sizes = layer_sizes();
    std::size_t n = 0;
    for (std::size_t k = 1; k < sizes.size(); ++k) {
        n += sizes[k] * (sizes[k - 1] + (bias ? 1 : 0));
    }
    return n;
}

void Topology::validate() const {
    if (n_inputs < 1) throw ConfigError("topology: n_inputs must be >= 1");
    if (n_outputs < 1) throw ConfigError("topology: n_outputs must be >= 1");
    if (hidden_sizes.empty()) throw ConfigError("topology: at least one hidden layer required");
    for (auto h : hidden_sizes) {
        if (h < 1) throw ConfigError("topology: hidden layer sizes must be >= 1");
    }
}

Network make_network(const Topology& t) {
    t.validate();
    Network net;
    net.topology = t;
    const auto sizes = t.layer_sizes();
    for (std::size_t k = 1; k < sizes.size(); ++k) {
        net.weights.emplace_back(sizes[k], sizes[k - 1] + (t.bias ? 1 : 0));
        net.neuron_configs.emplace_back(sizes[k]);
    }
    net.input_enabled.assign(t.n_inputs, 1.0);
    return net;
}

Network init_weights(const Topology& t, std::uint64_t seed, double range) {
    if (range <= 0.0) throw ConfigError("init_weights: range must be > 0");
    Network net = make_network(t);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-range, range);
    for (auto& layer : net.weights) {
        for (auto& w : layer.data) w = dist(rng);
    }
    return net;
}

std::vector<std::vector<double>> forward(const Network& net, std::span<const double> input) {
    if (input.size() != net.topology.n_inputs) {
        throw ConfigError("input arity: expected " + std::to_string(net.topology.n_inputs) +
                          " values, got " + std::to_string(input.size()));
    }
    for (double v : input) {
        if (!std::isfinite(v)) throw ConfigError("non-finite activation input");
    }

    std::vector<std::vector<double>> outputs;
    outputs.reserve(net.weights.size() + 1);

    std::vector<double> layer0(input.size());
    for (std::size_t i = 0; i < input.size(); ++i) layer0[i] = input[i] * net.input_enabled[i];
    outputs.push_back(std::move(layer0));

    const bool bias = net.topology.bias;
    for (std::size_t k = 0; k < net.weights.size(); ++k) {
        const Matrix& w = net.weights[k];
        const std::vector<double>& prev = outputs.back();
        std::vector<double> out(w.rows);
        for (std::size_t j = 0; j < w.rows; ++j) {
            double x = 0.0;
            for (std::size_t i = 0; i < prev.size(); ++i) x += w.at(j, i) * prev[i];
            if (bias) x += w.at(j, w.cols - 1);
            const NeuronConfig& cfg = net.neuron_configs[k][j];
            out[j] = cfg.output_scale * sigmoid(x, cfg.activation);
        }
        outputs.push_back(std::move(out));
    }
    return outputs;
}

std::vector<double> forward_output(const Network& net, std::span<const double> input) {
    return forward(net, input).back();
}

std::size_t classify(std::span<const double> output) {
    if (output.empty()) throw ConfigError("classify: empty output vector");
    std::size_t best = 0;
    for (std::size_t i = 1; i < output.size(); ++i) {
        if (output[i] > output[best]) best = i;
    }
    return best;
}

} // namespace nnlab
