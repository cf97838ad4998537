#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "nnlab/curve.hpp"
#include "nnlab/dataset.hpp"
#include "nnlab/network.hpp"

namespace nnlab {

struct BPConfig {
    double learning_factor = 0.1;
    double momentum = 0.9; // 0 switches momentum off
    std::int64_t epochs = 20000;
    std::uint64_t seed = 0;
    bool shuffle_each_epoch = false; // default: dataset order, reproducible
    double init_range = 0.5;
    std::int64_t curve_samples = 200; // curve recorded every max(1, epochs/curve_samples)
    double weight_limit = 1e6;        // divergence guard

    void validate() const;
};

// dE/dw for one case, E = 1/2 * sum_o (out_o - target_o)^2. Same shapes as
// net.weights.
using Gradients = std::vector<Matrix>;
Gradients error_gradients(const Network& net, std::span<const double> input,
                          std::span<const double> target);

// 1/2 * sum_o (out - target)^2 for a single case.
double case_error(const Network& net, std::span<const double> input,
                  std::span<const double> target);

Gradients zero_gradients(const Network& net);

// One pass over the data with per-pattern updates
//   dw = -eta_j * dE/dw + momentum * dw_prev,  eta_j = learning_factor *
// learning_factor_mult of the receiving neuron. `velocity` carries dw_prev
// between epochs. Throws DivergenceError (tagged with `epoch`) on non-finite
// values or weights beyond cfg.weight_limit.
void bp_epoch(Network& net, const Dataset& data, const BPConfig& cfg, Gradients& velocity,
              std::mt19937_64* shuffle_rng = nullptr, std::int64_t epoch = 0);

struct BPTrainResult {
    Network network;
    LearningCurve curve;
};

// init_weights(seed) then cfg.epochs epochs.
BPTrainResult train_bp(const Topology& topology, const Dataset& data, const BPConfig& cfg);
// Same loop from a caller-supplied starting network.
BPTrainResult train_bp_from(Network net, const Dataset& data, const BPConfig& cfg);

} // namespace nnlab
