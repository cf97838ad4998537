#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "nnlab/network.hpp"

namespace nnlab {

enum class LayerKind { Input, Hidden };

struct AblationItem {
    LayerKind kind = LayerKind::Hidden;
    std::size_t layer_index = 0;  // which hidden layer; ignored for inputs
    std::size_t neuron_index = 0;
    double scale = 0.0; // 0 = full shutdown, 1 = untouched
};

struct AblationPlan {
    std::vector<AblationItem> items;
    std::string label;
};

enum class ShutdownMechanism {
    BetaScale,   // multiply the neuron's sigmoid beta by scale
    OutputScale, // multiply the neuron's output_scale by scale
};

// Modified copy; the input network is never touched. Hidden items scale the
// neuron via the chosen mechanism (both give identical forward outputs),
// input items set that input's enable-scale. Throws on out-of-range indices
// or duplicate (layer, neuron) entries.
Network apply(const Network& net, const AblationPlan& plan,
              ShutdownMechanism mechanism = ShutdownMechanism::BetaScale);

// One full-shutdown plan per neuron of the given kind, index ascending,
// labeled "I<i>" / "H<i>" (hidden layers beyond the first get "H<layer>.<i>").
std::vector<AblationPlan> enumerate_singles(const Topology& t, LayerKind kind);

// All unordered pairs of hidden neurons (across hidden layers), lexicographic,
// both shut down. Requires at least two hidden neurons.
std::vector<AblationPlan> enumerate_hidden_pairs(const Topology& t);

// columns: label,layer_kind,indices,scale
void write_plans_csv(std::ostream& out, std::span<const AblationPlan> plans);

} // namespace nnlab
