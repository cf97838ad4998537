#pragma once

#include <optional>

#include "nnlab/dataset.hpp"
#include "nnlab/network.hpp"

namespace nnlab {

// Percentage of cases whose argmax output matches the target class.
double classification_success(const Network& net, const Dataset& d);

// sum_cases sum_outputs (out - target)^2; the EA fitness of these weights.
double sum_squared_error(const Network& net, const Dataset& d);

// The class index the network answers for every single case, if there is one.
std::optional<std::size_t> detect_collapse(const Network& net, const Dataset& d);

} // namespace nnlab
