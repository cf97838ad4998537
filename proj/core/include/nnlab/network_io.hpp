#pragma once

#include <filesystem>
#include <string>

#include "nnlab/network.hpp"

namespace nnlab {

// JSON document: topology, flat row-major weight arrays per layer (bias
// column last), per-neuron configs, input scales. Finite doubles round-trip
// bit-exactly.
std::string network_to_json(const Network& net);
Network network_from_json(const std::string& text);

void save_network(const std::filesystem::path& path, const Network& net);
Network load_network(const std::filesystem::path& path);

} // namespace nnlab
