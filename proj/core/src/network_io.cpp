#include "nnlab/network_io.hpp"

#include <fstream>

#include <json.hpp>

#include "nnlab/errors.hpp"

namespace nnlab {

using nlohmann::json;

namespace {

json config_to_json(const NeuronConfig& c) {
    return json{{"alpha", c.activation.alpha},
                {"beta", c.activation.beta},
                {"gamma", c.activation.gamma},
                {"learning_factor_mult", c.learning_factor_mult},
                {"output_scale", c.output_scale}};
}

NeuronConfig config_from_json(const json& j) {
    NeuronConfig c;
    c.activation.alpha = j.at("alpha").get<double>();
    c.activation.beta = j.at("beta").get<double>();
    c.activation.gamma = j.at("gamma").get<double>();
    c.learning_factor_mult = j.at("learning_factor_mult").get<double>();
    c.output_scale = j.at("output_scale").get<double>();
    return c;
}

} // namespace

std::string network_to_json(const Network& net) {
    json j;
    j["format"] = "nnlab-network";
    j["version"] = 1;
    j["topology"] = {{"inputs", net.topology.n_inputs},
                     {"hidden", net.topology.hidden_sizes},
                     {"outputs", net.topology.n_outputs},
                     {"bias", net.topology.bias}};
    json layers = json::array();
    for (const Matrix& m : net.weights) {
        layers.push_back(json{{"rows", m.rows}, {"cols", m.cols}, {"weights", m.data}});
    }
    j["layers"] = std::move(layers);
    json configs = json::array();
    for (const auto& layer : net.neuron_configs) {
        json lc = json::array();
        for (const NeuronConfig& c : layer) lc.push_back(config_to_json(c));
        configs.push_back(std::move(lc));
    }
    j["neuron_configs"] = std::move(configs);
    j["input_enabled"] = net.input_enabled;
    return j.dump(2);
}

Network network_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw DataError(std::string("network json: ") + e.what());
    }
    try {
        if (j.at("format").get<std::string>() != "nnlab-network") {
            throw DataError("network json: unexpected format tag");
        }
        Topology t;
        const json& jt = j.at("topology");
        t.n_inputs = jt.at("inputs").get<std::size_t>();
        t.hidden_sizes = jt.at("hidden").get<std::vector<std::size_t>>();
        t.n_outputs = jt.at("outputs").get<std::size_t>();
        t.bias = jt.at("bias").get<bool>();

        Network net = make_network(t);
        const json& layers = j.at("layers");
        if (layers.size() != net.weights.size()) {
            throw DataError("network json: layer count mismatch");
        }
        for (std::size_t k = 0; k < net.weights.size(); ++k) {
            Matrix& m = net.weights[k];
            const json& jl = layers.at(k);
            if (jl.at("rows").get<std::size_t>() != m.rows ||
                jl.at("cols").get<std::size_t>() != m.cols) {
                throw DataError("network json: weight matrix shape mismatch");
            }
            m.data = jl.at("weights").get<std::vector<double>>();
            if (m.data.size() != m.rows * m.cols) {
                throw DataError("network json: weight array length mismatch");
            }
        }
        const json& configs = j.at("neuron_configs");
        if (configs.size() != net.neuron_configs.size()) {
            throw DataError("network json: config layer count mismatch");
        }
        for (std::size_t k = 0; k < configs.size(); ++k) {
            const json& lc = configs.at(k);
            if (lc.size() != net.neuron_configs[k].size()) {
                throw DataError("network json: config count mismatch");
            }
            for (std::size_t i = 0; i < lc.size(); ++i) {
                net.neuron_configs[k][i] = config_from_json(lc.at(i));
            }
        }
        net.input_enabled = j.at("input_enabled").get<std::vector<double>>();
        if (net.input_enabled.size() != t.n_inputs) {
            throw DataError("network json: input_enabled length mismatch");
        }
        return net;
    } catch (const json::exception& e) {
        throw DataError(std::string("network json: ") + e.what());
    }
}

void save_network(const std::filesystem::path& path, const Network& net) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open for writing: " + path.string());
    out << network_to_json(net) << '\n';
}

Network load_network(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open network file: " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return network_from_json(text);
}

} // namespace nnlab
