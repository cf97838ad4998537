#include "nnlab/ablation.hpp"

#include <ostream>
#include <set>
#include <tuple>

#include "nnlab/errors.hpp"
#include "nnlab/util.hpp"

namespace nnlab {

namespace {

std::string hidden_label(const Topology& t, std::size_t layer, std::size_t neuron) {
    if (t.hidden_sizes.size() == 1) return "H" + std::to_string(neuron);
    return "H" + std::to_string(layer) + "." + std::to_string(neuron);
}

} // namespace

Network apply(const Network& net, const AblationPlan& plan, ShutdownMechanism mechanism) {
    std::set<std::tuple<int, std::size_t, std::size_t>> seen;
    Network out = net;
    for (const AblationItem& item : plan.items) {
        if (item.scale < 0.0 || item.scale > 1.0) {
            throw ConfigError("ablation: scale must be in [0,1]");
        }
        if (item.kind == LayerKind::Input) {
            if (item.neuron_index >= net.topology.n_inputs) {
                throw ConfigError("ablation: input index " + std::to_string(item.neuron_index) +
                                  " out of range");
            }
            if (!seen.insert({0, 0, item.neuron_index}).second) {
                throw ConfigError("ablation: duplicate input entry");
            }
            out.input_enabled[item.neuron_index] = item.scale;
        } else {
            if (item.layer_index >= net.topology.hidden_sizes.size() ||
                item.neuron_index >= net.topology.hidden_sizes[item.layer_index]) {
                throw ConfigError("ablation: hidden neuron (" + std::to_string(item.layer_index) +
                                  "," + std::to_string(item.neuron_index) + ") out of range");
            }
            if (!seen.insert({1, item.layer_index, item.neuron_index}).second) {
                throw ConfigError("ablation: duplicate hidden entry");
            }
            NeuronConfig& cfg = out.neuron_configs[item.layer_index][item.neuron_index];
            if (mechanism == ShutdownMechanism::BetaScale) {
                cfg.activation.beta *= item.scale;
            } else {
                cfg.output_scale *= item.scale;
            }
        }
    }
    return out;
}

std::vector<AblationPlan> enumerate_singles(const Topology& t, LayerKind kind) {
    t.validate();
    std::vector<AblationPlan> plans;
    if (kind == LayerKind::Input) {
        for (std::size_t i = 0; i < t.n_inputs; ++i) {
            plans.push_back({{{LayerKind::Input, 0, i, 0.0}}, "I" + std::to_string(i)});
        }
    } else {
        for (std::size_t l = 0; l < t.hidden_sizes.size(); ++l) {
            for (std::size_t i = 0; i < t.hidden_sizes[l]; ++i) {
                plans.push_back({{{LayerKind::Hidden, l, i, 0.0}}, hidden_label(t, l, i)});
            }
        }
    }
    return plans;
}

std::vector<AblationPlan> enumerate_hidden_pairs(const Topology& t) {
    t.validate();
    if (t.total_hidden() < 2) {
        throw ConfigError("ablation: hidden pairs need at least 2 hidden neurons");
    }
    std::vector<std::pair<std::size_t, std::size_t>> all;
    for (std::size_t l = 0; l < t.hidden_sizes.size(); ++l) {
        for (std::size_t i = 0; i < t.hidden_sizes[l]; ++i) all.emplace_back(l, i);
    }
    std::vector<AblationPlan> plans;
    for (std::size_t a = 0; a < all.size(); ++a) {
        for (std::size_t b = a + 1; b < all.size(); ++b) {
            AblationPlan p;
            p.items = {{LayerKind::Hidden, all[a].first, all[a].second, 0.0},
                       {LayerKind::Hidden, all[b].first, all[b].second, 0.0}};
            p.label = hidden_label(t, all[a].first, all[a].second) + "+" +
                      hidden_label(t, all[b].first, all[b].second);
            plans.push_back(std::move(p));
        }
    }
    return plans;
}

void write_plans_csv(std::ostream& out, std::span<const AblationPlan> plans) {
    out << "label,layer_kind,indices,scale\n";
    for (const AblationPlan& p : plans) {
        std::string kind;
        std::string indices;
        std::string scale;
        bool uniform_scale = true;
        for (std::size_t i = 0; i < p.items.size(); ++i) {
            const auto& item = p.items[i];
            const std::string k = item.kind == LayerKind::Input ? "input" : "hidden";
            if (kind.empty()) {
                kind = k;
            } else if (kind != k) {
                kind = "mixed";
            }
            if (i > 0) indices += ';';
            indices += std::to_string(item.neuron_index);
            if (i > 0 && item.scale != p.items[0].scale) uniform_scale = false;
        }
        if (p.items.empty()) {
            kind = "none";
            scale = "";
        } else if (uniform_scale) {
            scale = format_double(p.items[0].scale);
        } else {
            for (std::size_t i = 0; i < p.items.size(); ++i) {
                if (i > 0) scale += ';';
                scale += format_double(p.items[i].scale);
            }
        }
        out << p.label << ',' << kind << ',' << indices << ',' << scale << '\n';
    }
}

} // namespace nnlab
