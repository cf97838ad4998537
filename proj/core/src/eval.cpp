#include "nnlab/eval.hpp"

#include "nnlab/errors.hpp"

namespace nnlab {

double classification_success(const Network& net, const Dataset& d) {
    if (d.size() == 0) throw ConfigError("classification_success: empty dataset");
    std::size_t correct = 0;
    for (std::size_t r = 0; r < d.size(); ++r) {
        if (classify(forward_output(net, d.inputs[r])) == d.target_class(r)) ++correct;
    }
    return 100.0 * static_cast<double>(correct) / static_cast<double>(d.size());
}

double sum_squared_error(const Network& net, const Dataset& d) {
    double total = 0.0;
    for (std::size_t r = 0; r < d.size(); ++r) {
        const auto out = forward_output(net, d.inputs[r]);
        for (std::size_t o = 0; o < out.size(); ++o) {
            const double diff = out[o] - d.targets[r][o];
            total += diff * diff;
        }
    }
    return total;
}

std::optional<std::size_t> detect_collapse(const Network& net, const Dataset& d) {
    if (d.size() == 0) throw ConfigError("detect_collapse: empty dataset");
    const std::size_t first = classify(forward_output(net, d.inputs[0]));
    for (std::size_t r = 1; r < d.size(); ++r) {
        if (classify(forward_output(net, d.inputs[r])) != first) return std::nullopt;
    }
    return first;
}

} // namespace nnlab
