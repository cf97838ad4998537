#include "nnlab/activation.hpp"

#include <algorithm>
#include <cmath>

#include "nnlab/errors.hpp"

namespace nnlab {

namespace {

double checked_exponent(double x, const ActivationParams& p) {
    if (!std::isfinite(x)) {
        throw ConfigError("non-finite activation input");
    }
    if (p.gamma < 0.0) {
        throw ConfigError("activation gamma must be >= 0");
    }
    // exp(710) overflows a double; +-700 keeps every downstream product finite.
    return std::clamp(-x * p.alpha, -700.0, 700.0);
}

} // namespace

double sigmoid(double x, const ActivationParams& p) {
    const double z = checked_exponent(x, p);
    return p.beta / (p.gamma + std::exp(z));
}

double sigmoid_derivative(double x, const ActivationParams& p) {
    const double z = checked_exponent(x, p);
    const double e = std::exp(z);
    const double denom = p.gamma + e;
    return p.alpha * p.beta * e / (denom * denom);
}

} // namespace nnlab
