#pragma once

namespace nnlab {

// Parameters of the generalized sigmoid s(x) = beta / (gamma + e^(-x*alpha)).
// Defaults reduce it to the standard logistic 1/(1+e^(-x)).
struct ActivationParams {
    double alpha = 1.0; // input gain
    double beta = 1.0;  // output numerator; 0 kills the neuron
    double gamma = 1.0; // denominator offset; must be >= 0

    bool is_default() const { return alpha == 1.0 && beta == 1.0 && gamma == 1.0; }
};

// s(x) = beta / (gamma + e^(-x*alpha)).
// Throws ConfigError on non-finite x or gamma < 0. Exponent is clamped to
// +-700 so large |x*alpha| saturates instead of overflowing.
double sigmoid(double x, const ActivationParams& p = {});

// ds/dx = alpha*beta*e^(-alpha*x) / (gamma + e^(-alpha*x))^2.
// With default params this equals s(x)*(1-s(x)).
double sigmoid_derivative(double x, const ActivationParams& p = {});

} // namespace nnlab
