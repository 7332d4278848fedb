#pragma once

#include <string>

#include "liftnet/matrix.hpp"

namespace liftnet {

/// Registered scalar activations with the properties the layer constructors
/// check mechanically: strict monotonicity (injective layers) and surjectivity
/// onto R (invertible layers).
class Activation {
public:
    enum class Kind : uint8_t { identity = 0, relu, leaky_relu, sigmoid, tanh_fn, gprelu };

    static Activation identity() { return {Kind::identity, 1.0, 1.0}; }
    static Activation relu() { return {Kind::relu, 0.0, 1.0}; }
    static Activation leaky_relu(double negative_slope = 0.01);
    static Activation sigmoid() { return {Kind::sigmoid, 0.0, 0.0}; }
    static Activation tanh_fn() { return {Kind::tanh_fn, 0.0, 0.0}; }
    /// σ(x) = βx for x ≥ 0, αx for x < 0. Requires α, β > 0.
    static Activation gprelu(double alpha, double beta);
    /// PReLU with the conventional fixed negative slope 0.25.
    static Activation prelu() { return gprelu(0.25, 1.0); }

    Kind kind() const { return kind_; }
    double alpha() const { return alpha_; }
    double beta() const { return beta_; }

    double value(double x) const;
    /// Derivative; at kink points the non-negative branch slope is used.
    double deriv(double x) const;
    bool strictly_increasing() const;
    bool surjective() const;
    bool has_inverse() const;
    /// Inverse where defined; std::domain_error outside the image.
    double inverse(double y) const;

    Vec apply(const Vec& x) const;
    Vec apply_inverse(const Vec& y) const;

    std::string name() const;

    bool operator==(const Activation& o) const {
        return kind_ == o.kind_ && alpha_ == o.alpha_ && beta_ == o.beta_;
    }

private:
    Activation(Kind k, double a, double b) : kind_(k), alpha_(a), beta_(b) {}
    Kind kind_;
    double alpha_;
    double beta_;
};

/// Numerically stable logistic; saturates without overflow for |x| large.
double stable_logistic(double x);
/// logit(y) = ln(y/(1−y)); std::domain_error outside (0, 1).
double logit(double y);

}  // namespace liftnet
