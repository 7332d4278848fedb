#include "liftnet/activation.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace liftnet {

Activation Activation::leaky_relu(double negative_slope) {
    if (negative_slope <= 0.0) throw std::invalid_argument("leaky_relu: negative slope must be > 0");
    return {Kind::leaky_relu, negative_slope, 1.0};
}

Activation Activation::gprelu(double alpha, double beta) {
    if (alpha <= 0.0 || beta <= 0.0) {
        std::ostringstream msg;
        msg << "gprelu: slopes must be positive for strict monotonicity (got alpha=" << alpha
            << ", beta=" << beta << ")";
        throw std::invalid_argument(msg.str());
    }
    return {Kind::gprelu, alpha, beta};
}

double Activation::value(double x) const {
    switch (kind_) {
        case Kind::identity: return x;
        case Kind::relu: return x > 0.0 ? x : 0.0;
        case Kind::leaky_relu: return x >= 0.0 ? x : alpha_ * x;
        case Kind::sigmoid: return stable_logistic(x);
        case Kind::tanh_fn: return std::tanh(x);
        case Kind::gprelu: return x >= 0.0 ? beta_ * x : alpha_ * x;
    }
    return x;
}

double Activation::deriv(double x) const {
    switch (kind_) {
        case Kind::identity: return 1.0;
        case Kind::relu: return x >= 0.0 ? 1.0 : 0.0;
        case Kind::leaky_relu: return x >= 0.0 ? 1.0 : alpha_;
        case Kind::sigmoid: {
            const double s = stable_logistic(x);
            return s * (1.0 - s);
        }
        case Kind::tanh_fn: {
            const double t = std::tanh(x);
            return 1.0 - t * t;
        }
        case Kind::gprelu: return x >= 0.0 ? beta_ : alpha_;
    }
    return 1.0;
}

bool Activation::strictly_increasing() const {
    switch (kind_) {
        case Kind::relu: return false;
        default: return true;
    }
}

bool Activation::surjective() const {
    switch (kind_) {
        case Kind::identity:
        case Kind::leaky_relu:
        case Kind::gprelu: return true;
        default: return false;
    }
}

bool Activation::has_inverse() const {
    switch (kind_) {
        case Kind::relu: return false;
        default: return true;  // invertible onto the image
    }
}

double Activation::inverse(double y) const {
    switch (kind_) {
        case Kind::identity: return y;
        case Kind::leaky_relu: return y >= 0.0 ? y : y / alpha_;
        case Kind::gprelu: return y >= 0.0 ? y / beta_ : y / alpha_;
        case Kind::sigmoid: return logit(y);
        case Kind::tanh_fn:
            if (y <= -1.0 || y >= 1.0) throw std::domain_error("tanh inverse: value outside (-1, 1)");
            return std::atanh(y);
        case Kind::relu: throw std::domain_error("relu has no inverse");
    }
    return y;
}

Vec Activation::apply(const Vec& x) const {
    Vec out(x.size());
    for (size_t i = 0; i < x.size(); ++i) out[i] = value(x[i]);
    return out;
}

Vec Activation::apply_inverse(const Vec& y) const {
    Vec out(y.size());
    for (size_t i = 0; i < y.size(); ++i) out[i] = inverse(y[i]);
    return out;
}

std::string Activation::name() const {
    switch (kind_) {
        case Kind::identity: return "identity";
        case Kind::relu: return "relu";
        case Kind::leaky_relu: {
            std::ostringstream s;
            s << "leaky_relu(" << alpha_ << ")";
            return s.str();
        }
        case Kind::sigmoid: return "sigmoid";
        case Kind::tanh_fn: return "tanh";
        case Kind::gprelu: {
            std::ostringstream s;
            s << "gprelu(" << alpha_ << "," << beta_ << ")";
            return s.str();
        }
    }
    return "?";
}

double stable_logistic(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

double logit(double y) {
    if (y <= 0.0 || y >= 1.0) {
        std::ostringstream msg;
        msg << "logit: value " << y << " outside the open interval (0, 1)";
        throw std::domain_error(msg.str());
    }
    return std::log(y / (1.0 - y));
}

}  // namespace liftnet
