#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

namespace surrokit {

enum class ActivationKind {
    Identity,
    ReLU,
    Tanh,
    ReluTanhCombo,  // tanh(max(x, 0)): zero for x <= 0, bounded in [0, 1)
};

inline double activate(ActivationKind kind, double z) {
    switch (kind) {
        case ActivationKind::Identity: return z;
        case ActivationKind::ReLU: return z > 0.0 ? z : 0.0;
        case ActivationKind::Tanh: return std::tanh(z);
        case ActivationKind::ReluTanhCombo: return z > 0.0 ? std::tanh(z) : 0.0;
    }
    throw std::logic_error("activate: unknown kind");
}

// d(activate)/dz. ReLU-family derivatives take the value 0 at z = 0.
inline double activate_grad(ActivationKind kind, double z) {
    switch (kind) {
        case ActivationKind::Identity: return 1.0;
        case ActivationKind::ReLU: return z > 0.0 ? 1.0 : 0.0;
        case ActivationKind::Tanh: {
            const double t = std::tanh(z);
            return 1.0 - t * t;
        }
        case ActivationKind::ReluTanhCombo: {
            if (z <= 0.0) return 0.0;
            const double t = std::tanh(z);
            return 1.0 - t * t;
        }
    }
    throw std::logic_error("activate_grad: unknown kind");
}

inline std::string_view activation_name(ActivationKind kind) {
    switch (kind) {
        case ActivationKind::Identity: return "identity";
        case ActivationKind::ReLU: return "relu";
        case ActivationKind::Tanh: return "tanh";
        case ActivationKind::ReluTanhCombo: return "relu_tanh";
    }
    throw std::logic_error("activation_name: unknown kind");
}

inline ActivationKind parse_activation(std::string_view name) {
    if (name == "identity") return ActivationKind::Identity;
    if (name == "relu") return ActivationKind::ReLU;
    if (name == "tanh") return ActivationKind::Tanh;
    if (name == "relu_tanh") return ActivationKind::ReluTanhCombo;
    throw std::invalid_argument("unknown activation '" + std::string(name) +
                                "' (expected identity|relu|tanh|relu_tanh)");
}

}  // namespace surrokit
