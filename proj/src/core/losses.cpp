#include "core/losses.hpp"

#include <cmath>

#include "core/common.hpp"

namespace minnorm {

double loss_value(LossKind kind, double f, double y) {
    const double r = f - y;
    switch (kind) {
    case LossKind::mse:
        return r * r;
    case LossKind::l1:
        return std::abs(r);
    case LossKind::huber:
        return std::abs(r) < 1.0 ? r * r : 2.0 * std::abs(r) - 1.0;
    case LossKind::pseudo_huber:
        return std::sqrt(1.0 + r * r) - 1.0;
    }
    throw domain_error("unknown loss kind");
}

double loss_derivative(LossKind kind, double f, double y) {
    const double r = f - y;
    switch (kind) {
    case LossKind::mse:
        return 2.0 * r;
    case LossKind::l1:
        return r > 0.0 ? 1.0 : (r < 0.0 ? -1.0 : 0.0);
    case LossKind::huber:
        return std::abs(r) <= 1.0 ? 2.0 * r : (r > 0.0 ? 2.0 : -2.0);
    case LossKind::pseudo_huber:
        return r / std::sqrt(1.0 + r * r);
    }
    throw domain_error("unknown loss kind");
}

LossKind loss_from_string(std::string_view s) {
    if (s == "mse") return LossKind::mse;
    if (s == "l1") return LossKind::l1;
    if (s == "huber") return LossKind::huber;
    if (s == "pseudo_huber") return LossKind::pseudo_huber;
    throw domain_error("unknown loss '" + std::string(s) + "' (expected mse|l1|huber|pseudo_huber)");
}

std::string loss_to_string(LossKind kind) {
    switch (kind) {
    case LossKind::mse: return "mse";
    case LossKind::l1: return "l1";
    case LossKind::huber: return "huber";
    case LossKind::pseudo_huber: return "pseudo_huber";
    }
    return "?";
}

} // namespace minnorm
