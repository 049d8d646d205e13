#ifndef MINNORM_LOSSES_HPP
#define MINNORM_LOSSES_HPP

#include <string>
#include <string_view>

namespace minnorm {

enum class LossKind { mse, l1, huber, pseudo_huber };

/// Pointwise loss l(f, y). The Huber transition sits at |y - f| = 1:
/// quadratic below, 2|y-f| - 1 above. Pseudo-Huber is sqrt(1+|y-f|^2) - 1.
double loss_value(LossKind kind, double f, double y);

/// d/df of loss_value. At the Huber kink the quadratic-branch value is used
/// (the derivative is continuous there anyway); the l1 derivative at f == y
/// is 0 so that exact interpolation is a stationary point.
double loss_derivative(LossKind kind, double f, double y);

/// Config-file spelling: mse | l1 | huber | pseudo_huber.
LossKind loss_from_string(std::string_view s);
std::string loss_to_string(LossKind kind);

} // namespace minnorm

#endif
