#pragma once

#include <functional>
#include <span>
#include <vector>

#include "qcov/qnn.hpp"

namespace qcov {

/// d<Z_readout>/d theta_j by the two-term shift rule (shift pi/2). Parameters
/// shared by several gates accumulate one term per gate. Throws GradientError
/// if a trainable slot feeds a controlled rotation, whose generator does not
/// have the +-1/2 spectrum the rule needs.
std::vector<double> param_shift_grad(const QnnModel& model,
                                     std::span<const double> x,
                                     int readout_index);

/// Jacobian of all class scores w.r.t. parameters: [class][param].
std::vector<std::vector<double>> param_shift_jacobian(
    const QnnModel& model, std::span<const double> x);

/// Gradient of the loss w.r.t. the parameters.
std::vector<double> loss_param_grad(const QnnModel& model,
                                    std::span<const double> x, int label,
                                    const LossSpec& loss = {});

/// Jacobian of class scores w.r.t. raw input features: [class][feature].
/// Amplitude encoding uses an adjoint pass through U and differentiates the
/// normalization explicitly; angle encoding uses parameter-shift on the
/// encoding rotations. Throws GradientError on an all-zero amplitude input.
std::vector<std::vector<double>> input_score_jacobian(
    const QnnModel& model, std::span<const double> x);

/// Gradient of the loss w.r.t. the raw input features.
std::vector<double> input_grad(const QnnModel& model, std::span<const double> x,
                               int label, const LossSpec& loss = {});

using ScalarFn = std::function<double(std::span<const double>)>;

/// Central differences (f(x + h e_i) - f(x - h e_i)) / 2h.
std::vector<double> finite_diff_grad(const ScalarFn& f,
                                     std::span<const double> x, double h);

inline constexpr double kParamFiniteDiffStep = 1e-4;
inline constexpr double kInputFiniteDiffStep = 1e-5;

}  // namespace qcov
