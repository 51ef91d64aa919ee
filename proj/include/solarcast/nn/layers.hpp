#pragma once

#include "solarcast/nn/tensor.hpp"

#include <cstddef>
#include <vector>

namespace solarcast::nn {

enum class Activation { identity, relu };

double relu(double x);
Tensor relu(const Tensor &x);

// Valid 1-D cross-correlation.
// input (batch, length, in_channels); weight (kernels, kernel_size, in_channels); bias (kernels)
// output (batch, length - kernel_size + 1, kernels)
struct Conv1dCache {
	Tensor input;
	Tensor preactivation;
};

struct Conv1dGrads {
	Tensor input;
	Tensor weight;
	Tensor bias;
};

Tensor conv1d_forward(const Tensor &input, const Tensor &weight, const Tensor &bias, Activation act,
                      Conv1dCache *cache = nullptr);
Conv1dGrads conv1d_backward(const Tensor &grad_output, const Tensor &weight, const Conv1dCache &cache, Activation act);

/// Non-overlapping average pooling along the length axis; trailing samples that do not fill a window are dropped.
Tensor avg_pool_forward(const Tensor &input, std::size_t size);
Tensor avg_pool_backward(const Tensor &grad_output, std::size_t size, const std::vector<std::size_t> &input_shape);

// input (batch, in); weight (out, in); bias (out)
struct DenseCache {
	Tensor input;
	Tensor preactivation;
};

struct DenseGrads {
	Tensor input;
	Tensor weight;
	Tensor bias;
};

Tensor dense_forward(const Tensor &input, const Tensor &weight, const Tensor &bias, Activation act,
                     DenseCache *cache = nullptr);
DenseGrads dense_backward(const Tensor &grad_output, const Tensor &weight, const DenseCache &cache, Activation act);

/// Mean squared error over a (batch, 1) prediction. Writes dLoss/dPred when grad is given.
double mse_loss(const Tensor &pred, std::span<const double> targets, Tensor *grad = nullptr);

} // namespace solarcast::nn
