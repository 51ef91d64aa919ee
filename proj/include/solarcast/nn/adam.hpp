#pragma once

#include "solarcast/nn/tensor.hpp"

#include <cstddef>
#include <vector>

namespace solarcast::nn {

struct AdamState {
	std::size_t step = 0;
	std::vector<Tensor> first_moment;
	std::vector<Tensor> second_moment;
	double beta1 = 0.9;
	double beta2 = 0.999;
	double epsilon = 1e-8;
};

AdamState make_adam_state(const std::vector<Tensor> &params);

/// One bias-corrected Adam update applied in place.
void adam_step(std::vector<Tensor> &params, const std::vector<Tensor> &grads, AdamState &state, double learning_rate);

} // namespace solarcast::nn
