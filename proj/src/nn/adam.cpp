#include "solarcast/nn/adam.hpp"

#include "solarcast/errors.hpp"

#include <cmath>
#include <string>

namespace solarcast::nn {

AdamState make_adam_state(const std::vector<Tensor> &params) {
	AdamState s;
	for (const auto &p : params) {
		s.first_moment.emplace_back(p.shape());
		s.second_moment.emplace_back(p.shape());
	}
	return s;
}

void adam_step(std::vector<Tensor> &params, const std::vector<Tensor> &grads, AdamState &state, double learning_rate) {
	if (params.size() != grads.size() || params.size() != state.first_moment.size() ||
	    params.size() != state.second_moment.size()) {
		throw UsageError("adam: parameter, gradient and state counts differ");
	}
	++state.step;
	const double t = static_cast<double>(state.step);
	const double c1 = 1.0 - std::pow(state.beta1, t);
	const double c2 = 1.0 - std::pow(state.beta2, t);
	for (std::size_t p = 0; p < params.size(); ++p) {
		auto &param = params[p];
		const auto &grad = grads[p];
		auto &m = state.first_moment[p];
		auto &v = state.second_moment[p];
		if (!param.same_shape(grad) || !param.same_shape(m) || !param.same_shape(v)) {
			throw UsageError("adam: shape mismatch for parameter " + std::to_string(p));
		}
		for (std::size_t i = 0; i < param.size(); ++i) {
			const double g = grad[i];
			m[i] = state.beta1 * m[i] + (1.0 - state.beta1) * g;
			v[i] = state.beta2 * v[i] + (1.0 - state.beta2) * g * g;
			const double m_hat = m[i] / c1;
			const double v_hat = v[i] / c2;
			param[i] -= learning_rate * m_hat / (std::sqrt(v_hat) + state.epsilon);
		}
	}
}

} // namespace solarcast::nn
