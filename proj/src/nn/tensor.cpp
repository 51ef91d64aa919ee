#include "solarcast/nn/tensor.hpp"

#include "solarcast/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace solarcast::nn {

namespace {

std::size_t element_count(const std::vector<std::size_t> &shape) {
	if (shape.empty() || shape.size() > 3) {
		throw UsageError("tensor rank must be 1 to 3");
	}
	return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

} // namespace

Tensor::Tensor(std::vector<std::size_t> shape, double fill) : shape_(std::move(shape)) {
	data_.assign(element_count(shape_), fill);
}

Tensor::Tensor(std::vector<std::size_t> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
	if (element_count(shape_) != data_.size()) {
		throw UsageError("tensor data does not match its shape");
	}
}

void Tensor::fill(double v) {
	std::fill(data_.begin(), data_.end(), v);
}

bool Tensor::all_finite() const {
	return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

void glorot_uniform(Tensor &t, std::size_t fan_in, std::size_t fan_out, std::mt19937_64 &rng) {
	const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
	std::uniform_real_distribution<double> dist(-limit, limit);
	for (double &v : t.data()) {
		v = dist(rng);
	}
}

} // namespace solarcast::nn
