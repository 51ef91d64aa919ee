#pragma once

#include <cstddef>
#include <initializer_list>
#include <random>
#include <span>
#include <vector>

namespace solarcast::nn {

/// Row-major tensor of rank 1 to 3, typically (batch, length, channels).
class Tensor {
public:
	Tensor() = default;
	explicit Tensor(std::vector<std::size_t> shape, double fill = 0.0);
	Tensor(std::vector<std::size_t> shape, std::vector<double> data);

	const std::vector<std::size_t> &shape() const { return shape_; }
	std::size_t rank() const { return shape_.size(); }
	std::size_t dim(std::size_t i) const { return shape_[i]; }
	std::size_t size() const { return data_.size(); }
	bool empty() const { return data_.empty(); }

	std::span<double> data() { return data_; }
	std::span<const double> data() const { return data_; }
	double &operator[](std::size_t i) { return data_[i]; }
	double operator[](std::size_t i) const { return data_[i]; }

	double &at(std::size_t i, std::size_t j) { return data_[i * shape_[1] + j]; }
	double at(std::size_t i, std::size_t j) const { return data_[i * shape_[1] + j]; }
	double &at(std::size_t i, std::size_t j, std::size_t k) { return data_[(i * shape_[1] + j) * shape_[2] + k]; }
	double at(std::size_t i, std::size_t j, std::size_t k) const { return data_[(i * shape_[1] + j) * shape_[2] + k]; }

	void fill(double v);
	bool all_finite() const;
	bool same_shape(const Tensor &other) const { return shape_ == other.shape_; }

private:
	std::vector<std::size_t> shape_;
	std::vector<double> data_;
};

/// Uniform in +-sqrt(6 / (fan_in + fan_out)).
void glorot_uniform(Tensor &t, std::size_t fan_in, std::size_t fan_out, std::mt19937_64 &rng);

} // namespace solarcast::nn
