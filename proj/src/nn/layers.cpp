#include "solarcast/nn/layers.hpp"

#include "solarcast/errors.hpp"

#include <algorithm>
#include <string>

namespace solarcast::nn {

namespace {

double activate(double z, Activation act) {
	return act == Activation::relu ? relu(z) : z;
}

// Derivative at z; the ReLU kink takes the left limit.
double activation_slope(double z, Activation act) {
	if (act == Activation::relu) {
		return z > 0.0 ? 1.0 : 0.0;
	}
	return 1.0;
}

void require_rank(const Tensor &t, std::size_t rank, const char *what) {
	if (t.rank() != rank) {
		throw UsageError(std::string(what) + " must have rank " + std::to_string(rank));
	}
}

} // namespace

double relu(double x) {
	return std::max(0.0, x);
}

Tensor relu(const Tensor &x) {
	Tensor y = x;
	for (double &v : y.data()) {
		v = relu(v);
	}
	return y;
}

Tensor conv1d_forward(const Tensor &input, const Tensor &weight, const Tensor &bias, Activation act,
                      Conv1dCache *cache) {
	require_rank(input, 3, "conv1d input");
	require_rank(weight, 3, "conv1d weight");
	const std::size_t batch = input.dim(0);
	const std::size_t length = input.dim(1);
	const std::size_t channels = input.dim(2);
	const std::size_t kernels = weight.dim(0);
	const std::size_t ksize = weight.dim(1);
	if (weight.dim(2) != channels || bias.size() != kernels) {
		throw UsageError("conv1d parameter shapes do not match the input");
	}
	if (ksize > length || ksize == 0) {
		throw UsageError("conv1d kernel of size " + std::to_string(ksize) + " exceeds input length " +
		                 std::to_string(length));
	}
	const std::size_t out_len = length - ksize + 1;
	Tensor pre({batch, out_len, kernels});
	for (std::size_t b = 0; b < batch; ++b) {
		for (std::size_t t = 0; t < out_len; ++t) {
			for (std::size_t k = 0; k < kernels; ++k) {
				double acc = bias[k];
				for (std::size_t j = 0; j < ksize; ++j) {
					for (std::size_t c = 0; c < channels; ++c) {
						acc += weight.at(k, j, c) * input.at(b, t + j, c);
					}
				}
				pre.at(b, t, k) = acc;
			}
		}
	}
	Tensor out = pre;
	for (double &v : out.data()) {
		v = activate(v, act);
	}
	if (cache) {
		cache->input = input;
		cache->preactivation = std::move(pre);
	}
	return out;
}

Conv1dGrads conv1d_backward(const Tensor &grad_output, const Tensor &weight, const Conv1dCache &cache,
                            Activation act) {
	if (cache.input.empty() || cache.preactivation.empty()) {
		throw UsageError("conv1d backward called without a forward cache");
	}
	const Tensor &input = cache.input;
	const std::size_t batch = input.dim(0);
	const std::size_t channels = input.dim(2);
	const std::size_t kernels = weight.dim(0);
	const std::size_t ksize = weight.dim(1);
	const std::size_t out_len = cache.preactivation.dim(1);
	if (!grad_output.same_shape(cache.preactivation)) {
		throw UsageError("conv1d upstream gradient has the wrong shape");
	}
	Conv1dGrads g{Tensor(input.shape()), Tensor(weight.shape()), Tensor({kernels})};
	for (std::size_t b = 0; b < batch; ++b) {
		for (std::size_t t = 0; t < out_len; ++t) {
			for (std::size_t k = 0; k < kernels; ++k) {
				const double dz = grad_output.at(b, t, k) * activation_slope(cache.preactivation.at(b, t, k), act);
				if (dz == 0.0) {
					continue;
				}
				g.bias[k] += dz;
				for (std::size_t j = 0; j < ksize; ++j) {
					for (std::size_t c = 0; c < channels; ++c) {
						g.weight.at(k, j, c) += dz * input.at(b, t + j, c);
						g.input.at(b, t + j, c) += dz * weight.at(k, j, c);
					}
				}
			}
		}
	}
	return g;
}

Tensor avg_pool_forward(const Tensor &input, std::size_t size) {
	require_rank(input, 3, "pool input");
	if (size == 0) {
		throw UsageError("pool size must be at least 1");
	}
	const std::size_t batch = input.dim(0);
	const std::size_t out_len = input.dim(1) / size;
	const std::size_t channels = input.dim(2);
	if (out_len == 0) {
		throw UsageError("pool size exceeds input length");
	}
	Tensor out({batch, out_len, channels});
	const double inv = 1.0 / static_cast<double>(size);
	for (std::size_t b = 0; b < batch; ++b) {
		for (std::size_t t = 0; t < out_len; ++t) {
			for (std::size_t c = 0; c < channels; ++c) {
				double acc = 0.0;
				for (std::size_t j = 0; j < size; ++j) {
					acc += input.at(b, t * size + j, c);
				}
				out.at(b, t, c) = size == 1 ? acc : acc * inv;
			}
		}
	}
	return out;
}

Tensor avg_pool_backward(const Tensor &grad_output, std::size_t size, const std::vector<std::size_t> &input_shape) {
	if (input_shape.size() != 3) {
		throw UsageError("pool backward called without a forward cache");
	}
	Tensor g(input_shape);
	const double inv = 1.0 / static_cast<double>(size);
	for (std::size_t b = 0; b < grad_output.dim(0); ++b) {
		for (std::size_t t = 0; t < grad_output.dim(1); ++t) {
			for (std::size_t c = 0; c < grad_output.dim(2); ++c) {
				for (std::size_t j = 0; j < size; ++j) {
					g.at(b, t * size + j, c) = grad_output.at(b, t, c) * inv;
				}
			}
		}
	}
	return g;
}

Tensor dense_forward(const Tensor &input, const Tensor &weight, const Tensor &bias, Activation act,
                     DenseCache *cache) {
	require_rank(input, 2, "dense input");
	require_rank(weight, 2, "dense weight");
	const std::size_t batch = input.dim(0);
	const std::size_t in = input.dim(1);
	const std::size_t out_dim = weight.dim(0);
	if (weight.dim(1) != in || bias.size() != out_dim) {
		throw UsageError("dense parameter shapes do not match the input");
	}
	Tensor pre({batch, out_dim});
	for (std::size_t b = 0; b < batch; ++b) {
		for (std::size_t o = 0; o < out_dim; ++o) {
			double acc = bias[o];
			for (std::size_t i = 0; i < in; ++i) {
				acc += weight.at(o, i) * input.at(b, i);
			}
			pre.at(b, o) = acc;
		}
	}
	Tensor out = pre;
	for (double &v : out.data()) {
		v = activate(v, act);
	}
	if (cache) {
		cache->input = input;
		cache->preactivation = std::move(pre);
	}
	return out;
}

DenseGrads dense_backward(const Tensor &grad_output, const Tensor &weight, const DenseCache &cache, Activation act) {
	if (cache.input.empty() || cache.preactivation.empty()) {
		throw UsageError("dense backward called without a forward cache");
	}
	if (!grad_output.same_shape(cache.preactivation)) {
		throw UsageError("dense upstream gradient has the wrong shape");
	}
	const std::size_t batch = cache.input.dim(0);
	const std::size_t in = cache.input.dim(1);
	const std::size_t out_dim = weight.dim(0);
	DenseGrads g{Tensor(cache.input.shape()), Tensor(weight.shape()), Tensor({out_dim})};
	for (std::size_t b = 0; b < batch; ++b) {
		for (std::size_t o = 0; o < out_dim; ++o) {
			const double dz = grad_output.at(b, o) * activation_slope(cache.preactivation.at(b, o), act);
			if (dz == 0.0) {
				continue;
			}
			g.bias[o] += dz;
			for (std::size_t i = 0; i < in; ++i) {
				g.weight.at(o, i) += dz * cache.input.at(b, i);
				g.input.at(b, i) += dz * weight.at(o, i);
			}
		}
	}
	return g;
}

double mse_loss(const Tensor &pred, std::span<const double> targets, Tensor *grad) {
	if (pred.size() != targets.size() || pred.empty()) {
		throw UsageError("prediction and target counts differ");
	}
	const double n = static_cast<double>(targets.size());
	double ss = 0.0;
	if (grad) {
		*grad = Tensor(pred.shape());
	}
	for (std::size_t i = 0; i < targets.size(); ++i) {
		const double e = pred[i] - targets[i];
		ss += e * e;
		if (grad) {
			(*grad)[i] = 2.0 * e / n;
		}
	}
	return ss / n;
}

} // namespace solarcast::nn
