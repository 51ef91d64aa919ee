#include "solarcast/nn/lstm.hpp"

#include "solarcast/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace solarcast::nn {

double sigmoid(double x) {
	if (x >= 0.0) {
		return 1.0 / (1.0 + std::exp(-x));
	}
	const double e = std::exp(x);
	return e / (1.0 + e);
}

LstmCellResult lstm_cell_forward(std::span<const double> x, std::span<const double> h_prev,
                                 std::span<const double> c_prev, const LstmParams &params) {
	const std::size_t units = params.units();
	const std::size_t inputs = params.inputs();
	if (x.size() != inputs || h_prev.size() != units || c_prev.size() != units || params.bias.size() != 4 * units) {
		throw UsageError("lstm cell shapes do not match its parameters");
	}
	const std::size_t width = units + inputs;
	LstmCellResult r;
	auto &cc = r.cache;
	cc.concat.resize(width);
	std::copy(h_prev.begin(), h_prev.end(), cc.concat.begin());
	std::copy(x.begin(), x.end(), cc.concat.begin() + static_cast<std::ptrdiff_t>(units));
	cc.forget.resize(units);
	cc.input.resize(units);
	cc.output.resize(units);
	cc.candidate.resize(units);
	cc.c_prev.assign(c_prev.begin(), c_prev.end());
	cc.c.resize(units);
	cc.tanh_c.resize(units);
	r.h.resize(units);

	const auto w = params.weight.data();
	auto affine = [&](std::size_t row) {
		double acc = params.bias[row];
		const double *wr = w.data() + row * width;
		for (std::size_t j = 0; j < width; ++j) {
			acc += wr[j] * cc.concat[j];
		}
		return acc;
	};
	for (std::size_t u = 0; u < units; ++u) {
		cc.forget[u] = sigmoid(affine(kForget * units + u));
		cc.input[u] = sigmoid(affine(kInput * units + u));
		cc.output[u] = sigmoid(affine(kOutput * units + u));
		cc.candidate[u] = std::tanh(affine(kCandidate * units + u));
		cc.c[u] = cc.forget[u] * c_prev[u] + cc.input[u] * cc.candidate[u];
		cc.tanh_c[u] = std::tanh(cc.c[u]);
		r.h[u] = cc.output[u] * cc.tanh_c[u];
	}
	r.c = cc.c;
	return r;
}

Tensor lstm_forward(const Tensor &input, const LstmParams &params, LstmSequenceCache *cache) {
	if (input.rank() != 3 || input.dim(2) != params.inputs()) {
		throw UsageError("lstm input must be (batch, steps, " + std::to_string(params.inputs()) + ")");
	}
	const std::size_t batch = input.dim(0);
	const std::size_t steps = input.dim(1);
	const std::size_t units = params.units();
	const std::size_t inputs = params.inputs();
	Tensor out({batch, units});
	if (cache) {
		cache->batch = batch;
		cache->steps = steps;
		cache->cells.clear();
		cache->cells.reserve(batch * steps);
	}
	std::vector<double> h(units);
	std::vector<double> c(units);
	for (std::size_t b = 0; b < batch; ++b) {
		std::fill(h.begin(), h.end(), 0.0);
		std::fill(c.begin(), c.end(), 0.0);
		for (std::size_t t = 0; t < steps; ++t) {
			const auto x = input.data().subspan((b * steps + t) * inputs, inputs);
			LstmCellResult r = lstm_cell_forward(x, h, c, params);
			h = std::move(r.h);
			c = std::move(r.c);
			if (cache) {
				cache->cells.push_back(std::move(r.cache));
			}
		}
		for (std::size_t u = 0; u < units; ++u) {
			out.at(b, u) = h[u];
		}
	}
	return out;
}

LstmGrads lstm_backward(const Tensor &grad_h_final, const LstmParams &params, const LstmSequenceCache &cache) {
	if (cache.cells.empty() || cache.cells.size() != cache.batch * cache.steps) {
		throw UsageError("lstm backward called without a forward cache");
	}
	const std::size_t units = params.units();
	const std::size_t inputs = params.inputs();
	const std::size_t width = units + inputs;
	if (grad_h_final.rank() != 2 || grad_h_final.dim(0) != cache.batch || grad_h_final.dim(1) != units) {
		throw UsageError("lstm upstream gradient has the wrong shape");
	}
	LstmGrads g{Tensor({cache.batch, cache.steps, inputs}), Tensor(params.weight.shape()), Tensor({4 * units})};
	const auto w = params.weight.data();
	auto gw = g.weight.data();

	std::vector<double> dh(units);
	std::vector<double> dc(units);
	std::vector<double> dz(4 * units);
	std::vector<double> dconcat(width);
	for (std::size_t b = 0; b < cache.batch; ++b) {
		for (std::size_t u = 0; u < units; ++u) {
			dh[u] = grad_h_final.at(b, u);
		}
		std::fill(dc.begin(), dc.end(), 0.0);
		for (std::size_t t = cache.steps; t-- > 0;) {
			const LstmStepCache &s = cache.cells[b * cache.steps + t];
			for (std::size_t u = 0; u < units; ++u) {
				const double d_out = dh[u] * s.tanh_c[u];
				dc[u] += dh[u] * s.output[u] * (1.0 - s.tanh_c[u] * s.tanh_c[u]);
				const double d_forget = dc[u] * s.c_prev[u];
				const double d_input = dc[u] * s.candidate[u];
				const double d_cand = dc[u] * s.input[u];
				dz[kForget * units + u] = d_forget * s.forget[u] * (1.0 - s.forget[u]);
				dz[kInput * units + u] = d_input * s.input[u] * (1.0 - s.input[u]);
				dz[kOutput * units + u] = d_out * s.output[u] * (1.0 - s.output[u]);
				dz[kCandidate * units + u] = d_cand * (1.0 - s.candidate[u] * s.candidate[u]);
				dc[u] *= s.forget[u]; // becomes dL/dc(t-1)
			}
			std::fill(dconcat.begin(), dconcat.end(), 0.0);
			for (std::size_t row = 0; row < 4 * units; ++row) {
				const double d = dz[row];
				if (d == 0.0) {
					continue;
				}
				g.bias[row] += d;
				const double *wr = w.data() + row * width;
				double *gr = gw.data() + row * width;
				for (std::size_t j = 0; j < width; ++j) {
					gr[j] += d * s.concat[j];
					dconcat[j] += d * wr[j];
				}
			}
			for (std::size_t u = 0; u < units; ++u) {
				dh[u] = dconcat[u];
			}
			for (std::size_t i = 0; i < inputs; ++i) {
				g.input.at(b, t, i) = dconcat[units + i];
			}
		}
	}
	return g;
}

} // namespace solarcast::nn
