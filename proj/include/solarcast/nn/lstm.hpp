#pragma once

#include "solarcast/nn/tensor.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace solarcast::nn {

/**
 * Single-layer LSTM parameters.
 *
 * weight has shape (4 * units, units + inputs) and multiplies the
 * concatenation [h(t-1), x(t)]. Row blocks, in order: forget, input,
 * output, candidate. bias has shape (4 * units).
 */
struct LstmParams {
	Tensor weight;
	Tensor bias;

	std::size_t units() const { return weight.dim(0) / 4; }
	std::size_t inputs() const { return weight.dim(1) - units(); }
};

enum LstmGate : std::size_t { kForget = 0, kInput = 1, kOutput = 2, kCandidate = 3 };

struct LstmStepCache {
	std::vector<double> concat; // [h_prev, x]
	std::vector<double> forget;
	std::vector<double> input;
	std::vector<double> output;
	std::vector<double> candidate;
	std::vector<double> c_prev;
	std::vector<double> c;
	std::vector<double> tanh_c;
};

struct LstmCellResult {
	std::vector<double> h;
	std::vector<double> c;
	LstmStepCache cache;
};

double sigmoid(double x);

LstmCellResult lstm_cell_forward(std::span<const double> x, std::span<const double> h_prev,
                                 std::span<const double> c_prev, const LstmParams &params);

struct LstmSequenceCache {
	std::size_t batch = 0;
	std::size_t steps = 0;
	std::vector<LstmStepCache> cells; // batch-major: cells[b * steps + t]
};

/// Runs the sequence (batch, steps, inputs) from zero state and returns the final hidden state (batch, units).
Tensor lstm_forward(const Tensor &input, const LstmParams &params, LstmSequenceCache *cache = nullptr);

struct LstmGrads {
	Tensor input;
	Tensor weight;
	Tensor bias;
};

/// Backpropagation through time from a gradient on the final hidden state.
LstmGrads lstm_backward(const Tensor &grad_h_final, const LstmParams &params, const LstmSequenceCache &cache);

} // namespace solarcast::nn
