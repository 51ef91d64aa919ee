#pragma once

#include "solarcast/nn/layers.hpp"
#include "solarcast/nn/lstm.hpp"
#include "solarcast/nn/tensor.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace solarcast::nn {

/// Convolutional baseline: conv + ReLU, average pool, ReLU dense layers, one linear output.
struct ConvSpec {
	std::size_t kernel_count = 16;
	std::size_t kernel_size = 2;
	std::size_t pool_size = 1;
	std::vector<std::size_t> hidden{16, 8};
	double learning_rate = 0.005;
	std::size_t batch_size = 256;
	std::size_t epochs = 30;
};

/// Recurrent baseline: one LSTM layer, ReLU dense layer, one linear output.
struct LstmSpec {
	std::size_t units = 32;
	std::size_t layers = 1;
	std::size_t dense_hidden = 8;
	std::size_t epochs = 100;
	double initial_lr = 0.05;
	std::size_t lr_drop_period = 30;
	double lr_drop_factor = 0.1;
	std::size_t batch_size = 256;
};

enum class NetworkKind { cnn, lstm };

std::string to_string(NetworkKind kind);
NetworkKind parse_network_kind(std::string_view text);

/// Architecture plus parameters. Input is (batch, window, 1); output is (batch, 1).
struct Network {
	NetworkKind kind = NetworkKind::cnn;
	std::size_t window = 4;
	ConvSpec conv;
	LstmSpec lstm;
	std::vector<Tensor> params;
	std::vector<std::string> names;
};

/// Scaled-uniform weights and zero biases, drawn from `seed`.
Network make_cnn(std::size_t window, const ConvSpec &spec, std::uint64_t seed);
Network make_lstm(std::size_t window, const LstmSpec &spec, std::uint64_t seed);

/// Forward intermediates needed by network_backward.
struct NetworkTrace {
	Conv1dCache conv;
	std::vector<std::size_t> pool_input_shape;
	std::vector<std::size_t> flat_shape;
	LstmSequenceCache lstm;
	std::vector<DenseCache> dense;
};

Tensor network_forward(const Network &net, const Tensor &input, NetworkTrace *trace = nullptr);
/// Parameter gradients aligned with net.params; the input gradient is written when requested.
std::vector<Tensor> network_backward(const Network &net, const NetworkTrace &trace, const Tensor &grad_output,
                                     Tensor *grad_input = nullptr);

} // namespace solarcast::nn
