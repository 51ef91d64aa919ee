#include "solarcast/nn/networks.hpp"

#include "solarcast/errors.hpp"

#include <random>

namespace solarcast::nn {

std::string to_string(NetworkKind kind) {
	return kind == NetworkKind::cnn ? "cnn" : "lstm";
}

NetworkKind parse_network_kind(std::string_view text) {
	if (text == "cnn") {
		return NetworkKind::cnn;
	}
	if (text == "lstm") {
		return NetworkKind::lstm;
	}
	throw UsageError("unknown network kind '" + std::string(text) + "'");
}

namespace {

void add_dense(Network &net, std::size_t in, std::size_t out, const std::string &name, std::mt19937_64 &rng) {
	Tensor w({out, in});
	glorot_uniform(w, in, out, rng);
	net.params.push_back(std::move(w));
	net.names.push_back(name + ".weight");
	net.params.emplace_back(std::vector<std::size_t>{out});
	net.names.push_back(name + ".bias");
}

std::size_t cnn_flat_width(std::size_t window, const ConvSpec &spec) {
	return ((window - spec.kernel_size + 1) / spec.pool_size) * spec.kernel_count;
}

} // namespace

Network make_cnn(std::size_t window, const ConvSpec &spec, std::uint64_t seed) {
	if (spec.kernel_count == 0 || spec.kernel_size == 0 || spec.pool_size == 0 || spec.kernel_size > window ||
	    (window - spec.kernel_size + 1) < spec.pool_size) {
		throw UsageError("convolution spec does not fit a window of " + std::to_string(window));
	}
	std::mt19937_64 rng(seed);
	Network net;
	net.kind = NetworkKind::cnn;
	net.window = window;
	net.conv = spec;
	Tensor w({spec.kernel_count, spec.kernel_size, 1});
	glorot_uniform(w, spec.kernel_size, spec.kernel_size * spec.kernel_count, rng);
	net.params.push_back(std::move(w));
	net.names.push_back("conv.weight");
	net.params.emplace_back(std::vector<std::size_t>{spec.kernel_count});
	net.names.push_back("conv.bias");
	std::size_t width = cnn_flat_width(window, spec);
	for (std::size_t i = 0; i < spec.hidden.size(); ++i) {
		add_dense(net, width, spec.hidden[i], "fc" + std::to_string(i + 1), rng);
		width = spec.hidden[i];
	}
	add_dense(net, width, 1, "out", rng);
	return net;
}

Network make_lstm(std::size_t window, const LstmSpec &spec, std::uint64_t seed) {
	if (spec.layers != 1) {
		throw UsageError("only single-layer LSTM networks are supported");
	}
	if (spec.units == 0 || spec.dense_hidden == 0 || window == 0) {
		throw UsageError("LSTM spec sizes must be positive");
	}
	std::mt19937_64 rng(seed);
	Network net;
	net.kind = NetworkKind::lstm;
	net.window = window;
	net.lstm = spec;
	Tensor w({4 * spec.units, spec.units + 1});
	glorot_uniform(w, spec.units + 1, spec.units, rng);
	net.params.push_back(std::move(w));
	net.names.push_back("lstm.weight");
	net.params.emplace_back(std::vector<std::size_t>{4 * spec.units});
	net.names.push_back("lstm.bias");
	add_dense(net, spec.units, spec.dense_hidden, "fc1", rng);
	add_dense(net, spec.dense_hidden, 1, "out", rng);
	return net;
}

namespace {

// Dense stack starting at parameter index `first`; hidden layers use ReLU, the last is linear.
Tensor dense_stack_forward(const Network &net, std::size_t first, Tensor x, NetworkTrace *trace) {
	const std::size_t layers = (net.params.size() - first) / 2;
	for (std::size_t l = 0; l < layers; ++l) {
		const Activation act = l + 1 == layers ? Activation::identity : Activation::relu;
		DenseCache *cache = nullptr;
		if (trace) {
			trace->dense.emplace_back();
			cache = &trace->dense.back();
		}
		x = dense_forward(x, net.params[first + 2 * l], net.params[first + 2 * l + 1], act, cache);
	}
	return x;
}

Tensor dense_stack_backward(const Network &net, std::size_t first, const NetworkTrace &trace, Tensor grad,
                            std::vector<Tensor> &grads) {
	const std::size_t layers = (net.params.size() - first) / 2;
	if (trace.dense.size() != layers) {
		throw UsageError("network backward called without a forward trace");
	}
	for (std::size_t l = layers; l-- > 0;) {
		const Activation act = l + 1 == layers ? Activation::identity : Activation::relu;
		DenseGrads g = dense_backward(grad, net.params[first + 2 * l], trace.dense[l], act);
		grads[first + 2 * l] = std::move(g.weight);
		grads[first + 2 * l + 1] = std::move(g.bias);
		grad = std::move(g.input);
	}
	return grad;
}

} // namespace

Tensor network_forward(const Network &net, const Tensor &input, NetworkTrace *trace) {
	if (input.rank() != 3 || input.dim(1) != net.window || input.dim(2) != 1) {
		throw UsageError("network input must be (batch, " + std::to_string(net.window) + ", 1)");
	}
	if (trace) {
		*trace = NetworkTrace{};
	}
	const std::size_t batch = input.dim(0);
	if (net.kind == NetworkKind::cnn) {
		Tensor h = conv1d_forward(input, net.params[0], net.params[1], Activation::relu, trace ? &trace->conv : nullptr);
		if (trace) {
			trace->pool_input_shape = h.shape();
		}
		Tensor pooled = avg_pool_forward(h, net.conv.pool_size);
		if (trace) {
			trace->flat_shape = pooled.shape();
		}
		const std::size_t width = pooled.size() / batch;
		Tensor flat({batch, width}, std::vector<double>(pooled.data().begin(), pooled.data().end()));
		return dense_stack_forward(net, 2, std::move(flat), trace);
	}
	LstmParams lp{net.params[0], net.params[1]};
	Tensor h = lstm_forward(input, lp, trace ? &trace->lstm : nullptr);
	return dense_stack_forward(net, 2, std::move(h), trace);
}

std::vector<Tensor> network_backward(const Network &net, const NetworkTrace &trace, const Tensor &grad_output,
                                     Tensor *grad_input) {
	std::vector<Tensor> grads(net.params.size());
	Tensor g = dense_stack_backward(net, 2, trace, grad_output, grads);
	if (net.kind == NetworkKind::cnn) {
		if (trace.flat_shape.empty()) {
			throw UsageError("network backward called without a forward trace");
		}
		Tensor unflat(trace.flat_shape, std::vector<double>(g.data().begin(), g.data().end()));
		Tensor pool_grad = avg_pool_backward(unflat, net.conv.pool_size, trace.pool_input_shape);
		Conv1dGrads cg = conv1d_backward(pool_grad, net.params[0], trace.conv, Activation::relu);
		grads[0] = std::move(cg.weight);
		grads[1] = std::move(cg.bias);
		if (grad_input) {
			*grad_input = std::move(cg.input);
		}
		return grads;
	}
	LstmParams lp{net.params[0], net.params[1]};
	LstmGrads lg = lstm_backward(g, lp, trace.lstm);
	grads[0] = std::move(lg.weight);
	grads[1] = std::move(lg.bias);
	if (grad_input) {
		*grad_input = std::move(lg.input);
	}
	return grads;
}

} // namespace solarcast::nn
