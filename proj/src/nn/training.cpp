#include "solarcast/nn/training.hpp"

#include "solarcast/errors.hpp"
#include "solarcast/nn/adam.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <numeric>
#include <random>

namespace solarcast::nn {

WindowSet make_windows(const IrradianceSeries &standardized, std::size_t window, std::size_t horizon,
                       const DaylightWindow &daylight, bool difference) {
	if (window < 2 && difference) {
		throw UsageError("differenced windows need at least two lags");
	}
	if (window == 0 || horizon == 0) {
		throw UsageError("window and horizon must be at least 1");
	}
	const int step = standardized.step_minutes();
	const std::size_t first = daylight.first_slot(step);
	const std::size_t last = daylight.last_slot(step);
	const std::size_t first_target = first + window + horizon - 1;
	const std::size_t spd = standardized.samples_per_day();

	std::vector<double> inputs;
	WindowSet ws;
	std::vector<double> lags(window);
	for (std::size_t d = 0; d < standardized.days(); ++d) {
		const auto day = standardized.day(d);
		for (std::size_t t = first_target; t <= last; ++t) {
			const std::size_t n = t + 1 - horizon;
			for (std::size_t k = 0; k < window; ++k) {
				lags[k] = day[n - window + k]; // oldest first
			}
			const double anchor = lags.back();
			if (difference) {
				const DifferencedSeries diff = difference_transform(lags);
				inputs.insert(inputs.end(), diff.deltas.begin(), diff.deltas.end());
				ws.targets.push_back(day[t] - anchor);
			} else {
				inputs.insert(inputs.end(), lags.begin(), lags.end());
				ws.targets.push_back(day[t]);
			}
			ws.anchors.push_back(anchor);
			ws.target_index.push_back(d * spd + t);
		}
	}
	if (!ws.targets.empty()) {
		ws.inputs = Tensor({ws.targets.size(), window, 1}, std::move(inputs));
	}
	return ws;
}

namespace {

constexpr std::size_t kEvalChunk = 1024;

Tensor gather(const Tensor &inputs, std::span<const std::size_t> idx) {
	const std::size_t w = inputs.dim(1);
	Tensor out({idx.size(), w, 1});
	for (std::size_t r = 0; r < idx.size(); ++r) {
		for (std::size_t k = 0; k < w; ++k) {
			out[r * w + k] = inputs[idx[r] * w + k];
		}
	}
	return out;
}

double dataset_mse(const Network &net, const WindowSet &ws) {
	double ss = 0.0;
	std::vector<std::size_t> idx;
	for (std::size_t start = 0; start < ws.rows(); start += kEvalChunk) {
		const std::size_t end = std::min(ws.rows(), start + kEvalChunk);
		idx.resize(end - start);
		std::iota(idx.begin(), idx.end(), start);
		const Tensor out = network_forward(net, gather(ws.inputs, idx));
		for (std::size_t r = 0; r < idx.size(); ++r) {
			const double e = out[r] - ws.targets[start + r];
			ss += e * e;
		}
	}
	return ss / static_cast<double>(ws.rows());
}

struct Schedule {
	std::size_t epochs = 0;
	std::size_t batch = 0;
	double lr = 0.0;
	std::size_t drop_period = 0; // 0 disables step decay
	double drop_factor = 1.0;

	double rate(std::size_t epoch) const {
		if (drop_period == 0) {
			return lr;
		}
		return lr * std::pow(drop_factor, static_cast<double>((epoch - 1) / drop_period));
	}
};

NeuralModel train(NeuralModel model, const IrradianceSeries &train_raw, const Schedule &schedule,
                  const TrainingOptions &options) {
	const IrradianceSeries z = standardize(train_raw, model.scaler);
	const WindowSet ws = make_windows(z, options.window, model.horizon, options.daylight, model.difference_input);
	if (ws.rows() < options.min_windows) {
		throw DataError("training series yields " + std::to_string(ws.rows()) + " windows; need at least " +
		                std::to_string(options.min_windows));
	}
	if (schedule.batch == 0) {
		throw UsageError("batch size must be at least 1");
	}
	Network &net = model.network;
	model.loss_curve.push_back(dataset_mse(net, ws));

	AdamState adam = make_adam_state(net.params);
	std::mt19937_64 shuffle_rng(options.seed ^ 0x9e3779b97f4a7c15ULL);
	std::vector<std::size_t> order(ws.rows());
	std::iota(order.begin(), order.end(), std::size_t{0});
	std::vector<double> batch_targets;
	Tensor grad_out;
	NetworkTrace trace;
	for (std::size_t epoch = 1; epoch <= schedule.epochs; ++epoch) {
		std::shuffle(order.begin(), order.end(), shuffle_rng);
		const double lr = schedule.rate(epoch);
		for (std::size_t start = 0; start < order.size(); start += schedule.batch) {
			const std::size_t end = std::min(order.size(), start + schedule.batch);
			const std::span<const std::size_t> idx(order.data() + start, end - start);
			batch_targets.resize(idx.size());
			for (std::size_t r = 0; r < idx.size(); ++r) {
				batch_targets[r] = ws.targets[idx[r]];
			}
			const Tensor out = network_forward(net, gather(ws.inputs, idx), &trace);
			const double loss = mse_loss(out, batch_targets, &grad_out);
			if (!std::isfinite(loss)) {
				throw NumericalError(to_string(net.kind) + " training diverged in epoch " + std::to_string(epoch));
			}
			const std::vector<Tensor> grads = network_backward(net, trace, grad_out);
			adam_step(net.params, grads, adam, lr);
		}
		const double epoch_loss = dataset_mse(net, ws);
		if (!std::isfinite(epoch_loss)) {
			throw NumericalError(to_string(net.kind) + " training diverged in epoch " + std::to_string(epoch));
		}
		model.loss_curve.push_back(epoch_loss);
	}
	return model;
}

} // namespace

NeuralModel initial_model(const IrradianceSeries &train_raw, NetworkKind kind, const ConvSpec &conv,
                          const LstmSpec &lstm, std::size_t horizon, const TrainingOptions &options) {
	if (horizon == 0) {
		throw UsageError("horizon must be at least 1");
	}
	NeuralModel m;
	m.network = kind == NetworkKind::cnn ? make_cnn(options.window, conv, options.seed)
	                                     : make_lstm(options.window, lstm, options.seed);
	m.horizon = horizon;
	m.scaler = fit_scaler(train_raw);
	m.daylight = options.daylight;
	m.step_minutes = train_raw.step_minutes();
	m.difference_input = kind == NetworkKind::cnn;
	return m;
}

NeuralModel train_cnn(const IrradianceSeries &train_raw, const ConvSpec &spec, std::size_t horizon,
                      const TrainingOptions &options) {
	NeuralModel m = initial_model(train_raw, NetworkKind::cnn, spec, LstmSpec{}, horizon, options);
	return train(std::move(m), train_raw, Schedule{spec.epochs, spec.batch_size, spec.learning_rate, 0, 1.0}, options);
}

NeuralModel train_lstm(const IrradianceSeries &train_raw, const LstmSpec &spec, std::size_t horizon,
                       const TrainingOptions &options) {
	NeuralModel m = initial_model(train_raw, NetworkKind::lstm, ConvSpec{}, spec, horizon, options);
	return train(std::move(m), train_raw,
	             Schedule{spec.epochs, spec.batch_size, spec.initial_lr, spec.lr_drop_period, spec.lr_drop_factor},
	             options);
}

double window_mse(const NeuralModel &model, const IrradianceSeries &raw) {
	const WindowSet ws = make_windows(standardize(raw, model.scaler), model.network.window, model.horizon,
	                                  model.daylight, model.difference_input);
	if (ws.rows() == 0) {
		throw DataError("series yields no windows");
	}
	return dataset_mse(model.network, ws);
}

std::vector<double> predict(const NeuralModel &model, const Tensor &inputs) {
	std::vector<double> out;
	if (inputs.empty()) {
		return out;
	}
	out.reserve(inputs.dim(0));
	std::vector<std::size_t> idx;
	for (std::size_t start = 0; start < inputs.dim(0); start += kEvalChunk) {
		const std::size_t end = std::min(inputs.dim(0), start + kEvalChunk);
		idx.resize(end - start);
		std::iota(idx.begin(), idx.end(), start);
		const Tensor y = network_forward(model.network, gather(inputs, idx));
		out.insert(out.end(), y.data().begin(), y.data().end());
	}
	return out;
}

std::vector<ForecastRow> nn_forecast(const NeuralModel &model, const IrradianceSeries &test_raw) {
	if (test_raw.step_minutes() != model.step_minutes) {
		throw DataError("test series step does not match the model's sampling step");
	}
	const IrradianceSeries z = standardize(test_raw, model.scaler);
	const WindowSet ws =
	    make_windows(z, model.network.window, model.horizon, model.daylight, model.difference_input);
	std::vector<ForecastRow> rows;
	if (ws.rows() == 0) {
		return rows;
	}
	std::vector<double> out = predict(model, ws.inputs);
	if (model.difference_input) {
		out = inverse_difference(out, ws.anchors);
	}
	rows.reserve(out.size());
	for (std::size_t r = 0; r < out.size(); ++r) {
		const std::size_t idx = ws.target_index[r];
		const double pred = std::max(0.0, model.scaler.destandardize(out[r]));
		rows.push_back(ForecastRow{test_raw.timestamp(idx), test_raw[idx], pred, model.horizon});
	}
	return rows;
}

void write_loss_curve(const NeuralModel &model, std::ostream &out) {
	out << "epoch,loss\n";
	char buf[40];
	for (std::size_t e = 0; e < model.loss_curve.size(); ++e) {
		std::snprintf(buf, sizeof(buf), "%.17g", model.loss_curve[e]);
		out << e << ',' << buf << '\n';
	}
}

} // namespace solarcast::nn
