#pragma once

#include "solarcast/dataset.hpp"
#include "solarcast/metrics.hpp"
#include "solarcast/nn/networks.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace solarcast::nn {

struct TrainingOptions {
	std::size_t window = 4;
	DaylightWindow daylight{};
	std::uint64_t seed = 1;
	/// Windows required before training starts.
	std::size_t min_windows = 1000;
};

/// Network trained for one horizon together with its pre/post-processing state.
struct NeuralModel {
	Network network;
	std::size_t horizon = 1;
	Scaler scaler;
	DaylightWindow daylight;
	int step_minutes = 10;
	/// Lag-1 differenced inputs and delta targets (convolutional baseline).
	bool difference_input = false;
	/// Full training-set MSE at initialization (index 0) and after every epoch.
	std::vector<double> loss_curve;
};

/**
 * Input windows drawn from the same daylight slots as the MAR design matrix.
 *
 * Each input holds the `window` standardized lags oldest first. With
 * `difference` set the window is lag-1 differenced and the target is the
 * change from the most recent lag to the target value.
 */
struct WindowSet {
	Tensor inputs; // (rows, window, 1)
	std::vector<double> targets;
	std::vector<double> anchors; // most recent lag of each row
	std::vector<std::size_t> target_index;

	std::size_t rows() const { return targets.size(); }
};

WindowSet make_windows(const IrradianceSeries &standardized, std::size_t window, std::size_t horizon,
                       const DaylightWindow &daylight, bool difference);

/// Throws NumericalError when the loss stops being finite.
NeuralModel train_cnn(const IrradianceSeries &train_raw, const ConvSpec &spec, std::size_t horizon,
                      const TrainingOptions &options = {});
NeuralModel train_lstm(const IrradianceSeries &train_raw, const LstmSpec &spec, std::size_t horizon,
                       const TrainingOptions &options = {});

/// Untrained model with the same pre-processing as train_cnn / train_lstm.
NeuralModel initial_model(const IrradianceSeries &train_raw, NetworkKind kind, const ConvSpec &conv,
                          const LstmSpec &lstm, std::size_t horizon, const TrainingOptions &options);

/// MSE in the model's target domain over the windows of a raw series.
double window_mse(const NeuralModel &model, const IrradianceSeries &raw);

/// Model-domain outputs for a batch of inputs.
std::vector<double> predict(const NeuralModel &model, const Tensor &inputs);

std::vector<ForecastRow> nn_forecast(const NeuralModel &model, const IrradianceSeries &test_raw);

void save_nn_models(std::span<const NeuralModel> models, const std::filesystem::path &path,
                    const std::vector<std::string> &comments = {});
std::vector<NeuralModel> load_nn_models(const std::filesystem::path &path);

void write_loss_curve(const NeuralModel &model, std::ostream &out);

} // namespace solarcast::nn
