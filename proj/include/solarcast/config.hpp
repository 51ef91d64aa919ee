#pragma once

#include "solarcast/dataset.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace solarcast {

enum class ModelKind { mar, ar, cnn, lstm };

std::string to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view text);

/**
 * Settings shared by every command. Read from a flat `key=value` file and
 * then overridden by command-line flags; the resolved form is written into
 * the header of every output file.
 */
struct RunConfig {
	std::filesystem::path data;
	double split = 0.70;
	std::optional<std::size_t> order = 4; // nullopt selects the order from the PACF
	std::vector<std::size_t> horizons{1, 3, 6};
	DaylightWindow daylight{};
	ModelKind model = ModelKind::mar;
	std::uint64_t seed = 1;
	std::filesystem::path out = "out";
	double mape_threshold = 20.0;
	bool recursive = false;
	bool ensemble = true;
	std::size_t max_lag = 20;
	double pacf_threshold = 0.1;
	std::size_t cnn_epochs = 30;
	std::size_t lstm_epochs = 100;
	std::size_t lstm_batch = 256;

	/// Throws UsageError for unknown keys or unparsable values.
	void set(std::string_view key, std::string_view value);
	void load_file(const std::filesystem::path &path);
	std::vector<std::string> to_lines() const;
};

std::vector<std::size_t> parse_horizons(std::string_view text);
std::string format_horizons(const std::vector<std::size_t> &horizons);

} // namespace solarcast
