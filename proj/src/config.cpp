#include "solarcast/config.hpp"

#include "solarcast/errors.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>

namespace solarcast {

std::string to_string(ModelKind kind) {
	switch (kind) {
	case ModelKind::mar:
		return "mar";
	case ModelKind::ar:
		return "ar";
	case ModelKind::cnn:
		return "cnn";
	case ModelKind::lstm:
		return "lstm";
	}
	return "unknown";
}

ModelKind parse_model_kind(std::string_view text) {
	if (text == "mar") {
		return ModelKind::mar;
	}
	if (text == "ar") {
		return ModelKind::ar;
	}
	if (text == "cnn") {
		return ModelKind::cnn;
	}
	if (text == "lstm") {
		return ModelKind::lstm;
	}
	throw UsageError("unknown model '" + std::string(text) + "' (expected mar, ar, cnn or lstm)");
}

namespace {

std::string_view trim(std::string_view s) {
	while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
		s.remove_prefix(1);
	}
	while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
		s.remove_suffix(1);
	}
	return s;
}

template <typename T>
T parse_as(std::string_view key, std::string_view value) {
	T v{};
	auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
	if (ec != std::errc() || ptr != value.data() + value.size()) {
		throw UsageError("bad value '" + std::string(value) + "' for " + std::string(key));
	}
	return v;
}

bool parse_bool(std::string_view key, std::string_view value) {
	if (value == "1" || value == "true" || value == "yes") {
		return true;
	}
	if (value == "0" || value == "false" || value == "no") {
		return false;
	}
	throw UsageError("bad boolean '" + std::string(value) + "' for " + std::string(key));
}

// Shortest text that reads back to the same double.
std::string fmt(double v) {
	char buf[40];
	auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
	return std::string(buf, ptr);
}

} // namespace

std::vector<std::size_t> parse_horizons(std::string_view text) {
	std::vector<std::size_t> out;
	while (!text.empty()) {
		const auto comma = text.find(',');
		const auto tok = trim(text.substr(0, comma));
		const auto h = parse_as<std::size_t>("horizons", tok);
		if (h == 0) {
			throw UsageError("horizons must be at least 1 step");
		}
		out.push_back(h);
		if (comma == std::string_view::npos) {
			break;
		}
		text.remove_prefix(comma + 1);
	}
	if (out.empty()) {
		throw UsageError("at least one horizon is required");
	}
	return out;
}

std::string format_horizons(const std::vector<std::size_t> &horizons) {
	std::string s;
	for (std::size_t i = 0; i < horizons.size(); ++i) {
		if (i) {
			s += ',';
		}
		s += std::to_string(horizons[i]);
	}
	return s;
}

void RunConfig::set(std::string_view key, std::string_view value) {
	key = trim(key);
	value = trim(value);
	if (key == "data") {
		data = std::string(value);
	} else if (key == "split") {
		split = parse_as<double>(key, value);
		if (!(split > 0.0 && split < 1.0)) {
			throw UsageError("split must lie in (0, 1)");
		}
	} else if (key == "order") {
		if (value == "auto") {
			order.reset();
		} else {
			order = parse_as<std::size_t>(key, value);
			if (*order == 0) {
				throw UsageError("order must be at least 1");
			}
		}
	} else if (key == "horizons") {
		horizons = parse_horizons(value);
	} else if (key == "daylight") {
		daylight = DaylightWindow::parse(value);
	} else if (key == "model") {
		model = parse_model_kind(value);
	} else if (key == "seed") {
		seed = parse_as<std::uint64_t>(key, value);
	} else if (key == "out") {
		out = std::string(value);
	} else if (key == "mape_threshold") {
		mape_threshold = parse_as<double>(key, value);
	} else if (key == "recursive") {
		recursive = parse_bool(key, value);
	} else if (key == "ensemble") {
		ensemble = parse_bool(key, value);
	} else if (key == "max_lag") {
		max_lag = parse_as<std::size_t>(key, value);
	} else if (key == "pacf_threshold") {
		pacf_threshold = parse_as<double>(key, value);
	} else if (key == "cnn_epochs") {
		cnn_epochs = parse_as<std::size_t>(key, value);
	} else if (key == "lstm_epochs") {
		lstm_epochs = parse_as<std::size_t>(key, value);
	} else if (key == "lstm_batch") {
		lstm_batch = parse_as<std::size_t>(key, value);
		if (lstm_batch == 0) {
			throw UsageError("lstm_batch must be at least 1");
		}
	} else {
		throw UsageError("unknown config key '" + std::string(key) + "'");
	}
}

void RunConfig::load_file(const std::filesystem::path &path) {
	std::ifstream in(path);
	if (!in) {
		throw UsageError("cannot open config file " + path.string());
	}
	std::string line;
	std::size_t line_no = 0;
	while (std::getline(in, line)) {
		++line_no;
		const auto row = trim(line);
		if (row.empty() || row.front() == '#') {
			continue;
		}
		const auto eq = row.find('=');
		if (eq == std::string_view::npos) {
			throw UsageError(path.string() + ":" + std::to_string(line_no) + ": expected key=value");
		}
		set(row.substr(0, eq), row.substr(eq + 1));
	}
}

std::vector<std::string> RunConfig::to_lines() const {
	return {
	    "data=" + data.string(),
	    "split=" + fmt(split),
	    "order=" + (order ? std::to_string(*order) : std::string("auto")),
	    "horizons=" + format_horizons(horizons),
	    "daylight=" + daylight.to_string(),
	    "model=" + to_string(model),
	    "seed=" + std::to_string(seed),
	    "out=" + out.string(),
	    "mape_threshold=" + fmt(mape_threshold),
	    "recursive=" + std::string(recursive ? "1" : "0"),
	    "ensemble=" + std::string(ensemble ? "1" : "0"),
	    "max_lag=" + std::to_string(max_lag),
	    "pacf_threshold=" + fmt(pacf_threshold),
	    "cnn_epochs=" + std::to_string(cnn_epochs),
	    "lstm_epochs=" + std::to_string(lstm_epochs),
	    "lstm_batch=" + std::to_string(lstm_batch),
	};
}

} // namespace solarcast
