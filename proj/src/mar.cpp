#include "solarcast/mar.hpp"

#include "solarcast/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace solarcast {

std::string to_string(Strategy s) {
	return s == Strategy::direct ? "direct" : "recursive";
}

Strategy parse_strategy(std::string_view text) {
	if (text == "direct") {
		return Strategy::direct;
	}
	if (text == "recursive") {
		return Strategy::recursive;
	}
	throw UsageError("unknown strategy '" + std::string(text) + "'");
}

TargetSlots target_slots(std::size_t order, std::size_t horizon, const DaylightWindow &window, int step_minutes) {
	TargetSlots t;
	const std::size_t first = window.first_slot(step_minutes);
	const std::size_t last = window.last_slot(step_minutes);
	// Prediction index n needs n - order >= first and target n + horizon - 1 <= last.
	const std::size_t first_target = first + order + horizon - 1;
	if (order == 0 || horizon == 0 || first_target > last) {
		return t;
	}
	t.first = first_target;
	t.last = last;
	t.empty = false;
	return t;
}

DesignMatrix build_design_matrix(const IrradianceSeries &series, std::size_t order, std::size_t horizon,
                                 const DaylightWindow &window, std::size_t min_rows_per_lag) {
	if (order == 0 || horizon == 0) {
		throw UsageError("order and horizon must be at least 1");
	}
	DesignMatrix dm;
	dm.order = order;
	dm.horizon = horizon;
	dm.lags = Matrix(0, 0);
	const auto slots = target_slots(order, horizon, window, series.step_minutes());
	std::vector<double> row(order);
	if (!slots.empty) {
		const std::size_t spd = series.samples_per_day();
		for (std::size_t d = 0; d < series.days(); ++d) {
			const auto day = series.day(d);
			for (std::size_t t = slots.first; t <= slots.last; ++t) {
				const std::size_t n = t + 1 - horizon;
				for (std::size_t k = 1; k <= order; ++k) {
					row[k - 1] = day[n - k];
				}
				dm.lags.append_row(row);
				dm.targets.push_back(day[t]);
				dm.target_index.push_back(d * spd + t);
			}
		}
	}
	if (dm.rows() < min_rows_per_lag * order || dm.rows() == 0) {
		throw DataError("design matrix has " + std::to_string(dm.rows()) + " rows; need at least " +
		                     std::to_string(std::max<std::size_t>(1, min_rows_per_lag * order)) + " for order " +
		                     std::to_string(order));
	}
	return dm;
}

std::vector<double> fit(const DesignMatrix &matrix) {
	auto w = solve_least_squares(matrix.lags, matrix.targets);
	for (double v : w) {
		if (!std::isfinite(v)) {
			throw NumericalError("least-squares weights are not finite");
		}
	}
	return w;
}

bool MarModel::serves(std::size_t horizon) const {
	return std::find(horizons.begin(), horizons.end(), horizon) != horizons.end();
}

std::span<const double> MarModel::weights_for(std::size_t horizon) const {
	if (!serves(horizon)) {
		throw UsageError("model has no fit for horizon " + std::to_string(horizon));
	}
	const std::size_t key = strategy == Strategy::recursive ? 1 : horizon;
	for (const auto &hw : fitted) {
		if (hw.horizon == key) {
			return hw.weights;
		}
	}
	throw UsageError("model has no fit for horizon " + std::to_string(horizon));
}

namespace {

IrradianceSeries to_model_domain(const IrradianceSeries &raw, const Scaler &scaler, const EnsembleProfile &profile,
                                 bool ensemble) {
	IrradianceSeries z = standardize(raw, scaler);
	return ensemble ? ensemble_deduct(z, profile) : z;
}

} // namespace

MarModel fit_all_horizons(const IrradianceSeries &train_raw, const MarConfig &config) {
	if (config.order == 0) {
		throw UsageError("order must be at least 1");
	}
	if (config.horizons.empty()) {
		throw UsageError("at least one horizon is required");
	}
	MarModel model;
	model.order = config.order;
	model.horizons = config.horizons;
	std::sort(model.horizons.begin(), model.horizons.end());
	model.horizons.erase(std::unique(model.horizons.begin(), model.horizons.end()), model.horizons.end());
	if (model.horizons.front() == 0) {
		throw UsageError("horizons must be at least 1 step");
	}
	model.daylight = config.daylight;
	model.ensemble_enabled = config.ensemble_enabled;
	model.strategy = config.strategy;
	model.step_minutes = train_raw.step_minutes();
	model.scaler = fit_scaler(train_raw);
	const IrradianceSeries z = standardize(train_raw, model.scaler);
	model.profile = ensemble_profile(z);
	const IrradianceSeries domain = model.ensemble_enabled ? ensemble_deduct(z, model.profile) : z;

	const std::vector<std::size_t> to_fit =
	    model.strategy == Strategy::recursive ? std::vector<std::size_t>{1} : model.horizons;
	for (std::size_t h : to_fit) {
		const DesignMatrix dm = build_design_matrix(domain, model.order, h, model.daylight);
		model.fitted.push_back(HorizonWeights{h, fit(dm)});
	}
	return model;
}

double predict_step(const MarModel &model, std::span<const double> lags, std::size_t horizon) {
	if (lags.size() != model.order) {
		throw UsageError("expected " + std::to_string(model.order) + " lags, got " + std::to_string(lags.size()));
	}
	const auto w = model.weights_for(horizon);
	if (model.strategy == Strategy::direct) {
		double acc = 0.0;
		for (std::size_t k = 0; k < w.size(); ++k) {
			acc += w[k] * lags[k];
		}
		return acc;
	}
	std::vector<double> window(lags.begin(), lags.end());
	double pred = 0.0;
	for (std::size_t s = 0; s < horizon; ++s) {
		pred = 0.0;
		for (std::size_t k = 0; k < w.size(); ++k) {
			pred += w[k] * window[k];
		}
		std::rotate(window.rbegin(), window.rbegin() + 1, window.rend());
		window[0] = pred;
	}
	return pred;
}

std::vector<ForecastRow> forecast(const MarModel &model, const IrradianceSeries &test_raw, std::size_t horizon) {
	if (test_raw.step_minutes() != model.step_minutes) {
		throw DataError("test series step " + std::to_string(test_raw.step_minutes()) + " min does not match model step " +
		                std::to_string(model.step_minutes) + " min");
	}
	if (model.profile.samples_per_day() != test_raw.samples_per_day()) {
		throw DataError("ensemble profile does not match the test sampling grid");
	}
	model.weights_for(horizon);
	const IrradianceSeries domain = to_model_domain(test_raw, model.scaler, model.profile, model.ensemble_enabled);
	const auto slots = target_slots(model.order, horizon, model.daylight, test_raw.step_minutes());
	std::vector<ForecastRow> rows;
	if (slots.empty) {
		return rows;
	}
	const std::size_t spd = test_raw.samples_per_day();
	std::vector<double> lags(model.order);
	for (std::size_t d = 0; d < test_raw.days(); ++d) {
		const auto day = domain.day(d);
		for (std::size_t t = slots.first; t <= slots.last; ++t) {
			const std::size_t n = t + 1 - horizon;
			for (std::size_t k = 1; k <= model.order; ++k) {
				lags[k - 1] = day[n - k];
			}
			double z = predict_step(model, lags, horizon);
			if (model.ensemble_enabled) {
				z += model.profile.means[t];
			}
			const double pred = std::max(0.0, model.scaler.destandardize(z));
			const std::size_t idx = d * spd + t;
			rows.push_back(ForecastRow{test_raw.timestamp(idx), test_raw[idx], pred, horizon});
		}
	}
	return rows;
}

namespace {

std::string fmt17(double v) {
	char buf[40];
	std::snprintf(buf, sizeof(buf), "%.17g", v);
	return buf;
}

double parse_number(const std::string &tok, const std::filesystem::path &path) {
	double v = 0.0;
	auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
	if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v)) {
		throw DataError(path.string() + ": bad number '" + tok + "'");
	}
	return v;
}

std::size_t parse_count(const std::string &tok, const std::filesystem::path &path) {
	std::size_t v = 0;
	auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
	if (ec != std::errc() || ptr != tok.data() + tok.size()) {
		throw DataError(path.string() + ": bad count '" + tok + "'");
	}
	return v;
}

} // namespace

void save_mar_model(const MarModel &model, const std::filesystem::path &path,
                    const std::vector<std::string> &comments) {
	std::ofstream out(path, std::ios::binary);
	if (!out) {
		throw DataError("cannot write " + path.string());
	}
	out << "mar-model v1\n";
	for (const auto &c : comments) {
		out << "# " << c << '\n';
	}
	out << "order " << model.order << '\n';
	out << "step_minutes " << model.step_minutes << '\n';
	out << "daylight " << model.daylight.to_string() << '\n';
	out << "ensemble " << (model.ensemble_enabled ? 1 : 0) << '\n';
	out << "strategy " << to_string(model.strategy) << '\n';
	out << "scaler " << fmt17(model.scaler.mu) << ' ' << fmt17(model.scaler.sigma) << '\n';
	out << "horizons " << model.horizons.size();
	for (auto h : model.horizons) {
		out << ' ' << h;
	}
	out << '\n';
	for (const auto &hw : model.fitted) {
		out << "weights " << hw.horizon;
		for (double w : hw.weights) {
			out << ' ' << fmt17(w);
		}
		out << '\n';
	}
	out << "profile " << model.profile.means.size();
	for (double v : model.profile.means) {
		out << ' ' << fmt17(v);
	}
	out << '\n';
	out << "support " << model.profile.support_counts.size();
	for (auto c : model.profile.support_counts) {
		out << ' ' << c;
	}
	out << "\nend\n";
	if (!out) {
		throw DataError("write failed for " + path.string());
	}
}

MarModel load_mar_model(const std::filesystem::path &path) {
	std::ifstream in(path);
	if (!in) {
		throw DataError("cannot open " + path.string());
	}
	std::string line;
	if (!std::getline(in, line) || line != "mar-model v1") {
		throw DataError(path.string() + ": not a mar-model v1 file");
	}
	MarModel m;
	bool ended = false;
	while (std::getline(in, line)) {
		if (line.empty() || line[0] == '#') {
			continue;
		}
		std::istringstream ss(line);
		std::string key;
		ss >> key;
		std::vector<std::string> toks;
		for (std::string t; ss >> t;) {
			toks.push_back(t);
		}
		auto need = [&](std::size_t n) {
			if (toks.size() < n) {
				throw DataError(path.string() + ": truncated '" + key + "' record");
			}
		};
		if (key == "order") {
			need(1);
			m.order = parse_count(toks[0], path);
		} else if (key == "step_minutes") {
			need(1);
			m.step_minutes = static_cast<int>(parse_count(toks[0], path));
		} else if (key == "daylight") {
			need(1);
			try {
				m.daylight = DaylightWindow::parse(toks[0]);
			} catch (const UsageError &e) {
				throw DataError(path.string() + ": " + e.what());
			}
		} else if (key == "ensemble") {
			need(1);
			m.ensemble_enabled = toks[0] == "1";
		} else if (key == "strategy") {
			need(1);
			try {
				m.strategy = parse_strategy(toks[0]);
			} catch (const UsageError &e) {
				throw DataError(path.string() + ": " + e.what());
			}
		} else if (key == "scaler") {
			need(2);
			m.scaler = Scaler{parse_number(toks[0], path), parse_number(toks[1], path)};
		} else if (key == "horizons") {
			need(1);
			const std::size_t n = parse_count(toks[0], path);
			need(n + 1);
			for (std::size_t i = 0; i < n; ++i) {
				m.horizons.push_back(parse_count(toks[i + 1], path));
			}
		} else if (key == "weights") {
			need(1);
			HorizonWeights hw;
			hw.horizon = parse_count(toks[0], path);
			for (std::size_t i = 1; i < toks.size(); ++i) {
				hw.weights.push_back(parse_number(toks[i], path));
			}
			m.fitted.push_back(std::move(hw));
		} else if (key == "profile") {
			need(1);
			const std::size_t n = parse_count(toks[0], path);
			need(n + 1);
			for (std::size_t i = 0; i < n; ++i) {
				m.profile.means.push_back(parse_number(toks[i + 1], path));
			}
		} else if (key == "support") {
			need(1);
			const std::size_t n = parse_count(toks[0], path);
			need(n + 1);
			for (std::size_t i = 0; i < n; ++i) {
				m.profile.support_counts.push_back(parse_count(toks[i + 1], path));
			}
		} else if (key == "end") {
			ended = true;
			break;
		} else {
			throw DataError(path.string() + ": unknown record '" + key + "'");
		}
	}
	if (!ended) {
		throw DataError(path.string() + ": missing 'end' record");
	}
	if (m.order == 0 || m.horizons.empty() || m.fitted.empty() || !(m.scaler.sigma > 0.0) ||
	    m.profile.means.empty() || m.profile.means.size() != m.profile.support_counts.size()) {
		throw DataError(path.string() + ": incomplete model");
	}
	for (const auto &hw : m.fitted) {
		if (hw.weights.size() != m.order) {
			throw DataError(path.string() + ": weight vector for horizon " + std::to_string(hw.horizon) +
			                " has wrong length");
		}
	}
	return m;
}

} // namespace solarcast
