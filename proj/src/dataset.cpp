#include "solarcast/dataset.hpp"

#include "solarcast/errors.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace solarcast {

namespace {

int parse_clock(std::string_view text) {
	int hh = 0;
	int mm = 0;
	const auto colon = text.find(':');
	if (colon == std::string_view::npos) {
		throw UsageError("expected HH:MM, got '" + std::string(text) + "'");
	}
	auto r1 = std::from_chars(text.data(), text.data() + colon, hh);
	auto r2 = std::from_chars(text.data() + colon + 1, text.data() + text.size(), mm);
	if (r1.ec != std::errc() || r2.ec != std::errc() || r1.ptr != text.data() + colon ||
	    r2.ptr != text.data() + text.size() || hh < 0 || hh > 24 || mm < 0 || mm > 59) {
		throw UsageError("expected HH:MM, got '" + std::string(text) + "'");
	}
	return hh * 60 + mm;
}

std::string_view trim(std::string_view s) {
	while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
		s.remove_prefix(1);
	}
	while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
		s.remove_suffix(1);
	}
	return s;
}

} // namespace

DaylightWindow DaylightWindow::parse(std::string_view text) {
	const auto dash = text.find('-');
	if (dash == std::string_view::npos) {
		throw UsageError("daylight window must look like HH:MM-HH:MM");
	}
	DaylightWindow w;
	w.first_minute = parse_clock(trim(text.substr(0, dash)));
	w.last_minute = parse_clock(trim(text.substr(dash + 1)));
	if (w.last_minute < w.first_minute || w.last_minute >= kMinutesPerDay) {
		throw UsageError("daylight window end must follow its start within one day");
	}
	return w;
}

std::string DaylightWindow::to_string() const {
	char buf[48];
	std::snprintf(buf, sizeof(buf), "%02d:%02d-%02d:%02d", first_minute / 60, first_minute % 60, last_minute / 60,
	              last_minute % 60);
	return buf;
}

std::size_t DaylightWindow::first_slot(int step_minutes) const {
	return static_cast<std::size_t>((first_minute + step_minutes - 1) / step_minutes);
}

std::size_t DaylightWindow::last_slot(int step_minutes) const {
	return static_cast<std::size_t>(last_minute / step_minutes);
}

IrradianceSeries::IrradianceSeries(Timestamp start, int step_minutes, std::vector<double> values)
    : start_(start), step_minutes_(step_minutes), values_(std::move(values)) {
	if (step_minutes_ <= 0 || kMinutesPerDay % step_minutes_ != 0) {
		throw DataError("sampling step must divide one day, got " + std::to_string(step_minutes_) + " min");
	}
	if (minute_of_day(start_) != 0 || (start_ - std::chrono::floor<std::chrono::minutes>(start_)).count() != 0) {
		throw DataError("series must start at midnight, starts at " + format_timestamp(start_));
	}
	if (values_.size() % samples_per_day() != 0) {
		throw DataError("series length " + std::to_string(values_.size()) + " is not a whole number of days (" +
		                std::to_string(samples_per_day()) + " samples/day)");
	}
	for (std::size_t i = 0; i < values_.size(); ++i) {
		if (!std::isfinite(values_[i])) {
			throw DataError("non-finite value at " + format_timestamp(timestamp(i)));
		}
	}
}

Timestamp IrradianceSeries::timestamp(std::size_t i) const {
	return start_ + std::chrono::minutes(static_cast<long>(i) * step_minutes_);
}

std::span<const double> IrradianceSeries::day(std::size_t d) const {
	return std::span<const double>(values_).subspan(d * samples_per_day(), samples_per_day());
}

IrradianceSeries IrradianceSeries::slice_days(std::size_t first_day, std::size_t count) const {
	if (first_day + count > days()) {
		throw DataError("day slice out of range");
	}
	const auto spd = samples_per_day();
	std::vector<double> out(values_.begin() + static_cast<std::ptrdiff_t>(first_day * spd),
	                        values_.begin() + static_cast<std::ptrdiff_t>((first_day + count) * spd));
	return IrradianceSeries(timestamp(first_day * spd), step_minutes_, std::move(out));
}

IrradianceSeries IrradianceSeries::with_values(std::vector<double> values) const {
	if (values.size() != values_.size()) {
		throw DataError("replacement values do not match series length");
	}
	return IrradianceSeries(start_, step_minutes_, std::move(values));
}

void require_non_negative(const IrradianceSeries &series) {
	for (std::size_t i = 0; i < series.size(); ++i) {
		if (series[i] < 0.0) {
			throw DataError("negative irradiance " + std::to_string(series[i]) + " at " +
			                format_timestamp(series.timestamp(i)));
		}
	}
}

IrradianceSeries load_csv(const std::filesystem::path &path) {
	std::ifstream in(path);
	if (!in) {
		throw DataError("cannot open " + path.string());
	}
	std::string line;
	std::size_t line_no = 0;
	bool have_header = false;
	std::vector<Timestamp> stamps;
	std::vector<double> values;
	while (std::getline(in, line)) {
		++line_no;
		const std::string_view row = trim(line);
		if (row.empty() || row.front() == '#') {
			continue;
		}
		if (!have_header) {
			if (row != "timestamp,irradiance_wm2") {
				throw DataError(path.string() + ":" + std::to_string(line_no) +
				                ": expected header 'timestamp,irradiance_wm2'");
			}
			have_header = true;
			continue;
		}
		const auto comma = row.find(',');
		if (comma == std::string_view::npos || row.find(',', comma + 1) != std::string_view::npos) {
			throw DataError(path.string() + ":" + std::to_string(line_no) + ": expected two columns");
		}
		Timestamp ts;
		try {
			ts = parse_timestamp(trim(row.substr(0, comma)));
		} catch (const DataError &e) {
			throw DataError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
		}
		const std::string_view num = trim(row.substr(comma + 1));
		double v = 0.0;
		auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), v);
		if (ec != std::errc() || ptr != num.data() + num.size() || !std::isfinite(v)) {
			throw DataError(path.string() + ":" + std::to_string(line_no) + ": malformed irradiance '" +
			                std::string(num) + "'");
		}
		if (v < 0.0) {
			throw DataError(path.string() + ":" + std::to_string(line_no) + ": negative irradiance " +
			                std::string(num));
		}
		if (!stamps.empty()) {
			if (ts == stamps.back()) {
				throw DataError(path.string() + ":" + std::to_string(line_no) + ": duplicate timestamp " +
				                format_timestamp(ts));
			}
			if (ts < stamps.back()) {
				throw DataError(path.string() + ":" + std::to_string(line_no) + ": timestamps not increasing");
			}
			if (stamps.size() >= 2) {
				const auto step = stamps[1] - stamps[0];
				const auto expected = stamps.back() + step;
				if (ts != expected) {
					throw DataError(path.string() + ":" + std::to_string(line_no) +
					                ": irregular spacing, missing sample at " + format_timestamp(expected));
				}
			}
		}
		stamps.push_back(ts);
		values.push_back(v);
	}
	if (!have_header) {
		throw DataError(path.string() + ": empty file");
	}
	if (stamps.size() < 2) {
		throw DataError(path.string() + ": need at least two samples");
	}
	const auto step = std::chrono::duration_cast<std::chrono::minutes>(stamps[1] - stamps[0]);
	if (std::chrono::seconds(step) != stamps[1] - stamps[0]) {
		throw DataError(path.string() + ": sampling step is not a whole number of minutes");
	}
	return IrradianceSeries(stamps.front(), static_cast<int>(step.count()), std::move(values));
}

void save_csv(const IrradianceSeries &series, const std::filesystem::path &path,
              const std::vector<std::string> &comments) {
	std::ofstream out(path, std::ios::binary);
	if (!out) {
		throw DataError("cannot write " + path.string());
	}
	for (const auto &c : comments) {
		out << "# " << c << '\n';
	}
	out << "timestamp,irradiance_wm2\n";
	char buf[64];
	for (std::size_t i = 0; i < series.size(); ++i) {
		std::snprintf(buf, sizeof(buf), "%.17g", series[i]);
		out << format_timestamp(series.timestamp(i)) << ',' << buf << '\n';
	}
	if (!out) {
		throw DataError("write failed for " + path.string());
	}
}

SplitIndex split_index(std::size_t total_days, double fraction) {
	if (!(fraction > 0.0 && fraction < 1.0)) {
		throw UsageError("split fraction must lie in (0, 1)");
	}
	// Small epsilon so that e.g. 10 * 0.7 lands on 7 regardless of rounding in the product.
	const auto train_days = static_cast<std::size_t>(std::floor(static_cast<double>(total_days) * fraction + 1e-9));
	if (train_days == 0 || train_days >= total_days) {
		throw DataError("series of " + std::to_string(total_days) + " days is too short for a " +
		                std::to_string(fraction) + " split");
	}
	return SplitIndex{train_days, fraction};
}

std::pair<IrradianceSeries, IrradianceSeries> split(const IrradianceSeries &series, double fraction) {
	const SplitIndex idx = split_index(series.days(), fraction);
	return {series.slice_days(0, idx.train_end), series.slice_days(idx.train_end, series.days() - idx.train_end)};
}

Scaler fit_scaler(const IrradianceSeries &train) {
	if (train.empty()) {
		throw DataError("cannot fit scaler on an empty series");
	}
	const auto values = train.values();
	double sum = 0.0;
	for (double v : values) {
		sum += v;
	}
	const double mu = sum / static_cast<double>(values.size());
	double ss = 0.0;
	for (double v : values) {
		ss += (v - mu) * (v - mu);
	}
	const double sigma = std::sqrt(ss / static_cast<double>(values.size()));
	if (!(sigma > 0.0)) {
		throw DataError("training series is constant; standard deviation is zero");
	}
	return Scaler{mu, sigma};
}

IrradianceSeries standardize(const IrradianceSeries &series, const Scaler &scaler) {
	std::vector<double> out(series.size());
	for (std::size_t i = 0; i < out.size(); ++i) {
		out[i] = scaler.standardize(series[i]);
	}
	return series.with_values(std::move(out));
}

IrradianceSeries destandardize(const IrradianceSeries &series, const Scaler &scaler) {
	std::vector<double> out(series.size());
	for (std::size_t i = 0; i < out.size(); ++i) {
		out[i] = scaler.destandardize(series[i]);
	}
	return series.with_values(std::move(out));
}

DifferencedSeries difference_transform(std::span<const double> values) {
	if (values.size() < 2) {
		throw DataError("difference transform needs at least two samples");
	}
	DifferencedSeries d;
	d.first_value = values[0];
	d.deltas.resize(values.size());
	d.deltas[0] = values[0] - 0.0;
	for (std::size_t i = 1; i < values.size(); ++i) {
		d.deltas[i] = values[i] - values[i - 1];
	}
	return d;
}

std::vector<double> reconstruct(const DifferencedSeries &diff) {
	std::vector<double> out(diff.deltas.size());
	double prev = 0.0;
	for (std::size_t i = 0; i < out.size(); ++i) {
		out[i] = diff.deltas[i] + prev;
		prev = out[i];
	}
	return out;
}

std::vector<double> inverse_difference(std::span<const double> pred_deltas, std::span<const double> anchors) {
	if (pred_deltas.size() != anchors.size()) {
		throw DataError("inverse difference needs one anchor per predicted delta (" +
		                std::to_string(pred_deltas.size()) + " deltas, " + std::to_string(anchors.size()) +
		                " anchors)");
	}
	std::vector<double> out(pred_deltas.size());
	for (std::size_t i = 0; i < out.size(); ++i) {
		out[i] = pred_deltas[i] + anchors[i];
	}
	return out;
}

Regime parse_regime(std::string_view text) {
	if (text == "clear") {
		return Regime::clear;
	}
	if (text == "cloudy") {
		return Regime::cloudy;
	}
	if (text == "mixed") {
		return Regime::mixed;
	}
	throw UsageError("unknown regime '" + std::string(text) + "' (expected clear, cloudy or mixed)");
}

std::string to_string(Regime regime) {
	switch (regime) {
	case Regime::clear:
		return "clear";
	case Regime::cloudy:
		return "cloudy";
	case Regime::mixed:
		return "mixed";
	}
	return "unknown";
}

} // namespace solarcast
