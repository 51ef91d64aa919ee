#pragma once

#include "solarcast/timestamp.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace solarcast {

/**
 * Time-of-day interval over which forecasts and metrics are defined.
 *
 * Bounds are minutes after midnight and inclusive. On a sampling grid the
 * window covers every slot whose start time falls inside [first, last].
 */
struct DaylightWindow {
	int first_minute = 6 * 60;
	int last_minute = 18 * 60 + 30;

	/// Parses `HH:MM-HH:MM`. Throws UsageError.
	static DaylightWindow parse(std::string_view text);
	std::string to_string() const;

	std::size_t first_slot(int step_minutes) const;
	std::size_t last_slot(int step_minutes) const;
	std::size_t slot_count(int step_minutes) const { return last_slot(step_minutes) - first_slot(step_minutes) + 1; }
	bool contains_slot(std::size_t slot, int step_minutes) const {
		return slot >= first_slot(step_minutes) && slot <= last_slot(step_minutes);
	}
};

/**
 * Irradiance samples on a fixed grid that starts at midnight and covers whole days.
 *
 * Timestamps are implicit: sample i sits at start + i * step. The same type
 * carries raw (W/m^2), standardized and ensemble-deducted values; only the
 * ingestion paths enforce non-negativity of raw data.
 */
class IrradianceSeries {
public:
	IrradianceSeries() = default;
	/// Throws DataError when the grid invariants do not hold.
	IrradianceSeries(Timestamp start, int step_minutes, std::vector<double> values);

	Timestamp start() const { return start_; }
	int step_minutes() const { return step_minutes_; }
	std::size_t size() const { return values_.size(); }
	bool empty() const { return values_.empty(); }
	std::span<const double> values() const { return values_; }
	double operator[](std::size_t i) const { return values_[i]; }

	Timestamp timestamp(std::size_t i) const;
	std::size_t samples_per_day() const { return static_cast<std::size_t>(kMinutesPerDay / step_minutes_); }
	std::size_t days() const { return values_.empty() ? 0 : values_.size() / samples_per_day(); }
	std::size_t slot_of(std::size_t i) const { return i % samples_per_day(); }
	std::span<const double> day(std::size_t d) const;

	IrradianceSeries slice_days(std::size_t first_day, std::size_t count) const;
	/// Same grid, new values. Sizes must match.
	IrradianceSeries with_values(std::vector<double> values) const;

	bool same_grid_as(const IrradianceSeries &other) const {
		return step_minutes_ == other.step_minutes_;
	}

private:
	Timestamp start_{};
	int step_minutes_ = 10;
	std::vector<double> values_;
};

/// Throws DataError if any value is negative.
void require_non_negative(const IrradianceSeries &series);

/// Reads the canonical `timestamp,irradiance_wm2` CSV. Lines starting with '#' are skipped.
IrradianceSeries load_csv(const std::filesystem::path &path);

/// Writes the canonical CSV. Each comment line is emitted as `# <line>` before the header.
void save_csv(const IrradianceSeries &series, const std::filesystem::path &path,
              const std::vector<std::string> &comments = {});

struct SplitIndex {
	std::size_t train_end = 0; // first test day
	double fraction = 0.70;
};

SplitIndex split_index(std::size_t total_days, double fraction);

/// Chronological train/test split snapped down to a day boundary.
std::pair<IrradianceSeries, IrradianceSeries> split(const IrradianceSeries &series, double fraction = 0.70);

struct Scaler {
	double mu = 0.0;
	double sigma = 1.0;

	double standardize(double x) const { return (x - mu) / sigma; }
	double destandardize(double z) const { return z * sigma + mu; }
};

/// Mean and population standard deviation of the training values.
Scaler fit_scaler(const IrradianceSeries &train);
IrradianceSeries standardize(const IrradianceSeries &series, const Scaler &scaler);
IrradianceSeries destandardize(const IrradianceSeries &series, const Scaler &scaler);

/// Lag-1 differences with the first element taken against zero.
struct DifferencedSeries {
	double first_value = 0.0;
	std::vector<double> deltas; // deltas[0] == first_value
};

DifferencedSeries difference_transform(std::span<const double> values);
/// Cumulative sum; exact inverse of difference_transform.
std::vector<double> reconstruct(const DifferencedSeries &diff);
/// y_i = pred_i + anchors_i, where anchors_i is the last observed value before prediction i.
std::vector<double> inverse_difference(std::span<const double> pred_deltas, std::span<const double> anchors);

enum class Regime { clear, cloudy, mixed };

Regime parse_regime(std::string_view text);
std::string to_string(Regime regime);

/// Parameters of the synthetic day generator.
struct SyntheticParams {
	double peak_wm2 = 1000.0;
	double shape_exponent = 1.2;
	DaylightWindow daylight{};
	double attenuation_ar = 0.9;
	double attenuation_min = 0.2;
	double attenuation_max = 1.0;
	int step_minutes = 10;
};

/// Seeded clear-sky bells with optional correlated cloud attenuation. Pure in (days, regime, seed).
IrradianceSeries generate_synthetic(std::size_t days, Regime regime, std::uint64_t seed,
                                    const SyntheticParams &params = {});

/// Start instant of every synthetic series.
Timestamp synthetic_epoch();

} // namespace solarcast
