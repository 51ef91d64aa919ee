#pragma once

#include "solarcast/timestamp.hpp"

#include <cstddef>
#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace solarcast {

struct ForecastRow {
	Timestamp timestamp{};
	double actual = 0.0;    // W/m^2
	double predicted = 0.0; // W/m^2
	std::size_t horizon = 1;
};

/// Forecast rows produced by one model.
struct ForecastReport {
	std::string model;
	std::vector<ForecastRow> rows;
};

inline constexpr double kDefaultMapeThreshold = 20.0;

double rmse(std::span<const ForecastRow> rows);
double mae(std::span<const ForecastRow> rows);
/// Percent error over rows whose actual value is at least `min_actual`.
double mape(std::span<const ForecastRow> rows, double min_actual = kDefaultMapeThreshold);

struct SummaryCell {
	std::string model;
	std::size_t horizon = 1;
	double rmse = 0.0;
	double mae = 0.0;
	double mape = 0.0;
	std::size_t rows = 0;
};

/// One cell per (model, horizon), models in report order and horizons ascending.
std::vector<SummaryCell> summarize(std::span<const ForecastReport> reports, double min_actual = kDefaultMapeThreshold);

void write_summary_csv(std::span<const SummaryCell> cells, std::ostream &out);
/**
 * Aligned text table: metric blocks (RMSE, MAE, MAPE), one row per horizon,
 * one column per model. Horizon labels use the sampling step.
 */
void write_summary_table(std::span<const SummaryCell> cells, int step_minutes, std::ostream &out);

/// `model,horizon,timestamp,actual,predicted`
void write_rows_csv(std::span<const ForecastReport> reports, std::ostream &out);
std::vector<ForecastReport> read_rows_csv(const std::filesystem::path &path);

/// "10 min", "30 min", "1 h", ...
std::string horizon_label(std::size_t steps, int step_minutes);

} // namespace solarcast
