#pragma once

#include "solarcast/dataset.hpp"
#include "solarcast/least_squares.hpp"
#include "solarcast/metrics.hpp"
#include "solarcast/stats.hpp"

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace solarcast {

/// Multi-step strategy: one weight vector per horizon, or one-step weights iterated.
enum class Strategy { direct, recursive };

std::string to_string(Strategy s);
Strategy parse_strategy(std::string_view text);

/**
 * Lagged regression rows drawn from the daylight window of each day.
 *
 * Row for prediction index n holds [x(n-1), ..., x(n-m)], most recent first;
 * its target is x(n+h-1). Lags and target stay inside one day's window.
 */
struct DesignMatrix {
	Matrix lags;
	std::vector<double> targets;
	std::vector<std::size_t> target_index; // sample index of each target in the source series
	std::size_t order = 0;
	std::size_t horizon = 1;

	std::size_t rows() const { return lags.rows(); }
};

/// Range of in-window slots that can be targets for (order, horizon): [first, last], possibly empty.
struct TargetSlots {
	std::size_t first = 0;
	std::size_t last = 0;
	bool empty = true;
};
TargetSlots target_slots(std::size_t order, std::size_t horizon, const DaylightWindow &window, int step_minutes);

/// Throws DataError when fewer than min_rows_per_lag * order rows result.
DesignMatrix build_design_matrix(const IrradianceSeries &series, std::size_t order, std::size_t horizon,
                                 const DaylightWindow &window, std::size_t min_rows_per_lag = 10);

/// Least-squares weights for the design matrix (no intercept).
std::vector<double> fit(const DesignMatrix &matrix);

struct MarConfig {
	std::size_t order = 4;
	std::vector<std::size_t> horizons{1, 3, 6};
	DaylightWindow daylight{};
	bool ensemble_enabled = true;
	Strategy strategy = Strategy::direct;
};

struct HorizonWeights {
	std::size_t horizon = 1;
	std::vector<double> weights;
};

/// Fitted model. With ensemble deduction disabled it is a plain AR model on standardized data.
struct MarModel {
	std::size_t order = 0;
	std::vector<std::size_t> horizons;
	std::vector<HorizonWeights> fitted; // direct: one per horizon; recursive: horizon 1 only
	Scaler scaler;
	EnsembleProfile profile;
	DaylightWindow daylight;
	bool ensemble_enabled = true;
	Strategy strategy = Strategy::direct;
	int step_minutes = 10;

	bool serves(std::size_t horizon) const;
	/// Throws UsageError if the horizon was not fitted.
	std::span<const double> weights_for(std::size_t horizon) const;
};

MarModel fit_all_horizons(const IrradianceSeries &train_raw, const MarConfig &config);

/// Model-domain prediction `horizon` steps past the most recent lag. Lags are most recent first.
double predict_step(const MarModel &model, std::span<const double> lags, std::size_t horizon);

/// Forecasts every in-window target slot of the test series that has full lag support.
std::vector<ForecastRow> forecast(const MarModel &model, const IrradianceSeries &test_raw, std::size_t horizon);

void save_mar_model(const MarModel &model, const std::filesystem::path &path,
                    const std::vector<std::string> &comments = {});
MarModel load_mar_model(const std::filesystem::path &path);

} // namespace solarcast
