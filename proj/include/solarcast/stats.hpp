#pragma once

#include "solarcast/dataset.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace solarcast {

/// Per-time-of-day mean of standardized training values.
struct EnsembleProfile {
	std::vector<double> means;               // one entry per slot of the day
	std::vector<std::size_t> support_counts; // training days contributing to each slot

	std::size_t samples_per_day() const { return means.size(); }
};

EnsembleProfile ensemble_profile(const IrradianceSeries &train);

/// Subtracts the profile mean of each sample's time-of-day slot.
IrradianceSeries ensemble_deduct(const IrradianceSeries &series, const EnsembleProfile &profile);
/// Adds the profile back; inverse of ensemble_deduct.
IrradianceSeries ensemble_add(const IrradianceSeries &series, const EnsembleProfile &profile);

/// Correlation per lag 0..L, normalized so that lag 0 is 1.
struct CorrelationSequence {
	std::vector<double> values;

	std::size_t max_lag() const { return values.empty() ? 0 : values.size() - 1; }
	double operator[](std::size_t lag) const { return values[lag]; }
};

/**
 * Normalized autocorrelation R(tau) / R(0), with R(tau) the average of
 * x[n - tau] * x[n] over all pairs available at that lag.
 *
 * The input is expected to be (approximately) zero-mean; no demeaning is applied.
 * Pairs never span two segments, so daylight windows of different days can be
 * pooled without inventing cross-night products.
 */
CorrelationSequence autocorrelation(const std::vector<std::span<const double>> &segments, std::size_t max_lag);
CorrelationSequence autocorrelation(std::span<const double> series, std::size_t max_lag);

/// Partial autocorrelation via the Durbin-Levinson recursion. Throws NumericalError on a singular step.
CorrelationSequence partial_autocorrelation(const CorrelationSequence &acf);
CorrelationSequence partial_autocorrelation(std::span<const double> series, std::size_t max_lag);

/// Largest lag k such that |pacf[j]| >= threshold for all 1 <= j <= k; at least 1.
std::size_t select_order(const CorrelationSequence &pacf, double threshold = 0.1);

/// Daylight portion of each day of the series.
std::vector<std::span<const double>> daylight_segments(const IrradianceSeries &series, const DaylightWindow &window);

enum class CorrelationDomain { ensemble, standardized };

struct Diagnostics {
	CorrelationSequence acf;
	CorrelationSequence pacf;
	std::size_t recommended_order = 1;
};

/**
 * ACF/PACF of the daylight portion of a raw training series.
 *
 * The series is standardized with its own scaler. In the ensemble domain the
 * training profile is then deducted; in the standardized domain the pooled
 * daylight mean is removed instead, since z-values are not zero-mean within
 * the window.
 */
Diagnostics diagnose(const IrradianceSeries &train_raw, const DaylightWindow &window, std::size_t max_lag,
                     CorrelationDomain domain = CorrelationDomain::ensemble, double threshold = 0.1);

} // namespace solarcast
