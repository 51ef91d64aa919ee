#include "solarcast/stats.hpp"

#include "solarcast/errors.hpp"

#include <cmath>
#include <string>

namespace solarcast {

namespace {

void check_alignment(const IrradianceSeries &series, const EnsembleProfile &profile) {
	if (profile.samples_per_day() != series.samples_per_day()) {
		throw DataError("ensemble profile has " + std::to_string(profile.samples_per_day()) +
		                " slots but series has " + std::to_string(series.samples_per_day()) + " samples/day");
	}
}

} // namespace

EnsembleProfile ensemble_profile(const IrradianceSeries &train) {
	if (train.days() == 0) {
		throw DataError("ensemble profile needs at least one training day");
	}
	const std::size_t spd = train.samples_per_day();
	EnsembleProfile p;
	p.means.assign(spd, 0.0);
	p.support_counts.assign(spd, 0);
	for (std::size_t d = 0; d < train.days(); ++d) {
		const auto day = train.day(d);
		for (std::size_t s = 0; s < spd; ++s) {
			p.means[s] += day[s];
			++p.support_counts[s];
		}
	}
	for (std::size_t s = 0; s < spd; ++s) {
		p.means[s] /= static_cast<double>(p.support_counts[s]);
	}
	return p;
}

IrradianceSeries ensemble_deduct(const IrradianceSeries &series, const EnsembleProfile &profile) {
	check_alignment(series, profile);
	std::vector<double> out(series.size());
	for (std::size_t i = 0; i < out.size(); ++i) {
		out[i] = series[i] - profile.means[series.slot_of(i)];
	}
	return series.with_values(std::move(out));
}

IrradianceSeries ensemble_add(const IrradianceSeries &series, const EnsembleProfile &profile) {
	check_alignment(series, profile);
	std::vector<double> out(series.size());
	for (std::size_t i = 0; i < out.size(); ++i) {
		out[i] = series[i] + profile.means[series.slot_of(i)];
	}
	return series.with_values(std::move(out));
}

CorrelationSequence autocorrelation(const std::vector<std::span<const double>> &segments, std::size_t max_lag) {
	std::vector<double> sums(max_lag + 1, 0.0);
	std::vector<std::size_t> pairs(max_lag + 1, 0);
	for (const auto &seg : segments) {
		const std::size_t n = seg.size();
		for (std::size_t lag = 0; lag <= max_lag && lag < n; ++lag) {
			double acc = 0.0;
			for (std::size_t t = lag; t < n; ++t) {
				acc += seg[t - lag] * seg[t];
			}
			sums[lag] += acc;
			pairs[lag] += n - lag;
		}
	}
	for (std::size_t lag = 0; lag <= max_lag; ++lag) {
		if (pairs[lag] == 0) {
			throw UsageError("max lag " + std::to_string(max_lag) + " is not shorter than the series");
		}
	}
	const double r0 = sums[0] / static_cast<double>(pairs[0]);
	if (!(r0 > 0.0)) {
		throw NumericalError("autocorrelation undefined for an all-zero series");
	}
	CorrelationSequence acf;
	acf.values.resize(max_lag + 1);
	acf.values[0] = 1.0;
	for (std::size_t lag = 1; lag <= max_lag; ++lag) {
		acf.values[lag] = (sums[lag] / static_cast<double>(pairs[lag])) / r0;
	}
	return acf;
}

CorrelationSequence autocorrelation(std::span<const double> series, std::size_t max_lag) {
	if (max_lag >= series.size()) {
		throw UsageError("max lag " + std::to_string(max_lag) + " must be below series length " +
		                 std::to_string(series.size()));
	}
	return autocorrelation(std::vector<std::span<const double>>{series}, max_lag);
}

CorrelationSequence partial_autocorrelation(const CorrelationSequence &acf) {
	const std::size_t L = acf.max_lag();
	CorrelationSequence pacf;
	pacf.values.assign(L + 1, 0.0);
	pacf.values[0] = 1.0;
	if (L == 0) {
		return pacf;
	}
	constexpr double kSingular = 1e-12;
	const auto &r = acf.values;
	std::vector<double> phi(L + 1, 0.0);
	std::vector<double> prev(L + 1, 0.0);
	phi[1] = r[1];
	pacf.values[1] = r[1];
	double v = 1.0 - r[1] * r[1];
	for (std::size_t k = 2; k <= L; ++k) {
		if (v <= kSingular) {
			throw NumericalError("Durbin-Levinson recursion singular at lag " + std::to_string(k) +
			                     " (prediction error variance " + std::to_string(v) + ")");
		}
		double num = r[k];
		for (std::size_t j = 1; j < k; ++j) {
			num -= phi[j] * r[k - j];
		}
		const double kk = num / v;
		prev = phi;
		for (std::size_t j = 1; j < k; ++j) {
			phi[j] = prev[j] - kk * prev[k - j];
		}
		phi[k] = kk;
		pacf.values[k] = kk;
		v *= (1.0 - kk * kk);
	}
	return pacf;
}

CorrelationSequence partial_autocorrelation(std::span<const double> series, std::size_t max_lag) {
	return partial_autocorrelation(autocorrelation(series, max_lag));
}

std::size_t select_order(const CorrelationSequence &pacf, double threshold) {
	std::size_t order = 0;
	for (std::size_t lag = 1; lag <= pacf.max_lag(); ++lag) {
		if (std::abs(pacf[lag]) < threshold) {
			break;
		}
		order = lag;
	}
	return order == 0 ? 1 : order;
}

std::vector<std::span<const double>> daylight_segments(const IrradianceSeries &series, const DaylightWindow &window) {
	const int step = series.step_minutes();
	const std::size_t first = window.first_slot(step);
	const std::size_t count = window.slot_count(step);
	std::vector<std::span<const double>> out;
	out.reserve(series.days());
	for (std::size_t d = 0; d < series.days(); ++d) {
		out.push_back(series.day(d).subspan(first, count));
	}
	return out;
}

Diagnostics diagnose(const IrradianceSeries &train_raw, const DaylightWindow &window, std::size_t max_lag,
                     CorrelationDomain domain, double threshold) {
	const Scaler scaler = fit_scaler(train_raw);
	IrradianceSeries z = standardize(train_raw, scaler);
	if (domain == CorrelationDomain::ensemble) {
		z = ensemble_deduct(z, ensemble_profile(z));
	} else {
		const auto segs = daylight_segments(z, window);
		double sum = 0.0;
		std::size_t count = 0;
		for (const auto &seg : segs) {
			for (double v : seg) {
				sum += v;
				++count;
			}
		}
		const double mean = count ? sum / static_cast<double>(count) : 0.0;
		std::vector<double> centered(z.values().begin(), z.values().end());
		for (double &v : centered) {
			v -= mean;
		}
		z = z.with_values(std::move(centered));
	}
	Diagnostics out;
	out.acf = autocorrelation(daylight_segments(z, window), max_lag);
	out.pacf = partial_autocorrelation(out.acf);
	out.recommended_order = select_order(out.pacf, threshold);
	return out;
}

} // namespace solarcast
