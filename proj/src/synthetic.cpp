#include "solarcast/dataset.hpp"

#include "solarcast/errors.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace solarcast {

namespace {

double logistic(double x) {
	return 1.0 / (1.0 + std::exp(-x));
}

// Latent attenuation process spread and per-regime offsets in logit space.
constexpr double kLatentGain = 1.5;
constexpr double kCloudyOffset = -0.5;
constexpr double kMixedDayMean = 1.0;
constexpr double kMixedDaySpread = 1.5;

} // namespace

Timestamp synthetic_epoch() {
	using namespace std::chrono;
	return sys_days{year{2023} / January / 1};
}

IrradianceSeries generate_synthetic(std::size_t days, Regime regime, std::uint64_t seed,
                                    const SyntheticParams &params) {
	if (days == 0) {
		throw UsageError("synthetic series needs at least one day");
	}
	const int step = params.step_minutes;
	if (step <= 0 || kMinutesPerDay % step != 0) {
		throw UsageError("synthetic step must divide one day");
	}
	const std::size_t spd = static_cast<std::size_t>(kMinutesPerDay / step);
	const double rise = params.daylight.first_minute;
	const double set = params.daylight.last_minute;

	std::vector<double> bell(spd, 0.0);
	for (std::size_t s = 0; s < spd; ++s) {
		const double t = static_cast<double>(s) * step;
		if (t >= rise && t <= set) {
			const double phase = std::sin(std::numbers::pi * (t - rise) / (set - rise));
			bell[s] = params.peak_wm2 * std::pow(std::max(phase, 0.0), params.shape_exponent);
		}
	}

	std::mt19937_64 rng(seed);
	std::normal_distribution<double> normal(0.0, 1.0);
	const double phi = params.attenuation_ar;
	const double innovation = std::sqrt(1.0 - phi * phi);
	double latent = normal(rng);

	std::vector<double> values(days * spd);
	for (std::size_t d = 0; d < days; ++d) {
		const double day_offset = regime == Regime::mixed ? kMixedDayMean + kMixedDaySpread * normal(rng) : kCloudyOffset;
		for (std::size_t s = 0; s < spd; ++s) {
			latent = phi * latent + innovation * normal(rng);
			double attenuation = 1.0;
			if (regime != Regime::clear) {
				attenuation = params.attenuation_min +
				              (params.attenuation_max - params.attenuation_min) * logistic(kLatentGain * latent + day_offset);
			}
			values[d * spd + s] = bell[s] * attenuation;
		}
	}
	return IrradianceSeries(synthetic_epoch(), step, std::move(values));
}

} // namespace solarcast
