#pragma once

// Independent reference computations used as test oracles. Nothing here calls
// into the library's numerical code paths.

#include "solarcast/dataset.hpp"
#include "solarcast/metrics.hpp"

#include <cmath>
#include <filesystem>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace oracle {

struct MeanVar {
	double mean = 0.0;
	double variance = 0.0; // population
};

// Welford's streaming update.
inline MeanVar welford(std::span<const double> xs) {
	double mean = 0.0;
	double m2 = 0.0;
	std::size_t n = 0;
	for (double x : xs) {
		++n;
		const double d = x - mean;
		mean += d / static_cast<double>(n);
		m2 += d * (x - mean);
	}
	return {mean, n ? m2 / static_cast<double>(n) : 0.0};
}

// The metric oracles accumulate in long double.
inline double naive_rmse(std::span<const solarcast::ForecastRow> rows) {
	long double s = 0.0L;
	for (const auto &r : rows) {
		const long double e = static_cast<long double>(r.predicted) - r.actual;
		s += e * e;
	}
	return static_cast<double>(std::sqrt(s / static_cast<long double>(rows.size())));
}

inline double naive_mae(std::span<const solarcast::ForecastRow> rows) {
	long double s = 0.0L;
	for (const auto &r : rows) {
		s += std::fabs(static_cast<long double>(r.predicted) - r.actual);
	}
	return static_cast<double>(s / static_cast<long double>(rows.size()));
}

inline double naive_mape(std::span<const solarcast::ForecastRow> rows, double min_actual) {
	long double s = 0.0L;
	std::size_t n = 0;
	for (const auto &r : rows) {
		if (r.actual >= min_actual) {
			s += std::fabs(static_cast<long double>(r.actual) - r.predicted) / r.actual;
			++n;
		}
	}
	return static_cast<double>(100.0L * s / static_cast<long double>(n));
}

// Zero-mean AR(p) process with Gaussian innovations after a burn-in.
inline std::vector<double> simulate_ar(const std::vector<double> &phi, std::size_t n, double noise_sd,
                                       std::uint64_t seed, std::size_t burn_in = 1000) {
	std::mt19937_64 rng(seed);
	std::normal_distribution<double> eps(0.0, noise_sd);
	std::vector<double> x(n + burn_in, 0.0);
	for (std::size_t t = 0; t < x.size(); ++t) {
		double v = eps(rng);
		for (std::size_t k = 0; k < phi.size() && k < t; ++k) {
			v += phi[k] * x[t - 1 - k];
		}
		x[t] = v;
	}
	return {x.begin() + static_cast<long>(burn_in), x.end()};
}

// Sum of two unit sinusoids with angular frequencies a and b. Such a signal
// obeys x[n] = c1 x[n-1] + c2 x[n-2] + c3 x[n-3] + c4 x[n-4] exactly, with the
// coefficients returned by sinusoid_recurrence.
inline double two_tone(double a, double b, double phase_a, double phase_b, double n) {
	return std::sin(a * n + phase_a) + std::sin(b * n + phase_b);
}

// (z^2 - 2cos(a) z + 1)(z^2 - 2cos(b) z + 1) = z^4 - c1 z^3 - c2 z^2 - c3 z - c4
inline std::vector<double> sinusoid_recurrence(double a, double b) {
	const double ca = std::cos(a);
	const double cb = std::cos(b);
	return {2.0 * (ca + cb), -(2.0 + 4.0 * ca * cb), 2.0 * (ca + cb), -1.0};
}

inline std::vector<solarcast::ForecastRow> random_rows(std::size_t n, std::uint64_t seed) {
	std::mt19937_64 rng(seed);
	std::uniform_real_distribution<double> actual(0.0, 1000.0);
	std::normal_distribution<double> err(0.0, 60.0);
	std::vector<solarcast::ForecastRow> rows;
	for (std::size_t i = 0; i < n; ++i) {
		const double a = actual(rng);
		rows.push_back({solarcast::synthetic_epoch() + std::chrono::minutes(10 * static_cast<long>(i)), a,
		                std::max(0.0, a + err(rng)), 1});
	}
	return rows;
}

// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string &name) {
	const auto dir = std::filesystem::temp_directory_path() / ("solarcast_test_" + name);
	std::filesystem::remove_all(dir);
	std::filesystem::create_directories(dir);
	return dir;
}

} // namespace oracle
