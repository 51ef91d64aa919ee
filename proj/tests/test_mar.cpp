#include "doctest.h"
#include "oracles.hpp"

#include "solarcast/errors.hpp"
#include "solarcast/least_squares.hpp"
#include "solarcast/mar.hpp"
#include "solarcast/metrics.hpp"

#include <fstream>

using namespace solarcast;

namespace {

double inf_norm(std::span<const double> v) {
	double m = 0.0;
	for (double x : v) {
		m = std::max(m, std::fabs(x));
	}
	return m;
}

void check_orthogonal(const Matrix &x, std::span<const double> y, std::span<const double> w) {
	const auto r = normal_residual(x, y, w);
	const auto xty = transpose_times(x, y);
	CHECK(inf_norm(r) < 1e-8 * inf_norm(xty));
}

Matrix matrix_of(const std::vector<std::vector<double>> &rows) {
	Matrix m;
	for (const auto &r : rows) {
		m.append_row(r);
	}
	return m;
}

// Window of 75 daylight slots: 06:00 through 18:20.
const DaylightWindow kWindow75{6 * 60, 18 * 60 + 20};

} // namespace

TEST_CASE("design matrix row counts") {
	const auto s = generate_synthetic(1, Regime::mixed, 3);
	CHECK(kWindow75.slot_count(10) == 75);
	CHECK(build_design_matrix(s, 4, 1, kWindow75).rows() == 71);
	CHECK(build_design_matrix(s, 4, 6, kWindow75).rows() == 66);
	const auto two = generate_synthetic(2, Regime::mixed, 3);
	CHECK(build_design_matrix(two, 4, 1, kWindow75).rows() == 142);
	CHECK_THROWS_AS(build_design_matrix(s, 8, 1, kWindow75), DataError); // 67 < 80
	CHECK_THROWS_AS(build_design_matrix(s, 0, 1, kWindow75), UsageError);
}

TEST_CASE("design matrix on a hand-built 8-sample day") {
	// 180-minute step gives eight samples per day; the window spans all of them.
	const IrradianceSeries day(synthetic_epoch(), 180, {10, 11, 12, 13, 14, 15, 16, 17});
	const DaylightWindow all{0, 23 * 60 + 59};
	const auto dm = build_design_matrix(day, 2, 1, all, 0);
	REQUIRE(dm.rows() == 6);
	for (std::size_t r = 0; r < 6; ++r) {
		CHECK(dm.lags(r, 0) == 11.0 + static_cast<double>(r));
		CHECK(dm.lags(r, 1) == 10.0 + static_cast<double>(r));
		CHECK(dm.targets[r] == 12.0 + static_cast<double>(r));
		CHECK(dm.target_index[r] == r + 2);
	}
	const auto h3 = build_design_matrix(day, 2, 3, all, 0);
	REQUIRE(h3.rows() == 4);
	CHECK(h3.lags(0, 0) == 11.0);
	CHECK(h3.lags(0, 1) == 10.0);
	CHECK(h3.targets[0] == 14.0);
}

TEST_CASE("rows never straddle midnight") {
	const auto s = generate_synthetic(3, Regime::mixed, 8);
	const DaylightWindow w;
	const auto dm = build_design_matrix(s, 4, 6, w);
	for (std::size_t r = 0; r < dm.rows(); ++r) {
		const std::size_t t = dm.target_index[r];
		const std::size_t slot = t % 144;
		CHECK(w.contains_slot(slot, 10));
		CHECK(w.contains_slot(slot - 6 - 3, 10)); // oldest lag x(n-4) with n = t - 5
		CHECK(dm.targets[r] == s[t]);
		CHECK(dm.lags(r, 0) == s[t - 6]);
	}
}

TEST_CASE("least squares on a 3x2 system matches hand-solved normal equations") {
	const Matrix x = matrix_of({{1, 2}, {3, 1}, {0, 4}});
	const std::vector<double> y{5, 6, 7};
	// X^T X = [[10, 5], [5, 21]], X^T y = [23, 44]; Cramer's rule.
	const double det = 10.0 * 21.0 - 5.0 * 5.0;
	const double w0 = (23.0 * 21.0 - 5.0 * 44.0) / det;
	const double w1 = (10.0 * 44.0 - 5.0 * 23.0) / det;
	const auto w = solve_least_squares(x, y);
	CHECK(std::fabs(w[0] - w0) < 1e-12);
	CHECK(std::fabs(w[1] - w1) < 1e-12);
	check_orthogonal(x, y, w);
}

TEST_CASE("least squares detects rank deficiency and shape errors") {
	const Matrix collinear = matrix_of({{1, 2}, {2, 4}, {3, 6}, {4, 8}});
	const std::vector<double> y{1, 2, 3, 4};
	CHECK_THROWS_AS(solve_least_squares(collinear, y), NumericalError);
	try {
		solve_least_squares(collinear, y);
	} catch (const NumericalError &e) {
		CHECK(std::string(e.what()).find("rank deficient") != std::string::npos);
	}
	CHECK_THROWS_AS(solve_least_squares(matrix_of({{1, 2, 3}}), std::vector<double>{1}), NumericalError);
	CHECK_THROWS_AS(solve_least_squares(collinear, std::vector<double>{1}), UsageError);
}

TEST_CASE("fit recovers persistence exactly") {
	const auto s = generate_synthetic(5, Regime::mixed, 6);
	const auto z = standardize(s, fit_scaler(s));
	auto dm = build_design_matrix(z, 4, 1, DaylightWindow{});
	for (std::size_t r = 0; r < dm.rows(); ++r) {
		dm.targets[r] = dm.lags(r, 0);
	}
	const auto w = fit(dm);
	CHECK(std::fabs(w[0] - 1.0) < 1e-10);
	for (std::size_t k = 1; k < 4; ++k) {
		CHECK(std::fabs(w[k]) < 1e-10);
	}
	check_orthogonal(dm.lags, dm.targets, w);
}

TEST_CASE("fit recovers AR(2) coefficients") {
	// Sampling error of the estimate scales as sqrt((1 - 0.3^2) / N), independent
	// of the innovation scale, so a 1e-3 tolerance needs millions of rows.
	const std::size_t n = 4'000'000;
	const auto x = oracle::simulate_ar({0.5, 0.3}, n + 2, 1e-3, 2024);
	DesignMatrix dm;
	dm.order = 2;
	for (std::size_t t = 2; t < x.size(); ++t) {
		const double row[2] = {x[t - 1], x[t - 2]};
		dm.lags.append_row(row);
		dm.targets.push_back(x[t]);
	}
	REQUIRE(dm.rows() >= 5000);
	const auto w = fit(dm);
	CHECK(std::fabs(w[0] - 0.5) < 1e-3);
	CHECK(std::fabs(w[1] - 0.3) < 1e-3);
	check_orthogonal(dm.lags, dm.targets, w);
}

TEST_CASE("fit recovers a noise-free order-4 recurrence") {
	const double a = 0.31;
	const double b = 0.87;
	const auto coef = oracle::sinusoid_recurrence(a, b);
	const DaylightWindow w;
	std::vector<double> v(30 * 144, 0.0);
	double n = 0.0;
	for (std::size_t i = 0; i < v.size(); ++i) {
		if (w.contains_slot(i % 144, 10)) {
			v[i] = oracle::two_tone(a, b, 0.2, 1.1, n);
			n += 1.0;
		}
	}
	const auto dm = build_design_matrix(IrradianceSeries(synthetic_epoch(), 10, v), 4, 1, w);
	const auto fitted = fit(dm);
	for (std::size_t k = 0; k < 4; ++k) {
		CHECK(std::fabs(fitted[k] - coef[k]) < 1e-6);
	}
	check_orthogonal(dm.lags, dm.targets, fitted);
}

TEST_CASE("predict_step") {
	MarModel m;
	m.order = 4;
	m.horizons = {1};
	m.fitted = {{1, {1, 0, 0, 0}}};
	const std::vector<double> lags{3.5, 1, 2, 9};
	CHECK(predict_step(m, lags, 1) == 3.5);
	CHECK(predict_step(m, std::vector<double>(4, 0.0), 1) == 0.0);
	CHECK_THROWS_AS(predict_step(m, std::vector<double>{1, 2}, 1), UsageError);
	CHECK_THROWS_AS(predict_step(m, lags, 3), UsageError);

	MarModel two;
	two.order = 2;
	two.horizons = {1};
	two.fitted = {{1, {0.5, 0.3}}};
	CHECK(predict_step(two, std::vector<double>{2, -1}, 1) == doctest::Approx(0.7).epsilon(1e-15));

	SUBCASE("recursive iteration feeds predictions back as lags") {
		two.strategy = Strategy::recursive;
		two.horizons = {1, 2, 3};
		const double p1 = 0.5 * 2 + 0.3 * -1;
		const double p2 = 0.5 * p1 + 0.3 * 2;
		const double p3 = 0.5 * p2 + 0.3 * p1;
		CHECK(predict_step(two, std::vector<double>{2, -1}, 2) == doctest::Approx(p2).epsilon(1e-15));
		CHECK(predict_step(two, std::vector<double>{2, -1}, 3) == doctest::Approx(p3).epsilon(1e-15));
	}
}

TEST_CASE("fit_all_horizons shape and determinism") {
	const auto data = generate_synthetic(100, Regime::mixed, 12);
	const auto [train, test] = split(data);
	const MarModel m = fit_all_horizons(train, MarConfig{});
	REQUIRE(m.fitted.size() == 3);
	for (const auto &hw : m.fitted) {
		CHECK(hw.weights.size() == 4);
		for (double v : hw.weights) {
			CHECK(std::isfinite(v));
		}
	}
	const MarModel again = fit_all_horizons(train, MarConfig{});
	for (std::size_t i = 0; i < 3; ++i) {
		CHECK(again.fitted[i].weights == m.fitted[i].weights);
	}

	// Orthogonality of every per-horizon fit, recomputed from the model's domain.
	const auto z = standardize(train, m.scaler);
	const auto ens = ensemble_deduct(z, m.profile);
	for (const auto &hw : m.fitted) {
		const auto dm = build_design_matrix(ens, 4, hw.horizon, m.daylight);
		check_orthogonal(dm.lags, dm.targets, hw.weights);
	}

	SUBCASE("plain AR skips deduction and add-back") {
		MarConfig cfg;
		cfg.ensemble_enabled = false;
		const MarModel ar = fit_all_horizons(train, cfg);
		const auto dm = build_design_matrix(z, 4, 1, ar.daylight);
		CHECK(ar.fitted[0].weights == fit(dm));
		const auto rows = forecast(ar, test, 1);
		const auto zt = standardize(test, ar.scaler);
		const auto slots = target_slots(4, 1, ar.daylight, 10);
		const std::size_t t = slots.first;
		double pred = 0.0;
		for (std::size_t k = 1; k <= 4; ++k) {
			pred += ar.fitted[0].weights[k - 1] * zt[t - k];
		}
		CHECK(rows[0].predicted == std::max(0.0, ar.scaler.destandardize(pred)));
	}
	SUBCASE("recursive mode fits only the one-step weights") {
		MarConfig cfg;
		cfg.strategy = Strategy::recursive;
		const MarModel rec = fit_all_horizons(train, cfg);
		CHECK(rec.fitted.size() == 1);
		CHECK(rec.serves(6));
		CHECK(rec.weights_for(6).data() == rec.weights_for(1).data());
	}
}

TEST_CASE("forecast pipeline") {
	const auto data = generate_synthetic(40, Regime::cloudy, 13);
	const auto [train, test] = split(data);
	const MarModel m = fit_all_horizons(train, MarConfig{});

	SUBCASE("each row follows standardize, deduct, dot, add, destandardize, clip") {
		const auto rows = forecast(m, test, 3);
		const auto ens = ensemble_deduct(standardize(test, m.scaler), m.profile);
		const auto slots = target_slots(4, 3, m.daylight, 10);
		REQUIRE(rows.size() == test.days() * (slots.last - slots.first + 1));
		std::size_t r = 0;
		for (std::size_t d = 0; d < test.days(); ++d) {
			for (std::size_t t = slots.first; t <= slots.last; ++t, ++r) {
				const std::size_t idx = d * 144 + t;
				double z = 0.0;
				for (std::size_t k = 1; k <= 4; ++k) {
					z += m.weights_for(3)[k - 1] * ens[idx - 2 - k];
				}
				const double expect = std::max(0.0, m.scaler.destandardize(z + m.profile.means[t]));
				CHECK(rows[r].predicted == expect);
				CHECK(rows[r].actual == test[idx]);
				CHECK(rows[r].timestamp == test.timestamp(idx));
				CHECK(rows[r].predicted >= 0.0);
			}
		}
	}
	SUBCASE("a test day equal to the profile reproduces the profile") {
		std::vector<double> v(144);
		for (std::size_t s = 0; s < 144; ++s) {
			v[s] = m.scaler.destandardize(m.profile.means[s]);
		}
		const auto rows = forecast(m, IrradianceSeries(synthetic_epoch(), 10, v), 1);
		for (const auto &row : rows) {
			const std::size_t slot = static_cast<std::size_t>(minute_of_day(row.timestamp) / 10);
			CHECK(std::fabs(row.predicted - std::max(0.0, v[slot])) < 1e-9);
		}
	}
	SUBCASE("unfitted horizon and grid mismatch") {
		CHECK_THROWS_AS(forecast(m, test, 2), UsageError);
		const IrradianceSeries coarse(synthetic_epoch(), 30, std::vector<double>(48, 1.0));
		CHECK_THROWS_AS(forecast(m, coarse, 1), DataError);
	}
}

TEST_CASE("clear-sky data is easier than cloudy data") {
	auto mape_h1 = [](Regime regime) {
		const auto [train, test] = split(generate_synthetic(60, regime, 4));
		const auto rows = forecast(fit_all_horizons(train, MarConfig{}), test, 1);
		return mape(rows);
	};
	CHECK(mape_h1(Regime::clear) < mape_h1(Regime::cloudy));
}

TEST_CASE("model save/load reproduces forecasts bit-exactly") {
	const auto dir = oracle::scratch_dir("mar_io");
	const auto [train, test] = split(generate_synthetic(30, Regime::mixed, 14));
	MarConfig cfg;
	cfg.daylight = DaylightWindow::parse("06:30-18:00");
	const MarModel m = fit_all_horizons(train, cfg);
	save_mar_model(m, dir / "m.txt", {"note"});
	{
		std::ifstream in(dir / "m.txt");
		std::string first;
		std::getline(in, first);
		CHECK(first == "mar-model v1");
	}
	const MarModel back = load_mar_model(dir / "m.txt");
	CHECK(back.order == m.order);
	CHECK(back.horizons == m.horizons);
	CHECK(back.scaler.mu == m.scaler.mu);
	CHECK(back.scaler.sigma == m.scaler.sigma);
	CHECK(back.profile.means == m.profile.means);
	CHECK(back.profile.support_counts == m.profile.support_counts);
	CHECK(back.daylight.to_string() == "06:30-18:00");
	for (std::size_t h : m.horizons) {
		const auto a = forecast(m, test, h);
		const auto b = forecast(back, test, h);
		REQUIRE(a.size() == b.size());
		for (std::size_t i = 0; i < a.size(); ++i) {
			CHECK(a[i].predicted == b[i].predicted);
		}
	}

	std::ofstream(dir / "bad.txt") << "mar-model v2\n";
	CHECK_THROWS_AS(load_mar_model(dir / "bad.txt"), DataError);
	std::ofstream(dir / "trunc.txt") << "mar-model v1\norder 4\n";
	CHECK_THROWS_AS(load_mar_model(dir / "trunc.txt"), DataError);
}
