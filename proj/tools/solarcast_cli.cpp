// solarcast: synthesize irradiance data, inspect its correlation structure,
// fit MAR/AR/CNN/LSTM forecasters and compare them across horizons.

#include "solarcast/config.hpp"
#include "solarcast/dataset.hpp"
#include "solarcast/errors.hpp"
#include "solarcast/mar.hpp"
#include "solarcast/metrics.hpp"
#include "solarcast/nn/training.hpp"
#include "solarcast/stats.hpp"
#include "solarcast/svg_plot.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <set>

namespace fs = std::filesystem;
using namespace solarcast;

namespace {

/// Flags shared by the pipeline commands; applied on top of an optional config file.
struct CommonFlags {
	std::string config_file;
	std::map<std::string, std::string> values;
	bool recursive = false;
	bool no_ensemble = false;

	void attach(CLI::App &cmd) {
		cmd.add_option("--config", config_file, "key=value configuration file");
		for (const auto &[flag, key, help] : kOptions) {
			cmd.add_option(flag, values[key], help);
		}
		cmd.add_flag("--recursive", recursive, "iterate the one-step MAR model instead of direct per-horizon fits");
		cmd.add_flag("--no-ensemble", no_ensemble, "disable ensemble deduction (plain AR)");
	}

	RunConfig resolve(const CLI::App &cmd) const {
		RunConfig cfg;
		if (!config_file.empty()) {
			cfg.load_file(config_file);
		}
		for (const auto &[flag, key, help] : kOptions) {
			if (cmd.count(flag) > 0) {
				cfg.set(key, values.at(key));
			}
		}
		if (recursive) {
			cfg.recursive = true;
		}
		if (no_ensemble) {
			cfg.ensemble = false;
		}
		return cfg;
	}

	struct Option {
		const char *flag;
		const char *key;
		const char *help;
	};
	static constexpr Option kOptions[] = {
	    {"--data", "data", "input CSV (timestamp,irradiance_wm2)"},
	    {"--split", "split", "training fraction (default 0.70)"},
	    {"--order", "order", "AR order or 'auto' (default 4)"},
	    {"--horizons", "horizons", "comma-separated horizons in steps (default 1,3,6)"},
	    {"--model", "model", "mar, ar, cnn or lstm"},
	    {"--seed", "seed", "random seed"},
	    {"--out", "out", "output directory"},
	    {"--daylight", "daylight", "daylight window HH:MM-HH:MM (default 06:00-18:30)"},
	    {"--mape-threshold", "mape_threshold", "minimum actual W/m^2 for MAPE (default 20)"},
	    {"--max-lag", "max_lag", "largest lag for ACF/PACF (default 20)"},
	    {"--pacf-threshold", "pacf_threshold", "PACF magnitude for order selection (default 0.1)"},
	    {"--cnn-epochs", "cnn_epochs", "CNN epochs (default 30)"},
	    {"--lstm-epochs", "lstm_epochs", "LSTM epochs (default 100)"},
	    {"--lstm-batch", "lstm_batch", "LSTM batch size (default 256)"},
	};
};

std::vector<std::string> header_lines(const std::string &command, const RunConfig &cfg) {
	std::vector<std::string> lines{"solarcast " + command};
	for (auto &l : cfg.to_lines()) {
		lines.push_back(l);
	}
	return lines;
}

void write_comments(std::ostream &out, const std::vector<std::string> &lines) {
	for (const auto &l : lines) {
		out << "# " << l << '\n';
	}
}

std::ofstream open_out(const fs::path &path) {
	if (path.has_parent_path()) {
		fs::create_directories(path.parent_path());
	}
	std::ofstream out(path, std::ios::binary);
	if (!out) {
		throw DataError("cannot write " + path.string());
	}
	return out;
}

struct Split {
	IrradianceSeries train;
	IrradianceSeries test;
};

Split load_split(const RunConfig &cfg) {
	if (cfg.data.empty()) {
		throw UsageError("--data is required");
	}
	IrradianceSeries series = load_csv(cfg.data);
	auto [train, test] = split(series, cfg.split);
	return Split{std::move(train), std::move(test)};
}

std::size_t resolve_order(const RunConfig &cfg, const IrradianceSeries &train) {
	if (cfg.order) {
		return *cfg.order;
	}
	const Diagnostics diag = diagnose(train, cfg.daylight, cfg.max_lag, CorrelationDomain::ensemble, cfg.pacf_threshold);
	std::cout << "auto order from PACF: " << diag.recommended_order << '\n';
	return diag.recommended_order;
}

MarConfig mar_config(const RunConfig &cfg, std::size_t order, bool ensemble) {
	MarConfig mc;
	mc.order = order;
	mc.horizons = cfg.horizons;
	mc.daylight = cfg.daylight;
	mc.ensemble_enabled = ensemble;
	mc.strategy = cfg.recursive ? Strategy::recursive : Strategy::direct;
	return mc;
}

nn::TrainingOptions training_options(const RunConfig &cfg, std::size_t window) {
	nn::TrainingOptions opt;
	opt.window = window;
	opt.daylight = cfg.daylight;
	opt.seed = cfg.seed;
	return opt;
}

std::vector<nn::NeuralModel> train_networks(const RunConfig &cfg, ModelKind kind, const IrradianceSeries &train,
                                            std::size_t window) {
	std::vector<nn::NeuralModel> models;
	nn::ConvSpec conv;
	conv.epochs = cfg.cnn_epochs;
	nn::LstmSpec lstm;
	lstm.epochs = cfg.lstm_epochs;
	lstm.batch_size = cfg.lstm_batch;
	for (std::size_t h : cfg.horizons) {
		const auto opt = training_options(cfg, window);
		models.push_back(kind == ModelKind::cnn ? nn::train_cnn(train, conv, h, opt) : nn::train_lstm(train, lstm, h, opt));
	}
	return models;
}

ForecastReport run_model(const RunConfig &cfg, ModelKind kind, const Split &data, std::size_t order) {
	ForecastReport report;
	report.model = to_string(kind);
	if (kind == ModelKind::mar || kind == ModelKind::ar) {
		const MarModel model = fit_all_horizons(data.train, mar_config(cfg, order, kind == ModelKind::mar));
		for (std::size_t h : cfg.horizons) {
			auto rows = forecast(model, data.test, h);
			report.rows.insert(report.rows.end(), rows.begin(), rows.end());
		}
		return report;
	}
	for (const auto &m : train_networks(cfg, kind, data.train, order)) {
		auto rows = nn::nn_forecast(m, data.test);
		report.rows.insert(report.rows.end(), rows.begin(), rows.end());
	}
	return report;
}

int cmd_synth(std::size_t days, const std::string &regime_text, std::uint64_t seed, const fs::path &out) {
	const Regime regime = parse_regime(regime_text);
	const IrradianceSeries series = generate_synthetic(days, regime, seed);
	if (out.has_parent_path()) {
		fs::create_directories(out.parent_path());
	}
	save_csv(series, out,
	         {"solarcast synth", "days=" + std::to_string(days), "regime=" + to_string(regime),
	          "seed=" + std::to_string(seed)});
	std::cout << "wrote " << series.size() << " samples (" << days << " days, " << to_string(regime) << ") to "
	          << out.string() << '\n';
	return kExitOk;
}

int cmd_diagnose(const RunConfig &cfg, const std::string &domain_text) {
	const Split data = load_split(cfg);
	CorrelationDomain domain = CorrelationDomain::ensemble;
	if (domain_text == "z") {
		domain = CorrelationDomain::standardized;
	} else if (domain_text != "ens") {
		throw UsageError("--domain must be 'ens' or 'z'");
	}
	const Diagnostics diag = diagnose(data.train, cfg.daylight, cfg.max_lag, domain, cfg.pacf_threshold);
	const fs::path path = cfg.out / "diagnostics.csv";
	auto out = open_out(path);
	write_comments(out, header_lines("diagnose", cfg));
	out << "# domain=" << domain_text << '\n';
	out << "lag,acf,pacf\n";
	char buf[96];
	for (std::size_t lag = 0; lag <= diag.acf.max_lag(); ++lag) {
		std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g", lag, diag.acf[lag], diag.pacf[lag]);
		out << buf << '\n';
	}
	std::cout << "lag      acf      pacf\n";
	for (std::size_t lag = 0; lag <= diag.acf.max_lag(); ++lag) {
		std::snprintf(buf, sizeof(buf), "%3zu  %7.4f  %7.4f", lag, diag.acf[lag], diag.pacf[lag]);
		std::cout << buf << '\n';
	}
	std::cout << "recommended order: " << diag.recommended_order << '\n';
	std::cout << "wrote " << path.string() << '\n';
	return kExitOk;
}

int cmd_fit(const RunConfig &cfg, fs::path model_file) {
	const Split data = load_split(cfg);
	const std::size_t order = resolve_order(cfg, data.train);
	if (model_file.empty()) {
		model_file = cfg.out / "model.txt";
	}
	if (model_file.has_parent_path()) {
		fs::create_directories(model_file.parent_path());
	}
	const auto header = header_lines("fit", cfg);
	if (cfg.model == ModelKind::mar || cfg.model == ModelKind::ar) {
		const bool ensemble = cfg.model == ModelKind::mar && cfg.ensemble;
		const MarModel model = fit_all_horizons(data.train, mar_config(cfg, order, ensemble));
		save_mar_model(model, model_file, header);
		std::cout << (ensemble ? "MAR" : "AR") << " order " << model.order << ", strategy " << to_string(model.strategy)
		          << '\n';
		for (const auto &hw : model.fitted) {
			std::cout << "  h=" << hw.horizon << " weights:";
			for (double w : hw.weights) {
				std::cout << ' ' << w;
			}
			std::cout << '\n';
		}
	} else {
		const auto models = train_networks(cfg, cfg.model, data.train, order);
		save_nn_models(models, model_file, header);
		for (const auto &m : models) {
			const fs::path curve = cfg.out / ("loss_" + to_string(cfg.model) + "_h" + std::to_string(m.horizon) + ".csv");
			auto out = open_out(curve);
			write_comments(out, header);
			nn::write_loss_curve(m, out);
			std::cout << to_string(cfg.model) << " h=" << m.horizon << " loss " << m.loss_curve.front() << " -> "
			          << m.loss_curve.back() << " (" << curve.string() << ")\n";
		}
	}
	std::cout << "wrote " << model_file.string() << '\n';
	return kExitOk;
}

bool is_mar_file(const fs::path &path) {
	std::ifstream in(path);
	std::string first;
	if (!in || !std::getline(in, first)) {
		throw DataError("cannot read model file " + path.string());
	}
	if (first == "mar-model v1") {
		return true;
	}
	if (first == "nn-model v1") {
		return false;
	}
	throw DataError(path.string() + ": unrecognized model format");
}

int cmd_evaluate(const RunConfig &cfg, fs::path model_file, bool horizons_given) {
	const Split data = load_split(cfg);
	if (model_file.empty()) {
		model_file = cfg.out / "model.txt";
	}
	ForecastReport report;
	int step = data.test.step_minutes();
	if (is_mar_file(model_file)) {
		const MarModel model = load_mar_model(model_file);
		report.model = model.ensemble_enabled ? "mar" : "ar";
		const auto horizons = horizons_given ? cfg.horizons : model.horizons;
		for (std::size_t h : horizons) {
			auto rows = forecast(model, data.test, h);
			report.rows.insert(report.rows.end(), rows.begin(), rows.end());
		}
	} else {
		const auto models = nn::load_nn_models(model_file);
		if (models.empty()) {
			throw DataError(model_file.string() + ": no networks");
		}
		report.model = to_string(models.front().network.kind);
		std::vector<std::size_t> horizons;
		for (const auto &m : models) {
			horizons.push_back(m.horizon);
		}
		if (horizons_given) {
			for (std::size_t h : cfg.horizons) {
				if (std::find(horizons.begin(), horizons.end(), h) == horizons.end()) {
					throw UsageError("model file has no network for horizon " + std::to_string(h));
				}
			}
		}
		for (const auto &m : models) {
			if (horizons_given && std::find(cfg.horizons.begin(), cfg.horizons.end(), m.horizon) == cfg.horizons.end()) {
				continue;
			}
			auto rows = nn::nn_forecast(m, data.test);
			report.rows.insert(report.rows.end(), rows.begin(), rows.end());
		}
	}
	const std::vector<ForecastReport> reports{report};
	const auto cells = summarize(reports, cfg.mape_threshold);
	const auto header = header_lines("evaluate", cfg);
	{
		auto out = open_out(cfg.out / "report_rows.csv");
		write_comments(out, header);
		write_rows_csv(reports, out);
	}
	{
		auto out = open_out(cfg.out / "summary.csv");
		write_comments(out, header);
		write_summary_csv(cells, out);
	}
	write_summary_table(cells, step, std::cout);
	std::cout << "wrote " << (cfg.out / "report_rows.csv").string() << " and " << (cfg.out / "summary.csv").string()
	          << '\n';
	return kExitOk;
}

void write_overlay(const fs::path &path, const std::vector<ForecastReport> &reports, const IrradianceSeries &test,
                   std::size_t horizon, std::size_t days, int step) {
	static const char *kColors[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
	days = std::min(days, test.days());
	const Timestamp start = test.start();
	const Timestamp end = start + std::chrono::minutes(static_cast<long>(days) * kMinutesPerDay);
	auto hours_since = [&](Timestamp ts) {
		return std::chrono::duration<double, std::ratio<3600>>(ts - start).count();
	};
	SvgLinePlot plot("Observed vs. predicted irradiance, " + horizon_label(horizon, step) + " horizon", "time of day",
	                 "irradiance (W/m^2)");
	SvgLinePlot::Series observed{"observed", "black", {}, {}, false};
	for (std::size_t i = 0; i < days * test.samples_per_day(); ++i) {
		observed.x.push_back(hours_since(test.timestamp(i)));
		observed.y.push_back(test[i]);
	}
	plot.add_series(std::move(observed));
	for (std::size_t r = 0; r < reports.size(); ++r) {
		SvgLinePlot::Series s{reports[r].model, kColors[r % 6], {}, {}, true};
		for (const auto &row : reports[r].rows) {
			if (row.horizon == horizon && row.timestamp < end) {
				s.x.push_back(hours_since(row.timestamp));
				s.y.push_back(row.predicted);
			}
		}
		plot.add_series(std::move(s));
	}
	std::vector<double> ticks;
	std::vector<std::string> labels;
	for (std::size_t h = 0; h <= days * 24; h += 6) {
		ticks.push_back(static_cast<double>(h));
		char buf[16];
		std::snprintf(buf, sizeof(buf), "%02zu:00", h % 24);
		labels.emplace_back(buf);
	}
	plot.set_x_ticks(std::move(ticks), std::move(labels));
	auto out = open_out(path);
	plot.write(out);
}

int cmd_compare(const RunConfig &cfg, std::size_t plot_days) {
	const Split data = load_split(cfg);
	const std::size_t order = resolve_order(cfg, data.train);
	const ModelKind kinds[] = {ModelKind::cnn, ModelKind::ar, ModelKind::lstm, ModelKind::mar};
	std::vector<std::future<ForecastReport>> jobs;
	for (ModelKind k : kinds) {
		jobs.push_back(std::async(std::launch::async, [&cfg, &data, order, k] { return run_model(cfg, k, data, order); }));
	}
	std::vector<ForecastReport> reports;
	for (auto &j : jobs) {
		reports.push_back(j.get());
	}
	const auto cells = summarize(reports, cfg.mape_threshold);
	const auto header = header_lines("compare", cfg);
	const int step = data.test.step_minutes();
	{
		auto out = open_out(cfg.out / "compare_rows.csv");
		write_comments(out, header);
		write_rows_csv(reports, out);
	}
	{
		auto out = open_out(cfg.out / "compare_summary.csv");
		write_comments(out, header);
		write_summary_csv(cells, out);
	}
	{
		auto out = open_out(cfg.out / "compare_table.txt");
		write_comments(out, header);
		write_summary_table(cells, step, out);
	}
	write_summary_table(cells, step, std::cout);
	std::set<std::size_t> horizons(cfg.horizons.begin(), cfg.horizons.end());
	for (std::size_t h : horizons) {
		const fs::path svg = cfg.out / ("overlay_h" + std::to_string(h) + ".svg");
		write_overlay(svg, reports, data.test, h, plot_days, step);
		std::cout << "wrote " << svg.string() << '\n';
	}
	return kExitOk;
}

} // namespace

int main(int argc, char **argv) {
	CLI::App app{"Solar irradiance forecasting with modified auto-regression and neural baselines"};
	app.require_subcommand(1);

	std::size_t synth_days = 100;
	std::string synth_regime = "mixed";
	std::uint64_t synth_seed = 1;
	std::string synth_out = "synthetic.csv";
	auto *synth = app.add_subcommand("synth", "write a seeded synthetic irradiance CSV");
	synth->add_option("--days", synth_days, "number of days")->check(CLI::PositiveNumber);
	synth->add_option("--regime", synth_regime, "clear, cloudy or mixed");
	synth->add_option("--seed", synth_seed, "random seed");
	synth->add_option("--out", synth_out, "output CSV path");

	CommonFlags diag_flags;
	std::string domain = "ens";
	auto *diag = app.add_subcommand("diagnose", "ACF/PACF of the training split and a recommended AR order");
	diag_flags.attach(*diag);
	diag->add_option("--domain", domain, "ens (ensemble-deducted) or z (standardized)");

	CommonFlags fit_flags;
	std::string fit_model_file;
	auto *fit_cmd = app.add_subcommand("fit", "fit a model on the training split and save it");
	fit_flags.attach(*fit_cmd);
	fit_cmd->add_option("--model-file", fit_model_file, "model output path (default <out>/model.txt)");

	CommonFlags eval_flags;
	std::string eval_model_file;
	auto *eval = app.add_subcommand("evaluate", "forecast the test split with a saved model");
	eval_flags.attach(*eval);
	eval->add_option("--model-file", eval_model_file, "model path (default <out>/model.txt)");

	CommonFlags cmp_flags;
	std::size_t plot_days = 2;
	auto *cmp = app.add_subcommand("compare", "fit and evaluate mar, ar, cnn and lstm on one split");
	cmp_flags.attach(*cmp);
	cmp->add_option("--plot-days", plot_days, "test days shown in each overlay plot");

	try {
		app.parse(argc, argv);
	} catch (const CLI::CallForHelp &e) {
		return app.exit(e);
	} catch (const CLI::ParseError &e) {
		app.exit(e);
		return kExitUsage;
	}

	try {
		if (*synth) {
			return cmd_synth(synth_days, synth_regime, synth_seed, synth_out);
		}
		if (*diag) {
			return cmd_diagnose(diag_flags.resolve(*diag), domain);
		}
		if (*fit_cmd) {
			return cmd_fit(fit_flags.resolve(*fit_cmd), fit_model_file);
		}
		if (*eval) {
			return cmd_evaluate(eval_flags.resolve(*eval), eval_model_file, eval->count("--horizons") > 0);
		}
		if (*cmp) {
			return cmd_compare(cmp_flags.resolve(*cmp), plot_days);
		}
	} catch (const std::exception &e) {
		std::cerr << "error: " << e.what() << '\n';
		return exit_code_for_current_exception();
	}
	return kExitUsage;
}
