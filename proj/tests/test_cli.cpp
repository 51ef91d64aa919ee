#include "doctest.h"
#include "oracles.hpp"

#include "solarcast/config.hpp"
#include "solarcast/errors.hpp"
#include "solarcast/mar.hpp"
#include "solarcast/svg_plot.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace solarcast;
namespace fs = std::filesystem;

namespace {

int run(const std::string &args, const fs::path &dir) {
	const std::string cmd = "cd '" + dir.string() + "' && '" SOLARCAST_CLI "' " + args + " > log.txt 2>&1";
	const int status = std::system(cmd.c_str());
	return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path &p) {
	std::ifstream in(p, std::ios::binary);
	std::ostringstream ss;
	ss << in.rdbuf();
	return ss.str();
}

std::size_t count_lines(const std::string &text, char skip_prefix = '#') {
	std::size_t n = 0;
	std::istringstream in(text);
	for (std::string line; std::getline(in, line);) {
		n += !line.empty() && line[0] != skip_prefix;
	}
	return n;
}

// Daylight-confined series for diagnose: constant level plus a scaled zero-mean process.
void write_process_csv(const fs::path &path, const std::vector<double> &process) {
	const DaylightWindow w;
	std::vector<double> v(process.size(), 0.0);
	for (std::size_t i = 0; i < v.size(); ++i) {
		if (w.contains_slot(i % 144, 10)) {
			v[i] = 200.0 + 20.0 * process[i];
		}
	}
	save_csv(IrradianceSeries(synthetic_epoch(), 10, v), path);
}

} // namespace

TEST_CASE("run configuration") {
	RunConfig cfg;
	CHECK(cfg.split == 0.70);
	CHECK(cfg.order == std::optional<std::size_t>(4));
	CHECK(cfg.horizons == std::vector<std::size_t>{1, 3, 6});
	cfg.set("order", "auto");
	CHECK_FALSE(cfg.order.has_value());
	cfg.set(" horizons ", " 1, 2 ,12");
	CHECK(cfg.horizons == std::vector<std::size_t>{1, 2, 12});
	cfg.set("model", "lstm");
	CHECK(cfg.model == ModelKind::lstm);
	cfg.set("ensemble", "false");
	CHECK_FALSE(cfg.ensemble);
	CHECK_THROWS_AS(cfg.set("split", "1.5"), UsageError);
	CHECK_THROWS_AS(cfg.set("order", "0"), UsageError);
	CHECK_THROWS_AS(cfg.set("model", "arima"), UsageError);
	CHECK_THROWS_AS(cfg.set("colour", "red"), UsageError);
	CHECK_THROWS_AS(parse_horizons("1,,3"), UsageError);
	CHECK(format_horizons({1, 3, 6}) == "1,3,6");

	const auto dir = oracle::scratch_dir("config");
	std::ofstream(dir / "run.cfg") << "# comment\nsplit = 0.8\nseed=7\n\nmape_threshold=50\n";
	RunConfig loaded;
	loaded.load_file(dir / "run.cfg");
	CHECK(loaded.split == 0.8);
	CHECK(loaded.seed == 7);
	CHECK(loaded.mape_threshold == 50.0);

	// The serialized form reproduces the configuration.
	RunConfig replay;
	for (const auto &line : loaded.to_lines()) {
		const auto eq = line.find('=');
		replay.set(line.substr(0, eq), line.substr(eq + 1));
	}
	CHECK(replay.to_lines() == loaded.to_lines());
	CHECK(std::find(loaded.to_lines().begin(), loaded.to_lines().end(), "split=0.8") != loaded.to_lines().end());
	std::ofstream(dir / "bad.cfg") << "split\n";
	CHECK_THROWS_AS(loaded.load_file(dir / "bad.cfg"), UsageError);
}

TEST_CASE("exit codes follow the error category") {
	auto code = [](auto thrower) {
		try {
			thrower();
		} catch (...) {
			return exit_code_for_current_exception();
		}
		return -1;
	};
	CHECK(code([] { throw DataError("x"); }) == kExitData);
	CHECK(code([] { throw NumericalError("x"); }) == kExitNumerical);
	CHECK(code([] { throw UsageError("x"); }) == kExitUsage);
}

TEST_CASE("svg writer escapes text and closes its root element") {
	CHECK(xml_escape("a<b & \"c\">") == "a&lt;b &amp; &quot;c&quot;&gt;");
	SvgLinePlot plot("t <1>", "x", "y");
	plot.add_series({"obs", "black", {0, 1, 2}, {0, 5, 3}, false});
	std::ostringstream out;
	plot.write(out);
	const std::string s = out.str();
	CHECK(s.find("<svg") != std::string::npos);
	CHECK(s.find("t &lt;1&gt;") != std::string::npos);
	CHECK(s.rfind("</svg>") != std::string::npos);
}

TEST_CASE("cli synth") {
	const auto dir = oracle::scratch_dir("cli_synth");
	REQUIRE(run("synth --days 100 --regime clear --seed 5 --out a.csv", dir) == 0);
	REQUIRE(run("synth --days 100 --regime clear --seed 5 --out b.csv", dir) == 0);
	const std::string a = slurp(dir / "a.csv");
	CHECK(a == slurp(dir / "b.csv"));
	CHECK(count_lines(a) == 14400 + 1);
	CHECK(load_csv(dir / "a.csv").size() == 14400);
	CHECK(run("synth --days 0", dir) == kExitUsage);
	CHECK(run("synth --regime foggy", dir) == kExitUsage);
	CHECK(run("bogus", dir) == kExitUsage);
}

TEST_CASE("cli diagnose") {
	const auto dir = oracle::scratch_dir("cli_diag");
	write_process_csv(dir / "ar4.csv", oracle::simulate_ar({0.4, 0.2, 0.15, 0.2}, 200 * 144, 1.0, 51));
	write_process_csv(dir / "white.csv", oracle::simulate_ar({}, 200 * 144, 1.0, 52, 0));

	REQUIRE(run("diagnose --data ar4.csv --out d4 --max-lag 15", dir) == 0);
	CHECK(slurp(dir / "log.txt").find("recommended order: 4") != std::string::npos);
	const std::string csv = slurp(dir / "d4" / "diagnostics.csv");
	CHECK(csv.find("lag,acf,pacf\n0,1,1\n") != std::string::npos);
	CHECK(csv.find("\n15,") != std::string::npos);
	CHECK(csv.find("\n16,") == std::string::npos);
	CHECK(csv.find("# max_lag=15") != std::string::npos);

	REQUIRE(run("diagnose --data white.csv --out dw", dir) == 0);
	CHECK(slurp(dir / "log.txt").find("recommended order: 1") != std::string::npos);

	CHECK(run("diagnose --data ar4.csv --out dz --domain z", dir) == 0);
	CHECK(run("diagnose --data ar4.csv --domain q", dir) == kExitUsage);
	CHECK(run("diagnose --data missing.csv", dir) == kExitData);
	CHECK(run("diagnose", dir) == kExitUsage);
}

TEST_CASE("cli fit and evaluate") {
	const auto dir = oracle::scratch_dir("cli_fit");
	REQUIRE(run("synth --days 40 --regime mixed --seed 2 --out d.csv", dir) == 0);
	REQUIRE(run("fit --data d.csv --out o --model mar", dir) == 0);
	const std::string model = slurp(dir / "o" / "model.txt");
	CHECK(model.rfind("mar-model v1\n", 0) == 0);
	CHECK(model.find("# horizons=1,3,6") != std::string::npos);

	REQUIRE(run("fit --data d.csv --out o2 --model mar", dir) == 0);
	const std::string again = slurp(dir / "o2" / "model.txt");
	CHECK(again.substr(again.find("\norder ")) == model.substr(model.find("\norder ")));

	REQUIRE(run("evaluate --data d.csv --out o", dir) == 0);
	const auto reports = read_rows_csv(dir / "o" / "report_rows.csv");
	REQUIRE(reports.size() == 1);
	CHECK(reports[0].model == "mar");
	const auto cells = summarize(reports);
	CHECK(cells.size() == 3);
	std::ostringstream recomputed;
	write_summary_csv(cells, recomputed);
	const std::string summary = slurp(dir / "o" / "summary.csv");
	CHECK(summary.substr(summary.find("model,")) == recomputed.str());

	// Loading the saved model forecasts exactly what the in-process fit does.
	const auto [train, test] = split(load_csv(dir / "d.csv"));
	const auto direct = forecast(fit_all_horizons(train, MarConfig{}), test, 3);
	std::vector<ForecastRow> from_file;
	for (const auto &r : reports[0].rows) {
		if (r.horizon == 3) {
			from_file.push_back(r);
		}
	}
	REQUIRE(direct.size() == from_file.size());
	for (std::size_t i = 0; i < direct.size(); ++i) {
		CHECK(direct[i].predicted == from_file[i].predicted);
	}

	CHECK(run("evaluate --data d.csv --out o --horizons 2", dir) == kExitUsage);
	CHECK(run("fit --data d.csv --out o3 --model ar --order 70", dir) == kExitData);
	CHECK(run("fit --data d.csv --out o4 --split 2", dir) == kExitUsage);
	std::ofstream(dir / "run.cfg") << "model=ar\nhorizons=2\n";
	REQUIRE(run("fit --config run.cfg --data d.csv --out o5", dir) == 0);
	const std::string ar = slurp(dir / "o5" / "model.txt");
	CHECK(ar.find("ensemble 0") != std::string::npos);
	CHECK(ar.find("horizons 1 2") != std::string::npos);
	REQUIRE(run("fit --config run.cfg --data d.csv --out o6 --horizons 1", dir) == 0);
	CHECK(slurp(dir / "o6" / "model.txt").find("horizons 1 1") != std::string::npos);
}
