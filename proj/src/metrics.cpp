#include "solarcast/metrics.hpp"

#include "solarcast/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

namespace solarcast {

namespace {

// Neumaier-compensated running sum, so long reports do not drift by rounding.
class CompensatedSum {
public:
	void add(double x) {
		const double t = sum_ + x;
		carry_ += std::fabs(sum_) >= std::fabs(x) ? (sum_ - t) + x : (x - t) + sum_;
		sum_ = t;
	}
	double value() const { return sum_ + carry_; }

private:
	double sum_ = 0.0;
	double carry_ = 0.0;
};

} // namespace

double rmse(std::span<const ForecastRow> rows) {
	if (rows.empty()) {
		throw UsageError("rmse of an empty set");
	}
	CompensatedSum ss;
	for (const auto &r : rows) {
		const double e = r.predicted - r.actual;
		ss.add(e * e);
	}
	return std::sqrt(ss.value() / static_cast<double>(rows.size()));
}

double mae(std::span<const ForecastRow> rows) {
	if (rows.empty()) {
		throw UsageError("mae of an empty set");
	}
	CompensatedSum s;
	for (const auto &r : rows) {
		s.add(std::abs(r.predicted - r.actual));
	}
	return s.value() / static_cast<double>(rows.size());
}

double mape(std::span<const ForecastRow> rows, double min_actual) {
	CompensatedSum s;
	std::size_t n = 0;
	for (const auto &r : rows) {
		if (r.actual >= min_actual && r.actual > 0.0) {
			s.add(std::abs(r.actual - r.predicted) / r.actual);
			++n;
		}
	}
	if (n == 0) {
		throw UsageError("no rows with actual irradiance >= " + std::to_string(min_actual) + " W/m^2 for MAPE");
	}
	return 100.0 * s.value() / static_cast<double>(n);
}

std::vector<SummaryCell> summarize(std::span<const ForecastReport> reports, double min_actual) {
	std::vector<SummaryCell> cells;
	for (const auto &report : reports) {
		std::map<std::size_t, std::vector<ForecastRow>> by_horizon;
		for (const auto &r : report.rows) {
			by_horizon[r.horizon].push_back(r);
		}
		for (const auto &[h, rows] : by_horizon) {
			SummaryCell c;
			c.model = report.model;
			c.horizon = h;
			c.rmse = rmse(rows);
			c.mae = mae(rows);
			c.mape = mape(rows, min_actual);
			c.rows = rows.size();
			cells.push_back(c);
		}
	}
	return cells;
}

std::string horizon_label(std::size_t steps, int step_minutes) {
	const long minutes = static_cast<long>(steps) * step_minutes;
	if (minutes % 60 == 0) {
		return std::to_string(minutes / 60) + " h";
	}
	return std::to_string(minutes) + " min";
}

void write_summary_csv(std::span<const SummaryCell> cells, std::ostream &out) {
	out << "model,horizon,rmse,mae,mape\n";
	char buf[128];
	for (const auto &c : cells) {
		std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g", c.horizon, c.rmse, c.mae, c.mape);
		out << c.model << ',' << buf << '\n';
	}
}

void write_summary_table(std::span<const SummaryCell> cells, int step_minutes, std::ostream &out) {
	std::vector<std::string> models;
	std::vector<std::size_t> horizons;
	for (const auto &c : cells) {
		if (std::find(models.begin(), models.end(), c.model) == models.end()) {
			models.push_back(c.model);
		}
		if (std::find(horizons.begin(), horizons.end(), c.horizon) == horizons.end()) {
			horizons.push_back(c.horizon);
		}
	}
	std::sort(horizons.begin(), horizons.end());
	auto find = [&](const std::string &m, std::size_t h) -> const SummaryCell * {
		for (const auto &c : cells) {
			if (c.model == m && c.horizon == h) {
				return &c;
			}
		}
		return nullptr;
	};

	const int metric_w = 14;
	const int horizon_w = 9;
	const int col_w = 10;
	out << std::left << std::setw(metric_w) << "Metric" << std::setw(horizon_w) << "Horizon";
	for (const auto &m : models) {
		std::string upper = m;
		std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char ch) { return std::toupper(ch); });
		out << std::right << std::setw(col_w) << upper;
	}
	out << '\n';
	const std::size_t width = metric_w + horizon_w + col_w * models.size();
	const struct {
		const char *name;
		double SummaryCell::*field;
	} blocks[] = {{"RMSE W/m^2", &SummaryCell::rmse}, {"MAE W/m^2", &SummaryCell::mae}, {"MAPE %", &SummaryCell::mape}};
	for (const auto &block : blocks) {
		out << std::string(width, '-') << '\n';
		for (std::size_t i = 0; i < horizons.size(); ++i) {
			out << std::left << std::setw(metric_w) << (i == 0 ? block.name : "") << std::setw(horizon_w)
			    << horizon_label(horizons[i], step_minutes);
			for (const auto &m : models) {
				const SummaryCell *c = find(m, horizons[i]);
				out << std::right << std::setw(col_w);
				if (c) {
					out << std::fixed << std::setprecision(2) << c->*block.field;
				} else {
					out << "-";
				}
			}
			out << '\n';
		}
	}
	out << std::defaultfloat;
}

void write_rows_csv(std::span<const ForecastReport> reports, std::ostream &out) {
	out << "model,horizon,timestamp,actual,predicted\n";
	char buf[96];
	for (const auto &report : reports) {
		for (const auto &r : report.rows) {
			std::snprintf(buf, sizeof(buf), "%.17g,%.17g", r.actual, r.predicted);
			out << report.model << ',' << r.horizon << ',' << format_timestamp(r.timestamp) << ',' << buf << '\n';
		}
	}
}

std::vector<ForecastReport> read_rows_csv(const std::filesystem::path &path) {
	std::ifstream in(path);
	if (!in) {
		throw DataError("cannot open " + path.string());
	}
	std::vector<ForecastReport> reports;
	std::string line;
	std::size_t line_no = 0;
	bool header = false;
	while (std::getline(in, line)) {
		++line_no;
		if (line.empty() || line[0] == '#') {
			continue;
		}
		if (!header) {
			if (line != "model,horizon,timestamp,actual,predicted") {
				throw DataError(path.string() + ": unexpected report header");
			}
			header = true;
			continue;
		}
		std::vector<std::string> fields;
		std::stringstream ss(line);
		std::string f;
		while (std::getline(ss, f, ',')) {
			fields.push_back(f);
		}
		if (fields.size() != 5) {
			throw DataError(path.string() + ":" + std::to_string(line_no) + ": expected 5 fields");
		}
		ForecastRow row;
		row.horizon = std::stoul(fields[1]);
		row.timestamp = parse_timestamp(fields[2]);
		auto parse_double = [&](const std::string &s) {
			double v = 0.0;
			auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
			if (ec != std::errc() || ptr != s.data() + s.size()) {
				throw DataError(path.string() + ":" + std::to_string(line_no) + ": bad number '" + s + "'");
			}
			return v;
		};
		row.actual = parse_double(fields[3]);
		row.predicted = parse_double(fields[4]);
		auto it = std::find_if(reports.begin(), reports.end(), [&](const auto &r) { return r.model == fields[0]; });
		if (it == reports.end()) {
			reports.push_back(ForecastReport{fields[0], {}});
			it = std::prev(reports.end());
		}
		it->rows.push_back(row);
	}
	return reports;
}

} // namespace solarcast
