#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace solarcast {

/// Minimal static line chart written as standalone SVG.
class SvgLinePlot {
public:
	struct Series {
		std::string name;
		std::string color;
		std::vector<double> x;
		std::vector<double> y;
		bool dashed = false;
	};

	SvgLinePlot(std::string title, std::string x_label, std::string y_label)
	    : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

	void add_series(Series s) { series_.push_back(std::move(s)); }
	/// Optional labels for x tick positions.
	void set_x_ticks(std::vector<double> positions, std::vector<std::string> labels);

	void write(std::ostream &out, int width = 960, int height = 480) const;

private:
	std::string title_;
	std::string x_label_;
	std::string y_label_;
	std::vector<Series> series_;
	std::vector<double> tick_pos_;
	std::vector<std::string> tick_labels_;
};

std::string xml_escape(const std::string &text);

} // namespace solarcast
