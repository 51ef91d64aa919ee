#include "solarcast/svg_plot.hpp"

#include "solarcast/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace solarcast {

std::string xml_escape(const std::string &text) {
	std::string out;
	out.reserve(text.size());
	for (char c : text) {
		switch (c) {
		case '&':
			out += "&amp;";
			break;
		case '<':
			out += "&lt;";
			break;
		case '>':
			out += "&gt;";
			break;
		case '"':
			out += "&quot;";
			break;
		case '\'':
			out += "&apos;";
			break;
		default:
			out += c;
		}
	}
	return out;
}

void SvgLinePlot::set_x_ticks(std::vector<double> positions, std::vector<std::string> labels) {
	if (positions.size() != labels.size()) {
		throw UsageError("tick positions and labels differ in length");
	}
	tick_pos_ = std::move(positions);
	tick_labels_ = std::move(labels);
}

namespace {

std::string num(double v) {
	char buf[32];
	std::snprintf(buf, sizeof(buf), "%.2f", v);
	return buf;
}

std::string tick_text(double v) {
	char buf[32];
	std::snprintf(buf, sizeof(buf), "%g", std::abs(v) < 1e-9 ? 0.0 : v);
	return buf;
}

// Round-number step for roughly `target` intervals over `span`.
double nice_step(double span, int target) {
	const double raw = span / target;
	const double mag = std::pow(10.0, std::floor(std::log10(raw)));
	for (double m : {1.0, 2.0, 5.0, 10.0}) {
		if (raw <= m * mag) {
			return m * mag;
		}
	}
	return 10.0 * mag;
}

} // namespace

void SvgLinePlot::write(std::ostream &out, int width, int height) const {
	const double left = 70;
	const double right = 160;
	const double top = 40;
	const double bottom = 50;
	const double pw = width - left - right;
	const double ph = height - top - bottom;

	double xmin = std::numeric_limits<double>::infinity();
	double xmax = -xmin;
	double ymin = 0.0;
	double ymax = -std::numeric_limits<double>::infinity();
	for (const auto &s : series_) {
		for (double x : s.x) {
			xmin = std::min(xmin, x);
			xmax = std::max(xmax, x);
		}
		for (double y : s.y) {
			ymin = std::min(ymin, y);
			ymax = std::max(ymax, y);
		}
	}
	if (!std::isfinite(xmin) || xmax <= xmin) {
		xmin = 0.0;
		xmax = 1.0;
	}
	if (!std::isfinite(ymax) || ymax <= ymin) {
		ymax = ymin + 1.0;
	}
	const double ystep = nice_step(ymax - ymin, 5);
	ymax = std::ceil(ymax / ystep) * ystep;
	auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
	auto py = [&](double y) { return top + (1.0 - (y - ymin) / (ymax - ymin)) * ph; };

	out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
	out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
	    << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
	out << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
	out << "<text x=\"" << num(left + pw / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
	    << xml_escape(title_) << "</text>\n";

	out << "<g stroke=\"#dddddd\" stroke-width=\"1\">\n";
	for (double y = ymin; y <= ymax + 1e-9; y += ystep) {
		out << "<line x1=\"" << num(left) << "\" y1=\"" << num(py(y)) << "\" x2=\"" << num(left + pw) << "\" y2=\""
		    << num(py(y)) << "\"/>\n";
	}
	out << "</g>\n";
	out << "<g text-anchor=\"end\">\n";
	for (double y = ymin; y <= ymax + 1e-9; y += ystep) {
		out << "<text x=\"" << num(left - 6) << "\" y=\"" << num(py(y) + 4) << "\">" << tick_text(y)
		    << "</text>\n";
	}
	out << "</g>\n";
	out << "<g text-anchor=\"middle\">\n";
	for (std::size_t i = 0; i < tick_pos_.size(); ++i) {
		out << "<text x=\"" << num(px(tick_pos_[i])) << "\" y=\"" << num(top + ph + 18) << "\">"
		    << xml_escape(tick_labels_[i]) << "</text>\n";
	}
	out << "</g>\n";
	out << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(pw) << "\" height=\"" << num(ph)
	    << "\" fill=\"none\" stroke=\"black\"/>\n";
	out << "<text x=\"" << num(left + pw / 2) << "\" y=\"" << num(height - 10.0)
	    << "\" text-anchor=\"middle\">" << xml_escape(x_label_) << "</text>\n";
	out << "<text transform=\"translate(16 " << num(top + ph / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
	    << xml_escape(y_label_) << "</text>\n";

	for (std::size_t si = 0; si < series_.size(); ++si) {
		const auto &s = series_[si];
		out << "<polyline fill=\"none\" stroke=\"" << xml_escape(s.color) << "\" stroke-width=\"1.5\"";
		if (s.dashed) {
			out << " stroke-dasharray=\"5 3\"";
		}
		out << " points=\"";
		const std::size_t n = std::min(s.x.size(), s.y.size());
		for (std::size_t i = 0; i < n; ++i) {
			out << (i ? " " : "") << num(px(s.x[i])) << ',' << num(py(s.y[i]));
		}
		out << "\"/>\n";
		const double ly = top + 16.0 + 18.0 * static_cast<double>(si);
		out << "<line x1=\"" << num(left + pw + 12) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(left + pw + 36)
		    << "\" y2=\"" << num(ly) << "\" stroke=\"" << xml_escape(s.color) << "\" stroke-width=\"2\"/>\n";
		out << "<text x=\"" << num(left + pw + 42) << "\" y=\"" << num(ly + 4) << "\">" << xml_escape(s.name)
		    << "</text>\n";
	}
	out << "</svg>\n";
}

} // namespace solarcast
