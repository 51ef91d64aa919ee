#include "solarcast/errors.hpp"
#include "solarcast/nn/training.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace solarcast::nn {

namespace {

std::string fmt17(double v) {
	char buf[40];
	std::snprintf(buf, sizeof(buf), "%.17g", v);
	return buf;
}

class Reader {
public:
	Reader(std::istream &in, std::filesystem::path path) : in_(in), path_(std::move(path)) {}

	// Next non-comment record split into tokens; empty at end of stream.
	std::vector<std::string> next() {
		std::string line;
		while (std::getline(in_, line)) {
			++line_no_;
			if (line.empty() || line[0] == '#') {
				continue;
			}
			std::istringstream ss(line);
			std::vector<std::string> toks;
			for (std::string t; ss >> t;) {
				toks.push_back(t);
			}
			if (!toks.empty()) {
				return toks;
			}
		}
		return {};
	}

	std::vector<std::string> expect(const std::string &key, std::size_t min_args) {
		auto toks = next();
		if (toks.empty() || toks[0] != key || toks.size() < min_args + 1) {
			fail("expected '" + key + "' record");
		}
		return toks;
	}

	double number(const std::string &tok) {
		double v = 0.0;
		auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
		if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v)) {
			fail("bad number '" + tok + "'");
		}
		return v;
	}

	std::size_t count(const std::string &tok) {
		std::size_t v = 0;
		auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
		if (ec != std::errc() || ptr != tok.data() + tok.size()) {
			fail("bad count '" + tok + "'");
		}
		return v;
	}

	[[noreturn]] void fail(const std::string &what) const {
		throw DataError(path_.string() + ":" + std::to_string(line_no_) + ": " + what);
	}

private:
	std::istream &in_;
	std::filesystem::path path_;
	std::size_t line_no_ = 0;
};

void write_model(const NeuralModel &m, std::ostream &out) {
	const Network &net = m.network;
	out << "network\n";
	out << "kind " << to_string(net.kind) << '\n';
	out << "horizon " << m.horizon << '\n';
	out << "window " << net.window << '\n';
	out << "step_minutes " << m.step_minutes << '\n';
	out << "daylight " << m.daylight.to_string() << '\n';
	out << "difference " << (m.difference_input ? 1 : 0) << '\n';
	out << "scaler " << fmt17(m.scaler.mu) << ' ' << fmt17(m.scaler.sigma) << '\n';
	const ConvSpec &c = net.conv;
	out << "conv " << c.kernel_count << ' ' << c.kernel_size << ' ' << c.pool_size << ' ' << fmt17(c.learning_rate)
	    << ' ' << c.batch_size << ' ' << c.epochs << ' ' << c.hidden.size();
	for (auto h : c.hidden) {
		out << ' ' << h;
	}
	out << '\n';
	const LstmSpec &l = net.lstm;
	out << "lstm " << l.units << ' ' << l.layers << ' ' << l.dense_hidden << ' ' << l.epochs << ' '
	    << fmt17(l.initial_lr) << ' ' << l.lr_drop_period << ' ' << fmt17(l.lr_drop_factor) << ' ' << l.batch_size
	    << '\n';
	for (std::size_t p = 0; p < net.params.size(); ++p) {
		const Tensor &t = net.params[p];
		out << "param " << net.names[p] << ' ' << t.rank();
		for (auto d : t.shape()) {
			out << ' ' << d;
		}
		for (double v : t.data()) {
			out << ' ' << fmt17(v);
		}
		out << '\n';
	}
	out << "loss " << m.loss_curve.size();
	for (double v : m.loss_curve) {
		out << ' ' << fmt17(v);
	}
	out << "\nendnetwork\n";
}

NeuralModel read_model(Reader &r) {
	NeuralModel m;
	Network &net = m.network;
	net.kind = parse_network_kind(r.expect("kind", 1)[1]);
	m.horizon = r.count(r.expect("horizon", 1)[1]);
	net.window = r.count(r.expect("window", 1)[1]);
	m.step_minutes = static_cast<int>(r.count(r.expect("step_minutes", 1)[1]));
	m.daylight = DaylightWindow::parse(r.expect("daylight", 1)[1]);
	m.difference_input = r.expect("difference", 1)[1] == "1";
	auto sc = r.expect("scaler", 2);
	m.scaler = Scaler{r.number(sc[1]), r.number(sc[2])};
	auto cv = r.expect("conv", 7);
	net.conv.kernel_count = r.count(cv[1]);
	net.conv.kernel_size = r.count(cv[2]);
	net.conv.pool_size = r.count(cv[3]);
	net.conv.learning_rate = r.number(cv[4]);
	net.conv.batch_size = r.count(cv[5]);
	net.conv.epochs = r.count(cv[6]);
	const std::size_t nh = r.count(cv[7]);
	if (cv.size() != 8 + nh) {
		r.fail("conv record has wrong length");
	}
	net.conv.hidden.clear();
	for (std::size_t i = 0; i < nh; ++i) {
		net.conv.hidden.push_back(r.count(cv[8 + i]));
	}
	auto ls = r.expect("lstm", 8);
	net.lstm.units = r.count(ls[1]);
	net.lstm.layers = r.count(ls[2]);
	net.lstm.dense_hidden = r.count(ls[3]);
	net.lstm.epochs = r.count(ls[4]);
	net.lstm.initial_lr = r.number(ls[5]);
	net.lstm.lr_drop_period = r.count(ls[6]);
	net.lstm.lr_drop_factor = r.number(ls[7]);
	net.lstm.batch_size = r.count(ls[8]);

	// Build the architecture to validate parameter names and shapes.
	const Network shape_ref = net.kind == NetworkKind::cnn ? make_cnn(net.window, net.conv, 0)
	                                                        : make_lstm(net.window, net.lstm, 0);
	for (;;) {
		auto toks = r.next();
		if (toks.empty()) {
			r.fail("unexpected end of file inside network block");
		}
		if (toks[0] == "param") {
			if (toks.size() < 3) {
				r.fail("truncated param record");
			}
			const std::size_t rank = r.count(toks[2]);
			if (toks.size() < 3 + rank) {
				r.fail("truncated param shape");
			}
			std::vector<std::size_t> shape;
			for (std::size_t i = 0; i < rank; ++i) {
				shape.push_back(r.count(toks[3 + i]));
			}
			std::vector<double> data;
			for (std::size_t i = 3 + rank; i < toks.size(); ++i) {
				data.push_back(r.number(toks[i]));
			}
			try {
				net.params.emplace_back(shape, std::move(data));
			} catch (const UsageError &e) {
				r.fail(std::string("param ") + toks[1] + ": " + e.what());
			}
			net.names.push_back(toks[1]);
		} else if (toks[0] == "loss") {
			const std::size_t n = r.count(toks[1]);
			if (toks.size() != n + 2) {
				r.fail("loss record has wrong length");
			}
			for (std::size_t i = 0; i < n; ++i) {
				m.loss_curve.push_back(r.number(toks[2 + i]));
			}
		} else if (toks[0] == "endnetwork") {
			break;
		} else {
			r.fail("unknown record '" + toks[0] + "'");
		}
	}
	if (net.names != shape_ref.names) {
		r.fail("parameter list does not match the " + to_string(net.kind) + " architecture");
	}
	for (std::size_t p = 0; p < net.params.size(); ++p) {
		if (!net.params[p].same_shape(shape_ref.params[p])) {
			r.fail("parameter " + net.names[p] + " has the wrong shape");
		}
	}
	return m;
}

} // namespace

void save_nn_models(std::span<const NeuralModel> models, const std::filesystem::path &path,
                    const std::vector<std::string> &comments) {
	std::ofstream out(path, std::ios::binary);
	if (!out) {
		throw DataError("cannot write " + path.string());
	}
	out << "nn-model v1\n";
	for (const auto &c : comments) {
		out << "# " << c << '\n';
	}
	out << "networks " << models.size() << '\n';
	for (const auto &m : models) {
		write_model(m, out);
	}
	out << "end\n";
	if (!out) {
		throw DataError("write failed for " + path.string());
	}
}

std::vector<NeuralModel> load_nn_models(const std::filesystem::path &path) {
	std::ifstream in(path);
	if (!in) {
		throw DataError("cannot open " + path.string());
	}
	std::string first;
	if (!std::getline(in, first) || first != "nn-model v1") {
		throw DataError(path.string() + ": not an nn-model v1 file");
	}
	Reader r(in, path);
	const std::size_t n = r.count(r.expect("networks", 1)[1]);
	std::vector<NeuralModel> models;
	for (std::size_t i = 0; i < n; ++i) {
		r.expect("network", 0);
		try {
			models.push_back(read_model(r));
		} catch (const UsageError &e) {
			// Bad enum or architecture values are a property of the file.
			r.fail(e.what());
		}
	}
	r.expect("end", 0);
	return models;
}

} // namespace solarcast::nn
