#include "solarcast/least_squares.hpp"

#include "solarcast/errors.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <string>

namespace solarcast {

void Matrix::append_row(std::span<const double> values) {
	if (rows_ == 0 && cols_ == 0) {
		cols_ = values.size();
	}
	if (values.size() != cols_) {
		throw UsageError("row width " + std::to_string(values.size()) + " does not match " + std::to_string(cols_));
	}
	data_.insert(data_.end(), values.begin(), values.end());
	++rows_;
}

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const RowMajor> view(const Matrix &x) {
	return {x.data().data(), static_cast<Eigen::Index>(x.rows()), static_cast<Eigen::Index>(x.cols())};
}

Eigen::Map<const Eigen::VectorXd> view(std::span<const double> v) {
	return {v.data(), static_cast<Eigen::Index>(v.size())};
}

std::vector<double> to_vector(const Eigen::VectorXd &v) {
	return {v.data(), v.data() + v.size()};
}

} // namespace

std::vector<double> solve_least_squares(const Matrix &x, std::span<const double> y) {
	const std::size_t n = x.rows();
	const std::size_t m = x.cols();
	if (y.size() != n) {
		throw UsageError("target count does not match design rows");
	}
	if (m == 0 || n < m) {
		throw NumericalError("least squares needs at least as many rows (" + std::to_string(n) + ") as columns (" +
		                     std::to_string(m) + ")");
	}

	const Eigen::HouseholderQR<Eigen::MatrixXd> qr(view(x));
	const Eigen::VectorXd diag = qr.matrixQR().diagonal().cwiseAbs();
	const double max_diag = diag.maxCoeff();
	const double min_diag = diag.minCoeff();
	constexpr double kRankTol = 1e-12;
	if (!(min_diag > kRankTol * max_diag)) {
		const double cond = min_diag > 0.0 ? max_diag / min_diag : INFINITY;
		throw NumericalError("design matrix is rank deficient (|R| diagonal ratio " + std::to_string(cond) + ")");
	}
	return to_vector(qr.solve(view(y)));
}

std::vector<double> normal_residual(const Matrix &x, std::span<const double> y, std::span<const double> w) {
	const auto a = view(x);
	return to_vector(a.transpose() * (a * view(w) - view(y)));
}

std::vector<double> transpose_times(const Matrix &x, std::span<const double> y) {
	return to_vector(view(x).transpose() * view(y));
}

} // namespace solarcast
