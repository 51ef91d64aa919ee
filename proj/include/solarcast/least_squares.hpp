#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace solarcast {

/// Dense row-major matrix.
class Matrix {
public:
	Matrix() = default;
	Matrix(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

	std::size_t rows() const { return rows_; }
	std::size_t cols() const { return cols_; }
	double &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
	double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
	std::span<const double> row(std::size_t r) const { return std::span<const double>(data_).subspan(r * cols_, cols_); }
	std::span<double> row(std::size_t r) { return std::span<double>(data_).subspan(r * cols_, cols_); }
	std::span<const double> data() const { return data_; }

	/// Appends one row; the column count is fixed by the first row.
	void append_row(std::span<const double> values);

private:
	std::size_t rows_ = 0;
	std::size_t cols_ = 0;
	std::vector<double> data_;
};

/**
 * Minimizer of ||X w - y||^2 by Householder QR (Eigen).
 *
 * Throws NumericalError when X is rank deficient to working precision; the
 * message carries the ratio of the largest to smallest |R_ii|.
 */
std::vector<double> solve_least_squares(const Matrix &x, std::span<const double> y);

/// X^T (X w - y), the normal-equation residual.
std::vector<double> normal_residual(const Matrix &x, std::span<const double> y, std::span<const double> w);
/// X^T y
std::vector<double> transpose_times(const Matrix &x, std::span<const double> y);

} // namespace solarcast
