#pragma once

#include <stdexcept>
#include <string>

namespace solarcast {

/// Bad input data: malformed files, irregular grids, invalid series.
class DataError : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

/// Numerical failure: rank deficiency, divergence, singular recursions.
class NumericalError : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

/// Invalid arguments or configuration supplied by the caller.
class UsageError : public std::invalid_argument {
public:
	using std::invalid_argument::invalid_argument;
};

// Process exit codes used by the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitNumerical = 3;

/// Maps the currently handled exception to an exit code. Must be called from a catch block.
int exit_code_for_current_exception() noexcept;

} // namespace solarcast
