#include "solarcast/errors.hpp"

#include <filesystem>

namespace solarcast {

int exit_code_for_current_exception() noexcept {
	try {
		throw;
	} catch (const DataError &) {
		return kExitData;
	} catch (const NumericalError &) {
		return kExitNumerical;
	} catch (const UsageError &) {
		return kExitUsage;
	} catch (const std::filesystem::filesystem_error &) {
		return kExitData;
	} catch (...) {
		return kExitUsage;
	}
}

} // namespace solarcast
