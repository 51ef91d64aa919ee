#include "solarcast/timestamp.hpp"

#include "solarcast/errors.hpp"

#include <charconv>
#include <cstdio>

namespace solarcast {

namespace {

int parse_field(std::string_view text, std::size_t pos, std::size_t len) {
	if (pos + len > text.size()) {
		throw DataError("truncated timestamp '" + std::string(text) + "'");
	}
	int value = 0;
	const char *first = text.data() + pos;
	const char *last = first + len;
	auto [ptr, ec] = std::from_chars(first, last, value);
	if (ec != std::errc() || ptr != last) {
		throw DataError("malformed timestamp '" + std::string(text) + "'");
	}
	return value;
}

void expect_char(std::string_view text, std::size_t pos, char c) {
	if (pos >= text.size() || text[pos] != c) {
		throw DataError("malformed timestamp '" + std::string(text) + "'");
	}
}

} // namespace

Timestamp parse_timestamp(std::string_view text) {
	using namespace std::chrono;
	if (!text.empty() && text.back() == 'Z') {
		text.remove_suffix(1);
	}
	const int y = parse_field(text, 0, 4);
	expect_char(text, 4, '-');
	const int mo = parse_field(text, 5, 2);
	expect_char(text, 7, '-');
	const int d = parse_field(text, 8, 2);
	if (text.size() <= 10 || (text[10] != 'T' && text[10] != ' ')) {
		throw DataError("malformed timestamp '" + std::string(text) + "'");
	}
	const int hh = parse_field(text, 11, 2);
	expect_char(text, 13, ':');
	const int mm = parse_field(text, 14, 2);
	int ss = 0;
	if (text.size() > 16) {
		expect_char(text, 16, ':');
		ss = parse_field(text, 17, 2);
		if (text.size() != 19) {
			throw DataError("malformed timestamp '" + std::string(text) + "'");
		}
	}
	const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
	if (!ymd.ok() || hh > 23 || mm > 59 || ss > 59 || hh < 0 || mm < 0 || ss < 0) {
		throw DataError("invalid calendar value in timestamp '" + std::string(text) + "'");
	}
	return sys_days{ymd} + hours{hh} + minutes{mm} + seconds{ss};
}

std::string format_timestamp(Timestamp ts) {
	using namespace std::chrono;
	const auto day_start = floor<days>(ts);
	const year_month_day ymd{day_start};
	const hh_mm_ss tod{ts - day_start};
	char buf[64];
	std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02ld:%02ld:%02ld", static_cast<int>(ymd.year()),
	              static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
	              static_cast<long>(tod.hours().count()), static_cast<long>(tod.minutes().count()),
	              static_cast<long>(tod.seconds().count()));
	return buf;
}

int minute_of_day(Timestamp ts) {
	using namespace std::chrono;
	return static_cast<int>(duration_cast<minutes>(ts - floor<days>(ts)).count());
}

} // namespace solarcast
