#pragma once

#include <string>

namespace birelay {

// Full-precision decimal form of a double (%.17g): parses back to the same
// bits, so emitted tables are exact.
std::string format_double(double x);

// Current UTC time as an ISO 8601 stamp, e.g. 2026-01-31T09:30:00Z.
std::string iso8601_utc_now();

}  // namespace birelay
