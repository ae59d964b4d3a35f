#pragma once

#include <string>

namespace rfde::csv {

// Shortest-faithful decimal form with 17 significant digits; round-trips
// doubles exactly and keeps all emitted numbers byte-stable across runs.
std::string g17(double v);

} // namespace rfde::csv
