#include "rfde/csvio.hpp"

#include <cstdio>

namespace rfde::csv {

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace rfde::csv
