#pragma once

#include <json.hpp>

#include <stdexcept>
#include <string>
#include <string_view>

namespace rfde::toml {

class TomlError : public std::runtime_error {
public:
    TomlError(const std::string& what, int line)
        : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line(line) {}
    int line;
};

// Reads the TOML subset the problem specs use: # comments, bare keys,
// strings with \" \\ \n \t \r escapes, integer/float numbers, booleans,
// single-line arrays of scalars, [table] and [[array-of-table]] headers
// (single-level names). Returns the document as a JSON object.
nlohmann::json parse(std::string_view text);

} // namespace rfde::toml
