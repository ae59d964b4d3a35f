#include "rfde/tomlmini.hpp"

#include <cctype>
#include <charconv>

namespace rfde::toml {

namespace {

using nlohmann::json;

struct Cursor {
    std::string_view s;
    std::size_t i = 0;
    int line = 1;

    bool eof() const { return i >= s.size(); }
    char peek() const { return s[i]; }
    void skip_ws() {
        while (!eof() && (s[i] == ' ' || s[i] == '\t'))
            ++i;
    }
};

[[noreturn]] void fail(const Cursor& c, const std::string& msg) { throw TomlError(msg, c.line); }

bool is_bare_key_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

std::string parse_bare_key(Cursor& c) {
    std::size_t start = c.i;
    while (!c.eof() && is_bare_key_char(c.peek()))
        ++c.i;
    if (c.i == start)
        fail(c, "expected a key");
    return std::string(c.s.substr(start, c.i - start));
}

std::string parse_string(Cursor& c) {
    ++c.i; // opening quote
    std::string out;
    while (true) {
        if (c.eof() || c.peek() == '\n')
            fail(c, "unterminated string");
        char ch = c.s[c.i++];
        if (ch == '"')
            return out;
        if (ch == '\\') {
            if (c.eof())
                fail(c, "unterminated escape");
            char esc = c.s[c.i++];
            switch (esc) {
                case '"': out += '"'; break;
                case '\\': out += '\\'; break;
                case 'n': out += '\n'; break;
                case 't': out += '\t'; break;
                case 'r': out += '\r'; break;
                default: fail(c, std::string("unsupported escape '\\") + esc + "'");
            }
        } else {
            out += ch;
        }
    }
}

json parse_value(Cursor& c);

json parse_array(Cursor& c) {
    ++c.i; // '['
    json arr = json::array();
    c.skip_ws();
    if (!c.eof() && c.peek() == ']') {
        ++c.i;
        return arr;
    }
    while (true) {
        c.skip_ws();
        arr.push_back(parse_value(c));
        c.skip_ws();
        if (c.eof() || c.peek() == '\n')
            fail(c, "unterminated array (arrays must be single-line)");
        char ch = c.s[c.i++];
        if (ch == ']')
            return arr;
        if (ch != ',')
            fail(c, "expected ',' or ']' in array");
    }
}

json parse_number(Cursor& c) {
    std::size_t start = c.i;
    bool is_float = false;
    if (!c.eof() && (c.peek() == '+' || c.peek() == '-'))
        ++c.i;
    while (!c.eof()) {
        char ch = c.peek();
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            ++c.i;
        } else if (ch == '.' || ch == 'e' || ch == 'E') {
            is_float = true;
            ++c.i;
            if (!c.eof() && (c.peek() == '+' || c.peek() == '-') && (ch == 'e' || ch == 'E'))
                ++c.i;
        } else {
            break;
        }
    }
    std::string_view text = c.s.substr(start, c.i - start);
    if (is_float) {
        double v = 0;
        auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc{} || end != text.data() + text.size())
            fail(c, "malformed number '" + std::string(text) + "'");
        return v;
    }
    long long v = 0;
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || end != text.data() + text.size())
        fail(c, "malformed number '" + std::string(text) + "'");
    return v;
}

json parse_value(Cursor& c) {
    if (c.eof())
        fail(c, "expected a value");
    char ch = c.peek();
    if (ch == '"')
        return parse_string(c);
    if (ch == '[')
        return parse_array(c);
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '+' || ch == '-' || ch == '.')
        return parse_number(c);
    if (c.s.substr(c.i, 4) == "true" && (c.i + 4 >= c.s.size() || !is_bare_key_char(c.s[c.i + 4]))) {
        c.i += 4;
        return true;
    }
    if (c.s.substr(c.i, 5) == "false" &&
        (c.i + 5 >= c.s.size() || !is_bare_key_char(c.s[c.i + 5]))) {
        c.i += 5;
        return false;
    }
    fail(c, "unrecognized value");
}

void expect_line_end(Cursor& c) {
    c.skip_ws();
    if (!c.eof() && c.peek() == '#') {
        while (!c.eof() && c.peek() != '\n')
            ++c.i;
    }
    if (c.eof())
        return;
    if (c.peek() != '\n')
        fail(c, "unexpected trailing characters");
    ++c.i;
    ++c.line;
}

} // namespace

nlohmann::json parse(std::string_view text) {
    Cursor c{text};
    json root = json::object();
    json* current = &root;

    while (!c.eof()) {
        c.skip_ws();
        if (c.eof())
            break;
        char ch = c.peek();
        if (ch == '\n' || ch == '#') {
            expect_line_end(c);
            continue;
        }
        if (ch == '[') {
            ++c.i;
            bool array_of_tables = !c.eof() && c.peek() == '[';
            if (array_of_tables)
                ++c.i;
            c.skip_ws();
            std::string name = parse_bare_key(c);
            c.skip_ws();
            if (c.eof() || c.peek() != ']')
                fail(c, "expected ']' after table name");
            ++c.i;
            if (array_of_tables) {
                if (c.eof() || c.peek() != ']')
                    fail(c, "expected ']]' after array-of-tables name");
                ++c.i;
                if (root.contains(name) && !root[name].is_array())
                    fail(c, "'" + name + "' is already a plain table");
                root[name].push_back(json::object());
                current = &root[name].back();
            } else {
                if (root.contains(name))
                    fail(c, "duplicate table '" + name + "'");
                root[name] = json::object();
                current = &root[name];
            }
            expect_line_end(c);
            continue;
        }
        std::string key = parse_bare_key(c);
        c.skip_ws();
        if (c.eof() || c.peek() != '=')
            fail(c, "expected '=' after key '" + key + "'");
        ++c.i;
        c.skip_ws();
        if (current->contains(key))
            fail(c, "duplicate key '" + key + "'");
        (*current)[key] = parse_value(c);
        expect_line_end(c);
    }
    return root;
}

} // namespace rfde::toml
