// SPDX-License-Identifier: Apache-2.0

#include "ltprune/text_format.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ltprune/tensor_io.hpp"

namespace ltprune {

std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc{}) {
        throw std::invalid_argument("format_double: value not representable");
    }
    return std::string(buf, ptr);
}

namespace {

std::string_view trim(std::string_view s) {
    const char* ws = " \t\r";
    auto begin = s.find_first_not_of(ws);
    if (begin == std::string_view::npos) {
        return {};
    }
    auto end = s.find_last_not_of(ws);
    return s.substr(begin, end - begin + 1);
}

}  // namespace

double parse_double(std::string_view text) {
    text = trim(text);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        throw std::invalid_argument("invalid float literal '" + std::string(text) + "'");
    }
    return value;
}

std::size_t parse_size(std::string_view text) {
    text = trim(text);
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        throw std::invalid_argument("invalid count literal '" + std::string(text) + "'");
    }
    return value;
}

std::map<std::string, std::string> parse_key_value_text(std::string_view text,
                                                        std::string_view origin) {
    std::map<std::string, std::string> out;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto eol = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        if (auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw std::invalid_argument(std::string(origin) + ": line " + std::to_string(line_no) +
                                        ": expected key=value, got '" + std::string(line) + "'");
        }
        std::string key(trim(line.substr(0, eq)));
        std::string value(trim(line.substr(eq + 1)));
        if (key.empty()) {
            throw std::invalid_argument(std::string(origin) + ": line " + std::to_string(line_no) +
                                        ": empty key");
        }
        out[key] = value;
    }
    return out;
}

std::map<std::string, std::string> parse_key_value_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw io_error("cannot open file: " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_key_value_text(buf.str(), path.string());
}

}  // namespace ltprune
