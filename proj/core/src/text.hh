#pragma once

// Line-oriented parsing helpers shared by the text readers.

#include <lllmt/errors.hh>

#include <charconv>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace lllmt::text {

inline auto strip_comment(std::string line, char marker = '#') -> std::string
{
    if (auto hash = line.find(marker); hash != std::string::npos)
        line.erase(hash);
    return line;
}

inline auto tokens(const std::string & line) -> std::vector<std::string>
{
    std::istringstream in(line);
    std::vector<std::string> out;
    for (std::string tok; in >> tok;)
        out.push_back(tok);
    return out;
}

template <typename T>
auto parse_number(std::string_view text, std::size_t line, const char * field) -> T
{
    T value{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw InputError(line, std::string("bad ") + field + " '" + std::string(text) + "'");
    return value;
}

inline auto parse_real(std::string_view text, std::size_t line, const char * field) -> double
{
    // from_chars for double is missing from older standard libraries
    std::string s(text);
    std::size_t used = 0;
    double value = 0;
    try {
        value = std::stod(s, &used);
    }
    catch (const std::exception &) {
        throw InputError(line, std::string("bad ") + field + " '" + s + "'");
    }
    if (used != s.size())
        throw InputError(line, std::string("bad ") + field + " '" + s + "'");
    return value;
}

}
