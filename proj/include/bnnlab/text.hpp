#ifndef BNNLAB_TEXT_HPP
#define BNNLAB_TEXT_HPP

#include <string>
#include <string_view>
#include <vector>

namespace bnnlab {

/// Shortest decimal representation that round-trips the double exactly.
std::string format_double(double x);

/// Strict double parse of the whole token. Throws std::invalid_argument.
double parse_double(std::string_view token);

/// Strict integer parses of the whole token.
long long parse_int(std::string_view token);
std::uint64_t parse_uint64(std::string_view token);

std::vector<std::string> split(std::string_view text, char delim);

std::string join_doubles(const std::vector<double>& xs, char delim);

} // namespace bnnlab

#endif
