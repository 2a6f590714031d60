#include "bnnlab/text.hpp"

#include <charconv>
#include <cstdint>
#include <stdexcept>

namespace bnnlab {

std::string format_double(double x) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    if (ec != std::errc()) {
        throw std::runtime_error("format_double: conversion failed");
    }
    return std::string(buf, ptr);
}

double parse_double(std::string_view token) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
        throw std::invalid_argument("parse_double: bad token '" + std::string(token) + "'");
    }
    return value;
}

long long parse_int(std::string_view token) {
    long long value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
        throw std::invalid_argument("parse_int: bad token '" + std::string(token) + "'");
    }
    return value;
}

std::uint64_t parse_uint64(std::string_view token) {
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
        throw std::invalid_argument("parse_uint64: bad token '" + std::string(token) + "'");
    }
    return value;
}

std::vector<std::string> split(std::string_view text, char delim) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = text.find(delim, start);
        if (pos == std::string_view::npos) {
            out.emplace_back(text.substr(start));
            break;
        }
        out.emplace_back(text.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

std::string join_doubles(const std::vector<double>& xs, char delim) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i > 0) out.push_back(delim);
        out += format_double(xs[i]);
    }
    return out;
}

} // namespace bnnlab
