#pragma once

#include "locorth/errors.hpp"

#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace locorth::detail {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << text;
}

/// A non-blank line with its comment stripped, split on whitespace.
struct Line {
    std::size_t number;
    std::vector<std::string> tokens;
};

inline std::vector<Line> tokenize_lines(const std::string& text) {
    std::vector<Line> lines;
    std::istringstream in(text);
    std::string raw;
    std::size_t number = 0;
    while (std::getline(in, raw)) {
        ++number;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        std::istringstream ls(raw);
        Line line{number, {}};
        for (std::string tok; ls >> tok;) line.tokens.push_back(tok);
        if (!line.tokens.empty()) lines.push_back(std::move(line));
    }
    return lines;
}

[[noreturn]] inline void fail_at(std::size_t line, const std::string& message) {
    throw InputError("line " + std::to_string(line) + ": " + message);
}

inline int parse_int(const std::string& tok, std::size_t line) {
    try {
        std::size_t used = 0;
        int v = std::stoi(tok, &used);
        if (used != tok.size()) fail_at(line, "expected an integer, got '" + tok + "'");
        return v;
    } catch (const std::logic_error&) {
        fail_at(line, "expected an integer, got '" + tok + "'");
    }
}

} // namespace locorth::detail
