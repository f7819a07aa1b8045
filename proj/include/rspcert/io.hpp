#pragma once

// Problem file ingestion.
//
// CSV: one matrix row per line, comma-separated decimals; blank lines are
// ignored. Vectors are single-column CSV (one value per line).
// MatrixMarket: "%%MatrixMarket matrix array real general", '%' comments, a
// "rows cols" line, then rows*cols values in column-major order.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "rspcert/errors.hpp"
#include "rspcert/matrix.hpp"

namespace rspcert {

class ParseError : public Error {
  public:
    ParseError(std::string source, std::size_t line, std::size_t column, const std::string& message)
        : Error(ErrorKind::Parse, source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + message),
          source_(std::move(source)), line_(line), column_(column) {}

    [[nodiscard]] const std::string& source() const noexcept { return source_; }
    [[nodiscard]] std::size_t line() const noexcept { return line_; }
    [[nodiscard]] std::size_t column() const noexcept { return column_; }

  private:
    std::string source_;
    std::size_t line_;
    std::size_t column_;
};

namespace detail {

struct Token {
    std::string_view text;
    std::size_t line;
    std::size_t column;
};

inline std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        std::string_view line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        lines.push_back(line);
        if (end == text.size()) {
            break;
        }
        start = end + 1;
    }
    return lines;
}

inline bool is_blank(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

inline double parse_number(const Token& tok, const std::string& source) {
    std::string_view t = tok.text;
    std::size_t lead = 0;
    while (lead < t.size() && std::isspace(static_cast<unsigned char>(t[lead]))) {
        ++lead;
    }
    t.remove_prefix(lead);
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) {
        t.remove_suffix(1);
    }
    const std::size_t column = tok.column + lead;
    if (t.empty()) {
        throw ParseError(source, tok.line, column, "empty field");
    }
    if (t.front() == '+') {
        t.remove_prefix(1);
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc() || ptr != t.data() + t.size()) {
        throw ParseError(source, tok.line, column, "not a decimal number: '" + std::string(tok.text) + "'");
    }
    if (!std::isfinite(value)) {
        throw ParseError(source, tok.line, column, "non-finite value");
    }
    return value;
}

inline bool starts_with_ci(std::string_view s, std::string_view prefix) {
    if (s.size() < prefix.size()) {
        return false;
    }
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(s[i])) != std::tolower(static_cast<unsigned char>(prefix[i]))) {
            return false;
        }
    }
    return true;
}

inline std::vector<Token> whitespace_tokens(std::string_view line, std::size_t line_no) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
        }
        const std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
        }
        if (i > start) {
            out.push_back({line.substr(start, i - start), line_no, start + 1});
        }
    }
    return out;
}

inline std::size_t parse_dimension(const Token& tok, const std::string& source) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), v);
    if (ec != std::errc() || ptr != tok.text.data() + tok.text.size() || v == 0) {
        throw ParseError(source, tok.line, tok.column, "expected a positive integer dimension");
    }
    return v;
}

inline Matrix parse_matrix_market(const std::vector<std::string_view>& lines, const std::string& source) {
    const std::string_view header = lines.front();
    const auto words = whitespace_tokens(header, 1);
    auto word_is = [&](std::size_t i, std::string_view want) {
        return i < words.size() && words[i].text.size() == want.size() && starts_with_ci(words[i].text, want);
    };
    if (!(word_is(1, "matrix") && word_is(2, "array") && word_is(3, "real") && word_is(4, "general"))) {
        throw ParseError(source, 1, 1, "only 'matrix array real general' MatrixMarket files are supported");
    }
    std::vector<Token> tokens;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (!lines[i].empty() && lines[i].front() == '%') {
            continue;
        }
        auto more = whitespace_tokens(lines[i], i + 1);
        tokens.insert(tokens.end(), more.begin(), more.end());
    }
    if (tokens.size() < 2) {
        throw ParseError(source, lines.size(), 1, "missing 'rows cols' size line");
    }
    const std::size_t rows = parse_dimension(tokens[0], source);
    const std::size_t cols = parse_dimension(tokens[1], source);
    if (tokens.size() - 2 != rows * cols) {
        const auto& last = tokens.back();
        throw ParseError(source, last.line, last.column,
                         "expected " + std::to_string(rows * cols) + " values, found " +
                             std::to_string(tokens.size() - 2));
    }
    Matrix m(rows, cols);
    for (std::size_t k = 0; k < rows * cols; ++k) {
        m(k % rows, k / rows) = parse_number(tokens[k + 2], source);
    }
    return m;
}

inline Matrix parse_csv(const std::vector<std::string_view>& lines, const std::string& source) {
    std::vector<Vec> rows;
    std::size_t width = 0;
    std::size_t first_line = 0;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::string_view line = lines[i];
        if (is_blank(line)) {
            continue;
        }
        Vec row;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            const std::size_t end = comma == std::string_view::npos ? line.size() : comma;
            row.push_back(parse_number({line.substr(start, end - start), i + 1, start + 1}, source));
            if (comma == std::string_view::npos) {
                break;
            }
            start = comma + 1;
        }
        if (rows.empty()) {
            width = row.size();
            first_line = i + 1;
        } else if (row.size() != width) {
            throw ParseError(source, i + 1, 1,
                             "row has " + std::to_string(row.size()) + " fields, line " +
                                 std::to_string(first_line) + " has " + std::to_string(width));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw ParseError(source, 1, 1, "no data");
    }
    return Matrix(rows);
}

} // namespace detail

/// Parses CSV or MatrixMarket-array text; `source` names the input in errors.
inline Matrix parse_matrix(std::string_view text, const std::string& source = "<input>") {
    const auto lines = detail::split_lines(text);
    if (!lines.empty() && detail::starts_with_ci(lines.front(), "%%MatrixMarket")) {
        return detail::parse_matrix_market(lines, source);
    }
    return detail::parse_csv(lines, source);
}

/// A vector is a one-column matrix.
inline Vec parse_vector(std::string_view text, const std::string& source = "<input>") {
    const Matrix m = parse_matrix(text, source);
    if (m.cols() != 1) {
        throw ParseError(source, 1, 1, "expected a single column, found " + std::to_string(m.cols()));
    }
    return m.column(0);
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::InvalidArgument, "cannot open " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Matrix read_matrix_file(const std::string& path) { return parse_matrix(read_text_file(path), path); }

inline Vec read_vector_file(const std::string& path) { return parse_vector(read_text_file(path), path); }

/// CSV with round-trip precision.
inline std::string to_csv(const Matrix& m) {
    std::string out;
    char buf[32];
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, m(i, j));
            (void)ec;
            if (j) {
                out += ',';
            }
            out.append(buf, ptr);
        }
        out += '\n';
    }
    return out;
}

} // namespace rspcert
