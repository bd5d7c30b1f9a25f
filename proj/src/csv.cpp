#include "mebo/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace mebo {

namespace {

[[noreturn]] void parse_fail(std::string_view source, std::size_t line, std::size_t column, const std::string& what) {
    std::ostringstream os;
    os << source << ": row " << line << ", column " << column << ": " << what;
    throw Error(ErrorCode::parse_error, os.str());
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

// Calls fn(line_number, line) for every non-blank line.
template <class Fn>
void for_each_line(std::string_view text, Fn&& fn) {
    std::size_t line_no = 0;
    while (!text.empty()) {
        const std::size_t end = text.find('\n');
        std::string_view line = text.substr(0, end);
        text = end == std::string_view::npos ? std::string_view{} : text.substr(end + 1);
        ++line_no;
        if (!trim(line).empty()) fn(line_no, line);
    }
}

template <class T>
T parse_cell(std::string_view cell, std::string_view source, std::size_t line, std::size_t column) {
    cell = trim(cell);
    if (cell.empty()) parse_fail(source, line, column, "empty cell");
    if (cell.front() == '+') cell.remove_prefix(1);
    T value{};
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
        parse_fail(source, line, column, "not a number: '" + std::string(cell) + "'");
    }
    if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(value)) parse_fail(source, line, column, "non-finite value");
    }
    return value;
}

}  // namespace

Dataset parse_points_csv(std::string_view text, std::string_view source) {
    std::vector<double> values;
    std::size_t rows = 0;
    std::size_t width = 0;
    for_each_line(text, [&](std::size_t line_no, std::string_view line) {
        std::size_t column = 0;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            const std::string_view cell = line.substr(start, comma == std::string_view::npos ? comma : comma - start);
            ++column;
            values.push_back(parse_cell<double>(cell, source, line_no, column));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (rows == 0) {
            width = column;
        } else if (column != width) {
            std::ostringstream os;
            os << "expected " << width << " columns, found " << column;
            parse_fail(source, line_no, std::min(column, width) + 1, os.str());
        }
        ++rows;
    });
    if (rows == 0) {
        throw Error(ErrorCode::parse_error, std::string(source) + ": no data rows");
    }
    return Dataset(rows, width, std::move(values));
}

Dataset read_points_csv(const std::filesystem::path& path) { return parse_points_csv(read_file(path), path.string()); }

std::string format_points_csv(const Dataset& ds) {
    std::string out;
    char buf[64];
    for (Index i = 0; i < ds.size(); ++i) {
        const PointRef r = ds.row(i);
        for (std::size_t j = 0; j < r.size(); ++j) {
            if (j) out.push_back(',');
            const auto res = std::to_chars(buf, buf + sizeof buf, r[j]);
            out.append(buf, res.ptr);
        }
        out.push_back('\n');
    }
    return out;
}

void write_points_csv(const Dataset& ds, const std::filesystem::path& path) { write_file(path, format_points_csv(ds)); }

std::vector<int> parse_labels_csv(std::string_view text, std::string_view source) {
    std::vector<int> labels;
    for_each_line(text, [&](std::size_t line_no, std::string_view line) {
        if (line.find(',') != std::string_view::npos) parse_fail(source, line_no, 2, "labels take one column");
        const int v = parse_cell<int>(line, source, line_no, 1);
        if (v < 0) parse_fail(source, line_no, 1, "labels must be nonnegative");
        labels.push_back(v);
    });
    return labels;
}

std::vector<int> read_labels_csv(const std::filesystem::path& path) {
    return parse_labels_csv(read_file(path), path.string());
}

void write_labels_csv(const std::vector<int>& labels, const std::filesystem::path& path) {
    std::string out;
    for (int v : labels) {
        out += std::to_string(v);
        out.push_back('\n');
    }
    write_file(path, out);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::io_error, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw Error(ErrorCode::io_error, "read failed: " + path.string());
    return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::io_error, "cannot write " + path.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error(ErrorCode::io_error, "write failed: " + path.string());
}

}  // namespace mebo
