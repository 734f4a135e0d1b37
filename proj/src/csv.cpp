#include "mvdm/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

namespace mvdm::csv {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        std::string cell = line.substr(start, comma == std::string::npos ? comma : comma - start);
        // Trim surrounding blanks and a trailing carriage return.
        while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ' || cell.back() == '\t'))
            cell.pop_back();
        std::size_t lead = 0;
        while (lead < cell.size() && (cell[lead] == ' ' || cell[lead] == '\t')) ++lead;
        cells.push_back(cell.substr(lead));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return cells;
}

double parse_cell(const std::string& cell, const std::filesystem::path& path, std::size_t line_no,
                  std::size_t col_no) {
    double value = 0.0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end)
        throw invalid_input(path.string() + ":" + std::to_string(line_no) + ": column " +
                            std::to_string(col_no + 1) + " is not a number: '" + cell + "'");
    return value;
}

std::vector<std::vector<double>> read_rows(const std::filesystem::path& path, bool skip_header) {
    std::ifstream in(path);
    if (!in) throw invalid_input("cannot open file: " + path.string());

    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (skip_header && line_no == 1) continue;
        if (line.empty() || line == "\r") continue;
        const std::vector<std::string> cells = split_line(line);
        std::vector<double> row;
        row.reserve(cells.size());
        for (std::size_t c = 0; c < cells.size(); ++c)
            row.push_back(parse_cell(cells[c], path, line_no, c));
        if (width == 0) width = row.size();
        if (row.size() != width)
            throw invalid_input(path.string() + ":" + std::to_string(line_no) + ": has " +
                                std::to_string(row.size()) + " columns, expected " +
                                std::to_string(width));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw invalid_input(path.string() + ": no data rows");
    return rows;
}

void atomic_write(const std::filesystem::path& path, const std::string& contents) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw invalid_input("cannot write file: " + tmp.string());
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) throw numeric_error("short write to " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec)
        throw numeric_error("rename " + tmp.string() + " -> " + path.string() + ": " +
                            ec.message());
}

} // namespace

std::string format_double(double v) {
    char buf[32];
    const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf, static_cast<std::size_t>(n));
}

Matrix read_matrix(const std::filesystem::path& path, bool skip_header) {
    const auto rows = read_rows(path, skip_header);
    Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            m(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    return m;
}

std::vector<int> read_labels(const std::filesystem::path& path, bool skip_header) {
    const auto rows = read_rows(path, skip_header);
    std::vector<int> labels;
    labels.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != 1)
            throw invalid_input(path.string() + ": labels file must have one column, line " +
                                std::to_string(i + 1) + " has " + std::to_string(rows[i].size()));
        labels.push_back(static_cast<int>(rows[i][0]));
    }
    return labels;
}

void write_matrix(const std::filesystem::path& path, const Matrix& m) {
    std::string out;
    out.reserve(static_cast<std::size_t>(m.size()) * 20);
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            if (j > 0) out += ',';
            out += format_double(m(i, j));
        }
        out += '\n';
    }
    atomic_write(path, out);
}

void write_indexed_matrix(const std::filesystem::path& path, const Matrix& m) {
    std::string out;
    out.reserve(static_cast<std::size_t>(m.size()) * 20);
    for (Index i = 0; i < m.rows(); ++i) {
        out += std::to_string(i);
        for (Index j = 0; j < m.cols(); ++j) {
            out += ',';
            out += format_double(m(i, j));
        }
        out += '\n';
    }
    atomic_write(path, out);
}

void write_labels(const std::filesystem::path& path, const std::vector<int>& labels) {
    std::string out;
    for (int v : labels) {
        out += std::to_string(v);
        out += '\n';
    }
    atomic_write(path, out);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    atomic_write(path, text);
}

} // namespace mvdm::csv
