#pragma once

#include "mvdm/types.hpp"

#include <filesystem>
#include <string>

namespace mvdm::csv {

// Comma-separated numeric matrix; `skip_header` drops the first line.
// Malformed cells and ragged rows are reported with file and line.
Matrix read_matrix(const std::filesystem::path& path, bool skip_header = false);

std::vector<int> read_labels(const std::filesystem::path& path, bool skip_header = false);

// All writes go through a temp file in the target directory followed by a
// rename, so interrupted runs never leave partial artifacts.
void write_matrix(const std::filesystem::path& path, const Matrix& m);

// Matrix with a leading 0-based index column.
void write_indexed_matrix(const std::filesystem::path& path, const Matrix& m);

void write_labels(const std::filesystem::path& path, const std::vector<int>& labels);

void write_text(const std::filesystem::path& path, const std::string& text);

// Shortest round-trip formatting of a double.
std::string format_double(double v);

} // namespace mvdm::csv
