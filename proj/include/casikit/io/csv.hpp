#pragma once

#include <string>
#include <vector>

namespace casikit::io {

/// Round-trip decimal formatting (17 significant digits).
std::string format_full(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Parse CSV text: '#' lines are comments, the first data line is the
/// header, every following line must carry the same number of numeric
/// fields. Throws FormatError with a line number on malformed input.
CsvTable parse_csv(const std::string& text);

/// Read + parse, checking the header matches `expected_header` up to
/// `optional_tail` trailing columns that may be absent.
CsvTable read_csv_file(const std::string& path, const std::vector<std::string>& expected_header,
                       std::size_t optional_tail = 0);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace casikit::io
