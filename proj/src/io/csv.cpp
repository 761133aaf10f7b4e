#include "casikit/io/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "casikit/errors.hpp"

namespace casikit::io {

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  for (auto& f : out) {
    while (!f.empty() && (f.front() == ' ' || f.front() == '\t')) f.erase(f.begin());
    while (!f.empty() && (f.back() == ' ' || f.back() == '\t')) f.pop_back();
  }
  return out;
}

}  // namespace

CsvTable parse_csv(const std::string& text) {
  CsvTable t;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    auto fields = split_fields(line);
    if (!have_header) {
      t.header = fields;
      have_header = true;
      continue;
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& f : fields) {
      char* end = nullptr;
      const double v = std::strtod(f.c_str(), &end);
      if (end == f.c_str() || *end != '\0')
        throw FormatError("CSV line " + std::to_string(lineno) + ": bad numeric field '" + f + "'");
      row.push_back(v);
    }
    if (row.size() != t.header.size())
      throw FormatError("CSV line " + std::to_string(lineno) + ": expected " +
                        std::to_string(t.header.size()) + " fields, got " +
                        std::to_string(row.size()));
    t.rows.push_back(std::move(row));
  }
  if (!have_header) throw FormatError("CSV: no header line found");
  return t;
}

CsvTable read_csv_file(const std::string& path, const std::vector<std::string>& expected_header,
                       std::size_t optional_tail) {
  CsvTable t = parse_csv(read_text_file(path));
  const std::size_t required = expected_header.size() - optional_tail;
  if (t.header.size() < required || t.header.size() > expected_header.size())
    throw FormatError(path + ": expected header like '" + [&] {
      std::string h;
      for (std::size_t i = 0; i < expected_header.size(); ++i)
        h += (i ? "," : "") + expected_header[i];
      return h;
    }() + "'");
  for (std::size_t i = 0; i < t.header.size(); ++i)
    if (t.header[i] != expected_header[i])
      throw FormatError(path + ": header column " + std::to_string(i + 1) + " is '" +
                        t.header[i] + "', expected '" + expected_header[i] + "'");
  return t;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read failure on '" + path + "'");
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw IoError("write failure on '" + path + "'");
}

}  // namespace casikit::io
