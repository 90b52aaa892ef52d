#include "binlab/csv.hpp"

#include <cstdio>

namespace binlab {

std::string format_fixed6(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", value);
  return buf;
}

void CsvWriter::comment(std::string_view line) { out_ << "# " << line << '\n'; }

void CsvWriter::separator() {
  if (row_started_) out_ << ',';
  row_started_ = true;
}

CsvWriter& CsvWriter::field(std::string_view value) {
  separator();
  if (value.find_first_of(",\"\n\r") == std::string_view::npos) {
    out_ << value;
    return *this;
  }
  out_ << '"';
  for (char ch : value) {
    if (ch == '"') out_ << '"';
    out_ << ch;
  }
  out_ << '"';
  return *this;
}

CsvWriter& CsvWriter::field(double value) { return field(std::string_view(format_fixed6(value))); }
CsvWriter& CsvWriter::field(int value) { return field(static_cast<long long>(value)); }
CsvWriter& CsvWriter::field(long value) { return field(static_cast<long long>(value)); }
CsvWriter& CsvWriter::field(long long value) {
  separator();
  out_ << value;
  return *this;
}
CsvWriter& CsvWriter::field(unsigned long value) {
  return field(static_cast<unsigned long long>(value));
}
CsvWriter& CsvWriter::field(unsigned long long value) {
  separator();
  out_ << value;
  return *this;
}
CsvWriter& CsvWriter::field(bool value) {
  separator();
  out_ << (value ? "true" : "false");
  return *this;
}

void CsvWriter::end_row() {
  out_ << '\n';
  row_started_ = false;
}

}  // namespace binlab
