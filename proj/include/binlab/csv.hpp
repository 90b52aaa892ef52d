#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

namespace binlab {

// Minimal CSV row writer. Fields containing commas, quotes or newlines are
// quoted; doubles are written with six decimals.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void comment(std::string_view line);

  CsvWriter& field(std::string_view value);
  CsvWriter& field(const char* value) { return field(std::string_view(value)); }
  CsvWriter& field(const std::string& value) { return field(std::string_view(value)); }
  CsvWriter& field(double value);
  CsvWriter& field(int value);
  CsvWriter& field(long value);
  CsvWriter& field(long long value);
  CsvWriter& field(unsigned long value);
  CsvWriter& field(unsigned long long value);
  CsvWriter& field(bool value);
  void end_row();

 private:
  void separator();

  std::ostream& out_;
  bool row_started_ = false;
};

std::string format_fixed6(double value);

}  // namespace binlab
