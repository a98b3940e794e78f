#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace hybridsec {

// Shortest representation that parses back to the same double.
std::string format_real(double value);

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::string_view header);

  CsvWriter& field(std::string_view text);
  CsvWriter& field(double value);
  CsvWriter& field(long long value);
  CsvWriter& field(int value) { return field(static_cast<long long>(value)); }
  CsvWriter& field(std::uint64_t value) { return field(static_cast<long long>(value)); }
  void end_row();
  void close();

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  bool first_ = true;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(std::string_view name) const;  // -1 when absent
};

CsvTable read_csv(const std::filesystem::path& path);

}  // namespace hybridsec
