#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace borromean {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::uint64_t fnv1a64(const std::string& bytes);
std::string fnv1a_hex(const std::string& bytes);

std::string read_file(const std::filesystem::path& path);

// Refuses to replace an existing file unless overwrite is set.
void write_file(const std::filesystem::path& path, const std::string& content, bool overwrite);

// Minimal CSV table: header plus numeric/text rows. Manifest lines are emitted
// as leading '#' comments so the file is self-describing.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
  std::string render(const nlohmann::json& manifest) const;
};

std::string format_double(double v, int precision = 10);

}  // namespace borromean
