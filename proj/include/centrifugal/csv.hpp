#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace centrifugal {

/// 12 significant digits, '.' separator, "nan"/"inf" for non-finite values.
std::string format_number(double x);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  CsvTable& row(std::vector<std::string> cells);

  const std::vector<std::string>& header() const { return header_; }
  std::size_t size() const { return rows_.size(); }

  void write(std::ostream& out) const;
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Writes `content` to a temporary sibling of `path` and renames it into
/// place, so readers never observe a partial file.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace centrifugal
