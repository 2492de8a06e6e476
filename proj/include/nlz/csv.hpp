#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace nlz {

// 12 significant digits, shortest form ("%.12g"). All numeric output goes
// through this so reruns are bit-identical.
std::string format_sig(double x);

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& columns);

  void row(const std::vector<double>& values);
  void row(const std::vector<std::string>& cells);  // cells must not contain commas

 private:
  std::ofstream out_;
  std::size_t width_;
};

}  // namespace nlz
