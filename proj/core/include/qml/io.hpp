#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace qml {

// Shortest-precision-stable decimal form; reruns must be byte-identical.
std::string fmt_g(double v);

class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);
    void row(const std::vector<std::string>& cells);
    const std::string& path() const { return path_; }

  private:
    std::string path_;
    std::ofstream out_;
    std::size_t width_;
};

const char* version_string();

}  // namespace qml
