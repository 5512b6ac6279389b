#include "qml/io.hpp"

#include <cstdio>
#include <stdexcept>

#include "qml/version.hpp"

namespace qml {

std::string fmt_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : path_(path), out_(path), width_(header.size()) {
    if (!out_) throw std::runtime_error("cannot open for writing: " + path);
    row(header);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != width_) throw std::invalid_argument("csv row width mismatch: " + path_);
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        out_ << cells[i];
    }
    out_ << '\n';
    if (!out_) throw std::runtime_error("write failure: " + path_);
}

const char* version_string() { return QML_VERSION_STRING; }

}  // namespace qml
