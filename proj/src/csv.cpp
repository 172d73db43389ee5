#include "sgdlab/csv.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "sgdlab/errors.hpp"

namespace sgdlab {

CsvWriter::CsvWriter(const std::string& path,
                     const std::vector<std::string>& columns)
    : path_(path), n_cols_(columns.size()) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw config_error("csv: cannot open '" + path + "' for writing");
    file_ = f;
    std::string header;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) header += ',';
        header += columns[i];
    }
    header += '\n';
    std::fwrite(header.data(), 1, header.size(), f);
}

CsvWriter::~CsvWriter() {
    if (file_) std::fclose(static_cast<std::FILE*>(file_));
}

std::string CsvWriter::format(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void CsvWriter::row(const std::vector<double>& values) {
    std::vector<std::string> raw;
    raw.reserve(values.size());
    for (double v : values) raw.push_back(format(v));
    row_raw(raw);
}

void CsvWriter::row_raw(const std::vector<std::string>& values) {
    if (values.size() != n_cols_)
        throw config_error("csv: row width mismatch in '" + path_ + "'");
    std::string line;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) line += ',';
        line += values[i];
    }
    line += '\n';
    std::fwrite(line.data(), 1, line.size(), static_cast<std::FILE*>(file_));
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("cannot open '" + path + "' for writing");
    out << content;
}

void ensure_directory(const std::string& path) {
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (ec) throw config_error("cannot create directory '" + path + "'");
}

}  // namespace sgdlab
