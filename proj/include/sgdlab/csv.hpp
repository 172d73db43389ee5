#ifndef SGDLAB_CSV_HPP
#define SGDLAB_CSV_HPP

#include <string>
#include <vector>

namespace sgdlab {

// Minimal CSV writer with locale-independent, round-trippable numbers
// (%.17g) so repeated runs produce byte-identical files.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& columns);
    ~CsvWriter();

    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;

    void row(const std::vector<double>& values);
    void row_raw(const std::vector<std::string>& values);

    static std::string format(double v);

private:
    std::string path_;
    void* file_ = nullptr;
    std::size_t n_cols_ = 0;
};

void write_text_file(const std::string& path, const std::string& content);
void ensure_directory(const std::string& path);

}  // namespace sgdlab

#endif  // SGDLAB_CSV_HPP
