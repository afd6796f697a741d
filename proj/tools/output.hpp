#pragma once

#include <cstdio>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace cli {

// Shortest text that round-trips; fixed so reruns are byte-identical.
std::string fmt(double v);
// Short form for file names, e.g. 0.5 -> "0.5".
std::string tag(double v);

// CSV with a '#' comment block in front of the column line.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header,
              const std::vector<std::string>& columns);
    ~CsvWriter();
    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;

    void row(const std::vector<std::string>& cells);

private:
    std::FILE* file_;
    std::filesystem::path path_;
};

void write_text(const std::filesystem::path& path, const std::string& text);
void ensure_directory(const std::filesystem::path& dir);

} // namespace cli
