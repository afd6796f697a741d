#include "output.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <system_error>

#include "handles.hpp"

namespace cli {

std::string fmt(double v)
{
    if (v == 0.0) return "0"; // also folds -0
    char buf[40];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

std::string tag(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header,
                     const std::vector<std::string>& columns)
    : file_(std::fopen(path.c_str(), "w")), path_(path)
{
    if (file_ == nullptr) throw Failure(kExitConfig, "cannot write " + path.string());
    for (const auto& line : header) std::fprintf(file_, "# %s\n", line.c_str());
    for (std::size_t i = 0; i < columns.size(); ++i)
        std::fprintf(file_, "%s%s", i ? "," : "", columns[i].c_str());
    std::fputc('\n', file_);
}

CsvWriter::~CsvWriter()
{
    if (file_ != nullptr) std::fclose(file_);
}

void CsvWriter::row(const std::vector<std::string>& cells)
{
    for (std::size_t i = 0; i < cells.size(); ++i) std::fprintf(file_, "%s%s", i ? "," : "", cells[i].c_str());
    std::fputc('\n', file_);
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Failure(kExitConfig, "cannot write " + path.string());
    out << text;
    if (text.empty() || text.back() != '\n') out << '\n';
}

void ensure_directory(const std::filesystem::path& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir))
        throw Failure(kExitConfig, "cannot create output directory " + dir.string());
}

} // namespace cli
