#include "latdisp/io.hpp"

#include <cstdio>
#include <fstream>

#include "latdisp/error.hpp"

namespace latdisp::io {

std::string fmt17(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : f_(std::fopen(path.c_str(), "w")), columns_(header.size())
{
    if (!f_) throw InvalidArgument("cannot open " + path.string() + " for writing");
    row(header);
}

CsvWriter::~CsvWriter()
{
    if (f_) std::fclose(f_);
}

void CsvWriter::row(const std::vector<std::string>& cells)
{
    if (cells.size() != columns_) throw InvalidArgument("csv row width does not match the header");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) std::fputc(',', f_);
        std::fputs(cells[i].c_str(), f_);
    }
    std::fputc('\n', f_);
}

void CsvWriter::row(const std::vector<double>& cells)
{
    std::vector<std::string> s;
    s.reserve(cells.size());
    for (double x : cells) s.push_back(fmt17(x));
    row(s);
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j)
{
    std::ofstream out(path);
    if (!out) throw InvalidArgument("cannot open " + path.string() + " for writing");
    out << j.dump(2) << '\n';
}

std::uint64_t fnv1a(std::string_view bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hex64(std::uint64_t v)
{
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

} // namespace latdisp::io
