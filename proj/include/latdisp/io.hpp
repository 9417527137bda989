#pragma once

// CSV and JSON emission.  Floats are always written with 17 significant
// digits so that reruns are byte-identical.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace latdisp::io {

inline constexpr int schema_version = 1;

std::string fmt17(double x);

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
    ~CsvWriter();
    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;

    void row(const std::vector<std::string>& cells);
    void row(const std::vector<double>& cells);

private:
    std::FILE* f_;
    std::size_t columns_;
};

void write_json(const std::filesystem::path& path, const nlohmann::json& j);

std::uint64_t fnv1a(std::string_view bytes);
std::string hex64(std::uint64_t v);

} // namespace latdisp::io
