#pragma once

// Command-line front end: configuration ingestion (JSON file, then flags on
// top), validation with an aggregated error list, and the experiment runners.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "latdisp/lattice_core.hpp"

namespace latdisp::cli {

enum ExitCode : int { Ok = 0, Validation = 2, Numerical = 3, Certification = 4 };

/// Every problem found in a configuration, reported together.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::vector<std::string> problems);
    const std::vector<std::string>& problems() const { return problems_; }

private:
    std::vector<std::string> problems_;
};

/// "a:b:geomN" (N points per decade), "a:b:linN" (N points), "x1,x2,..." or "x".
std::vector<double> parse_grid(const std::string& text);

/// "1+0.5i", "-2", "0.5i", "1-0.5i".
cplx parse_complex(const std::string& text);

struct DatumSpec {
    enum class Kind { Delta, Random } kind = Kind::Delta;
    int value = 1; // site for delta, support radius for random
};

/// "delta:j" or "random:K".
DatumSpec parse_datum(const std::string& text);

/// The datum on a lattice of the given half-width (random data are l²-normalised).
LatticeState make_datum(const DatumSpec& spec, int half_width, bool includes_origin, std::uint64_t seed);

/// Reads typed values from a merged config, collecting problems instead of throwing.
class ConfigReader {
public:
    ConfigReader(const nlohmann::json& config, std::vector<std::string>& problems);

    double number(const std::string& key, double fallback);
    int integer(const std::string& key, int fallback);
    std::string text(const std::string& key, const std::string& fallback);
    bool has(const std::string& key) const;

    void require(bool ok, const std::string& problem);

private:
    const nlohmann::json& config_;
    std::vector<std::string>& problems_;
};

const std::vector<std::string>& command_names();

/// Runs one experiment; artifacts go to out_dir.  Returns the exit status.
int run(const std::string& command, const nlohmann::json& config, const std::filesystem::path& out_dir,
        std::ostream& log);

/// Full entry point used by the latdisp executable.
int main(int argc, char** argv);

} // namespace latdisp::cli
