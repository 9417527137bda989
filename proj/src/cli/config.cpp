#include <cmath>
#include <random>
#include <regex>

#include "latdisp/cli.hpp"
#include "latdisp/error.hpp"
#include "latdisp/evolution.hpp"

namespace latdisp::cli {

namespace {

std::string join(const std::vector<std::string>& v)
{
    std::string s;
    for (const auto& p : v) s += (s.empty() ? "" : "; ") + p;
    return s;
}

double to_double(const std::string& s)
{
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw InvalidArgument("'" + s + "' is not a number");
    }
    if (used != s.size()) throw InvalidArgument("'" + s + "' is not a number");
    return v;
}

} // namespace

ValidationError::ValidationError(std::vector<std::string> problems)
    : std::runtime_error("invalid configuration: " + join(problems)), problems_(std::move(problems))
{
}

std::vector<double> parse_grid(const std::string& text)
{
    static const std::regex range(R"(^\s*([^:]+):([^:]+):(geom|lin)(\d+)\s*$)");
    std::smatch m;
    if (std::regex_match(text, m, range)) {
        const double a = to_double(m[1]);
        const double b = to_double(m[2]);
        const int n = std::stoi(m[4]);
        if (m[3] == "geom") {
            if (!(a > 0.0 && b > a)) throw InvalidArgument("geometric grid '" + text + "' needs 0 < a < b");
            return geometric_grid(a, b, n);
        }
        if (n < 2 || !(b > a)) throw InvalidArgument("linear grid '" + text + "' needs a < b and at least 2 points");
        std::vector<double> g(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
        return g;
    }
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        if (item.empty()) throw InvalidArgument("empty entry in grid '" + text + "'");
        out.push_back(to_double(item));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

cplx parse_complex(const std::string& text)
{
    static const std::regex full(R"(^\s*([+-]?[0-9.]+(?:[eE][+-]?\d+)?)\s*([+-])\s*([0-9.]+(?:[eE][+-]?\d+)?)?\s*i\s*$)");
    static const std::regex imag_only(R"(^\s*([+-]?[0-9.]*(?:[eE][+-]?\d+)?)\s*i\s*$)");
    std::smatch m;
    if (std::regex_match(text, m, full)) {
        const double re = to_double(m[1]);
        const double mag = m[3].matched ? to_double(m[3]) : 1.0;
        return {re, m[2] == "-" ? -mag : mag};
    }
    if (std::regex_match(text, m, imag_only)) {
        const std::string s = m[1];
        if (s.empty() || s == "+") return {0.0, 1.0};
        if (s == "-") return {0.0, -1.0};
        return {0.0, to_double(s)};
    }
    try {
        return {to_double(text), 0.0};
    } catch (const InvalidArgument&) {
        throw InvalidArgument("'" + text + "' is not a complex number (expected e.g. 1+0.5i)");
    }
}

DatumSpec parse_datum(const std::string& text)
{
    static const std::regex re(R"(^(delta|random):(-?\d+)$)");
    std::smatch m;
    if (!std::regex_match(text, m, re))
        throw InvalidArgument("datum '" + text + "' must be delta:j or random:K");
    DatumSpec d;
    d.kind = m[1] == "delta" ? DatumSpec::Kind::Delta : DatumSpec::Kind::Random;
    d.value = std::stoi(m[2]);
    if (d.kind == DatumSpec::Kind::Random && d.value < 1) throw InvalidArgument("random:K needs K >= 1");
    return d;
}

LatticeState make_datum(const DatumSpec& spec, int half_width, bool includes_origin, std::uint64_t seed)
{
    if (spec.kind == DatumSpec::Kind::Delta) return LatticeState::delta(half_width, includes_origin, spec.value);
    if (spec.value > half_width) throw InvalidArgument("random datum support exceeds the lattice");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    LatticeState s(half_width, includes_origin);
    for (std::size_t i = 0; i < s.size(); ++i)
        if (std::abs(s.site(i)) <= spec.value) s.amplitudes()[i] = cplx(normal(rng), normal(rng));
    const double n = s.norm2();
    for (auto& a : s.amplitudes()) a /= n;
    return s;
}

ConfigReader::ConfigReader(const nlohmann::json& config, std::vector<std::string>& problems)
    : config_(config), problems_(problems)
{
}

bool ConfigReader::has(const std::string& key) const { return config_.is_object() && config_.contains(key); }

double ConfigReader::number(const std::string& key, double fallback)
{
    if (!has(key)) return fallback;
    const auto& v = config_.at(key);
    try {
        if (v.is_number()) return v.get<double>();
        if (v.is_string()) return to_double(v.get<std::string>());
    } catch (const std::exception&) {
    }
    problems_.push_back("'" + key + "' must be a number");
    return fallback;
}

int ConfigReader::integer(const std::string& key, int fallback)
{
    const double v = number(key, fallback);
    if (v != std::floor(v) || std::abs(v) > 1e9) {
        problems_.push_back("'" + key + "' must be an integer");
        return fallback;
    }
    return static_cast<int>(v);
}

std::string ConfigReader::text(const std::string& key, const std::string& fallback)
{
    if (!has(key)) return fallback;
    const auto& v = config_.at(key);
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number()) return v.dump();
    problems_.push_back("'" + key + "' must be a string");
    return fallback;
}

void ConfigReader::require(bool ok, const std::string& problem)
{
    if (!ok) problems_.push_back(problem);
}

} // namespace latdisp::cli
