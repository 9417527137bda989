#pragma once

// Admissible exponent pairs and windowed space-time norms ‖u‖_{L^q([−T,T]; l^r)}.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "latdisp/lattice_core.hpp"

namespace latdisp {

/// An exponent in [1, ∞]: exact rational num/den, or ∞.  Values parsed from
/// doubles that are not short rationals keep a floating value instead.
class Exponent {
public:
    static Exponent infinity();
    static Exponent rational(std::int64_t num, std::int64_t den = 1);
    /// Recognises rationals with denominator <= 10⁶ exactly; +inf maps to ∞.
    static Exponent from_double(double x);
    /// "inf", "9", "9/2" or a decimal.
    static Exponent parse(const std::string& text);

    bool is_infinite() const { return inf_; }
    bool is_exact() const { return exact_; }
    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }
    double value() const; // +inf for ∞
    std::string str() const;

    friend bool operator==(const Exponent&, const Exponent&) = default;

private:
    bool inf_ = false;
    bool exact_ = true;
    std::int64_t num_ = 2;
    std::int64_t den_ = 1;
    double approx_ = 2.0;
};

enum class Regime { Continuous, Discrete };

std::string to_string(Regime r);

struct AdmissiblePair {
    Exponent q;
    Exponent r;
    Regime regime = Regime::Discrete;
};

/// Continuous: 1/q = (1/2)(1/2 − 1/r).  Discrete: 1/q <= (1/3)(1/2 − 1/r).
/// Rejects q or r below 2.
bool is_admissible(const Exponent& q, const Exponent& r, Regime regime);

/// l^r norm per snapshot, then L^q in time by the trapezoid rule (max for q = ∞).
double spacetime_norm(std::span<const LatticeState> evolution, const Exponent& q, const Exponent& r);

struct StrichartzRow {
    std::size_t pair_index = 0;
    std::size_t datum = 0;
    double T = 0.0;
    double ratio = 0.0; // windowed norm / ‖φ‖₂
};

struct PairSummary {
    AdmissiblePair pair;
    double max_ratio = 0.0;  // over data, at the full window
    double max_growth = 0.0; // largest relative increase per T-doubling
    bool stable = false;
};

struct StrichartzReport {
    std::vector<StrichartzRow> rows;
    std::vector<PairSummary> pairs;
    std::vector<double> windows; // T/4, T/2, T
    double dt = 0.0;
    int half_width = 0;
    bool stable = false;
};

struct StrichartzOptions {
    Variant variant = Variant::Model1;
    double dt = 0.1;
    double growth_limit = 0.05;
};

/// All pairs must be Discrete-admissible.  Each datum is evolved once over
/// [−T, T]; the windows T/4, T/2 and T are read from that run.
StrichartzReport strichartz_sweep(const JunctionParams& params, std::span<const LatticeState> data,
                                  std::span<const AdmissiblePair> pairs, double T,
                                  const StrichartzOptions& opt = {});

/// `count` complex Gaussian data on |j| <= support, normalised in l².
std::vector<LatticeState> random_data(int count, int support, bool includes_origin, std::uint64_t seed);

} // namespace latdisp
