#pragma once

#include "varkit/core.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace varkit {

/// Relative-family transformations divide by the start-of-move level;
/// magnitudes below this floor (1bp) are rejected rather than allowed to
/// produce unbounded shocks.
inline constexpr double kZeroLevelFloor = 1e-4;

enum class Extrapolation { flat, polynomial };

std::string to_string(Extrapolation e);
Extrapolation extrapolation_from_string(const std::string& s);

/// Fit provenance carried by a LevelFunction.
struct LevelFunctionDiagnostics {
    std::vector<double> p_values; // per coefficient, empty when hand-set
    std::string fit_window_id;
};

/// Polynomial map from market level to volatility scale:
/// P(l) = a + b*l + c*l^2, degree 1 or 2 (c = 0 when degree 1).
/// Inside [domain_lo, domain_hi] the polynomial is evaluated directly;
/// outside, flat extrapolation freezes the boundary value while
/// polynomial extrapolation continues P. P must be strictly positive on
/// the domain (checked exactly at construction: endpoints plus the
/// vertex of a degree-2 polynomial).
class LevelFunction {
public:
    LevelFunction(int degree, double a, double b, double c, double domain_lo, double domain_hi,
                  Extrapolation extrapolation, LevelFunctionDiagnostics diagnostics = {});

    /// Raw polynomial value, no extrapolation semantics.
    double poly(double level) const { return a_ + level * (b_ + level * c_); }

    /// Value with extrapolation applied outside the domain.
    double value(double level) const;

    int degree() const { return degree_; }
    double a() const { return a_; }
    double b() const { return b_; }
    double c() const { return c_; }
    double domain_lo() const { return domain_lo_; }
    double domain_hi() const { return domain_hi_; }
    Extrapolation extrapolation() const { return extrapolation_; }
    const LevelFunctionDiagnostics& diagnostics() const { return diagnostics_; }

private:
    int degree_;
    double a_, b_, c_;
    double domain_lo_, domain_hi_;
    Extrapolation extrapolation_;
    LevelFunctionDiagnostics diagnostics_;
};

/// Volatility rescaling factor between two market levels:
/// P(l_now) / P(l_obs), both evaluated with the function's extrapolation
/// rule. Throws ComputationError if either value is <= 0 (possible only
/// under polynomial extrapolation outside the domain).
double level_scale(const LevelFunction& fn, double l_obs, double l_now);

/// A complete Data Model: the transformation family, the holding period,
/// and (for level-relative) the level function.
struct DataModelSpec {
    DataModelKind kind = DataModelKind::absolute;
    int holding_days = 10;
    std::optional<LevelFunction> level_function;

    /// Throws ValidationError unless holding_days >= 1 and the level
    /// function is present exactly when kind is level-relative.
    void validate() const;

    /// Stable identifier used in reports, e.g. "relative-m10",
    /// "level-relative-deg2-m10".
    std::string id() const;
};

/// Overlapping m-day differences x_i - x_{i-m}, length n - m.
/// Requires a complete series with n > m.
std::vector<double> diffs_absolute(const TimeSeries& x, int m);

/// Overlapping m-day relative differences (x_i - x_{i-m}) / x_{i-m}.
/// Start levels with |x_{i-m}| below the floor raise ValidationError
/// listing the offending dates.
std::vector<double> diffs_relative(const TimeSeries& x, int m, double floor = kZeroLevelFloor);

/// The full transformation from history to a standardized shock
/// distribution. state_obs describes the observation window close;
/// state_use supplies the level the distribution is standardized to
/// (level-relative shocks are scaled by level_scale(fn, x_{i-m},
/// state_use.level) per observation).
ShockDistribution build_distribution(const TimeSeries& x, const DataModelSpec& spec,
                                     const MarketState& state_obs, const MarketState& state_use);

/// Scenario values from applying a distribution at a current level.
struct ScenarioSet {
    std::vector<double> values;
    double floor = 0.0;
    /// Scenarios strictly below the floor (reported, never clamped).
    int breach_count = 0;
};

/// absolute: current + shock; relative family: current * (1 + shock).
/// The relative family requires current_value >= the zero-level floor.
ScenarioSet apply_shocks(double current_value, const ShockDistribution& dist, double floor = 0.0);

} // namespace varkit
