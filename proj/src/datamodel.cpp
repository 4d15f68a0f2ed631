#include "varkit/datamodel.hpp"

#include "varkit/errors.hpp"

#include <cmath>

namespace varkit {

namespace {

void require_complete_for(const TimeSeries& x, int m, const char* op) {
    const auto violations = validate_series(x);
    if (!violations.empty())
        throw ValidationError(std::string(op) + ": series '" + x.id +
                              "' invalid: " + violations.front().detail);
    if (!x.complete())
        throw ValidationError(std::string(op) + ": series '" + x.id + "' has missing values");
    if (m < 1) throw ValidationError(std::string(op) + ": holding days must be >= 1");
    if (x.size() <= static_cast<std::size_t>(m))
        throw ValidationError(std::string(op) + ": series '" + x.id + "' has " +
                              std::to_string(x.size()) + " observations, needs more than " +
                              std::to_string(m));
}

} // namespace

std::string to_string(Extrapolation e) {
    return e == Extrapolation::flat ? "flat" : "polynomial";
}

Extrapolation extrapolation_from_string(const std::string& s) {
    if (s == "flat") return Extrapolation::flat;
    if (s == "polynomial" || s == "poly") return Extrapolation::polynomial;
    throw ValidationError("unknown extrapolation mode '" + s + "'");
}

LevelFunction::LevelFunction(int degree, double a, double b, double c, double domain_lo,
                             double domain_hi, Extrapolation extrapolation,
                             LevelFunctionDiagnostics diagnostics)
    : degree_(degree),
      a_(a),
      b_(b),
      c_(c),
      domain_lo_(domain_lo),
      domain_hi_(domain_hi),
      extrapolation_(extrapolation),
      diagnostics_(std::move(diagnostics)) {
    if (degree_ != 1 && degree_ != 2)
        throw ValidationError("level function degree must be 1 or 2");
    if (degree_ == 1 && c_ != 0.0)
        throw ValidationError("degree-1 level function must have c = 0");
    if (!std::isfinite(a_) || !std::isfinite(b_) || !std::isfinite(c_))
        throw ValidationError("level function coefficients must be finite");
    if (!std::isfinite(domain_lo_) || !std::isfinite(domain_hi_) || !(domain_lo_ < domain_hi_))
        throw ValidationError("level function domain must be finite with lo < hi");
    // Positivity on the closed domain: endpoints, plus the interior
    // extremum of a quadratic when it falls inside.
    auto check = [&](double l) {
        if (!(poly(l) > 0.0))
            throw ValidationError("level function not strictly positive at level " +
                                  std::to_string(l));
    };
    check(domain_lo_);
    check(domain_hi_);
    if (c_ != 0.0) {
        const double vertex = -b_ / (2.0 * c_);
        if (vertex > domain_lo_ && vertex < domain_hi_) check(vertex);
    }
}

double LevelFunction::value(double level) const {
    if (extrapolation_ == Extrapolation::flat) {
        if (level < domain_lo_) return poly(domain_lo_);
        if (level > domain_hi_) return poly(domain_hi_);
    }
    return poly(level);
}

double level_scale(const LevelFunction& fn, double l_obs, double l_now) {
    const double denom = fn.value(l_obs);
    const double numer = fn.value(l_now);
    if (!(denom > 0.0))
        throw ComputationError("level function non-positive (" + std::to_string(denom) +
                               ") at observation level " + std::to_string(l_obs));
    if (!(numer > 0.0))
        throw ComputationError("level function non-positive (" + std::to_string(numer) +
                               ") at use level " + std::to_string(l_now));
    return numer / denom;
}

void DataModelSpec::validate() const {
    if (holding_days < 1) throw ValidationError("data model holding_days must be >= 1");
    if ((kind == DataModelKind::level_relative) != level_function.has_value())
        throw ValidationError("level function must be present exactly for the level-relative "
                              "data model");
}

std::string DataModelSpec::id() const {
    std::string s = to_string(kind);
    if (kind == DataModelKind::level_relative && level_function)
        s += "-deg" + std::to_string(level_function->degree());
    return s + "-m" + std::to_string(holding_days);
}

std::vector<double> diffs_absolute(const TimeSeries& x, int m) {
    require_complete_for(x, m, "diffs_absolute");
    const std::size_t um = static_cast<std::size_t>(m);
    std::vector<double> out;
    out.reserve(x.size() - um);
    for (std::size_t i = um; i < x.size(); ++i) out.push_back(*x.values[i] - *x.values[i - um]);
    return out;
}

std::vector<double> diffs_relative(const TimeSeries& x, int m, double floor) {
    require_complete_for(x, m, "diffs_relative");
    const std::size_t um = static_cast<std::size_t>(m);
    std::string offending;
    int offending_count = 0;
    for (std::size_t i = um; i < x.size(); ++i) {
        if (std::fabs(*x.values[i - um]) < floor) {
            ++offending_count;
            if (offending_count <= 3) {
                if (!offending.empty()) offending += ", ";
                offending += x.dates[i - um].to_string();
            }
        }
    }
    if (offending_count > 0) {
        if (offending_count > 3)
            offending += " and " + std::to_string(offending_count - 3) + " more";
        throw ValidationError("diffs_relative: start level below " + std::to_string(floor) +
                              " on " + offending);
    }
    std::vector<double> out;
    out.reserve(x.size() - um);
    for (std::size_t i = um; i < x.size(); ++i)
        out.push_back((*x.values[i] - *x.values[i - um]) / *x.values[i - um]);
    return out;
}

ShockDistribution build_distribution(const TimeSeries& x, const DataModelSpec& spec,
                                     const MarketState& state_obs,
                                     const MarketState& state_use) {
    spec.validate();
    state_obs.validate();
    state_use.validate();

    ShockDistribution dist;
    dist.holding_days = spec.holding_days;
    dist.kind = spec.kind;
    dist.model_id = spec.id();
    dist.state_used = state_use;

    switch (spec.kind) {
        case DataModelKind::absolute:
            dist.shocks = diffs_absolute(x, spec.holding_days);
            break;
        case DataModelKind::relative:
            dist.shocks = diffs_relative(x, spec.holding_days);
            break;
        case DataModelKind::level_relative: {
            dist.shocks = diffs_relative(x, spec.holding_days);
            // Shock k covers the move starting at observation k, so its
            // observation-side level is x[k].
            for (std::size_t k = 0; k < dist.shocks.size(); ++k)
                dist.shocks[k] *= level_scale(*spec.level_function, *x.values[k],
                                              state_use.level);
            break;
        }
    }
    dist.source_window = {x.dates.front(), x.dates.back()};
    dist.validate();
    return dist;
}

ScenarioSet apply_shocks(double current_value, const ShockDistribution& dist, double floor) {
    dist.validate();
    if (!std::isfinite(current_value))
        throw ValidationError("apply_shocks: current value not finite");
    const bool relative_family = dist.kind != DataModelKind::absolute;
    if (relative_family && current_value < kZeroLevelFloor)
        throw ValidationError("apply_shocks: current value " + std::to_string(current_value) +
                              " below the zero-level floor for a relative-family model");
    ScenarioSet out;
    out.floor = floor;
    out.values.reserve(dist.shocks.size());
    for (double s : dist.shocks) {
        const double v = relative_family ? current_value * (1.0 + s) : current_value + s;
        out.values.push_back(v);
        if (v < floor) ++out.breach_count;
    }
    return out;
}

} // namespace varkit
