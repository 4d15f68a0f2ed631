#pragma once

#include "varkit/core.hpp"
#include "varkit/datamodel.hpp"
#include "varkit/metrics.hpp"
#include "varkit/parallel.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace varkit {

/// One level bucket of m-day moves, keyed by the starting level of each
/// move. Standard deviations use the n denominator, matching the
/// convention used elsewhere in this library.
struct LevelBucket {
    double bucket_lo = 0.0;
    double bucket_hi = 0.0;
    double median_level = 0.0; // median of the starting levels in the bucket
    double sd_relative = 0.0;  // SD of (x_i - x_{i-m}) / x_{i-m}
    double sd_absolute = 0.0;  // SD of x_i - x_{i-m}
    int count = 0;
    bool thin = false; // count below the configured minimum
};

/// Buckets the overlapping m-day moves of x by starting level into
/// fixed-width buckets (width bucket_bp basis points, edges at integer
/// multiples of the width). Buckets with fewer than thin_min moves are
/// flagged thin. Starting levels below 1bp in magnitude make the
/// relative difference unstable and raise a ValidationError.
/// Throws if every bucket is thin.
std::vector<LevelBucket> bucket_sd(const TimeSeries& x, int m, double bucket_bp = 25.0,
                                   int thin_min = 20);

enum class FitWeight { unweighted, by_count };
enum class FitField { relative_sd, absolute_sd };

std::string to_string(FitWeight w);
FitWeight fit_weight_from_string(const std::string& s);

/// Least-squares polynomial fit of bucket SDs against bucket median
/// levels, with classical regression diagnostics. For degree 1 the c
/// entries are zero and carry no diagnostics.
struct FitResult {
    int degree = 1;
    double a = 0.0, b = 0.0, c = 0.0;
    double se[3] = {0.0, 0.0, 0.0};
    double t_stat[3] = {0.0, 0.0, 0.0};
    double p_value[3] = {0.0, 0.0, 0.0};
    double residual_sd = 0.0;
    double domain_lo = 0.0; // smallest median level used
    double domain_hi = 0.0; // largest median level used
    int points = 0;         // non-thin buckets used
    FitField field = FitField::relative_sd;
    FitWeight weight = FitWeight::unweighted;

    double poly(double l) const { return a + l * (b + l * c); }
};

/// Fits sd_relative or sd_absolute against median_level over the
/// non-thin buckets via the normal equations. Standard errors, t
/// statistics and two-sided p-values use the t-distribution with
/// (points - parameters) degrees of freedom; by-count weighting treats
/// counts as inverse-variance weights. Requires at least degree + 2
/// non-thin buckets; a degenerate design (all levels equal) raises a
/// ComputationError.
FitResult fit_level_function(std::span<const LevelBucket> buckets, int degree,
                             FitWeight weight = FitWeight::unweighted,
                             FitField field = FitField::relative_sd);

/// Turns a fit into a usable LevelFunction with domain
/// [fit.domain_lo, boundary]. Flat extrapolation freezes the polynomial
/// value at the domain edges; polynomial extrapolation continues the
/// curve. Positivity is verified exactly over [0, max_check_level]
/// under the chosen extrapolation; a non-positive value raises a
/// ComputationError naming the offending level.
LevelFunction make_level_function(const FitResult& fit, Extrapolation extrapolation,
                                  double boundary, double max_check_level = 0.20);

/// Pointwise ratio fnA(l) / fnB(l) of the raw fit polynomials on a
/// level grid. Raises a ComputationError naming the level if fnB is
/// not strictly positive somewhere on the grid.
std::vector<double> ratio_curve(const FitResult& fnA, const FitResult& fnB,
                                std::span<const double> grid);

/// One cell of a lookup table: both scenario P&L tails for a data model
/// applied at a hypothetical level (the bucket midpoint).
struct LookupCell {
    std::string model_id;
    double tenor = 0.0;
    double bucket_lo = 0.0;
    double bucket_hi = 0.0;
    double level = 0.0; // bucket midpoint, the application level
    double var_lower = 0.0;
    double var_upper = 0.0;
    double es_lower = 0.0;
    double es_upper = 0.0;
    int floor_breaches = 0;
};

struct LookupTable {
    std::string window_id;
    std::pair<Date, Date> window;
    std::vector<std::string> model_ids;
    std::vector<double> tenors;
    std::vector<std::pair<double, double>> level_buckets;
    std::vector<LookupCell> cells; // complete grid, model-major then tenor then bucket
    std::uint64_t data_hash = 0;   // windowed input panel, hashed by bit pattern
    std::uint64_t config_hash = 0; // risk config + specs + grid
};

struct LookupParams {
    std::pair<Date, Date> stress_window;
    std::string window_label;
    /// Tenor columns either as bare tenors (must match exactly one
    /// non-CDS instrument each) or as explicit instrument ids; when
    /// instrument_ids is set it wins and tenors is derived from it.
    std::vector<double> tenors;
    std::vector<std::string> instrument_ids;
    std::vector<std::pair<double, double>> level_buckets;
};

/// Builds the full (model, tenor, bucket) grid of stressed VAR/ES
/// values: for each tenor the matching panel column provides the shock
/// history over the stress window, and each bucket's midpoint is the
/// hypothetical application level. Cell failures abort with the cell
/// coordinates. Output is deterministic regardless of execution policy.
LookupTable build_lookup_table(const InstrumentPanel& cleaned,
                               std::span<const DataModelSpec> specs, const LookupParams& params,
                               const RiskConfig& cfg, Exec exec = Exec::parallel);

} // namespace varkit
