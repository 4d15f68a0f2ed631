#pragma once

#include "varkit/core.hpp"
#include "varkit/parallel.hpp"

#include <utility>
#include <vector>

namespace varkit {

/// Availability summary of a name-by-date panel around an as_of date
/// and a stress window. Percentages are of the as_of-available names
/// and lie in [0, 100].
struct GapReport {
    int universe_count = 0;        // names quoted at least once ever
    int available_asof_count = 0;  // names quoted on as_of
    double pct_available_in_window = 0.0;  // quoted at least once inside the window
    double pct_available_throughout = 0.0; // quoted on every panel date in the window
};

/// A complete per-date value track (e.g. gap percentages).
struct GapTrack {
    std::vector<Date> dates;
    std::vector<double> values;
};

/// Counts the quoted universe, availability on as_of, and how the
/// as_of-available names cover the window. "Throughout" means quoted on
/// every panel date inside the window; calendar days the panel does not
/// cover are not counted against a name. Both percentages are 0 when no
/// name is available on as_of. as_of and the window must be panel dates
/// within the panel's range.
GapReport availability_report(const InstrumentPanel& panel, Date as_of,
                              std::pair<Date, Date> window);

/// For every panel date in the window: the percentage of as_of-available
/// names with at least k missing values in the span trailing panel rows
/// ending at that date. A value is missing when the name has no quote
/// although it was quoted at least once strictly before that row (names
/// are not penalized before inception). The span must fit inside the
/// window length and must not reach before the first panel row.
GapTrack stress_gap_fraction(const InstrumentPanel& panel, std::pair<Date, Date> window, int k,
                             int span, Date as_of, Exec exec = Exec::parallel);

/// Per-date nearest-rank q-quantile across the names quoted on each
/// date: the ceil(q * count)-th smallest quote. Dates with no quotes
/// yield a missing value.
TimeSeries percentile_track(const InstrumentPanel& panel, double q);

} // namespace varkit
