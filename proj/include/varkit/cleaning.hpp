#pragma once

#include "varkit/core.hpp"
#include "varkit/parallel.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace varkit {

/// Tuning knobs for the cleaning pipeline. Defaults are the values the
/// rest of the library assumes unless a caller overrides them.
struct CleaningConfig {
    /// Fraction of largest-|1-day-change| observations removed by the
    /// trimmed-SD ratio (ceil(trim_fraction * count) entries).
    double trim_fraction = 0.03;
    /// Monte Carlo trials used to calibrate the detection threshold.
    int mc_trials = 256;
    /// Threshold = mean + threshold_sds * SD of simulated clean ratios.
    double threshold_sds = 5.0;
    /// Longest run of missing dates filled linearly in time.
    int max_time_gap_days = 2;
    /// Widest spike (consecutive displaced observations) removed.
    int spike_max_width_days = 5;
    /// A move counts as "returned" if the level after the candidate spike
    /// is within this relative tolerance of the level before it.
    double spike_return_tolerance = 0.10;
    /// Base seed for the detection Monte Carlo.
    std::uint64_t rng_seed = 0;
    /// Levels below this magnitude use absolute rather than relative
    /// comparisons (spike return test).
    double small_level_floor = 1e-4;

    void validate() const;
};

/// What a cleaning step did to one observation.
enum class ChangeAction {
    interpolated,        // filled across tenor on one date
    time_filled,         // filled linearly across a short date gap
    extrapolated_flat,   // copied from nearest observation in time
    extrapolated_spread, // rebuilt from a companion series at constant spread
    outlier_replaced,    // neighbor-average repair of a flagged point
    spike_removed        // interpolated across a detected spike
};

std::string to_string(ChangeAction a);
ChangeAction change_action_from_string(const std::string& s);

struct ChangeEntry {
    Date date;
    std::string id;
    ChangeAction action;
    std::optional<double> old_value; // empty when the cell was missing
    double new_value = 0.0;
};

/// Ordered record of every modification a cleaning run made. Replaying
/// the entries onto the raw input reproduces the cleaned output exactly.
struct ChangeLog {
    std::vector<ChangeEntry> entries;

    void add(Date date, std::string id, ChangeAction action, std::optional<double> old_value,
             double new_value);
    void append(ChangeLog&& other);
    /// Stable sort by (date, id) for canonical output.
    void sort();
};

/// Applies log entries to a copy of the panel (cells are set to
/// new_value in order). Used to verify replayability.
InstrumentPanel apply_changelog(const InstrumentPanel& raw, const ChangeLog& log);

/// Result of filling one panel date across the tenor axis.
struct RowFillResult {
    std::vector<std::optional<double>> row;
    ChangeLog log;
};

/// Fills missing quotes on a single date by monotone cubic interpolation
/// across tenor, separately per curve family (OIS | deposit+swap). Only
/// interior gaps are filled here; ends of the curve and CDS columns are
/// left for the time-axis pass. A family with exactly one quote present
/// and at least one interior gap cannot be interpolated and raises
/// ComputationError.
RowFillResult fill_curve_date(Date date, const std::vector<Instrument>& instruments,
                              const std::vector<std::optional<double>>& row);

struct PanelFillResult {
    InstrumentPanel panel;
    ChangeLog log;
    /// Instruments with no raw observations anywhere in the panel,
    /// sorted by id. Curve columns at interior tenors may still be
    /// rebuilt by the cross-tenor pass (every value logged); CDS names
    /// have no tenor neighbors, so they stay empty rather than being
    /// invented.
    std::vector<std::string> untouched;
};

/// Time-axis pass: interior runs of <= max_time_gap_days missing dates
/// per instrument are filled linearly in time, the per-date tenor fill is
/// re-applied, and any remaining gaps are extrapolated: deposits and
/// swap rates flat from the nearest observation, OIS at a constant spread
/// to the matching-tenor swap rate. CDS columns only receive the short
/// linear fill.
PanelFillResult fill_time_gaps(const InstrumentPanel& panel, const CleaningConfig& cfg);

/// Trimmed-SD ratio: SD of all differences over the SD after removing
/// the ceil(trim_fraction * n) largest by absolute value. Population
/// SDs (n denominator). Throws ValidationError on fewer than 10 diffs
/// or fewer than three survivors after trimming; ComputationError when
/// the trimmed sample has zero variance.
double sd_trim_ratio(std::span<const double> diffs, double trim_fraction);

struct DetectionResult {
    std::string id;
    bool flagged = false;
    double observed_ratio = 0.0;
    double threshold = 0.0;
    double simulated_mean = 0.0;
    double simulated_sd = 0.0;
};

/// Flags a series whose trimmed-SD ratio of 1-day differences exceeds a
/// Monte Carlo threshold: mc_trials standard-normal series of the same
/// length are simulated (seed derived from cfg.rng_seed and the series
/// id), and the threshold is mean + threshold_sds * SD of their ratios.
DetectionResult detect_bad_data(const TimeSeries& ts, const CleaningConfig& cfg,
                                Exec exec = Exec::parallel);

struct SeriesCleanResult {
    TimeSeries series;
    ChangeLog log;
};

/// Replaces isolated outliers in a flagged series. Let q = the
/// (1 - trim_fraction) nearest-rank quantile of |1-day moves|. A single
/// observation is repaired when the moves into and out of it both exceed
/// q with opposite signs; the repaired value is the average of its two
/// neighbors. A pair of observations is repaired when the moves into and
/// out of the pair both exceed q with opposite signs while the move
/// between them is at most small_level_floor (a stuck bad print repeats
/// almost exactly; a loose middle tolerance would repair far more than
/// the intended one good point per couple of thousand). Scans left to
/// right, in place, so earlier repairs feed later tests.
SeriesCleanResult repair_outliers(const TimeSeries& ts, const CleaningConfig& cfg);

/// Removes short square spikes: runs of 1..spike_max_width_days
/// observations displaced from a local base level that return to within
/// spike_return_tolerance (relative; absolute below small_level_floor)
/// of the pre-spike level. Narrower spikes are removed first. Replaced
/// values are linear in time between the surrounding base observations.
SeriesCleanResult clean_spikes(const TimeSeries& ts, const CleaningConfig& cfg);

struct PanelCleanResult {
    InstrumentPanel panel;
    ChangeLog log;
    std::vector<std::string> untouched;
    std::vector<DetectionResult> detections;
};

/// Full pipeline: validate, per-date tenor fill, time-gap fill and
/// extrapolation, then per-instrument bad-data detection and outlier
/// repair for flagged series. The change log is sorted by (date, id).
PanelCleanResult clean_panel(const InstrumentPanel& panel, const CleaningConfig& cfg,
                             Exec exec = Exec::parallel);

} // namespace varkit
