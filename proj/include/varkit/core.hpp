#pragma once

#include "varkit/dates.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace varkit {

/// Value conventions for a stored series. Everything is held as decimals
/// internally (0.0150 = 1.5% = 150bp); basis_points marks a series whose
/// source or destination file is in bp, converted at the I/O boundary.
enum class Units { decimal_rate, basis_points, spread };

/// A single instrument identifier, e.g. "OIS:5Y", "DEPO:3M", "IRS:10Y",
/// "CDS:ACME". Tenor is in years for swaps/deposits; CDS carry a name and
/// an implied 5Y tenor.
struct Instrument {
    enum class Kind { ois_swap, deposit, libor_swap, cds };

    Kind kind = Kind::libor_swap;
    double tenor_years = 0.0;
    std::string name; // CDS reference name; empty otherwise

    std::string id() const;
    static Instrument parse(const std::string& id);

    bool is_curve_instrument() const { return kind != Kind::cds; }
    bool operator==(const Instrument&) const = default;
};

/// One dated series with optional gaps. dates are strictly increasing
/// business days; values[i] is the observation on dates[i].
struct TimeSeries {
    std::string id;
    std::vector<Date> dates;
    std::vector<std::optional<double>> values;
    Units units = Units::decimal_rate;

    std::size_t size() const { return dates.size(); }
    bool complete() const;

    /// All values, requiring completeness. Throws ValidationError if any
    /// observation is missing.
    std::vector<double> dense() const;

    /// Restriction to observations with start <= date <= end.
    TimeSeries window(Date start, Date end) const;

    /// Index of the given date, if present.
    std::optional<std::size_t> index_of(Date d) const;
};

/// One rule violation found by validate_series.
struct Violation {
    std::optional<Date> date;
    std::string rule;
    std::string detail;
};

/// Checks ordering, business-day placement, shape, and finiteness.
/// Returns every violation found rather than stopping at the first.
std::vector<Violation> validate_series(const TimeSeries& ts);

/// A rectangular date-by-instrument panel of quotes with optional gaps.
struct InstrumentPanel {
    std::vector<Date> dates;
    std::vector<Instrument> instruments;
    /// quotes[i][j] is instrument j on dates[i].
    std::vector<std::vector<std::optional<double>>> quotes;

    std::size_t rows() const { return dates.size(); }
    std::size_t cols() const { return instruments.size(); }

    /// Throws ValidationError on ragged rows, unordered dates, duplicate
    /// instruments, or non-finite quotes.
    void validate() const;

    std::optional<std::size_t> find(const std::string& id) const;

    /// Column j as a standalone series (missing cells preserved).
    TimeSeries column(std::size_t j) const;

    std::optional<std::size_t> row_of(Date d) const;
};

/// Rows of the panel restricted to business days in [start, end].
/// Non-business input rows are dropped; throws ValidationError if the
/// window contains no panel rows at all.
InstrumentPanel business_day_window(const InstrumentPanel& panel, Date start, Date end);

/// Point-in-time context for building or applying a shock distribution:
/// the close date, the market level there, and the start of the window
/// the state summarizes.
struct MarketState {
    Date as_of;
    double level = 0.0;
    Date window_start;

    /// Throws ValidationError on non-finite level or window_start > as_of.
    void validate() const;
};

/// The transformation family a distribution was built under.
enum class DataModelKind { absolute, relative, level_relative };

std::string to_string(DataModelKind kind);
DataModelKind data_model_kind_from_string(const std::string& s);

/// Standardized m-day shocks extracted from a window of history under a
/// data model, ready to be applied at a (possibly different) current
/// level. shocks.size() == source observation count - holding_days.
struct ShockDistribution {
    std::vector<double> shocks;
    int holding_days = 0;
    DataModelKind kind = DataModelKind::absolute;
    std::string model_id;
    std::pair<Date, Date> source_window;
    MarketState state_used;

    /// Throws ValidationError on non-finite shocks or empty distribution.
    void validate() const;
};

} // namespace varkit
