#include "varkit/gaps.hpp"

#include "varkit/errors.hpp"

#include <algorithm>
#include <cmath>

namespace varkit {

namespace {

std::size_t require_row(const InstrumentPanel& panel, Date d, const char* what) {
    if (panel.dates.empty()) throw ValidationError("panel has no rows");
    if (d < panel.dates.front() || d > panel.dates.back())
        throw ValidationError(std::string(what) + " " + d.to_string() +
                              " is outside the panel range " + panel.dates.front().to_string() +
                              " to " + panel.dates.back().to_string());
    const auto row = panel.row_of(d);
    if (!row)
        throw ValidationError(std::string(what) + " " + d.to_string() + " is not a panel date");
    return *row;
}

std::pair<std::size_t, std::size_t> window_rows(const InstrumentPanel& panel,
                                                std::pair<Date, Date> window) {
    if (window.second < window.first)
        throw ValidationError("window end " + window.second.to_string() +
                              " precedes window start " + window.first.to_string());
    const std::size_t lo = require_row(panel, window.first, "window start");
    const std::size_t hi = require_row(panel, window.second, "window end");
    return {lo, hi};
}

} // namespace

GapReport availability_report(const InstrumentPanel& panel, Date as_of,
                              std::pair<Date, Date> window) {
    panel.validate();
    const std::size_t as_of_row = require_row(panel, as_of, "as_of");
    const auto [lo, hi] = window_rows(panel, window);

    GapReport rep;
    std::vector<std::size_t> asof_names;
    for (std::size_t j = 0; j < panel.cols(); ++j) {
        bool ever = false;
        for (std::size_t r = 0; r < panel.rows() && !ever; ++r)
            ever = panel.quotes[r][j].has_value();
        if (ever) ++rep.universe_count;
        if (panel.quotes[as_of_row][j]) {
            ++rep.available_asof_count;
            asof_names.push_back(j);
        }
    }
    if (asof_names.empty()) return rep;

    int in_window = 0, throughout = 0;
    for (std::size_t j : asof_names) {
        bool any = false, all = true;
        for (std::size_t r = lo; r <= hi; ++r) {
            const bool q = panel.quotes[r][j].has_value();
            any = any || q;
            all = all && q;
        }
        in_window += any ? 1 : 0;
        throughout += all ? 1 : 0;
    }
    const double denom = static_cast<double>(asof_names.size());
    rep.pct_available_in_window = 100.0 * in_window / denom;
    rep.pct_available_throughout = 100.0 * throughout / denom;
    return rep;
}

GapTrack stress_gap_fraction(const InstrumentPanel& panel, std::pair<Date, Date> window, int k,
                             int span, Date as_of, Exec exec) {
    panel.validate();
    if (k < 1) throw ValidationError("k must be >= 1");
    if (span < k) throw ValidationError("span must be >= k");
    const std::size_t as_of_row = require_row(panel, as_of, "as_of");
    const auto [lo, hi] = window_rows(panel, window);
    const std::size_t len = hi - lo + 1;
    if (static_cast<std::size_t>(span) > len)
        throw ValidationError("span of " + std::to_string(span) + " rows exceeds the window of " +
                              std::to_string(len) + " rows");
    if (lo + 1 < static_cast<std::size_t>(span))
        throw ValidationError("span of " + std::to_string(span) +
                              " rows reaches before the first panel row at window start " +
                              window.first.to_string());

    std::vector<std::size_t> asof_names;
    for (std::size_t j = 0; j < panel.cols(); ++j)
        if (panel.quotes[as_of_row][j]) asof_names.push_back(j);

    // first_quote[j]: first row with a quote for name j (rows() if never).
    std::vector<std::size_t> first_quote(panel.cols(), panel.rows());
    for (std::size_t j = 0; j < panel.cols(); ++j)
        for (std::size_t r = 0; r < panel.rows(); ++r)
            if (panel.quotes[r][j]) {
                first_quote[j] = r;
                break;
            }

    GapTrack track;
    track.dates.assign(panel.dates.begin() + lo, panel.dates.begin() + hi + 1);
    track.values = parallel_map<double>(len, exec, [&](std::size_t i) {
        const std::size_t end = lo + i;
        const std::size_t begin = end + 1 - static_cast<std::size_t>(span);
        if (asof_names.empty()) return 0.0;
        int flagged = 0;
        for (std::size_t j : asof_names) {
            int missing = 0;
            for (std::size_t r = begin; r <= end; ++r)
                if (!panel.quotes[r][j] && first_quote[j] < r) ++missing;
            if (missing >= k) ++flagged;
        }
        return 100.0 * flagged / static_cast<double>(asof_names.size());
    });
    return track;
}

TimeSeries percentile_track(const InstrumentPanel& panel, double q) {
    panel.validate();
    if (!(q > 0.0 && q < 1.0)) throw ValidationError("quantile must be in (0,1)");

    TimeSeries out;
    out.id = "percentile";
    out.units = panel.cols() > 0 && panel.instruments.front().kind == Instrument::Kind::cds
                    ? Units::spread
                    : Units::decimal_rate;
    out.dates = panel.dates;
    out.values.reserve(panel.rows());
    std::vector<double> quoted;
    for (std::size_t r = 0; r < panel.rows(); ++r) {
        quoted.clear();
        for (std::size_t j = 0; j < panel.cols(); ++j)
            if (panel.quotes[r][j]) quoted.push_back(*panel.quotes[r][j]);
        if (quoted.empty()) {
            out.values.push_back(std::nullopt);
            continue;
        }
        std::sort(quoted.begin(), quoted.end());
        const double n = static_cast<double>(quoted.size());
        std::size_t rank = static_cast<std::size_t>(std::ceil(q * n));
        if (rank < 1) rank = 1;
        if (rank > quoted.size()) rank = quoted.size();
        while (rank > 1 && static_cast<double>(rank - 1) / n >= q) --rank;
        while (rank < quoted.size() && static_cast<double>(rank) / n < q) ++rank;
        out.values.push_back(quoted[rank - 1]);
    }
    return out;
}

} // namespace varkit
