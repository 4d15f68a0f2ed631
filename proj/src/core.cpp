#include "varkit/core.hpp"

#include "varkit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace varkit {

namespace {

std::string tenor_label(double years) {
    // Whole years print as "5Y"; month multiples as "3M".
    double whole = 0.0;
    if (std::modf(years, &whole) == 0.0 && years >= 1.0)
        return std::to_string(static_cast<int>(years)) + "Y";
    const double months = years * 12.0;
    if (std::modf(months, &whole) == 0.0)
        return std::to_string(static_cast<int>(months)) + "M";
    throw ValidationError("tenor not representable in whole months: " + std::to_string(years));
}

double tenor_from_label(const std::string& label, const std::string& id) {
    if (label.size() < 2)
        throw ValidationError("bad tenor in instrument id '" + id + "'");
    const char unit = label.back();
    const std::string num = label.substr(0, label.size() - 1);
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(num, &pos);
    } catch (const std::exception&) {
        throw ValidationError("bad tenor in instrument id '" + id + "'");
    }
    if (pos != num.size() || v <= 0.0)
        throw ValidationError("bad tenor in instrument id '" + id + "'");
    if (unit == 'Y') return v;
    if (unit == 'M') return v / 12.0;
    throw ValidationError("bad tenor unit in instrument id '" + id + "'");
}

} // namespace

std::string Instrument::id() const {
    switch (kind) {
        case Kind::ois_swap: return "OIS:" + tenor_label(tenor_years);
        case Kind::deposit: return "DEPO:" + tenor_label(tenor_years);
        case Kind::libor_swap: return "IRS:" + tenor_label(tenor_years);
        case Kind::cds: return "CDS:" + name;
    }
    throw ValidationError("unknown instrument kind");
}

Instrument Instrument::parse(const std::string& id) {
    const auto colon = id.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 >= id.size())
        throw ValidationError("instrument id must be FAMILY:TAIL, got '" + id + "'");
    const std::string family = id.substr(0, colon);
    const std::string tail = id.substr(colon + 1);
    Instrument inst;
    if (family == "OIS") {
        inst.kind = Kind::ois_swap;
        inst.tenor_years = tenor_from_label(tail, id);
    } else if (family == "DEPO") {
        inst.kind = Kind::deposit;
        inst.tenor_years = tenor_from_label(tail, id);
    } else if (family == "IRS") {
        inst.kind = Kind::libor_swap;
        inst.tenor_years = tenor_from_label(tail, id);
    } else if (family == "CDS") {
        inst.kind = Kind::cds;
        inst.name = tail;
        inst.tenor_years = 5.0;
    } else {
        throw ValidationError("unknown instrument family '" + family + "' in '" + id + "'");
    }
    return inst;
}

bool TimeSeries::complete() const {
    return std::all_of(values.begin(), values.end(),
                       [](const std::optional<double>& v) { return v.has_value(); });
}

std::vector<double> TimeSeries::dense() const {
    std::vector<double> out;
    out.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!values[i])
            throw ValidationError("series '" + id + "' missing value on " + dates[i].to_string());
        out.push_back(*values[i]);
    }
    return out;
}

TimeSeries TimeSeries::window(Date start, Date end) const {
    if (start > end)
        throw ValidationError("window start after end for series '" + id + "'");
    TimeSeries out;
    out.id = id;
    out.units = units;
    for (std::size_t i = 0; i < dates.size(); ++i) {
        if (dates[i] >= start && dates[i] <= end) {
            out.dates.push_back(dates[i]);
            out.values.push_back(values[i]);
        }
    }
    return out;
}

std::optional<std::size_t> TimeSeries::index_of(Date d) const {
    const auto it = std::lower_bound(dates.begin(), dates.end(), d);
    if (it == dates.end() || *it != d) return std::nullopt;
    return static_cast<std::size_t>(it - dates.begin());
}

std::vector<Violation> validate_series(const TimeSeries& ts) {
    std::vector<Violation> out;
    if (ts.values.size() != ts.dates.size()) {
        out.push_back({std::nullopt, "shape",
                       "values count " + std::to_string(ts.values.size()) +
                           " != dates count " + std::to_string(ts.dates.size())});
        return out;
    }
    for (std::size_t i = 0; i < ts.dates.size(); ++i) {
        if (!ts.dates[i].is_business_day())
            out.push_back({ts.dates[i], "business-day",
                           "date " + ts.dates[i].to_string() + " falls on a weekend"});
        if (i > 0 && ts.dates[i] == ts.dates[i - 1])
            out.push_back({ts.dates[i], "duplicate-date",
                           "date " + ts.dates[i].to_string() + " appears twice"});
        else if (i > 0 && ts.dates[i] < ts.dates[i - 1])
            out.push_back({ts.dates[i], "ordering",
                           "date " + ts.dates[i].to_string() + " not after " +
                               ts.dates[i - 1].to_string()});
        if (ts.values[i] && !std::isfinite(*ts.values[i]))
            out.push_back({ts.dates[i], "finite",
                           "non-finite value on " + ts.dates[i].to_string()});
    }
    return out;
}

void InstrumentPanel::validate() const {
    if (quotes.size() != dates.size())
        throw ValidationError("panel has " + std::to_string(quotes.size()) + " rows for " +
                              std::to_string(dates.size()) + " dates");
    std::set<std::string> seen;
    for (const auto& inst : instruments)
        if (!seen.insert(inst.id()).second)
            throw ValidationError("duplicate instrument '" + inst.id() + "'");
    for (std::size_t i = 0; i < dates.size(); ++i) {
        if (i > 0 && dates[i] <= dates[i - 1])
            throw ValidationError("panel dates not strictly increasing at " +
                                  dates[i].to_string());
        if (!dates[i].is_business_day())
            throw ValidationError("panel date " + dates[i].to_string() + " is not a business day");
        if (quotes[i].size() != instruments.size())
            throw ValidationError("row " + dates[i].to_string() + " has " +
                                  std::to_string(quotes[i].size()) + " cells for " +
                                  std::to_string(instruments.size()) + " instruments");
        for (std::size_t j = 0; j < quotes[i].size(); ++j)
            if (quotes[i][j] && !std::isfinite(*quotes[i][j]))
                throw ValidationError("non-finite quote for '" + instruments[j].id() + "' on " +
                                      dates[i].to_string());
    }
}

std::optional<std::size_t> InstrumentPanel::find(const std::string& id) const {
    for (std::size_t j = 0; j < instruments.size(); ++j)
        if (instruments[j].id() == id) return j;
    return std::nullopt;
}

TimeSeries InstrumentPanel::column(std::size_t j) const {
    if (j >= instruments.size())
        throw ValidationError("panel column index out of range");
    TimeSeries ts;
    ts.id = instruments[j].id();
    ts.units =
        instruments[j].kind == Instrument::Kind::cds ? Units::spread : Units::decimal_rate;
    ts.dates = dates;
    ts.values.reserve(rows());
    for (const auto& row : quotes) ts.values.push_back(row[j]);
    return ts;
}

std::optional<std::size_t> InstrumentPanel::row_of(Date d) const {
    const auto it = std::lower_bound(dates.begin(), dates.end(), d);
    if (it == dates.end() || *it != d) return std::nullopt;
    return static_cast<std::size_t>(it - dates.begin());
}

InstrumentPanel business_day_window(const InstrumentPanel& panel, Date start, Date end) {
    if (start > end)
        throw ValidationError("business_day_window: start after end");
    InstrumentPanel out;
    out.instruments = panel.instruments;
    for (std::size_t i = 0; i < panel.rows(); ++i) {
        const Date d = panel.dates[i];
        if (d >= start && d <= end && d.is_business_day()) {
            out.dates.push_back(d);
            out.quotes.push_back(panel.quotes[i]);
        }
    }
    if (out.dates.empty())
        throw ValidationError("window " + start.to_string() + ".." + end.to_string() +
                              " selects no panel rows");
    return out;
}

void MarketState::validate() const {
    if (!std::isfinite(level))
        throw ValidationError("market state level is not finite");
    if (window_start > as_of)
        throw ValidationError("market state window_start " + window_start.to_string() +
                              " after as_of " + as_of.to_string());
}

std::string to_string(DataModelKind kind) {
    switch (kind) {
        case DataModelKind::absolute: return "absolute";
        case DataModelKind::relative: return "relative";
        case DataModelKind::level_relative: return "level-relative";
    }
    throw ValidationError("unknown data model kind");
}

DataModelKind data_model_kind_from_string(const std::string& s) {
    if (s == "absolute") return DataModelKind::absolute;
    if (s == "relative") return DataModelKind::relative;
    if (s == "level-relative" || s == "level_relative") return DataModelKind::level_relative;
    throw ValidationError("unknown data model kind '" + s + "'");
}

void ShockDistribution::validate() const {
    if (shocks.empty())
        throw ValidationError("shock distribution '" + model_id + "' is empty");
    if (holding_days < 1)
        throw ValidationError("shock distribution holding_days must be >= 1");
    for (double s : shocks)
        if (!std::isfinite(s))
            throw ValidationError("non-finite shock in distribution '" + model_id + "'");
}

} // namespace varkit
