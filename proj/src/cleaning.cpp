#include "varkit/cleaning.hpp"

#include "varkit/errors.hpp"
#include "varkit/interp.hpp"
#include "varkit/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace varkit {

namespace {

double population_sd(std::span<const double> v) {
    const double n = static_cast<double>(v.size());
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / n);
}

double sample_sd(std::span<const double> v) {
    const double n = static_cast<double>(v.size());
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / (n - 1.0));
}

std::vector<double> one_day_diffs(const std::vector<double>& x) {
    std::vector<double> d;
    d.reserve(x.size() > 0 ? x.size() - 1 : 0);
    for (std::size_t i = 1; i < x.size(); ++i) d.push_back(x[i] - x[i - 1]);
    return d;
}

/// Nearest-rank upper quantile of |moves|: the ceil(p * n)-th smallest.
double abs_quantile(std::vector<double> absd, double p) {
    std::sort(absd.begin(), absd.end());
    const std::size_t n = absd.size();
    std::size_t k = static_cast<std::size_t>(std::ceil(p * static_cast<double>(n)));
    if (k < 1) k = 1;
    if (k > n) k = n;
    return absd[k - 1];
}

void require_complete(const TimeSeries& ts, const char* op) {
    const auto violations = validate_series(ts);
    if (!violations.empty())
        throw ValidationError(std::string(op) + ": series '" + ts.id +
                              "' invalid: " + violations.front().detail);
    if (!ts.complete())
        throw ValidationError(std::string(op) + ": series '" + ts.id + "' has missing values");
}

// Curve families interpolated across tenor: OIS on its own, deposits and
// swap rates together. CDS columns are outside the tenor axis.
std::vector<std::vector<std::size_t>> curve_families(const std::vector<Instrument>& instruments) {
    std::vector<std::size_t> ois, libor;
    for (std::size_t j = 0; j < instruments.size(); ++j) {
        switch (instruments[j].kind) {
            case Instrument::Kind::ois_swap: ois.push_back(j); break;
            case Instrument::Kind::deposit:
            case Instrument::Kind::libor_swap: libor.push_back(j); break;
            case Instrument::Kind::cds: break;
        }
    }
    auto by_tenor = [&](std::size_t a, std::size_t b) {
        return instruments[a].tenor_years < instruments[b].tenor_years;
    };
    std::sort(ois.begin(), ois.end(), by_tenor);
    std::sort(libor.begin(), libor.end(), by_tenor);
    std::vector<std::vector<std::size_t>> out;
    if (!ois.empty()) out.push_back(std::move(ois));
    if (!libor.empty()) out.push_back(std::move(libor));
    return out;
}

// Fills interior tenor gaps on one row; sparse families are skipped.
void fill_row_core(Date date, const std::vector<Instrument>& instruments,
                   std::vector<std::optional<double>>& row, ChangeLog& log) {
    for (const auto& fam : curve_families(instruments)) {
        std::vector<double> kt, kv;
        for (std::size_t j : fam) {
            if (row[j]) {
                if (!kt.empty() && instruments[j].tenor_years <= kt.back())
                    throw ValidationError("duplicate tenor " +
                                          std::to_string(instruments[j].tenor_years) +
                                          " in curve family ('" + instruments[j].id() + "')");
                kt.push_back(instruments[j].tenor_years);
                kv.push_back(*row[j]);
            }
        }
        if (kt.size() < 2) continue;
        const MonotoneCubic curve(kt, kv);
        for (std::size_t j : fam) {
            const double t = instruments[j].tenor_years;
            if (!row[j] && t > kt.front() && t < kt.back()) {
                const double v = curve(t);
                row[j] = v;
                log.add(date, instruments[j].id(), ChangeAction::interpolated, std::nullopt, v);
            }
        }
    }
}

} // namespace

void CleaningConfig::validate() const {
    if (!(trim_fraction > 0.0 && trim_fraction < 1.0))
        throw ValidationError("trim_fraction must be in (0,1)");
    if (mc_trials < 1) throw ValidationError("mc_trials must be >= 1");
    if (!(threshold_sds > 0.0)) throw ValidationError("threshold_sds must be > 0");
    if (max_time_gap_days < 0) throw ValidationError("max_time_gap_days must be >= 0");
    if (spike_max_width_days < 1) throw ValidationError("spike_max_width_days must be >= 1");
    if (!(spike_return_tolerance > 0.0))
        throw ValidationError("spike_return_tolerance must be > 0");
    if (!(small_level_floor >= 0.0)) throw ValidationError("small_level_floor must be >= 0");
}

std::string to_string(ChangeAction a) {
    switch (a) {
        case ChangeAction::interpolated: return "interpolated";
        case ChangeAction::time_filled: return "time-filled";
        case ChangeAction::extrapolated_flat: return "extrapolated-flat";
        case ChangeAction::extrapolated_spread: return "extrapolated-constant-spread";
        case ChangeAction::outlier_replaced: return "outlier-replaced";
        case ChangeAction::spike_removed: return "spike-removed";
    }
    throw ValidationError("unknown change action");
}

ChangeAction change_action_from_string(const std::string& s) {
    if (s == "interpolated") return ChangeAction::interpolated;
    if (s == "time-filled") return ChangeAction::time_filled;
    if (s == "extrapolated-flat") return ChangeAction::extrapolated_flat;
    if (s == "extrapolated-constant-spread") return ChangeAction::extrapolated_spread;
    if (s == "outlier-replaced") return ChangeAction::outlier_replaced;
    if (s == "spike-removed") return ChangeAction::spike_removed;
    throw ValidationError("unknown change action '" + s + "'");
}

void ChangeLog::add(Date date, std::string id, ChangeAction action,
                    std::optional<double> old_value, double new_value) {
    entries.push_back({date, std::move(id), action, old_value, new_value});
}

void ChangeLog::append(ChangeLog&& other) {
    entries.insert(entries.end(), std::make_move_iterator(other.entries.begin()),
                   std::make_move_iterator(other.entries.end()));
    other.entries.clear();
}

void ChangeLog::sort() {
    std::stable_sort(entries.begin(), entries.end(),
                     [](const ChangeEntry& a, const ChangeEntry& b) {
                         if (a.date != b.date) return a.date < b.date;
                         return a.id < b.id;
                     });
}

InstrumentPanel apply_changelog(const InstrumentPanel& raw, const ChangeLog& log) {
    InstrumentPanel out = raw;
    for (const auto& e : log.entries) {
        const auto i = out.row_of(e.date);
        const auto j = out.find(e.id);
        if (!i || !j)
            throw ValidationError("change log entry for unknown cell (" + e.date.to_string() +
                                  ", '" + e.id + "')");
        out.quotes[*i][*j] = e.new_value;
    }
    return out;
}

RowFillResult fill_curve_date(Date date, const std::vector<Instrument>& instruments,
                              const std::vector<std::optional<double>>& row) {
    if (row.size() != instruments.size())
        throw ValidationError("fill_curve_date: row has " + std::to_string(row.size()) +
                              " cells for " + std::to_string(instruments.size()) +
                              " instruments");
    std::size_t present = 0, missing = 0;
    for (std::size_t j = 0; j < row.size(); ++j) {
        if (!instruments[j].is_curve_instrument()) continue;
        if (row[j])
            ++present;
        else
            ++missing;
    }
    if (missing > 0 && present < 2)
        throw ComputationError("fill_curve_date on " + date.to_string() +
                               ": fewer than two quotes present");
    RowFillResult out{row, {}};
    fill_row_core(date, instruments, out.row, out.log);
    return out;
}

PanelFillResult fill_time_gaps(const InstrumentPanel& panel, const CleaningConfig& cfg) {
    cfg.validate();
    panel.validate();
    PanelFillResult out{panel, {}, {}};
    InstrumentPanel& p = out.panel;
    const std::size_t rows = p.rows(), cols = p.cols();

    auto present_rows = [&](std::size_t j) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < rows; ++i)
            if (p.quotes[i][j]) idx.push_back(i);
        return idx;
    };

    // Short interior runs: linear in calendar time between the bounding
    // observations.
    for (std::size_t j = 0; j < cols; ++j) {
        const auto idx = present_rows(j);
        if (idx.empty()) {
            out.untouched.push_back(p.instruments[j].id());
            continue;
        }
        for (std::size_t k = 1; k < idx.size(); ++k) {
            const std::size_t a = idx[k - 1], b = idx[k];
            const std::size_t run = b - a - 1;
            if (run == 0 || run > static_cast<std::size_t>(cfg.max_time_gap_days)) continue;
            for (std::size_t i = a + 1; i < b; ++i) {
                const double v =
                    lerp_at(static_cast<double>(p.dates[a].serial()), *p.quotes[a][j],
                            static_cast<double>(p.dates[b].serial()), *p.quotes[b][j],
                            static_cast<double>(p.dates[i].serial()));
                p.quotes[i][j] = v;
                out.log.add(p.dates[i], p.instruments[j].id(), ChangeAction::time_filled,
                            std::nullopt, v);
            }
        }
    }

    // Re-apply the tenor fill now that new anchors exist.
    for (std::size_t i = 0; i < rows; ++i)
        fill_row_core(p.dates[i], p.instruments, p.quotes[i], out.log);

    // Remaining gaps in deposit / swap-rate columns: flat in time from
    // the nearest observation (backward for a leading gap).
    for (std::size_t j = 0; j < cols; ++j) {
        const auto kind = p.instruments[j].kind;
        if (kind != Instrument::Kind::deposit && kind != Instrument::Kind::libor_swap) continue;
        const auto idx = present_rows(j);
        if (idx.empty()) continue;
        for (std::size_t i = 0; i < rows; ++i) {
            if (p.quotes[i][j]) continue;
            auto it = std::lower_bound(idx.begin(), idx.end(), i);
            const std::size_t anchor = it == idx.begin() ? idx.front() : *(it - 1);
            const double v = *p.quotes[anchor][j];
            p.quotes[i][j] = v;
            out.log.add(p.dates[i], p.instruments[j].id(), ChangeAction::extrapolated_flat,
                        std::nullopt, v);
        }
    }

    // Remaining OIS gaps: constant spread to the matching-tenor swap rate
    // (deposit if no swap matches), measured at the nearest OIS
    // observation; flat when no companion column exists there.
    for (std::size_t j = 0; j < cols; ++j) {
        if (p.instruments[j].kind != Instrument::Kind::ois_swap) continue;
        const auto idx = present_rows(j);
        if (idx.empty()) continue;
        std::optional<std::size_t> match;
        for (auto kind : {Instrument::Kind::libor_swap, Instrument::Kind::deposit}) {
            for (std::size_t c = 0; c < cols && !match; ++c)
                if (p.instruments[c].kind == kind &&
                    p.instruments[c].tenor_years == p.instruments[j].tenor_years)
                    match = c;
            if (match) break;
        }
        for (std::size_t i = 0; i < rows; ++i) {
            if (p.quotes[i][j]) continue;
            auto it = std::lower_bound(idx.begin(), idx.end(), i);
            const std::size_t anchor = it == idx.begin() ? idx.front() : *(it - 1);
            if (match && p.quotes[anchor][*match] && p.quotes[i][*match]) {
                const double spread = *p.quotes[anchor][*match] - *p.quotes[anchor][j];
                const double v = *p.quotes[i][*match] - spread;
                p.quotes[i][j] = v;
                out.log.add(p.dates[i], p.instruments[j].id(),
                            ChangeAction::extrapolated_spread, std::nullopt, v);
            } else {
                const double v = *p.quotes[anchor][j];
                p.quotes[i][j] = v;
                out.log.add(p.dates[i], p.instruments[j].id(), ChangeAction::extrapolated_flat,
                            std::nullopt, v);
            }
        }
    }

    std::sort(out.untouched.begin(), out.untouched.end());
    return out;
}

double sd_trim_ratio(std::span<const double> diffs, double trim_fraction) {
    if (!(trim_fraction > 0.0 && trim_fraction < 1.0))
        throw ValidationError("trim_fraction must be in (0,1)");
    const std::size_t n = diffs.size();
    if (n < 10)
        throw ValidationError("sd_trim_ratio needs at least 10 differences, got " +
                              std::to_string(n));
    const std::size_t drop =
        static_cast<std::size_t>(std::ceil(trim_fraction * static_cast<double>(n)));
    if (n - drop < 3)
        throw ValidationError("sd_trim_ratio: trimming leaves fewer than three differences");

    // Keep the n - drop smallest by |value|; ties resolved by sort order.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::fabs(diffs[a]) < std::fabs(diffs[b]);
    });
    std::vector<double> kept;
    kept.reserve(n - drop);
    for (std::size_t k = 0; k + drop < n; ++k) kept.push_back(diffs[order[k]]);

    const double sd_some = population_sd(kept);
    if (sd_some == 0.0)
        throw ComputationError("sd_trim_ratio: trimmed differences have zero variance");
    return population_sd(diffs) / sd_some;
}

DetectionResult detect_bad_data(const TimeSeries& ts, const CleaningConfig& cfg, Exec exec) {
    cfg.validate();
    require_complete(ts, "detect_bad_data");
    if (ts.size() < 30)
        throw ValidationError("detect_bad_data: series '" + ts.id + "' has " +
                              std::to_string(ts.size()) + " observations, needs 30");
    const auto diffs = one_day_diffs(ts.dense());
    DetectionResult res;
    res.id = ts.id;
    res.observed_ratio = sd_trim_ratio(diffs, cfg.trim_fraction);

    // Null distribution: the clean hypothesis is independent normal
    // 1-day differences, so each trial draws the difference sample
    // directly. Substreams are derived from (seed, id, trial) so results
    // do not depend on evaluation order.
    const std::uint64_t base = instrument_stream(ts.id);
    const auto ratios = parallel_map<double>(
        static_cast<std::size_t>(cfg.mc_trials), exec, [&](std::size_t trial) {
            std::uint64_t s = base + 0x9e3779b97f4a7c15ull * (trial + 1);
            Rng rng(cfg.rng_seed, splitmix64(s));
            std::vector<double> sim(diffs.size());
            for (double& v : sim) v = rng.normal();
            return sd_trim_ratio(sim, cfg.trim_fraction);
        });
    res.simulated_mean =
        std::accumulate(ratios.begin(), ratios.end(), 0.0) / static_cast<double>(ratios.size());
    res.simulated_sd = ratios.size() > 1 ? sample_sd(ratios) : 0.0;
    res.threshold = res.simulated_mean + cfg.threshold_sds * res.simulated_sd;
    res.flagged = res.observed_ratio > res.threshold;
    return res;
}

SeriesCleanResult repair_outliers(const TimeSeries& ts, const CleaningConfig& cfg) {
    cfg.validate();
    require_complete(ts, "repair_outliers");
    SeriesCleanResult out{ts, {}};
    if (ts.size() < 3) return out;

    std::vector<double> x = ts.dense();
    const auto diffs = one_day_diffs(x);
    std::vector<double> absd(diffs.size());
    std::transform(diffs.begin(), diffs.end(), absd.begin(),
                   [](double d) { return std::fabs(d); });
    const double q = abs_quantile(std::move(absd), 1.0 - cfg.trim_fraction);

    const std::size_t n = x.size();
    auto record = [&](std::size_t i, double v) {
        out.log.add(ts.dates[i], ts.id, ChangeAction::outlier_replaced, x[i], v);
        x[i] = v;
    };
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double din = x[i] - x[i - 1];
        const double dout = x[i + 1] - x[i];
        if (std::fabs(din) > q && std::fabs(dout) > q && din * dout < 0.0) {
            record(i, 0.5 * (x[i - 1] + x[i + 1]));
            continue;
        }
        if (i + 2 < n) {
            const double dstay = x[i + 1] - x[i];
            const double dback = x[i + 2] - x[i + 1];
            if (std::fabs(din) > q && std::fabs(dback) > q && din * dback < 0.0 &&
                std::fabs(dstay) <= cfg.small_level_floor) {
                const double v = 0.5 * (x[i - 1] + x[i + 2]);
                record(i, v);
                record(i + 1, v);
                ++i;
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) out.series.values[i] = x[i];
    return out;
}

SeriesCleanResult clean_spikes(const TimeSeries& ts, const CleaningConfig& cfg) {
    cfg.validate();
    require_complete(ts, "clean_spikes");
    SeriesCleanResult out{ts, {}};
    const std::size_t n = ts.size();
    if (n < 3) return out;
    std::vector<double> x = ts.dense();

    auto tolerance = [&](double p) {
        return std::fabs(p) >= cfg.small_level_floor ? cfg.spike_return_tolerance * std::fabs(p)
                                                     : cfg.small_level_floor;
    };

    for (int w = 1; w <= cfg.spike_max_width_days; ++w) {
        const std::size_t uw = static_cast<std::size_t>(w);
        std::size_t i = 1;
        while (i + uw <= n - 1) {
            const double p = x[i - 1];
            const double after = x[i + uw];
            const double tol = tolerance(p);
            bool is_spike = std::fabs(after - p) <= tol;
            for (std::size_t k = i; is_spike && k < i + uw; ++k)
                is_spike = std::fabs(x[k] - p) > tol;
            if (!is_spike) {
                ++i;
                continue;
            }
            const double t0 = static_cast<double>(ts.dates[i - 1].serial());
            const double t1 = static_cast<double>(ts.dates[i + uw].serial());
            for (std::size_t k = i; k < i + uw; ++k) {
                const double v =
                    lerp_at(t0, p, t1, after, static_cast<double>(ts.dates[k].serial()));
                out.log.add(ts.dates[k], ts.id, ChangeAction::spike_removed, x[k], v);
                x[k] = v;
            }
            i += uw;
        }
    }
    for (std::size_t i = 0; i < n; ++i) out.series.values[i] = x[i];
    return out;
}

PanelCleanResult clean_panel(const InstrumentPanel& panel, const CleaningConfig& cfg,
                             Exec exec) {
    cfg.validate();
    panel.validate();

    // Tenor-axis fill, date by date; rows too sparse to interpolate are
    // left for the time-axis pass.
    InstrumentPanel filled = panel;
    ChangeLog log;
    for (std::size_t i = 0; i < filled.rows(); ++i)
        fill_row_core(filled.dates[i], filled.instruments, filled.quotes[i], log);

    PanelFillResult timed = fill_time_gaps(filled, cfg);
    log.append(std::move(timed.log));

    // Instrument-level repair: detect on every completed column with
    // enough history, repair only the flagged ones.
    struct ColumnOutcome {
        std::optional<DetectionResult> detection;
        std::vector<std::optional<double>> values;
        ChangeLog log;
    };
    const InstrumentPanel& p = timed.panel;
    auto outcomes = parallel_map<ColumnOutcome>(p.cols(), exec, [&](std::size_t j) {
        ColumnOutcome oc;
        const TimeSeries col = p.column(j);
        oc.values.assign(col.values.begin(), col.values.end());
        if (!col.complete() || col.size() < 30) return oc;
        oc.detection = detect_bad_data(col, cfg, Exec::serial);
        if (oc.detection->flagged) {
            SeriesCleanResult repaired = repair_outliers(col, cfg);
            oc.values.assign(repaired.series.values.begin(), repaired.series.values.end());
            oc.log = std::move(repaired.log);
        }
        return oc;
    });

    PanelCleanResult out{p, {}, std::move(timed.untouched), {}};
    for (std::size_t j = 0; j < p.cols(); ++j) {
        auto& oc = outcomes[j];
        if (oc.detection) out.detections.push_back(*oc.detection);
        for (std::size_t i = 0; i < p.rows(); ++i) out.panel.quotes[i][j] = oc.values[i];
    }
    out.log = std::move(log);
    for (auto& oc : outcomes) out.log.append(std::move(oc.log));
    out.log.sort();
    return out;
}

} // namespace varkit
