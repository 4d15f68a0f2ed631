#include "varkit/metrics.hpp"

#include "varkit/errors.hpp"

#include <algorithm>
#include <cmath>

namespace varkit {

namespace {

std::vector<double> checked_sorted(std::span<const double> losses, const char* op) {
    if (losses.empty()) throw ValidationError(std::string(op) + ": empty loss vector");
    for (double v : losses)
        if (!std::isfinite(v)) throw ValidationError(std::string(op) + ": non-finite loss");
    std::vector<double> s(losses.begin(), losses.end());
    std::sort(s.begin(), s.end());
    return s;
}

/// Relative change |a - b| / |b|; falls back to the absolute change when
/// the reference is zero (a changed metric must not report 0 or inf).
double relative_change(double a, double b) {
    const double d = std::fabs(a - b);
    if (d == 0.0) return 0.0;
    return b != 0.0 ? d / std::fabs(b) : d;
}

} // namespace

void RiskConfig::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("alpha must be in (0,1)");
    if (!(beta > 0.0 && beta < 1.0)) throw ValidationError("beta must be in (0,1)");
    if (holding_days < 1) throw ValidationError("holding_days must be >= 1");
    if (window_days < holding_days + 2)
        throw ValidationError("window_days must be at least holding_days + 2");
}

double var(std::span<const double> losses, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("var: alpha must be in (0,1)");
    const auto s = checked_sorted(losses, "var");
    const double n = static_cast<double>(s.size());
    // Smallest k with k/n >= alpha. ceil can land one off after floating
    // rounding, so nudge until the definition holds exactly.
    std::size_t k = static_cast<std::size_t>(std::ceil(alpha * n));
    if (k < 1) k = 1;
    if (k > s.size()) k = s.size();
    while (k > 1 && static_cast<double>(k - 1) / n >= alpha) --k;
    while (k < s.size() && static_cast<double>(k) / n < alpha) ++k;
    return s[k - 1];
}

double es(std::span<const double> losses, double beta) {
    if (!(beta > 0.0 && beta < 1.0)) throw ValidationError("es: beta must be in (0,1)");
    const auto s = checked_sorted(losses, "es");
    const double n = static_cast<double>(s.size());
    const double k = (1.0 - beta) * n;
    const std::size_t whole = static_cast<std::size_t>(std::floor(k));
    const double frac = k - static_cast<double>(whole);
    double acc = 0.0;
    for (std::size_t j = 0; j < whole; ++j) acc += s[s.size() - 1 - j];
    if (frac > 0.0 && whole < s.size()) acc += frac * s[s.size() - 1 - whole];
    return acc / k;
}

SvarReport svar_report(const TimeSeries& x, std::pair<Date, Date> stress_window,
                       const DataModelSpec& spec, const MarketState& state_use,
                       const RiskConfig& cfg) {
    cfg.validate();
    spec.validate();
    state_use.validate();
    if (spec.holding_days != cfg.holding_days)
        throw ValidationError("data model holding_days " + std::to_string(spec.holding_days) +
                              " disagrees with risk config " + std::to_string(cfg.holding_days));
    const TimeSeries w = x.window(stress_window.first, stress_window.second);
    if (w.size() < static_cast<std::size_t>(cfg.window_days))
        throw ValidationError("stress window has " + std::to_string(w.size()) +
                              " observations, needs " + std::to_string(cfg.window_days));

    MarketState state_obs;
    state_obs.as_of = w.dates.back();
    state_obs.window_start = w.dates.front();
    state_obs.level = w.values.back() ? *w.values.back() : 0.0;

    const ShockDistribution dist = build_distribution(w, spec, state_obs, state_use);
    const ScenarioSet scen = apply_shocks(state_use.level, dist, 0.0);
    std::vector<double> pnl(scen.values.size());
    for (std::size_t i = 0; i < pnl.size(); ++i) pnl[i] = scen.values[i] - state_use.level;
    std::vector<double> neg(pnl.size());
    for (std::size_t i = 0; i < pnl.size(); ++i) neg[i] = -pnl[i];

    const double nd = static_cast<double>(pnl.size());
    SvarReport rep;
    rep.scenario_count = static_cast<int>(pnl.size());
    rep.floor_breaches = scen.breach_count;
    for (RiskReport* r : {&rep.lower, &rep.upper}) {
        r->as_of = state_use.as_of;
        r->model_id = dist.model_id;
        r->window = dist.source_window;
        r->tail_count = (1.0 - cfg.alpha) * nd;
        r->es_tail_count = (1.0 - cfg.beta) * nd;
    }
    rep.lower.var_value = var(pnl, 1.0 - cfg.alpha);
    rep.upper.var_value = var(pnl, cfg.alpha);
    rep.lower.es_value = -es(neg, cfg.beta);
    rep.upper.es_value = es(pnl, cfg.beta);
    return rep;
}

std::vector<SensitivityPoint> rolling_clean_sensitivity(const TimeSeries& raw,
                                                        const CleaningConfig& cfg_clean,
                                                        const RiskConfig& cfg_risk, Exec exec,
                                                        double var_epsilon) {
    cfg_clean.validate();
    cfg_risk.validate();
    const auto violations = validate_series(raw);
    if (!violations.empty())
        throw ValidationError("rolling_clean_sensitivity: " + violations.front().detail);
    if (!raw.complete())
        throw ValidationError("rolling_clean_sensitivity: series has missing values");
    const std::size_t W = static_cast<std::size_t>(cfg_risk.window_days);
    if (raw.size() < W)
        throw ValidationError("series has " + std::to_string(raw.size()) +
                              " observations, shorter than one " + std::to_string(W) +
                              "-day window");

    const std::size_t count = raw.size() - W + 1;
    return parallel_map<SensitivityPoint>(count, exec, [&](std::size_t wi) {
        const std::size_t end = wi + W - 1;
        TimeSeries slice;
        slice.id = raw.id;
        slice.units = raw.units;
        slice.dates.assign(raw.dates.begin() + wi, raw.dates.begin() + end + 1);
        slice.values.assign(raw.values.begin() + wi, raw.values.begin() + end + 1);

        const TimeSeries cleaned = clean_spikes(slice, cfg_clean).series;
        const auto dirty_d = diffs_absolute(slice, cfg_risk.holding_days);
        const auto clean_d = diffs_absolute(cleaned, cfg_risk.holding_days);

        const double v_dirty = var(dirty_d, cfg_risk.alpha);
        const double v_clean = var(clean_d, cfg_risk.alpha);
        const double e_dirty = es(dirty_d, cfg_risk.beta);
        const double e_clean = es(clean_d, cfg_risk.beta);

        SensitivityPoint p;
        p.date = slice.dates.back();
        p.var_rel = relative_change(v_clean, v_dirty);
        p.es_rel = relative_change(e_clean, e_dirty);
        p.es_only = p.var_rel < var_epsilon;
        p.ratio = p.es_only ? p.es_rel : p.es_rel / p.var_rel;
        return p;
    });
}

std::string to_string(CapitalMode m) { return m == CapitalMode::sum ? "sum" : "twomax"; }

CapitalMode capital_mode_from_string(const std::string& s) {
    if (s == "sum") return CapitalMode::sum;
    if (s == "twomax" || s == "two-max") return CapitalMode::two_max;
    throw ValidationError("unknown capital mode '" + s + "'");
}

double capital_charge(double var_value, double svar_value, CapitalMode mode) {
    if (!std::isfinite(var_value) || !std::isfinite(svar_value) || var_value < 0.0 ||
        svar_value < 0.0)
        throw ValidationError("capital_charge requires nonnegative finite inputs");
    return mode == CapitalMode::sum ? var_value + svar_value
                                    : 2.0 * std::max(var_value, svar_value);
}

std::vector<SvarTableRow> svar_swap_table(const InstrumentPanel& cleaned,
                                          std::span<const DataModelSpec> specs,
                                          const SvarTableParams& params, const RiskConfig& cfg,
                                          Exec exec) {
    cfg.validate();
    if (specs.empty()) throw ValidationError("svar_swap_table: no data models given");
    for (const auto& s : specs) {
        s.validate();
        if (s.holding_days != cfg.holding_days)
            throw ValidationError("data model holding_days " + std::to_string(s.holding_days) +
                                  " disagrees with risk config " +
                                  std::to_string(cfg.holding_days));
    }
    if (params.maturities.empty()) throw ValidationError("svar_swap_table: no maturities");
    if (params.tenor_grid.size() < 2)
        throw ValidationError("svar_swap_table: tenor grid needs at least two tenors");
    for (std::size_t i = 1; i < params.tenor_grid.size(); ++i)
        if (params.tenor_grid[i] <= params.tenor_grid[i - 1])
            throw ValidationError("svar_swap_table: tenor grid must be strictly increasing");

    const auto as_of_row = cleaned.row_of(params.as_of);
    if (!as_of_row)
        throw ValidationError("as_of " + params.as_of.to_string() + " is not a panel date");
    const InstrumentPanel window =
        business_day_window(cleaned, params.stress_window.first, params.stress_window.second);
    if (window.rows() < static_cast<std::size_t>(cfg.window_days))
        throw ValidationError("stress window has " + std::to_string(window.rows()) +
                              " panel rows, needs " + std::to_string(cfg.window_days));

    const std::vector<CurveSet> curves = bootstrap_panel(window, params.regime, exec);
    const CurveSet base_raw = bootstrap_row(cleaned, *as_of_row, params.regime);

    // Zero rates on the common tenor grid, per window date and at as_of.
    const std::size_t T = params.tenor_grid.size();
    std::vector<TenorRates> window_rates(curves.size());
    for (std::size_t i = 0; i < curves.size(); ++i)
        window_rates[i] = tenor_rates(curves[i], params.tenor_grid);
    const TenorRates base_rates = tenor_rates(base_raw, params.tenor_grid);

    // The base CurveSet is rebuilt on the tenor grid so base and
    // scenario curves share pillars and interpolation behavior.
    std::vector<double> grid(params.tenor_grid.begin(), params.tenor_grid.end());
    auto curves_from = [&](const std::vector<double>& disc,
                           const std::vector<double>& spread) {
        ZeroCurve d(params.as_of, grid, disc, CurveRole::discount);
        if (params.regime == CurveRegime::single_curve)
            return CurveSet{std::move(d), std::nullopt, CurveRegime::single_curve};
        std::vector<double> proj(T);
        for (std::size_t t = 0; t < T; ++t) proj[t] = disc[t] + spread[t];
        ZeroCurve pc(params.as_of, grid, proj, CurveRole::projection);
        return CurveSet{std::move(d), std::move(pc), CurveRegime::multi_curve};
    };
    const CurveSet base = curves_from(base_rates.discount, base_rates.spread);

    auto tenor_series = [&](std::size_t t, bool spread) {
        TimeSeries ts;
        ts.id = (spread ? "spread@" : "discount@") + std::to_string(grid[t]);
        ts.dates = window.dates;
        ts.values.reserve(window.rows());
        for (const auto& r : window_rates)
            ts.values.push_back(spread ? r.spread[t] : r.discount[t]);
        return ts;
    };

    std::vector<SvarTableRow> rows;
    for (const auto& spec : specs) {
        // Per-tenor scenario values for discount rates and spreads.
        std::vector<ScenarioSet> disc_scen(T), spread_scen(T);
        int breaches = 0;
        DataModelSpec spread_spec;
        spread_spec.kind = params.spread_model;
        spread_spec.holding_days = spec.holding_days;
        if (params.spread_model == DataModelKind::level_relative)
            spread_spec.level_function = spec.level_function;
        for (std::size_t t = 0; t < T; ++t) {
            MarketState obs{window.dates.back(), window_rates.back().discount[t],
                            window.dates.front()};
            MarketState use{params.as_of, base_rates.discount[t], params.as_of};
            const auto dist = build_distribution(tenor_series(t, false), spec, obs, use);
            disc_scen[t] = apply_shocks(use.level, dist, params.scenario_floor);
            breaches += disc_scen[t].breach_count;
            if (params.regime == CurveRegime::multi_curve) {
                MarketState sobs{window.dates.back(), window_rates.back().spread[t],
                                 window.dates.front()};
                MarketState suse{params.as_of, base_rates.spread[t], params.as_of};
                const auto sdist =
                    build_distribution(tenor_series(t, true), spread_spec, sobs, suse);
                spread_scen[t] = apply_shocks(suse.level, sdist, params.scenario_floor);
            }
        }
        const std::size_t nd = disc_scen.front().values.size();

        // Joint historical scenarios: index i picks the same source move
        // on every tenor, preserving curve shape changes.
        const auto pnl_matrix = parallel_map<std::vector<double>>(nd, exec, [&](std::size_t i) {
            std::vector<double> disc(T), spread(T, 0.0);
            for (std::size_t t = 0; t < T; ++t) {
                disc[t] = disc_scen[t].values[i];
                if (params.regime == CurveRegime::multi_curve)
                    spread[t] = spread_scen[t].values[i];
            }
            const CurveSet scen = curves_from(disc, spread);
            std::vector<double> pnl(params.maturities.size());
            for (std::size_t mi = 0; mi < params.maturities.size(); ++mi)
                pnl[mi] = par_swap_pnl(base, scen, params.maturities[mi],
                                       SwapDirection::payer);
            return pnl;
        });

        for (std::size_t mi = 0; mi < params.maturities.size(); ++mi) {
            std::vector<double> pnl(nd), neg(nd);
            for (std::size_t i = 0; i < nd; ++i) {
                pnl[i] = pnl_matrix[i][mi];
                neg[i] = -pnl[i];
            }
            SvarTableRow row;
            row.window_label = params.window_label;
            row.maturity = params.maturities[mi];
            row.model_id = spec.id();
            row.svar_lower = var(pnl, 1.0 - cfg.alpha);
            row.svar_upper = var(pnl, cfg.alpha);
            row.es_lower = -es(neg, cfg.beta);
            row.es_upper = es(pnl, cfg.beta);
            row.floor_breaches = breaches;
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

} // namespace varkit
