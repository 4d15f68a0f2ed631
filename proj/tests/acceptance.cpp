// Acceptance gate for the library and CLI. Twelve end-to-end checks run
// in order, each printing exactly one PASS/FAIL line with its wall-clock
// time; the process exit code is the number of failures. Tolerances are
// pinned as named constants below. Checks compare the production code
// against the independent reference implementations in oracles.hpp, or
// against constructions whose expected outcome holds exactly in IEEE
// arithmetic (power-of-two scalings, shared-grid translations, identical
// subexpressions).

#include "oracles.hpp"

#include "varkit/cleaning.hpp"
#include "varkit/core.hpp"
#include "varkit/curve.hpp"
#include "varkit/datamodel.hpp"
#include "varkit/dates.hpp"
#include "varkit/errors.hpp"
#include "varkit/gaps.hpp"
#include "varkit/levels.hpp"
#include "varkit/metrics.hpp"
#include "varkit/rng.hpp"
#include "varkit/synthetic.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace varkit;
namespace fs = std::filesystem;

// ------------------------------------------------------------------ pins

// Check 1: VAR must equal the CDF-scan oracle bitwise; ES must match the
// quantile-function integral to this relative tolerance, in under the
// time budget.
constexpr int kOracleVectors = 1000;
constexpr double kEsOracleRelTol = 1e-12;
constexpr double kVarEsSecondsBudget = 10.0;

// Check 3: randomized cases per algebraic family, all exact equality.
constexpr int kAlgebraCases = 500;

// Check 5: seeded trials, required hit counts, alteration cap, budget.
constexpr int kCleanTrials = 100;
constexpr int kDetectMinHits = 99;
constexpr int kConservMinHits = 95;
constexpr int kConservMaxAltered = 3;
constexpr double kCleanSecondsBudget = 60.0;
constexpr double kSpikeSds = 20.0;

// Check 7: coefficient recovery band (in standard errors) and the
// significance cap for the linear and quadratic terms.
constexpr double kFitSigmaBand = 3.0;
constexpr double kFitPValueCap = 1e-6;

// Check 8: every populated bucket SD within this fraction of the median.
constexpr double kFlatBand = 0.10;

// Check 9: repricing and cross-regime pillar tolerances.
constexpr double kRepriceRelTol = 1e-10;
constexpr double kPillarMatchTol = 1e-12;

const Date kStart = Date::parse("2015-01-05");

// --------------------------------------------------------------- helpers

std::string read_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) return std::string("\x01<unreadable>") + p.string();
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

template <typename... Args> std::string fail(Args&&... args) {
    std::ostringstream s;
    s.precision(17);
    (s << ... << args);
    return s.str();
}

// ------------------------------------------------------------- check 1
// Historical VAR/ES against the independent oracles over seeded loss
// vectors of mixed shape (smooth, uniform, tie-heavy, skewed).

std::string check_var_es_oracles() {
    Rng rng(101, 7);
    const auto t0 = std::chrono::steady_clock::now();
    for (int rep = 0; rep < kOracleVectors; ++rep) {
        const int n = static_cast<int>(rng.uniform_int(10, 2000));
        std::vector<double> v(static_cast<std::size_t>(n));
        const int style = rep % 4;
        for (double& x : v) {
            const double z = rng.normal();
            if (style == 0) x = z + 5.0;
            else if (style == 1) x = -3.0 + 20.0 * rng.uniform01();
            else if (style == 2) x = std::round(z * 4.0) / 4.0 + 6.0; // heavy ties
            else x = std::exp(0.5 * z) + 2.0;
        }
        const double alphas[] = {0.99, 0.975, 0.5, 0.01, 0.001 + 0.998 * rng.uniform01()};
        for (double a : alphas) {
            const double got = var(v, a);
            const double want = oracles::var_cdf_scan(v, a);
            if (got != want)
                return fail("vector ", rep, " alpha ", a, ": var ", got, " != oracle ", want);
        }
        const double betas[] = {0.975, 0.99, 0.5 + 0.49 * rng.uniform01()};
        for (double b : betas) {
            const double got = es(v, b);
            const double want = oracles::es_quantile_integral(v, b);
            if (std::fabs(got - want) > kEsOracleRelTol * std::fabs(want))
                return fail("vector ", rep, " beta ", b, ": es ", got, " vs oracle ", want,
                            " rel diff ", std::fabs(got - want) / std::fabs(want));
        }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs >= kVarEsSecondsBudget)
        return fail("took ", secs, "s, budget ", kVarEsSecondsBudget, "s");
    return {};
}

// ------------------------------------------------------------- check 2
// With 260 shocks, VAR(99%) is an order statistic above the 98th
// percentile; replacing any shock strictly below that percentile with
// any other value strictly below it cannot move VAR. Exhaustive over
// eligible indices, several replacement values each, bitwise equality.

std::string check_tail_count_identity() {
    Rng rng(202, 1);
    const int n = 260;
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = rng.normal() + i * 1e-9; // distinct
    const double p98 = oracles::nearest_rank(v, 0.98);
    const double base = var(v, 0.99);

    int tested = 0;
    for (int i = 0; i < n; ++i) {
        if (!(v[i] < p98)) continue;
        ++tested;
        const double candidates[] = {p98 - 1.0, p98 - std::fabs(p98) * 1e-9 - 1e-12,
                                     0.5 * (v[i] + p98), v[i] - 3.7, -1e9};
        for (double r : candidates) {
            if (!(r < p98)) continue; // keep strictly below the percentile
            std::vector<double> w = v;
            w[static_cast<std::size_t>(i)] = r;
            const double got = var(w, 0.99);
            if (got != base)
                return fail("perturbing index ", i, " to ", r, " moved var from ", base, " to ",
                            got);
        }
    }
    if (tested < 250) return fail("only ", tested, " shocks lie below the 98th percentile");
    return {};
}

// ------------------------------------------------------------- check 3
// Four algebraic invariants of the shock families, each over at least
// kAlgebraCases randomized cases with exact equality. The constructions
// make the identities exact in IEEE arithmetic: power-of-two scalings
// commute with every operation, translations act on a shared dyadic
// grid, a constant level function yields a scale of exactly 1.0, and
// power-of-two level ladders make the scale ratios exact.

std::string check_family_algebra() {
    // (a) Relative shocks are invariant under scaling the series.
    {
        Rng rng(303, 1);
        for (int rep = 0; rep < kAlgebraCases; ++rep) {
            const int len = static_cast<int>(rng.uniform_int(30, 130));
            const int m = static_cast<int>(rng.uniform_int(1, 5));
            std::vector<double> vals(static_cast<std::size_t>(len));
            for (double& x : vals) x = 0.01 * (1.0 + 4.0 * rng.uniform01());
            const int j = static_cast<int>(rng.uniform_int(-3, 3));
            std::vector<double> scaled = vals;
            for (double& x : scaled) x = std::ldexp(x, j);

            const TimeSeries a = oracles::make_series(kStart, vals);
            const TimeSeries b = oracles::make_series(kStart, scaled);
            DataModelSpec spec;
            spec.kind = DataModelKind::relative;
            spec.holding_days = m;
            const MarketState obs{a.dates.back(), vals.back(), a.dates.front()};
            const MarketState obs2{b.dates.back(), scaled.back(), b.dates.front()};
            const auto da = build_distribution(a, spec, obs, obs);
            const auto db = build_distribution(b, spec, obs2, obs2);
            if (da.shocks != db.shocks)
                return fail("scale invariance broke at case ", rep, " (scale 2^", j, ")");
        }
    }
    // (b) Absolute shocks are invariant under translating the series.
    {
        Rng rng(303, 2);
        for (int rep = 0; rep < kAlgebraCases; ++rep) {
            const int len = static_cast<int>(rng.uniform_int(30, 130));
            const int m = static_cast<int>(rng.uniform_int(1, 5));
            std::vector<double> vals(static_cast<std::size_t>(len));
            for (double& x : vals)
                x = std::ldexp(static_cast<double>(rng.uniform_int(-1000000, 1000000)), -20);
            const double shift =
                std::ldexp(static_cast<double>(rng.uniform_int(-1000000, 1000000)), -20);
            std::vector<double> moved = vals;
            for (double& x : moved) x += shift;

            const TimeSeries a = oracles::make_series(kStart, vals);
            const TimeSeries b = oracles::make_series(kStart, moved);
            DataModelSpec spec;
            spec.kind = DataModelKind::absolute;
            spec.holding_days = m;
            const MarketState sa{a.dates.back(), 0.02, a.dates.front()};
            const auto da = build_distribution(a, spec, sa, sa);
            const auto db = build_distribution(b, spec, sa, sa);
            if (da.shocks != db.shocks)
                return fail("translation invariance broke at case ", rep, " (shift ", shift, ")");
        }
    }
    // (c) Level-relative under a constant level function is the plain
    // relative family: the scale is C/C == 1.0 for any constant C.
    {
        Rng rng(303, 3);
        for (int rep = 0; rep < kAlgebraCases; ++rep) {
            const int len = static_cast<int>(rng.uniform_int(30, 130));
            const int m = static_cast<int>(rng.uniform_int(1, 5));
            std::vector<double> vals(static_cast<std::size_t>(len));
            for (double& x : vals) x = 0.01 * (1.0 + 4.0 * rng.uniform01());
            const double c = 0.1 + rng.uniform01();
            const LevelFunction fn(1, c, 0.0, 0.0, 0.001, 0.5, Extrapolation::flat);

            const TimeSeries a = oracles::make_series(kStart, vals);
            DataModelSpec rel;
            rel.kind = DataModelKind::relative;
            rel.holding_days = m;
            DataModelSpec lr;
            lr.kind = DataModelKind::level_relative;
            lr.holding_days = m;
            lr.level_function = fn;
            const MarketState use{a.dates.back(), 0.01 + 0.04 * rng.uniform01(),
                                  a.dates.front()};
            const auto dr = build_distribution(a, rel, use, use);
            const auto dl = build_distribution(a, lr, use, use);
            if (dr.shocks != dl.shocks)
                return fail("constant level function broke at case ", rep, " (C=", c, ")");
        }
    }
    // (d) level_scale composes: scale(l1->l2) * scale(l2->l3) equals
    // scale(l1->l3) exactly on power-of-two ladders.
    {
        const LevelFunction fn(1, 0.0, 1.0, 0.0, 1e-5, 10.0, Extrapolation::polynomial);
        Rng rng(303, 4);
        for (int rep = 0; rep < kAlgebraCases; ++rep) {
            const double l1 = std::ldexp(static_cast<double>(rng.uniform_int(1, 255)), -10);
            const double l2 = std::ldexp(l1, static_cast<int>(rng.uniform_int(0, 3)));
            const double l3 = std::ldexp(l1, static_cast<int>(rng.uniform_int(0, 3)));
            const double direct = level_scale(fn, l1, l3);
            const double composed = level_scale(fn, l1, l2) * level_scale(fn, l2, l3);
            if (direct != composed)
                return fail("composition broke at case ", rep, ": ", composed, " != ", direct);
        }
    }
    return {};
}

// ------------------------------------------------------------- check 4
// When every shock's starting level in the stress window equals the use
// level bit-for-bit, the level scale is fn(L)/fn(L) == 1.0 for any
// level function, so the level-relative report must be bit-identical to
// the relative report. The last holding_days observations are free to
// vary because they never start a move.

std::string check_same_level_window() {
    const int n = 270, m = 10;
    const LevelFunction fns[] = {
        LevelFunction(2, 0.004, 0.3, 2.0, 0.005, 0.06, Extrapolation::flat),
        LevelFunction(1, 0.002, 0.25, 0.0, 0.005, 0.06, Extrapolation::polynomial),
    };
    for (int seed = 0; seed < 5; ++seed) {
        Rng rng(404 + seed, 9);
        const double level = 0.02 + 0.003 * seed;
        std::vector<double> vals(n, level);
        for (int i = n - m; i < n; ++i) vals[static_cast<std::size_t>(i)] =
            level * (1.0 + 0.02 * rng.normal());
        const TimeSeries x = oracles::make_series(kStart, vals);
        const std::pair<Date, Date> window{x.dates.front(), x.dates.back()};
        const MarketState use{x.dates.back(), level, x.dates.front()};
        RiskConfig cfg; // defaults: 0.99 / 0.975 / m=10 / 260

        DataModelSpec rel;
        rel.kind = DataModelKind::relative;
        rel.holding_days = m;
        const SvarReport rr = svar_report(x, window, rel, use, cfg);

        for (const LevelFunction& fn : fns) {
            DataModelSpec lr;
            lr.kind = DataModelKind::level_relative;
            lr.holding_days = m;
            lr.level_function = fn;
            const SvarReport lrr = svar_report(x, window, lr, use, cfg);
            const bool same = lrr.lower.var_value == rr.lower.var_value &&
                              lrr.lower.es_value == rr.lower.es_value &&
                              lrr.upper.var_value == rr.upper.var_value &&
                              lrr.upper.es_value == rr.upper.es_value &&
                              lrr.lower.tail_count == rr.lower.tail_count &&
                              lrr.upper.es_tail_count == rr.upper.es_tail_count &&
                              lrr.floor_breaches == rr.floor_breaches &&
                              lrr.scenario_count == rr.scenario_count;
            if (!same)
                return fail("reports differ at seed ", seed, " degree ", fn.degree(), ": lower ",
                            lrr.lower.var_value, " vs ", rr.lower.var_value, ", upper ",
                            lrr.upper.var_value, " vs ", rr.upper.var_value);
        }
    }
    return {};
}

// ------------------------------------------------------------- check 5
// Detection power: unit-SD Gaussian walks with five injected isolated
// spikes of 20 SDs must be flagged and every spiked point altered by
// the outlier/spike repairs. Conservatism: the same repairs applied to
// spike-free walks of 2000 points may alter at most kConservMaxAltered
// points. Both over kCleanTrials seeded trials. The walks start at
// level 150 so the 10% relative spike tolerance stays many move-SDs
// wide wherever the walk plausibly drifts; the injected spikes are
// caught by the move-magnitude outlier rule at any level.

std::string check_cleaning_power() {
    const auto t0 = std::chrono::steady_clock::now();
    const int n = 2000;
    int detect_hits = 0, conserv_hits = 0;

    for (int trial = 0; trial < kCleanTrials; ++trial) {
        Rng rng(5000 + trial, 3);
        std::vector<double> clean(static_cast<std::size_t>(n));
        clean[0] = 150.0;
        for (int i = 1; i < n; ++i)
            clean[static_cast<std::size_t>(i)] = clean[static_cast<std::size_t>(i - 1)] +
                                                 rng.normal();

        std::vector<double> spiked = clean;
        std::vector<int> where;
        for (int s = 0; s < 5; ++s) {
            const int pos = 150 + 350 * s + static_cast<int>(rng.uniform_int(0, 100));
            where.push_back(pos);
            spiked[static_cast<std::size_t>(pos)] += (s % 2 == 0 ? kSpikeSds : -kSpikeSds);
        }

        CleaningConfig cfg;
        cfg.rng_seed = static_cast<std::uint64_t>(9000 + trial);
        const TimeSeries dirty = oracles::make_series(kStart, spiked, "probe");
        const DetectionResult det = detect_bad_data(dirty, cfg, Exec::serial);
        const TimeSeries repaired = clean_spikes(repair_outliers(dirty, cfg).series, cfg).series;
        bool all_fixed = det.flagged;
        for (int pos : where)
            all_fixed = all_fixed && *repaired.values[static_cast<std::size_t>(pos)] !=
                                         spiked[static_cast<std::size_t>(pos)];
        detect_hits += all_fixed ? 1 : 0;
    }

    for (int trial = 0; trial < kCleanTrials; ++trial) {
        Rng rng(6000 + trial, 4);
        std::vector<double> vals(static_cast<std::size_t>(n));
        vals[0] = 150.0;
        for (int i = 1; i < n; ++i)
            vals[static_cast<std::size_t>(i)] = vals[static_cast<std::size_t>(i - 1)] +
                                                rng.normal();
        CleaningConfig cfg;
        cfg.rng_seed = static_cast<std::uint64_t>(9500 + trial);
        const TimeSeries x = oracles::make_series(kStart, vals, "probe");
        const SeriesCleanResult r1 = repair_outliers(x, cfg);
        const SeriesCleanResult r2 = clean_spikes(r1.series, cfg);
        const std::size_t altered = r1.log.entries.size() + r2.log.entries.size();
        conserv_hits += altered <= static_cast<std::size_t>(kConservMaxAltered) ? 1 : 0;
    }

    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (detect_hits < kDetectMinHits)
        return fail("spikes fully repaired in only ", detect_hits, "/", kCleanTrials, " trials");
    if (conserv_hits < kConservMinHits)
        return fail("clean series kept <= ", kConservMaxAltered, " alterations in only ",
                    conserv_hits, "/", kCleanTrials, " trials");
    if (secs >= kCleanSecondsBudget)
        return fail("took ", secs, "s, budget ", kCleanSecondsBudget, "s");
    return {};
}

// ------------------------------------------------------------- check 6
// Inflating only the largest of 260 shocks (kept in place, so the order
// statistics below it are untouched) leaves VAR(99%) bitwise unchanged
// while ES(97.5%) strictly increases: ES averages the tail that VAR
// merely indexes into.

std::string check_es_moves_var_does_not() {
    for (int rep = 0; rep < 50; ++rep) {
        Rng rng(606 + rep, 2);
        std::vector<double> v(260);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = rng.normal() + static_cast<double>(i) *
                                                          1e-9;
        const std::size_t imax = static_cast<std::size_t>(
            std::max_element(v.begin(), v.end()) - v.begin());
        std::vector<double> w = v;
        w[imax] = v[imax] * 1.5 + 1.0; // still the maximum

        if (var(w, 0.99) != var(v, 0.99))
            return fail("rep ", rep, ": var(99%) moved from ", var(v, 0.99), " to ",
                        var(w, 0.99));
        if (var(w, 0.01) != var(v, 0.01))
            return fail("rep ", rep, ": lower-tail var moved");
        const double e0 = es(v, 0.975), e1 = es(w, 0.975);
        if (!(e1 > e0))
            return fail("rep ", rep, ": es(97.5%) did not increase: ", e0, " -> ", e1);
    }
    return {};
}

// ------------------------------------------------------------- check 7
// Quadratic level-function recovery on a synthetic walk whose one-day
// move SD is exactly a + b*l + c*l^2: the by-count weighted degree-2
// fit of bucketed absolute SDs must land within kFitSigmaBand standard
// errors of each true coefficient, with the linear and quadratic terms
// overwhelmingly significant.

std::string check_level_function_recovery() {
    const double a = 1e-4, b = 0.005, c = 0.02;
    const TimeSeries walk = synth_level_walk(3, kStart, 100001, a, b, c, 0.008, 0.135);
    const auto buckets = bucket_sd(walk, 1, 25.0, 20);
    const FitResult fit = fit_level_function(buckets, 2, FitWeight::by_count,
                                             FitField::absolute_sd);
    std::ostringstream why;
    why.precision(10);
    bool ok = true;
    const double truth[3] = {a, b, c};
    const double got[3] = {fit.a, fit.b, fit.c};
    const char* names[3] = {"a", "b", "c"};
    for (int i = 0; i < 3; ++i) {
        const double dev = std::fabs(got[i] - truth[i]);
        if (dev > kFitSigmaBand * fit.se[i]) {
            ok = false;
            why << names[i] << "=" << got[i] << " vs " << truth[i] << " (" << dev / fit.se[i]
                << " se) ";
        }
    }
    if (!(fit.p_value[1] < kFitPValueCap)) {
        ok = false;
        why << "p(b)=" << fit.p_value[1] << " ";
    }
    if (!(fit.p_value[2] < kFitPValueCap)) {
        ok = false;
        why << "p(c)=" << fit.p_value[2] << " ";
    }
    if (!ok) return fail(why.str());
    return {};
}

// ------------------------------------------------------------- check 8
// A constant-relative-volatility geometric walk must produce bucketed
// relative SDs flat within kFlatBand of their median; a constant-
// absolute-volatility walk the same for absolute SDs.

std::string check_lognormal_flatness() {
    const auto flat_within = [](const std::vector<LevelBucket>& buckets, bool relative,
                                std::string& why) {
        std::vector<double> sds;
        for (const auto& bk : buckets)
            if (!bk.thin) sds.push_back(relative ? bk.sd_relative : bk.sd_absolute);
        if (sds.size() < 8) {
            why = fail("only ", sds.size(), " populated buckets");
            return false;
        }
        std::vector<double> sorted = sds;
        std::sort(sorted.begin(), sorted.end());
        const double med = 0.5 * (sorted[(sorted.size() - 1) / 2] + sorted[sorted.size() / 2]);
        for (double s : sds)
            if (std::fabs(s - med) > kFlatBand * med) {
                why = fail("bucket sd ", s, " deviates ", std::fabs(s - med) / med,
                           " from median ", med);
                return false;
            }
        return true;
    };

    std::string why;
    const TimeSeries geo = synth_geometric_walk(8, kStart, 80000, 0.01, 0.01, 0.12);
    if (!flat_within(bucket_sd(geo, 1, 25.0, 600), true, why))
        return fail("relative: ", why);
    const TimeSeries lin = synth_level_walk(9, kStart, 80000, 6e-4, 0.0, 0.0, 0.01, 0.12);
    if (!flat_within(bucket_sd(lin, 1, 25.0, 600), false, why))
        return fail("absolute: ", why);
    return {};
}

// ------------------------------------------------------------- check 9
// Every bootstrapped curve must reprice its own input quotes, and with
// identical OIS and swap par rates (zero spread) the multi-curve result
// must collapse onto the single-curve one at every pillar.

std::string check_bootstrap_round_trip() {
    const InstrumentPanel panel = synth_rates_panel(31, kStart, 120);
    for (CurveRegime regime : {CurveRegime::multi_curve, CurveRegime::single_curve}) {
        const auto sets = bootstrap_panel(panel, regime, Exec::parallel);
        for (std::size_t r = 0; r < panel.rows(); ++r) {
            const CurveSet& cs = sets[r];
            for (std::size_t j = 0; j < panel.cols(); ++j) {
                const Instrument& ins = panel.instruments[j];
                const double quote = *panel.quotes[r][j];
                double repriced;
                if (ins.kind == Instrument::Kind::ois_swap) {
                    if (regime == CurveRegime::single_curve) continue; // not an input there
                    repriced = ois_par(cs.discount, ins.tenor_years);
                } else if (ins.kind == Instrument::Kind::deposit) {
                    repriced = deposit_par(cs.projection_curve(), ins.tenor_years);
                } else {
                    repriced = swap_par(cs.discount, cs.projection_curve(), ins.tenor_years);
                }
                if (std::fabs(repriced - quote) > kRepriceRelTol * std::fabs(quote))
                    return fail(to_string(regime), " row ", r, " ", ins.id(), ": quote ", quote,
                                " repriced ", repriced);
            }
        }
    }

    // Zero spread: flat annual-compounded curves at several levels.
    const auto flat_par = [](double y, int m) {
        double annuity = 0.0;
        for (int i = 1; i <= m; ++i) annuity += std::pow(1.0 + y, -i);
        return (1.0 - std::pow(1.0 + y, -m)) / annuity;
    };
    const int mats[] = {1, 2, 3, 5, 7, 10, 20, 30};
    for (double y : {0.005, 0.02, 0.045}) {
        std::vector<ParQuote> quotes, swaps_only;
        for (int m : mats) {
            const double par = flat_par(y, m);
            quotes.push_back({Instrument::parse("OIS:" + std::to_string(m) + "Y"), par});
            quotes.push_back({Instrument::parse("IRS:" + std::to_string(m) + "Y"), par});
            swaps_only.push_back({Instrument::parse("IRS:" + std::to_string(m) + "Y"), par});
        }
        const CurveSet multi = bootstrap(kStart, quotes, CurveRegime::multi_curve);
        const CurveSet single = bootstrap(kStart, swaps_only, CurveRegime::single_curve);
        for (int m : mats) {
            const double t = static_cast<double>(m);
            const double dz = multi.discount.zero(t);
            if (std::fabs(multi.projection->zero(t) - dz) > kPillarMatchTol)
                return fail("y=", y, " t=", t, ": projection ", multi.projection->zero(t),
                            " vs discount ", dz);
            if (std::fabs(single.discount.zero(t) - dz) > kPillarMatchTol)
                return fail("y=", y, " t=", t, ": single ", single.discount.zero(t),
                            " vs multi ", dz);
        }
    }
    return {};
}

// ------------------------------------------------------------ check 10
// Capital: 2*max(var, svar) >= var + svar on an exhaustive nonnegative
// grid, with equality exactly on the diagonal.

std::string check_capital_rule() {
    for (int ia = 0; ia <= 200; ++ia) {
        for (int ib = 0; ib <= 200; ++ib) {
            const double a = 0.5 * ia, b = 0.5 * ib;
            const double s = capital_charge(a, b, CapitalMode::sum);
            const double t = capital_charge(a, b, CapitalMode::two_max);
            if (!(t >= s)) return fail("2*max < sum at (", a, ", ", b, ")");
            if ((t == s) != (a == b))
                return fail("equality mismatch at (", a, ", ", b, "): two_max ", t, " sum ", s);
        }
    }
    Rng rng(707, 5);
    for (int rep = 0; rep < 500; ++rep) {
        const double a = std::ldexp(static_cast<double>(rng.uniform_int(0, 1 << 20)), -10);
        const double b = std::ldexp(static_cast<double>(rng.uniform_int(0, 1 << 20)), -10);
        const double s = capital_charge(a, b, CapitalMode::sum);
        const double t = capital_charge(a, b, CapitalMode::two_max);
        if (!(t >= s) || (t == s) != (a == b))
            return fail("random pair (", a, ", ", b, ") violates the rule");
    }
    return {};
}

// ------------------------------------------------------------ check 11
// Gap metrics against brute-force recounts on 100 random 50x300 spread
// panels (exact equality), plus monotonicity in k and span.

std::string check_gap_metrics() {
    for (int t = 0; t < 100; ++t) {
        const InstrumentPanel panel = synth_cds_panel(1100 + t, kStart, 300, 50);
        const Date as_of = panel.dates[299];
        const std::pair<Date, Date> win{panel.dates[30], panel.dates[299]};

        const GapReport rep = availability_report(panel, as_of, win);
        const oracles::GapNumbers want = oracles::availability(panel, as_of, win);
        if (rep.universe_count != want.universe ||
            rep.available_asof_count != want.available_asof ||
            rep.pct_available_in_window != want.pct_in_window ||
            rep.pct_available_throughout != want.pct_throughout)
            return fail("availability mismatch on panel ", t, ": got {", rep.universe_count,
                        ", ", rep.available_asof_count, ", ", rep.pct_available_in_window, ", ",
                        rep.pct_available_throughout, "} want {", want.universe, ", ",
                        want.available_asof, ", ", want.pct_in_window, ", ",
                        want.pct_throughout, "}");

        const int k = 1 + t % 3;
        const int span = k + 2 + t % 6;
        const std::pair<Date, Date> win2{panel.dates[40], panel.dates[299]};
        const GapTrack track = stress_gap_fraction(panel, win2, k, span, as_of);
        const std::vector<double> want_track = oracles::gap_track(panel, win2, k, span, as_of);
        if (track.values.size() != want_track.size())
            return fail("track length ", track.values.size(), " vs ", want_track.size());
        for (std::size_t i = 0; i < want_track.size(); ++i)
            if (track.values[i] != want_track[i])
                return fail("panel ", t, " row ", i, ": ", track.values[i], " != ",
                            want_track[i]);
    }

    // Monotonicity: stricter k can only lower the fraction, a longer
    // span can only raise it.
    const InstrumentPanel panel = synth_cds_panel(1100, kStart, 300, 50);
    const Date as_of = panel.dates[299];
    const std::pair<Date, Date> win{panel.dates[40], panel.dates[299]};
    const auto v1 = stress_gap_fraction(panel, win, 1, 10, as_of).values;
    const auto v2 = stress_gap_fraction(panel, win, 2, 10, as_of).values;
    const auto v3 = stress_gap_fraction(panel, win, 3, 10, as_of).values;
    const auto w10 = stress_gap_fraction(panel, win, 2, 10, as_of).values;
    const auto w15 = stress_gap_fraction(panel, win, 2, 15, as_of).values;
    for (std::size_t i = 0; i < v1.size(); ++i) {
        if (!(v1[i] >= v2[i] && v2[i] >= v3[i]))
            return fail("k-monotonicity broke at row ", i);
        if (!(w15[i] >= w10[i])) return fail("span-monotonicity broke at row ", i);
    }
    return {};
}

// ------------------------------------------------------------ check 12
// Reproducibility of the CLI: run every subcommand twice with identical
// inputs, configuration, and seed; all output files must be byte-
// identical, including the lookup table's provenance hashes.

struct CliStep {
    std::string name;
    std::string args;                  // with {DIR} placeholders per run
    std::vector<std::string> outputs;  // produced files, relative to the run dir
};

std::string check_cli_reproducibility() {
    const char* bin = std::getenv("VARKIT_BIN");
    if (bin == nullptr || *bin == '\0')
        return fail("VARKIT_BIN is not set; cannot locate the CLI binary");

    const fs::path root = fs::temp_directory_path() / "varkit_acceptance";
    std::error_code ec;
    fs::remove_all(root, ec);
    const fs::path r1 = root / "r1", r2 = root / "r2";
    fs::create_directories(r1);
    fs::create_directories(r2);

    // Panel/series coordinates the commands need, computed from the same
    // generators the synth subcommand runs.
    const InstrumentPanel rates = synth_rates_panel(11, kStart, 340);
    const InstrumentPanel cds = synth_cds_panel(12, kStart, 300, 50);
    const std::string as_of = rates.dates[339].to_string();
    const std::string s_lo = rates.dates[0].to_string();
    const std::string s_hi = rates.dates[269].to_string();
    const std::string g_asof = cds.dates[299].to_string();
    const std::string g_lo = cds.dates[30].to_string();
    const std::string g_hi = cds.dates[299].to_string();

    // Shared inputs come from the first run's synth outputs so that both
    // runs of every downstream command read the very same bytes.
    const std::string rates_in = (r1 / "rates.csv").string();
    const std::string cds_in = (r1 / "cds.csv").string();
    const std::string walk_in = (r1 / "walk.csv").string();
    const std::string fit_in = (r1 / "level_fit.json").string();

    const std::vector<CliStep> steps = {
        {"synth-rates", "synth --kind rates --seed 11 --start 2015-01-05 --days 340 --output "
                        "{DIR}/rates.csv",
         {"rates.csv"}},
        {"synth-cds", "synth --kind cds --seed 12 --start 2015-01-05 --days 300 --names 50 "
                      "--output {DIR}/cds.csv",
         {"cds.csv"}},
        {"synth-walk", "synth --kind walk --seed 13 --start 2015-01-05 --days 3000 --sd-a 0.0002 "
                       "--sd-b 0.004 --sd-c 0.015 --lo 0.01 --hi 0.08 --output {DIR}/walk.csv",
         {"walk.csv"}},
        {"clean", "clean --input " + rates_in + " --seed 17 --output {DIR}/cleaned.csv "
                  "--changelog {DIR}/cleaned.changelog.csv --detections {DIR}/detections.csv",
         {"cleaned.csv", "cleaned.changelog.csv", "detections.csv"}},
        {"analyze-level", "analyze-level --input " + walk_in + " --output-prefix {DIR}/level "
                          "--degree 2 --weight by-count --field absolute",
         {"level_buckets.csv", "level_plot.csv", "level_fit.json"}},
        {"var", "var --input " + rates_in + " --seed 19 --as-of " + as_of + " --stress-start " +
                s_lo + " --stress-end " + s_hi +
                " --models absolute,relative,level-relative --level-fn " + fit_in +
                " --maturities 2,5,10 --capital-mode twomax --output {DIR}/var.csv --json "
                "{DIR}/var.json",
         {"var.csv", "var.json"}},
        {"lookup", "lookup --input " + rates_in + " --stress-start " + s_lo + " --stress-end " +
                   s_hi + " --models absolute,relative --tenors OIS:2Y,OIS:5Y,IRS:10Y "
                   "--bucket-lo 0.005 --bucket-hi 0.045 --bucket-width 0.01 "
                   "--output {DIR}/lut.json --csv {DIR}/lut.csv",
         {"lut.json", "lut.csv"}},
        {"gapscan", "gapscan --input " + cds_in + " --as-of " + g_asof + " --window-start " +
                    g_lo + " --window-end " + g_hi + " --k 2 --span 8 --quantile 0.9 "
                    "--output-prefix {DIR}/gaps",
         {"gaps_report.json", "gaps_gapfraction.csv", "gaps_percentile.csv"}},
        {"sensitivity", "sensitivity --input " + walk_in + " --output {DIR}/sens.csv",
         {"sens.csv"}},
    };

    const auto run_in = [&](const CliStep& step, const fs::path& dir) -> std::string {
        std::string args = step.args;
        std::string::size_type pos;
        while ((pos = args.find("{DIR}")) != std::string::npos)
            args.replace(pos, 5, dir.string());
        const std::string log = (dir / (step.name + ".log")).string();
        const std::string cmd = "\"" + std::string(bin) + "\" " + args + " >\"" + log +
                                "\" 2>&1";
        const int rc = std::system(cmd.c_str());
        if (rc != 0)
            return fail(step.name, " exited with status ", rc, " (log: ", log, ")");
        return {};
    };

    for (const CliStep& step : steps) {
        // The dependency order above guarantees r1 inputs exist before
        // any downstream command runs; fit_in is produced by
        // analyze-level on r1 before var consumes it.
        if (auto err = run_in(step, r1); !err.empty()) return err;
        if (auto err = run_in(step, r2); !err.empty()) return err;
        for (const std::string& out : step.outputs) {
            const std::string b1 = read_bytes(r1 / out);
            const std::string b2 = read_bytes(r2 / out);
            if (b1.empty() || b1[0] == '\x01')
                return fail(step.name, ": missing or unreadable output ", out);
            if (b1 != b2)
                return fail(step.name, ": runs disagree on ", out, " (", b1.size(), " vs ",
                            b2.size(), " bytes)");
        }
    }

    // The lookup output must actually carry its provenance hashes.
    const std::string lut = read_bytes(r1 / "lut.json");
    if (lut.find("data_hash") == std::string::npos ||
        lut.find("config_hash") == std::string::npos)
        return fail("lookup output lacks provenance hashes");
    return {};
}

// ------------------------------------------------------------------ main

struct Check {
    const char* label;
    std::string (*fn)();
};

} // namespace

int main() {
    const Check checks[] = {
        {"historical var/es match independent oracles on 1000 seeded samples",
         check_var_es_oracles},
        {"var(99%) ignores perturbations strictly below the 98th percentile",
         check_tail_count_identity},
        {"shock-family algebra holds exactly (scaling, translation, constant level fn, "
         "composition)",
         check_family_algebra},
        {"level-relative report is bit-identical to relative at equal window levels",
         check_same_level_window},
        {"spike detection power and clean-series conservatism over seeded trials",
         check_cleaning_power},
        {"inflating only the largest shock moves es(97.5%) but never var(99%)",
         check_es_moves_var_does_not},
        {"quadratic level-function recovery within 3 standard errors, significant terms",
         check_level_function_recovery},
        {"constant-volatility walks give flat bucketed sds within 10%",
         check_lognormal_flatness},
        {"bootstrapped curves reprice inputs; zero spread collapses the regimes",
         check_bootstrap_round_trip},
        {"two-max capital dominates sum with equality exactly on the diagonal",
         check_capital_rule},
        {"gap metrics equal brute-force recounts on 100 random 50x300 panels",
         check_gap_metrics},
        {"cli commands are byte-identical across reruns with identical inputs and seeds",
         check_cli_reproducibility},
    };

    int failures = 0;
    int number = 0;
    for (const Check& c : checks) {
        ++number;
        const auto t0 = std::chrono::steady_clock::now();
        std::string detail;
        try {
            detail = c.fn();
        } catch (const std::exception& e) {
            detail = std::string("unexpected exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::ostringstream line;
        line << (detail.empty() ? "PASS" : "FAIL") << " " << (number < 10 ? " " : "") << number
             << "  " << c.label << "  (" << std::fixed;
        line.precision(2);
        line << secs << "s)";
        std::cout << line.str() << "\n";
        if (!detail.empty()) {
            std::cout << "       " << detail << "\n";
            ++failures;
        }
    }
    std::cout << (failures == 0 ? "ACCEPTANCE: all 12 checks passed"
                                : "ACCEPTANCE: " + std::to_string(failures) + " check(s) failed")
              << "\n";
    return failures;
}
