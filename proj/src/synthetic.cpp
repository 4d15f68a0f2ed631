#include "varkit/synthetic.hpp"

#include "varkit/errors.hpp"
#include "varkit/rng.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace varkit {

namespace {

std::vector<Date> business_dates(Date start, int n) {
    std::vector<Date> out;
    out.reserve(n);
    Date d = start.is_business_day() ? start : start.next_business_day();
    for (int i = 0; i < n; ++i) {
        out.push_back(d);
        d = d.next_business_day();
    }
    return out;
}

/// Triangle sweep lo -> hi -> lo over the full sample.
double triangle(double u, double lo, double hi) {
    return lo + (hi - lo) * (1.0 - std::fabs(1.0 - 2.0 * u));
}

} // namespace

TimeSeries synth_level_walk(std::uint64_t seed, Date start, int n, double a, double b, double c,
                            double target_lo, double target_hi, double pull) {
    if (n < 2) throw ValidationError("synth_level_walk: n must be >= 2");
    if (!(a > 0.0) || b < 0.0 || c < 0.0)
        throw ValidationError("synth_level_walk: need a > 0, b >= 0, c >= 0");
    if (!(target_lo < target_hi) || !(pull > 0.0 && pull < 1.0))
        throw ValidationError("synth_level_walk: bad sweep parameters");

    Rng rng(seed, fnv1a64("level-walk"));
    TimeSeries out;
    out.id = "synthetic";
    out.dates = business_dates(start, n);
    out.values.reserve(n);
    double x = target_lo;
    out.values.push_back(x);
    for (int i = 1; i < n; ++i) {
        const double u = static_cast<double>(i - 1) / static_cast<double>(n - 1);
        const double target = triangle(u, target_lo, target_hi);
        const double sd = a + x * (b + x * c);
        x += pull * (target - x) + sd * rng.normal();
        out.values.push_back(x);
    }
    return out;
}

TimeSeries synth_geometric_walk(std::uint64_t seed, Date start, int n, double sigma,
                                double target_lo, double target_hi, double pull) {
    if (n < 2) throw ValidationError("synth_geometric_walk: n must be >= 2");
    if (!(sigma > 0.0)) throw ValidationError("synth_geometric_walk: sigma must be positive");
    if (!(0.0 < target_lo && target_lo < target_hi) || !(pull > 0.0 && pull < 1.0))
        throw ValidationError("synth_geometric_walk: bad sweep parameters");

    Rng rng(seed, fnv1a64("geometric-walk"));
    TimeSeries out;
    out.id = "synthetic";
    out.dates = business_dates(start, n);
    out.values.reserve(n);
    double lx = std::log(target_lo);
    out.values.push_back(std::exp(lx));
    for (int i = 1; i < n; ++i) {
        const double u = static_cast<double>(i - 1) / static_cast<double>(n - 1);
        const double target = std::log(triangle(u, target_lo, target_hi));
        lx += pull * (target - lx) + sigma * rng.normal();
        out.values.push_back(std::exp(lx));
    }
    return out;
}

InstrumentPanel synth_rates_panel(std::uint64_t seed, Date start, int n_days) {
    if (n_days < 2) throw ValidationError("synth_rates_panel: n_days must be >= 2");

    InstrumentPanel panel;
    const double ois_tenors[] = {0.25, 0.5, 1, 2, 3, 5, 7, 10, 20, 30};
    const double depo_tenors[] = {0.25, 0.5};
    const double irs_tenors[] = {1, 2, 3, 5, 7, 10, 20, 30};
    for (double t : ois_tenors)
        panel.instruments.push_back({Instrument::Kind::ois_swap, t, ""});
    for (double t : depo_tenors)
        panel.instruments.push_back({Instrument::Kind::deposit, t, ""});
    for (double t : irs_tenors)
        panel.instruments.push_back({Instrument::Kind::libor_swap, t, ""});

    panel.dates = business_dates(start, n_days);
    Rng rng(seed, fnv1a64("rates-panel"));
    double level = 0.025, slope = 0.01, spread = 0.004;
    auto bounce = [](double x, double lo, double hi) {
        if (x < lo) return lo + (lo - x);
        if (x > hi) return hi - (x - hi);
        return x;
    };
    for (int r = 0; r < n_days; ++r) {
        level = bounce(level + 8e-4 * rng.normal(), 0.008, 0.055);
        slope = bounce(slope + 4e-4 * rng.normal(), -0.005, 0.02);
        spread = bounce(spread + 1e-4 * rng.normal(), 0.0015, 0.009);
        auto ois_par = [&](double t) { return level + slope * (1.0 - std::exp(-t / 4.0)); };
        std::vector<std::optional<double>> row;
        row.reserve(panel.instruments.size());
        for (const auto& ins : panel.instruments) {
            const double t = ins.tenor_years;
            switch (ins.kind) {
            case Instrument::Kind::ois_swap: row.push_back(ois_par(t)); break;
            case Instrument::Kind::deposit: row.push_back(ois_par(t) + 0.6 * spread); break;
            case Instrument::Kind::libor_swap:
                row.push_back(ois_par(t) + spread * (0.7 + 0.3 * std::exp(-t / 10.0)));
                break;
            case Instrument::Kind::cds: break;
            }
        }
        panel.quotes.push_back(std::move(row));
    }
    return panel;
}

InstrumentPanel synth_cds_panel(std::uint64_t seed, Date start, int n_days, int n_names,
                                double missing_prob, double burst_prob, int burst_len_max,
                                double inception_frac) {
    if (n_days < 2) throw ValidationError("synth_cds_panel: n_days must be >= 2");
    if (n_names < 1) throw ValidationError("synth_cds_panel: n_names must be >= 1");
    if (missing_prob < 0.0 || missing_prob >= 1.0 || burst_prob < 0.0 || burst_prob >= 1.0 ||
        inception_frac < 0.0 || inception_frac > 1.0 || burst_len_max < 1)
        throw ValidationError("synth_cds_panel: bad missingness parameters");

    InstrumentPanel panel;
    panel.dates = business_dates(start, n_days);
    for (int j = 0; j < n_names; ++j) {
        char name[16];
        std::snprintf(name, sizeof name, "NAME%03d", j);
        panel.instruments.push_back({Instrument::Kind::cds, 5.0, name});
    }
    panel.quotes.assign(n_days, std::vector<std::optional<double>>(n_names));

    for (int j = 0; j < n_names; ++j) {
        Rng rng(seed, instrument_stream(panel.instruments[j].id()));
        int inception = 0;
        if (rng.uniform01() <= inception_frac)
            inception = static_cast<int>(rng.uniform_int(1, n_days / 2));
        double spread = 0.003 + 0.027 * rng.uniform01();
        int burst_left = 0;
        for (int r = 0; r < n_days; ++r) {
            spread *= std::exp(0.02 * rng.normal());
            const bool start_burst = rng.uniform01() <= burst_prob;
            const bool single_gap = rng.uniform01() <= missing_prob;
            if (r < inception) continue;
            if (burst_left > 0) {
                --burst_left;
                continue;
            }
            if (start_burst) {
                burst_left = static_cast<int>(rng.uniform_int(1, burst_len_max)) - 1;
                continue;
            }
            if (single_gap) continue;
            panel.quotes[r][j] = spread;
        }
    }
    return panel;
}

} // namespace varkit
