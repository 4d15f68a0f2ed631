#include "varkit/curve.hpp"

#include "varkit/errors.hpp"

#include <algorithm>
#include <cmath>

namespace varkit {

namespace {

double interp_log_df(std::span<const double> t, std::span<const double> z, double x) {
    // Knots are (t_i, -z_i * t_i); the origin (0, 0) is an implicit knot.
    if (x < 0.0)
        throw ValidationError("discount factor requested at negative time " + std::to_string(x));
    if (x == 0.0) return 0.0;
    const std::size_t n = t.size();
    if (x <= t.front()) return -z.front() * x;
    if (x >= t.back()) {
        // Flat forward: continue the last interval's forward rate.
        const double lb = -z.back() * t.back();
        double fwd;
        if (n == 1) {
            fwd = z.back();
        } else {
            const double la = -z[n - 2] * t[n - 2];
            fwd = -(lb - la) / (t.back() - t[n - 2]);
        }
        return lb - fwd * (x - t.back());
    }
    const auto it = std::upper_bound(t.begin(), t.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - t.begin());
    const double la = -z[i - 1] * t[i - 1];
    const double lb = -z[i] * t[i];
    const double w = (x - t[i - 1]) / (t[i] - t[i - 1]);
    return la + w * (lb - la);
}

/// Annual fixed schedule with a short first stub: ascending pay times
/// ending at maturity, accrual = gap to the previous pay time.
std::vector<std::pair<double, double>> fixed_schedule(double maturity) {
    std::vector<double> times;
    for (double t = maturity; t > 1e-9; t -= 1.0) times.push_back(t);
    std::reverse(times.begin(), times.end());
    std::vector<std::pair<double, double>> out;
    double prev = 0.0;
    for (double t : times) {
        out.emplace_back(t, t - prev);
        prev = t;
    }
    return out;
}

std::vector<double> quarterly_times(double maturity) {
    std::vector<double> times;
    for (double t = maturity; t > 1e-9; t -= 0.25) times.push_back(t);
    std::reverse(times.begin(), times.end());
    return times;
}

struct CurveView {
    std::span<const double> t, z;
    double df(double x) const { return std::exp(interp_log_df(t, z, x)); }
};

double annuity_view(const CurveView& disc, double maturity) {
    double a = 0.0;
    for (const auto& [t, tau] : fixed_schedule(maturity)) a += tau * disc.df(t);
    return a;
}

double swap_par_view(const CurveView& disc, const CurveView& proj, double maturity) {
    double pv_float = 0.0;
    double prev = 0.0;
    for (double t : quarterly_times(maturity)) {
        pv_float += (proj.df(prev) / proj.df(t) - 1.0) * disc.df(t);
        prev = t;
    }
    return pv_float / annuity_view(disc, maturity);
}

double ois_par_view(const CurveView& disc, double maturity) {
    return (1.0 - disc.df(maturity)) / annuity_view(disc, maturity);
}

double deposit_par_view(const CurveView& proj, double tenor) {
    return (1.0 / proj.df(tenor) - 1.0) / tenor;
}

/// Solves residual(z) = 0 for the last pillar's zero rate by bisection
/// on [-0.9, 2.0]. residual must be increasing in z.
template <typename F>
double solve_pillar(F&& residual, const std::string& what) {
    double lo = -0.9, hi = 2.0;
    double flo = residual(lo), fhi = residual(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (flo * fhi > 0.0)
        throw ComputationError("bootstrap failed to bracket " + what);
    for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = residual(mid);
        if (fmid == 0.0) return mid;
        if ((fmid < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

std::vector<ParQuote> sorted_quotes(const std::vector<ParQuote>& quotes,
                                    std::initializer_list<Instrument::Kind> kinds) {
    std::vector<ParQuote> out;
    for (const auto& q : quotes)
        for (auto k : kinds)
            if (q.instrument.kind == k) out.push_back(q);
    std::sort(out.begin(), out.end(), [](const ParQuote& a, const ParQuote& b) {
        return a.instrument.tenor_years < b.instrument.tenor_years;
    });
    for (std::size_t i = 1; i < out.size(); ++i)
        if (out[i].instrument.tenor_years == out[i - 1].instrument.tenor_years)
            throw ValidationError("duplicate pillar tenor for '" + out[i].instrument.id() + "'");
    return out;
}

ZeroCurve bootstrap_one(Date as_of, const std::vector<ParQuote>& pillars, CurveRole role,
                        const ZeroCurve* discount) {
    std::vector<double> t, z;
    t.reserve(pillars.size());
    z.reserve(pillars.size());
    for (const auto& pq : pillars) {
        const double T = pq.instrument.tenor_years;
        t.push_back(T);
        z.push_back(0.0);
        const CurveView self{t, z};
        auto model = [&](double trial) {
            z.back() = trial;
            switch (pq.instrument.kind) {
                case Instrument::Kind::deposit: return deposit_par_view(self, T);
                case Instrument::Kind::ois_swap: return ois_par_view(self, T);
                case Instrument::Kind::libor_swap:
                    if (discount) {
                        const CurveView disc{discount->pillars(), discount->zero_rates()};
                        return swap_par_view(disc, self, T);
                    }
                    return swap_par_view(self, self, T);
                case Instrument::Kind::cds: break;
            }
            throw ValidationError("instrument '" + pq.instrument.id() + "' is not bootstrappable");
        };
        z.back() = solve_pillar([&](double trial) { return model(trial) - pq.quote; },
                                "pillar '" + pq.instrument.id() + "' on " + as_of.to_string());
    }
    return ZeroCurve(as_of, std::move(t), std::move(z), role);
}

} // namespace

std::string to_string(CurveRegime r) {
    return r == CurveRegime::single_curve ? "single" : "multi";
}

CurveRegime curve_regime_from_string(const std::string& s) {
    if (s == "single" || s == "single-curve") return CurveRegime::single_curve;
    if (s == "multi" || s == "multi-curve") return CurveRegime::multi_curve;
    throw ValidationError("unknown curve regime '" + s + "'");
}

ZeroCurve::ZeroCurve(Date as_of, std::vector<double> pillars, std::vector<double> zero_rates,
                     CurveRole role)
    : as_of_(as_of), pillars_(std::move(pillars)), zeros_(std::move(zero_rates)), role_(role) {
    if (pillars_.empty()) throw ValidationError("zero curve needs at least one pillar");
    if (pillars_.size() != zeros_.size())
        throw ValidationError("zero curve pillar/rate count mismatch");
    for (std::size_t i = 0; i < pillars_.size(); ++i) {
        if (!(pillars_[i] > 0.0))
            throw ValidationError("curve pillar times must be positive");
        if (i > 0 && pillars_[i] <= pillars_[i - 1])
            throw ValidationError("curve pillars not strictly increasing");
        if (!std::isfinite(zeros_[i]))
            throw ValidationError("non-finite zero rate at pillar " + std::to_string(pillars_[i]));
        const double dfp = std::exp(-zeros_[i] * pillars_[i]);
        if (!(dfp > 0.0 && dfp <= 2.0))
            throw ValidationError("pillar discount factor " + std::to_string(dfp) +
                                  " outside (0, 2] at t=" + std::to_string(pillars_[i]));
    }
}

double ZeroCurve::log_df(double t) const { return interp_log_df(pillars_, zeros_, t); }
double ZeroCurve::df(double t) const { return std::exp(log_df(t)); }

double ZeroCurve::zero(double t) const {
    if (t < 0.0) throw ValidationError("zero rate requested at negative time");
    if (t == 0.0) return zeros_.front();
    return -log_df(t) / t;
}

void CurveSet::validate() const {
    if ((regime == CurveRegime::multi_curve) != projection.has_value())
        throw ValidationError("curve set: projection curve must be present exactly in the "
                              "multi-curve regime");
    if (projection && projection->as_of() != discount.as_of())
        throw ValidationError("curve set: discount and projection as_of differ");
}

double deposit_par(const ZeroCurve& projection, double tenor) {
    if (!(tenor > 0.0)) throw ValidationError("deposit tenor must be positive");
    return deposit_par_view(CurveView{projection.pillars(), projection.zero_rates()}, tenor);
}

double ois_par(const ZeroCurve& discount, double maturity) {
    if (!(maturity > 0.0)) throw ValidationError("swap maturity must be positive");
    return ois_par_view(CurveView{discount.pillars(), discount.zero_rates()}, maturity);
}

double swap_par(const ZeroCurve& discount, const ZeroCurve& projection, double maturity) {
    if (!(maturity > 0.0)) throw ValidationError("swap maturity must be positive");
    return swap_par_view(CurveView{discount.pillars(), discount.zero_rates()},
                         CurveView{projection.pillars(), projection.zero_rates()}, maturity);
}

CurveSet bootstrap(Date as_of, const std::vector<ParQuote>& quotes, CurveRegime regime) {
    for (const auto& q : quotes)
        if (!std::isfinite(q.quote))
            throw ValidationError("non-finite quote for '" + q.instrument.id() + "'");
    if (regime == CurveRegime::single_curve) {
        const auto pillars =
            sorted_quotes(quotes, {Instrument::Kind::deposit, Instrument::Kind::libor_swap});
        if (pillars.empty())
            throw ValidationError("single-curve bootstrap has no deposit or swap-rate quotes");
        return CurveSet{bootstrap_one(as_of, pillars, CurveRole::discount, nullptr),
                        std::nullopt, CurveRegime::single_curve};
    }
    const auto ois = sorted_quotes(quotes, {Instrument::Kind::ois_swap});
    if (ois.empty())
        throw ValidationError("multi-curve bootstrap requires OIS quotes");
    const auto proj_quotes =
        sorted_quotes(quotes, {Instrument::Kind::deposit, Instrument::Kind::libor_swap});
    if (proj_quotes.empty())
        throw ValidationError("multi-curve bootstrap has no deposit or swap-rate quotes");
    ZeroCurve discount = bootstrap_one(as_of, ois, CurveRole::discount, nullptr);
    ZeroCurve projection = bootstrap_one(as_of, proj_quotes, CurveRole::projection, &discount);
    return CurveSet{std::move(discount), std::move(projection), CurveRegime::multi_curve};
}

CurveSet bootstrap_row(const InstrumentPanel& panel, std::size_t row, CurveRegime regime) {
    if (row >= panel.rows()) throw ValidationError("bootstrap_row: row index out of range");
    std::vector<ParQuote> quotes;
    for (std::size_t j = 0; j < panel.cols(); ++j) {
        if (!panel.instruments[j].is_curve_instrument()) continue;
        if (!panel.quotes[row][j])
            throw ValidationError("missing quote for '" + panel.instruments[j].id() + "' on " +
                                  panel.dates[row].to_string() +
                                  " (bootstrap needs a cleaned row)");
        quotes.push_back({panel.instruments[j], *panel.quotes[row][j]});
    }
    return bootstrap(panel.dates[row], quotes, regime);
}

std::vector<CurveSet> bootstrap_panel(const InstrumentPanel& panel, CurveRegime regime,
                                      Exec exec) {
    return parallel_map<CurveSet>(panel.rows(), exec,
                                  [&](std::size_t i) { return bootstrap_row(panel, i, regime); });
}

TenorRates tenor_rates(const CurveSet& cs, std::span<const double> tenors) {
    cs.validate();
    auto check_range = [](const ZeroCurve& c, double t) {
        if (t < c.pillars().front() || t > c.pillars().back())
            throw ValidationError("tenor " + std::to_string(t) + " outside pillar range [" +
                                  std::to_string(c.pillars().front()) + ", " +
                                  std::to_string(c.pillars().back()) + "]");
    };
    TenorRates out;
    out.discount.reserve(tenors.size());
    out.spread.reserve(tenors.size());
    for (double t : tenors) {
        check_range(cs.discount, t);
        const double dz = cs.discount.zero(t);
        out.discount.push_back(dz);
        if (cs.regime == CurveRegime::multi_curve) {
            check_range(*cs.projection, t);
            out.spread.push_back(cs.projection->zero(t) - dz);
        } else {
            out.spread.push_back(0.0);
        }
    }
    return out;
}

double par_swap_pnl(const CurveSet& base, const CurveSet& shocked, double maturity,
                    SwapDirection direction) {
    base.validate();
    shocked.validate();
    auto max_pillar = [](const CurveSet& cs) {
        double m = cs.discount.pillars().back();
        if (cs.projection) m = std::min(m, cs.projection->pillars().back());
        return m;
    };
    if (!(maturity > 0.0) || maturity > max_pillar(base) || maturity > max_pillar(shocked))
        throw ValidationError("swap maturity " + std::to_string(maturity) +
                              " outside the curves' pillar range");
    const double strike = swap_par(base.discount, base.projection_curve(), maturity);

    const CurveView disc{shocked.discount.pillars(), shocked.discount.zero_rates()};
    const ZeroCurve& proj_curve = shocked.projection_curve();
    const CurveView proj{proj_curve.pillars(), proj_curve.zero_rates()};
    double pv_float = 0.0;
    double prev = 0.0;
    for (double t : quarterly_times(maturity)) {
        pv_float += (proj.df(prev) / proj.df(t) - 1.0) * disc.df(t);
        prev = t;
    }
    const double pv_fixed = strike * annuity_view(disc, maturity);
    const double payer = pv_float - pv_fixed;
    return direction == SwapDirection::payer ? payer : -payer;
}

} // namespace varkit
