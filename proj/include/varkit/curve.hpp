#pragma once

#include "varkit/core.hpp"
#include "varkit/parallel.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace varkit {

enum class CurveRole { discount, projection };
enum class CurveRegime { single_curve, multi_curve };

std::string to_string(CurveRegime r);
CurveRegime curve_regime_from_string(const std::string& s);

/// Continuously-compounded zero curve. Discount factors are
/// df(t) = exp(-z(t) * t), interpolated linearly in log df between
/// pillars, constant zero rate below the first pillar, and flat forward
/// beyond the last. Pillar discount factors must lie in (0, 2] (mildly
/// negative rates allowed).
class ZeroCurve {
public:
    ZeroCurve(Date as_of, std::vector<double> pillars, std::vector<double> zero_rates,
              CurveRole role);

    double df(double t) const;
    double log_df(double t) const;
    /// Zero rate at t > 0; at t = 0 returns the first pillar's rate.
    double zero(double t) const;

    Date as_of() const { return as_of_; }
    CurveRole role() const { return role_; }
    const std::vector<double>& pillars() const { return pillars_; }
    const std::vector<double>& zero_rates() const { return zeros_; }

private:
    Date as_of_;
    std::vector<double> pillars_, zeros_;
    CurveRole role_;
};

/// The curves in force on one date. Single-curve: one curve discounts
/// and projects. Multi-curve: OIS discounting plus a separate projection
/// curve.
struct CurveSet {
    ZeroCurve discount;
    std::optional<ZeroCurve> projection;
    CurveRegime regime = CurveRegime::single_curve;

    const ZeroCurve& projection_curve() const { return projection ? *projection : discount; }
    /// Throws ValidationError unless projection presence matches the
    /// regime and both curves share as_of.
    void validate() const;
};

struct ParQuote {
    Instrument instrument;
    double quote = 0.0;
};

/// Money-market deposit par rate implied by the projection curve:
/// (1/df(T) - 1)/T (simple compounding over [0, T]).
double deposit_par(const ZeroCurve& projection, double tenor);

/// Par rate of an annual-fixed OIS swap discounted on its own curve;
/// the compounded floating leg telescopes to 1 - df(maturity).
double ois_par(const ZeroCurve& discount, double maturity);

/// Par rate of an annual-fixed vs quarterly-floating swap. Fixed leg
/// accrues 1.0 per full year (stub first); the floating-leg daycount
/// cancels against the forward, so only the quarterly schedule matters.
double swap_par(const ZeroCurve& discount, const ZeroCurve& projection, double maturity);

/// Bootstraps the curves for one date. Single-curve uses deposits and
/// swap-rate quotes (OIS and CDS quotes are ignored); multi-curve
/// requires OIS quotes for the discount curve and uses deposits + swap
/// rates for projection. Pillar-by-pillar bracketed bisection; throws
/// ComputationError naming the pillar when a solve fails to bracket.
CurveSet bootstrap(Date as_of, const std::vector<ParQuote>& quotes, CurveRegime regime);

/// Bootstraps one panel row (missing cells are an error: rows reaching
/// the bootstrap are expected to be cleaned).
CurveSet bootstrap_row(const InstrumentPanel& panel, std::size_t row, CurveRegime regime);

/// All panel rows, optionally in parallel (dates are independent).
std::vector<CurveSet> bootstrap_panel(const InstrumentPanel& panel, CurveRegime regime,
                                      Exec exec = Exec::parallel);

struct TenorRates {
    std::vector<double> discount;
    std::vector<double> spread; // projection zero - discount zero; 0 single-curve
};

/// Zero rates sampled at the given tenors. Throws ValidationError when a
/// tenor lies outside a curve's pillar range.
TenorRates tenor_rates(const CurveSet& cs, std::span<const double> tenors);

enum class SwapDirection { payer, receiver };

/// Value, per unit notional, of a swap struck at par on `base` and
/// repriced on `shocked`. Payer and receiver are exact negatives.
double par_swap_pnl(const CurveSet& base, const CurveSet& shocked, double maturity,
                    SwapDirection direction);

} // namespace varkit
