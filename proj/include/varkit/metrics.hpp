#pragma once

#include "varkit/cleaning.hpp"
#include "varkit/core.hpp"
#include "varkit/curve.hpp"
#include "varkit/datamodel.hpp"
#include "varkit/parallel.hpp"

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace varkit {

enum class LossSign { losses_positive, two_sided };

/// Quantile and window parameters for risk calculations.
struct RiskConfig {
    double alpha = 0.99;  // VAR confidence
    double beta = 0.975;  // ES confidence
    int holding_days = 10;
    int window_days = 260;
    LossSign loss_sign = LossSign::losses_positive;

    void validate() const;
};

/// Historical VAR at confidence alpha: the smallest sample value whose
/// empirical CDF reaches alpha, i.e. the ceil(alpha*n)-th order
/// statistic. No interpolation. Works for lower-tail quantiles too
/// (alpha < 0.5).
double var(std::span<const double> losses, double alpha);

/// Expected shortfall at confidence beta: exact integral of the
/// empirical quantile function over [beta, 1]. With k = (1-beta)*n this
/// is [sum of the floor(k) largest + (k - floor(k)) * next largest] / k.
double es(std::span<const double> losses, double beta);

struct RiskReport {
    Date as_of;
    double var_value = 0.0;
    double es_value = 0.0;
    double tail_count = 0.0;    // (1 - alpha) * n_d, fractional
    double es_tail_count = 0.0; // (1 - beta) * n_d
    std::string model_id;
    std::pair<Date, Date> window;
};

/// Both tails of a stressed scenario P&L distribution: `lower` holds the
/// (1-alpha) and lower-tail ES quantiles (typically negative), `upper`
/// the alpha quantile and upper-tail ES.
struct SvarReport {
    RiskReport lower;
    RiskReport upper;
    int floor_breaches = 0;
    int scenario_count = 0;
};

/// Builds the shock distribution from the observations inside
/// stress_window, applies it at state_use.level, and reports both tails
/// of the scenario P&L (scenario minus current level). The window must
/// contain at least cfg.window_days observations.
SvarReport svar_report(const TimeSeries& x, std::pair<Date, Date> stress_window,
                       const DataModelSpec& spec, const MarketState& state_use,
                       const RiskConfig& cfg);

struct SensitivityPoint {
    Date date;            // window end
    double var_rel = 0.0; // |var_clean - var_dirty| / |var_dirty|
    double es_rel = 0.0;
    double ratio = 0.0; // es_rel / var_rel, or es_rel alone (es_only)
    bool es_only = false;
};

/// Rolling one-year comparison of risk metrics on cleaned vs raw data:
/// each window of cfg.window_days observations is spike-cleaned, m-day
/// differences are taken on both versions, and VAR(alpha)/ES(beta) are
/// compared on the upper tail. When the VAR relative change is below
/// var_epsilon the ratio switches to the ES relative change alone.
std::vector<SensitivityPoint> rolling_clean_sensitivity(const TimeSeries& raw,
                                                        const CleaningConfig& cfg_clean,
                                                        const RiskConfig& cfg_risk,
                                                        Exec exec = Exec::parallel,
                                                        double var_epsilon = 1e-12);

enum class CapitalMode { sum, two_max };

std::string to_string(CapitalMode m);
CapitalMode capital_mode_from_string(const std::string& s);

/// Capital aggregation: sum -> var + svar; two_max -> 2 * max(var, svar).
/// Inputs must be nonnegative.
double capital_charge(double var_value, double svar_value, CapitalMode mode);

/// One row of the maturity-by-model stressed VAR table.
struct SvarTableRow {
    std::string window_label;
    double maturity = 0.0;
    std::string model_id;
    double svar_lower = 0.0; // (1-alpha) quantile of swap P&L, % of notional as decimal
    double svar_upper = 0.0; // alpha quantile
    double es_lower = 0.0;
    double es_upper = 0.0;
    int floor_breaches = 0;
};

struct SvarTableParams {
    std::pair<Date, Date> stress_window;
    std::string window_label;
    Date as_of; // base-curve date (must be a panel row)
    std::vector<double> maturities;
    std::vector<double> tenor_grid;
    CurveRegime regime = CurveRegime::multi_curve;
    /// Data model applied to the spread series (spreads cross zero, so
    /// the default is absolute regardless of the discount-rate model).
    DataModelKind spread_model = DataModelKind::absolute;
    double scenario_floor = 0.0;
};

/// Stressed VAR/ES of par swaps by maturity and data model. Bootstraps
/// every stress-window date plus the as_of date, samples zero rates on
/// the tenor grid, builds per-tenor shock distributions (discount rates
/// under each spec, spreads under params.spread_model), reprices the
/// par swaps under each joint scenario, and reports both tails per
/// (maturity, model).
std::vector<SvarTableRow> svar_swap_table(const InstrumentPanel& cleaned,
                                          std::span<const DataModelSpec> specs,
                                          const SvarTableParams& params, const RiskConfig& cfg,
                                          Exec exec = Exec::parallel);

} // namespace varkit
