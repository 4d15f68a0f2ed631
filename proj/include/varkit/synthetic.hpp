#pragma once

#include "varkit/core.hpp"

#include <cstdint>

namespace varkit {

/// Seeded random-walk series whose one-day move, starting at level l,
/// has standard deviation exactly sd(l) = a + b*l + c*l^2. The level is
/// steered across [target_lo, target_hi] by a slow triangle sweep with
/// mean-reversion strength `pull` (the pull inflates measured SDs by
/// roughly pull/2 relative, so keep it small). Coefficients must give a
/// positive sd: a > 0, b >= 0, c >= 0.
TimeSeries synth_level_walk(std::uint64_t seed, Date start, int n, double a, double b, double c,
                            double target_lo, double target_hi, double pull = 0.02);

/// Seeded geometric random walk with constant relative one-day
/// volatility sigma, steered across [target_lo, target_hi] in log space
/// by the same triangle sweep. Levels stay strictly positive.
TimeSeries synth_geometric_walk(std::uint64_t seed, Date start, int n, double sigma,
                                double target_lo, double target_hi, double pull = 0.02);

/// Seeded complete rates panel: OIS pillars 3M-30Y, deposits 3M/6M, and
/// swaps 1Y-30Y, driven by slowly evolving level/slope/spread factors.
/// All quotes are positive par rates suitable for bootstrapping in
/// either curve regime.
InstrumentPanel synth_rates_panel(std::uint64_t seed, Date start, int n_days);

/// Seeded CDS spread panel with realistic missingness: a fraction of
/// names incept after the panel starts (absent before), and quoted
/// names drop out in random single days and multi-day bursts.
InstrumentPanel synth_cds_panel(std::uint64_t seed, Date start, int n_days, int n_names,
                                double missing_prob = 0.03, double burst_prob = 0.01,
                                int burst_len_max = 8, double inception_frac = 0.2);

} // namespace varkit
