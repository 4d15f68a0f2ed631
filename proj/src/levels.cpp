#include "varkit/levels.hpp"

#include "varkit/errors.hpp"
#include "varkit/rng.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>

namespace varkit {

namespace {

std::string fmt_level(double l) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", l);
    return buf;
}

double median_of(std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double population_sd(const std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(v.size()));
}

} // namespace

std::vector<LevelBucket> bucket_sd(const TimeSeries& x, int m, double bucket_bp, int thin_min) {
    const auto violations = validate_series(x);
    if (!violations.empty()) throw ValidationError("bucket_sd: " + violations.front().detail);
    if (!x.complete()) throw ValidationError("bucket_sd: series has missing values");
    if (m < 1) throw ValidationError("bucket_sd: m must be >= 1");
    if (x.size() <= static_cast<std::size_t>(m))
        throw ValidationError("bucket_sd: series shorter than one holding period");
    if (!(bucket_bp > 0.0)) throw ValidationError("bucket_sd: bucket width must be positive");
    if (thin_min < 1) throw ValidationError("bucket_sd: thin minimum must be >= 1");

    std::vector<std::string> offending;
    std::size_t offending_total = 0;
    for (std::size_t i = m; i < x.size(); ++i) {
        const double start = *x.values[i - m];
        if (std::fabs(start) < kZeroLevelFloor) {
            ++offending_total;
            if (offending.size() < 3) offending.push_back(x.dates[i - m].to_string());
        }
    }
    if (offending_total > 0) {
        std::string msg = "bucket_sd: starting level below 1bp at ";
        for (std::size_t i = 0; i < offending.size(); ++i)
            msg += (i ? ", " : "") + offending[i];
        if (offending_total > offending.size())
            msg += " and " + std::to_string(offending_total - offending.size()) + " more";
        throw ValidationError(msg);
    }

    const double width = bucket_bp * 1e-4;
    struct Acc {
        std::vector<double> starts, rel, abs;
    };
    std::map<long long, Acc> groups;
    for (std::size_t i = m; i < x.size(); ++i) {
        const double start = *x.values[i - m];
        const double d = *x.values[i] - start;
        const long long key = static_cast<long long>(std::floor(start / width));
        Acc& g = groups[key];
        g.starts.push_back(start);
        g.abs.push_back(d);
        g.rel.push_back(d / start);
    }

    std::vector<LevelBucket> out;
    out.reserve(groups.size());
    bool any_fat = false;
    for (auto& [key, g] : groups) {
        LevelBucket b;
        b.bucket_lo = static_cast<double>(key) * width;
        b.bucket_hi = static_cast<double>(key + 1) * width;
        b.count = static_cast<int>(g.starts.size());
        b.median_level = median_of(g.starts);
        b.sd_relative = population_sd(g.rel);
        b.sd_absolute = population_sd(g.abs);
        b.thin = b.count < thin_min;
        any_fat = any_fat || !b.thin;
        out.push_back(b);
    }
    if (!any_fat)
        throw ValidationError("bucket_sd: all " + std::to_string(out.size()) +
                              " buckets are thin (fewer than " + std::to_string(thin_min) +
                              " observations)");
    return out;
}

std::string to_string(FitWeight w) {
    return w == FitWeight::unweighted ? "unweighted" : "by-count";
}

FitWeight fit_weight_from_string(const std::string& s) {
    if (s == "unweighted") return FitWeight::unweighted;
    if (s == "by-count" || s == "by_count") return FitWeight::by_count;
    throw ValidationError("unknown fit weight '" + s + "'");
}

FitResult fit_level_function(std::span<const LevelBucket> buckets, int degree, FitWeight weight,
                             FitField field) {
    if (degree != 1 && degree != 2) throw ValidationError("fit degree must be 1 or 2");
    const int p = degree + 1;

    std::vector<double> level, y, w;
    for (const auto& b : buckets) {
        if (b.thin) continue;
        level.push_back(b.median_level);
        y.push_back(field == FitField::relative_sd ? b.sd_relative : b.sd_absolute);
        w.push_back(weight == FitWeight::by_count ? static_cast<double>(b.count) : 1.0);
    }
    const int npts = static_cast<int>(level.size());
    if (npts < degree + 2)
        throw ValidationError("fit needs at least " + std::to_string(degree + 2) +
                              " non-thin buckets, have " + std::to_string(npts));

    // Normal equations S beta = r with basis (1, l, l^2).
    double S[3][3] = {};
    double r[3] = {};
    for (int i = 0; i < npts; ++i) {
        double phi[3] = {1.0, level[i], level[i] * level[i]};
        for (int a = 0; a < p; ++a) {
            r[a] += w[i] * phi[a] * y[i];
            for (int b = 0; b < p; ++b) S[a][b] += w[i] * phi[a] * phi[b];
        }
    }

    // Invert S by Gauss-Jordan with partial pivoting; p <= 3.
    double inv[3][3] = {};
    for (int i = 0; i < p; ++i) inv[i][i] = 1.0;
    double A[3][3];
    double scale = 0.0;
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) {
            A[i][j] = S[i][j];
            scale = std::max(scale, std::fabs(S[i][j]));
        }
    for (int col = 0; col < p; ++col) {
        int piv = col;
        for (int i = col + 1; i < p; ++i)
            if (std::fabs(A[i][col]) > std::fabs(A[piv][col])) piv = i;
        if (std::fabs(A[piv][col]) <= 1e-13 * scale)
            throw ComputationError("singular design: bucket levels do not identify a degree-" +
                                   std::to_string(degree) + " fit");
        if (piv != col) {
            for (int j = 0; j < p; ++j) {
                std::swap(A[piv][j], A[col][j]);
                std::swap(inv[piv][j], inv[col][j]);
            }
        }
        const double d = A[col][col];
        for (int j = 0; j < p; ++j) {
            A[col][j] /= d;
            inv[col][j] /= d;
        }
        for (int i = 0; i < p; ++i) {
            if (i == col) continue;
            const double f = A[i][col];
            if (f == 0.0) continue;
            for (int j = 0; j < p; ++j) {
                A[i][j] -= f * A[col][j];
                inv[i][j] -= f * inv[col][j];
            }
        }
    }

    double beta[3] = {};
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) beta[i] += inv[i][j] * r[j];

    double rss = 0.0;
    for (int i = 0; i < npts; ++i) {
        const double fitv = beta[0] + level[i] * (beta[1] + level[i] * beta[2]);
        const double res = y[i] - fitv;
        rss += w[i] * res * res;
    }
    const int dof = npts - p;
    const double sigma2 = rss / static_cast<double>(dof);

    FitResult out;
    out.degree = degree;
    out.a = beta[0];
    out.b = beta[1];
    out.c = p > 2 ? beta[2] : 0.0;
    out.residual_sd = std::sqrt(sigma2);
    out.points = npts;
    out.field = field;
    out.weight = weight;
    out.domain_lo = *std::min_element(level.begin(), level.end());
    out.domain_hi = *std::max_element(level.begin(), level.end());

    const boost::math::students_t_distribution<double> tdist(static_cast<double>(dof));
    for (int i = 0; i < p; ++i) {
        const double var_i = std::max(sigma2 * inv[i][i], 0.0);
        out.se[i] = std::sqrt(var_i);
        if (out.se[i] > 0.0) {
            out.t_stat[i] = beta[i] / out.se[i];
            out.p_value[i] =
                std::isfinite(out.t_stat[i])
                    ? 2.0 * boost::math::cdf(boost::math::complement(
                                tdist, std::fabs(out.t_stat[i])))
                    : 0.0;
        } else {
            out.t_stat[i] = beta[i] == 0.0 ? 0.0
                                           : std::numeric_limits<double>::infinity() *
                                                 (beta[i] > 0 ? 1.0 : -1.0);
            out.p_value[i] = beta[i] == 0.0 ? 1.0 : 0.0;
        }
    }
    return out;
}

namespace {

/// Exact minimum of the fit polynomial composed with the extrapolation
/// rule over [lo, hi]: endpoints plus the interior vertex for degree 2.
std::pair<double, double> min_on_interval(const FitResult& fit, double dom_lo, double dom_hi,
                                          Extrapolation extrapolation, double lo, double hi) {
    auto value_at = [&](double l) {
        if (extrapolation == Extrapolation::flat) l = std::clamp(l, dom_lo, dom_hi);
        return fit.poly(l);
    };
    // In flat mode the polynomial is evaluated on the clamped range only.
    double eff_lo = lo, eff_hi = hi;
    if (extrapolation == Extrapolation::flat) {
        eff_lo = std::clamp(lo, dom_lo, dom_hi);
        eff_hi = std::clamp(hi, dom_lo, dom_hi);
    }
    double arg = lo;
    double best = value_at(lo);
    if (value_at(hi) < best) {
        best = value_at(hi);
        arg = hi;
    }
    if (fit.c != 0.0) {
        const double vtx = -fit.b / (2.0 * fit.c);
        if (vtx > eff_lo && vtx < eff_hi && fit.poly(vtx) < best) {
            best = fit.poly(vtx);
            arg = vtx;
        }
    }
    return {best, arg};
}

} // namespace

LevelFunction make_level_function(const FitResult& fit, Extrapolation extrapolation,
                                  double boundary, double max_check_level) {
    if (!std::isfinite(boundary) || boundary <= fit.domain_lo)
        throw ValidationError("level function boundary must exceed the fit domain start " +
                              fmt_level(fit.domain_lo));
    if (!std::isfinite(max_check_level) || max_check_level <= 0.0)
        throw ValidationError("max check level must be positive");

    const auto [mn, arg] =
        min_on_interval(fit, fit.domain_lo, boundary, extrapolation, 0.0, max_check_level);
    if (!(mn > 0.0))
        throw ComputationError("level function is not positive at level " + fmt_level(arg));

    LevelFunctionDiagnostics diag;
    diag.p_values.assign(fit.p_value, fit.p_value + fit.degree + 1);
    return LevelFunction(fit.degree, fit.a, fit.b, fit.c, fit.domain_lo, boundary, extrapolation,
                         diag);
}

std::vector<double> ratio_curve(const FitResult& fnA, const FitResult& fnB,
                                std::span<const double> grid) {
    std::vector<double> out;
    out.reserve(grid.size());
    for (double l : grid) {
        const double den = fnB.poly(l);
        if (!(den > 0.0))
            throw ComputationError("ratio denominator is not positive at level " + fmt_level(l));
        out.push_back(fnA.poly(l) / den);
    }
    return out;
}

namespace {

std::uint64_t panel_hash(const InstrumentPanel& p) {
    std::uint64_t h = fnv1a64("panel");
    for (const auto& ins : p.instruments) h = fnv_add(h, std::string_view(ins.id()));
    for (const auto& d : p.dates) h = fnv_add(h, static_cast<std::int64_t>(d.serial()));
    for (const auto& row : p.quotes)
        for (const auto& q : row) {
            h = fnv_add(h, static_cast<std::uint64_t>(q.has_value() ? 1 : 0));
            if (q) h = fnv_add(h, *q);
        }
    return h;
}

std::uint64_t lookup_config_hash(std::span<const DataModelSpec> specs,
                                 const LookupParams& params, const RiskConfig& cfg) {
    std::uint64_t h = fnv1a64("lookup-config");
    h = fnv_add(h, cfg.alpha);
    h = fnv_add(h, cfg.beta);
    h = fnv_add(h, static_cast<std::int64_t>(cfg.holding_days));
    h = fnv_add(h, static_cast<std::int64_t>(cfg.window_days));
    h = fnv_add(h, std::string_view(params.window_label));
    h = fnv_add(h, static_cast<std::int64_t>(params.stress_window.first.serial()));
    h = fnv_add(h, static_cast<std::int64_t>(params.stress_window.second.serial()));
    for (const auto& s : specs) {
        h = fnv_add(h, std::string_view(s.id()));
        if (s.level_function) {
            const auto& f = *s.level_function;
            h = fnv_add(h, static_cast<std::int64_t>(f.degree()));
            h = fnv_add(h, f.a());
            h = fnv_add(h, f.b());
            h = fnv_add(h, f.c());
            h = fnv_add(h, f.domain_lo());
            h = fnv_add(h, f.domain_hi());
            h = fnv_add(h, static_cast<std::uint64_t>(
                               f.extrapolation() == Extrapolation::flat ? 0 : 1));
        }
    }
    for (double t : params.tenors) h = fnv_add(h, t);
    for (const auto& id : params.instrument_ids) h = fnv_add(h, id);
    for (const auto& [lo, hi] : params.level_buckets) {
        h = fnv_add(h, lo);
        h = fnv_add(h, hi);
    }
    return h;
}

} // namespace

LookupTable build_lookup_table(const InstrumentPanel& cleaned,
                               std::span<const DataModelSpec> specs, const LookupParams& params,
                               const RiskConfig& cfg, Exec exec) {
    cfg.validate();
    if (specs.empty()) throw ValidationError("lookup table: no data models given");
    for (const auto& s : specs) s.validate();
    if (params.tenors.empty() && params.instrument_ids.empty())
        throw ValidationError("lookup table: no tenors given");
    if (params.level_buckets.empty()) throw ValidationError("lookup table: no level buckets");
    for (const auto& [lo, hi] : params.level_buckets)
        if (!std::isfinite(lo) || !std::isfinite(hi) || lo >= hi)
            throw ValidationError("lookup table: bucket bounds must satisfy lo < hi");

    const InstrumentPanel window =
        business_day_window(cleaned, params.stress_window.first, params.stress_window.second);

    std::vector<std::size_t> col_of;
    std::vector<double> tenors;
    if (!params.instrument_ids.empty()) {
        for (const auto& id : params.instrument_ids) {
            const auto j = window.find(id);
            if (!j) throw ValidationError("lookup table: panel has no column " + id);
            col_of.push_back(*j);
            tenors.push_back(window.instruments[*j].tenor_years);
        }
    } else {
        // Resolve each bare tenor to a unique non-CDS panel column.
        for (double tenor : params.tenors) {
            std::vector<std::size_t> matches;
            for (std::size_t j = 0; j < window.instruments.size(); ++j)
                if (window.instruments[j].kind != Instrument::Kind::cds &&
                    window.instruments[j].tenor_years == tenor)
                    matches.push_back(j);
            if (matches.empty())
                throw ValidationError("lookup table: no instrument with tenor " +
                                      fmt_level(tenor));
            if (matches.size() > 1) {
                std::string msg = "lookup table: tenor " + fmt_level(tenor) + " is ambiguous:";
                for (auto j : matches) msg += " " + window.instruments[j].id();
                throw ValidationError(msg);
            }
            col_of.push_back(matches.front());
        }
        tenors = params.tenors;
    }

    const std::size_t S = specs.size();
    const std::size_t T = tenors.size();
    const std::size_t B = params.level_buckets.size();

    LookupTable table;
    table.window_id = params.window_label;
    table.window = {window.dates.front(), window.dates.back()};
    for (const auto& s : specs) table.model_ids.push_back(s.id());
    table.tenors = tenors;
    table.level_buckets = params.level_buckets;
    table.data_hash = panel_hash(window);
    table.config_hash = lookup_config_hash(specs, params, cfg);

    table.cells = parallel_map<LookupCell>(S * T * B, exec, [&](std::size_t idx) {
        const std::size_t s = idx / (T * B);
        const std::size_t t = (idx / B) % T;
        const std::size_t b = idx % B;
        const auto [lo, hi] = params.level_buckets[b];
        const double mid = 0.5 * (lo + hi);
        const std::string where = "lookup cell (model " + specs[s].id() + ", tenor " +
                                  fmt_level(tenors[t]) + ", bucket [" + fmt_level(lo) + ", " +
                                  fmt_level(hi) + ")): ";
        try {
            MarketState use;
            use.as_of = window.dates.back();
            use.window_start = window.dates.front();
            use.level = mid;
            const SvarReport rep = svar_report(window.column(col_of[t]), params.stress_window,
                                               specs[s], use, cfg);
            LookupCell cell;
            cell.model_id = specs[s].id();
            cell.tenor = tenors[t];
            cell.bucket_lo = lo;
            cell.bucket_hi = hi;
            cell.level = mid;
            cell.var_lower = rep.lower.var_value;
            cell.var_upper = rep.upper.var_value;
            cell.es_lower = rep.lower.es_value;
            cell.es_upper = rep.upper.es_value;
            cell.floor_breaches = rep.floor_breaches;
            return cell;
        } catch (const ValidationError& e) {
            throw ValidationError(where + e.what());
        } catch (const ComputationError& e) {
            throw ComputationError(where + e.what());
        }
    });
    return table;
}

} // namespace varkit
