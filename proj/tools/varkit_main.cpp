#include "CLI11.hpp"
#include "json.hpp"

#include "varkit/cleaning.hpp"
#include "varkit/core.hpp"
#include "varkit/curve.hpp"
#include "varkit/datamodel.hpp"
#include "varkit/errors.hpp"
#include "varkit/gaps.hpp"
#include "varkit/io.hpp"
#include "varkit/levels.hpp"
#include "varkit/metrics.hpp"
#include "varkit/synthetic.hpp"

#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using ordered_json = nlohmann::ordered_json;
using namespace varkit;

namespace {

constexpr int kSchemaVersion = 1;

/// Resolved configuration of one run, echoed into every output so a
/// result file identifies the exact inputs that produced it.
struct RunStamp {
    std::vector<std::pair<std::string, std::string>> items;
    std::string input_hash;

    void add(const std::string& key, const std::string& value) { items.emplace_back(key, value); }
    void add(const std::string& key, double value) { add(key, format_double(value)); }
    void add(const std::string& key, int value) { add(key, std::to_string(value)); }
    void add(const std::string& key, std::uint64_t value) { add(key, std::to_string(value)); }

    std::string csv_comment(const std::string& command) const {
        std::ostringstream out;
        out << "# varkit " << command << " schema_version=" << kSchemaVersion << "\n";
        out << "# input_hash: " << input_hash << "\n";
        out << "# config:";
        for (const auto& [k, v] : items) out << ' ' << k << '=' << v;
        out << "\n";
        return out.str();
    }

    ordered_json json(const std::string& command) const {
        ordered_json j;
        j["schema_version"] = kSchemaVersion;
        j["command"] = command;
        j["input_hash"] = input_hash;
        ordered_json cfg;
        for (const auto& [k, v] : items) cfg[k] = v;
        j["config"] = cfg;
        return j;
    }
};

Date parse_date_flag(const std::string& s, const std::string& flag) {
    try {
        return Date::parse(s);
    } catch (const ValidationError& e) {
        throw ValidationError(flag + ": " + e.what());
    }
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        const auto comma = s.find(',', pos);
        const auto piece = s.substr(pos, comma == std::string::npos ? comma : comma - pos);
        const auto b = piece.find_first_not_of(" \t");
        if (b != std::string::npos) {
            const auto e = piece.find_last_not_of(" \t");
            out.push_back(piece.substr(b, e - b + 1));
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

std::vector<double> parse_double_list(const std::string& s, const std::string& flag) {
    std::vector<double> out;
    for (const auto& tok : split_list(s)) {
        try {
            out.push_back(parse_double(tok, flag));
        } catch (const IoError& e) {
            throw ValidationError(e.what());
        }
    }
    if (out.empty()) throw ValidationError(flag + ": empty list");
    return out;
}

ordered_json level_function_json(const LevelFunction& f) {
    ordered_json j;
    j["kind"] = "level-function";
    j["degree"] = f.degree();
    j["a"] = f.a();
    j["b"] = f.b();
    j["c"] = f.c();
    j["domain_lo"] = f.domain_lo();
    j["domain_hi"] = f.domain_hi();
    j["extrapolation"] = to_string(f.extrapolation());
    return j;
}

LevelFunction level_function_from_json(const ordered_json& j) {
    return LevelFunction(j.at("degree").get<int>(), j.at("a").get<double>(),
                         j.at("b").get<double>(), j.at("c").get<double>(),
                         j.at("domain_lo").get<double>(), j.at("domain_hi").get<double>(),
                         extrapolation_from_string(j.at("extrapolation").get<std::string>()));
}

/// Reads a level function from a JSON file: either a bare
/// level-function object or any object with a `level_function` member
/// (e.g. an analyze-level output).
LevelFunction read_level_function(const std::string& path) {
    ordered_json j;
    try {
        j = ordered_json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw IoError(path + ": " + e.what());
    }
    try {
        if (j.contains("level_function")) return level_function_from_json(j["level_function"]);
        return level_function_from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw IoError(path + ": not a level-function file: " + e.what());
    }
}

std::vector<DataModelSpec> build_specs(const std::string& models_csv, int holding,
                                       const std::string& level_fn_path) {
    std::vector<DataModelSpec> specs;
    std::optional<LevelFunction> fn;
    for (const auto& name : split_list(models_csv)) {
        DataModelSpec spec;
        spec.kind = data_model_kind_from_string(name);
        spec.holding_days = holding;
        if (spec.kind == DataModelKind::level_relative) {
            if (level_fn_path.empty())
                throw ValidationError("model level-relative requires --level-fn");
            if (!fn) fn = read_level_function(level_fn_path);
            spec.level_function = fn;
        }
        spec.validate();
        specs.push_back(std::move(spec));
    }
    if (specs.empty()) throw ValidationError("--models: empty list");
    return specs;
}

// ---------------------------------------------------------------- clean

struct CleanArgs {
    std::string input, output, changelog, detections;
    std::uint64_t seed = 0;
    CleaningConfig cfg;
};

void run_clean(const CleanArgs& a) {
    CleaningConfig cfg = a.cfg;
    cfg.rng_seed = a.seed;
    cfg.validate();

    RunStamp stamp;
    stamp.input_hash = hex64(hash_file(a.input));
    stamp.add("seed", a.seed);
    stamp.add("trim_fraction", cfg.trim_fraction);
    stamp.add("mc_trials", cfg.mc_trials);
    stamp.add("threshold_sds", cfg.threshold_sds);
    stamp.add("max_time_gap_days", cfg.max_time_gap_days);
    stamp.add("spike_max_width_days", cfg.spike_max_width_days);
    stamp.add("spike_return_tolerance", cfg.spike_return_tolerance);
    stamp.add("small_level_floor", cfg.small_level_floor);

    const InstrumentPanel panel = read_panel_csv(a.input);
    const PanelCleanResult result = clean_panel(panel, cfg);

    const std::string comment = stamp.csv_comment("clean");
    write_panel_csv(a.output, result.panel);
    write_file(a.output, comment + read_file(a.output));

    const std::string changelog_path =
        a.changelog.empty() ? a.output + ".changelog.csv" : a.changelog;
    write_changelog_csv(changelog_path, result.log);
    write_file(changelog_path, comment + read_file(changelog_path));

    if (!a.detections.empty()) {
        write_detections_csv(a.detections, result.detections);
        write_file(a.detections, comment + read_file(a.detections));
    }
    for (const auto& id : result.untouched)
        std::cerr << ordered_json{{"warning", "untouched"}, {"id", id}}.dump() << "\n";
}

// ------------------------------------------------------------------ var

struct VarArgs {
    std::string input, output, json_out;
    std::uint64_t seed = 0;
    std::string as_of, stress_start, stress_end;
    std::string window_label = "stress";
    std::string models = "absolute,relative";
    std::string level_fn;
    std::string maturities = "2,5,10,30";
    std::string tenor_grid = "0.25,0.5,1,2,3,5,7,10,20,30";
    std::string regime = "multi";
    std::string spread_model = "absolute";
    std::string capital_mode = "twomax";
    double alpha = 0.99, beta = 0.975;
    int holding = 10, window_days = 260;
    double scenario_floor = 0.0;
    CleaningConfig clean_cfg;
    bool no_clean = false;
};

void run_var(const VarArgs& a) {
    RiskConfig cfg;
    cfg.alpha = a.alpha;
    cfg.beta = a.beta;
    cfg.holding_days = a.holding;
    cfg.window_days = a.window_days;
    cfg.validate();

    const Date as_of = parse_date_flag(a.as_of, "--as-of");
    const Date stress_lo = parse_date_flag(a.stress_start, "--stress-start");
    const Date stress_hi = parse_date_flag(a.stress_end, "--stress-end");
    const auto specs = build_specs(a.models, a.holding, a.level_fn);
    const CapitalMode cap_mode = capital_mode_from_string(a.capital_mode);

    RunStamp stamp;
    stamp.input_hash = hex64(hash_file(a.input));
    stamp.add("seed", a.seed);
    stamp.add("as_of", as_of.to_string());
    stamp.add("stress_start", stress_lo.to_string());
    stamp.add("stress_end", stress_hi.to_string());
    stamp.add("window_label", a.window_label);
    stamp.add("models", a.models);
    if (!a.level_fn.empty()) stamp.add("level_fn_hash", hex64(hash_file(a.level_fn)));
    stamp.add("maturities", a.maturities);
    stamp.add("tenor_grid", a.tenor_grid);
    stamp.add("regime", a.regime);
    stamp.add("spread_model", a.spread_model);
    stamp.add("capital_mode", a.capital_mode);
    stamp.add("alpha", a.alpha);
    stamp.add("beta", a.beta);
    stamp.add("holding_days", a.holding);
    stamp.add("window_days", a.window_days);
    stamp.add("scenario_floor", a.scenario_floor);
    stamp.add("clean", a.no_clean ? "no" : "yes");

    InstrumentPanel panel = read_panel_csv(a.input);
    if (!a.no_clean) {
        CleaningConfig ccfg = a.clean_cfg;
        ccfg.rng_seed = a.seed;
        panel = clean_panel(panel, ccfg).panel;
    } else {
        panel.validate();
    }

    SvarTableParams params;
    params.window_label = a.window_label;
    params.as_of = as_of;
    params.maturities = parse_double_list(a.maturities, "--maturities");
    params.tenor_grid = parse_double_list(a.tenor_grid, "--tenor-grid");
    params.regime = curve_regime_from_string(a.regime);
    params.spread_model = data_model_kind_from_string(a.spread_model);
    params.scenario_floor = a.scenario_floor;

    // Stress-window table plus a current-window table ending at as_of;
    // the capital column combines the two per (maturity, model).
    params.stress_window = {stress_lo, stress_hi};
    const auto stress_rows = svar_swap_table(panel, specs, params, cfg);

    const auto as_of_row = panel.row_of(as_of);
    if (!as_of_row) throw ValidationError("--as-of " + as_of.to_string() + " is not a panel date");
    if (*as_of_row + 1 < static_cast<std::size_t>(cfg.window_days))
        throw ValidationError("panel has fewer than " + std::to_string(cfg.window_days) +
                              " rows up to as_of");
    SvarTableParams current = params;
    current.window_label = "current";
    current.stress_window = {panel.dates[*as_of_row + 1 - cfg.window_days], as_of};
    const auto current_rows = svar_swap_table(panel, specs, current, cfg);

    // Losses-positive magnitudes for capital: the lower P&L tail,
    // clamped at zero.
    auto loss = [](double lower_tail) { return std::max(0.0, -lower_tail); };

    std::ostringstream csv;
    csv << stamp.csv_comment("var");
    csv << "window,maturity,model,pnl_var_lower,pnl_var_upper,pnl_es_lower,pnl_es_upper,"
           "floor_breaches,capital\n";
    ordered_json jrows = ordered_json::array();
    for (std::size_t i = 0; i < current_rows.size() + stress_rows.size(); ++i) {
        const bool is_stress = i >= current_rows.size();
        const SvarTableRow& r = is_stress ? stress_rows[i - current_rows.size()] : current_rows[i];
        csv << r.window_label << ',' << format_double(r.maturity) << ',' << r.model_id << ','
            << format_double(r.svar_lower) << ',' << format_double(r.svar_upper) << ','
            << format_double(r.es_lower) << ',' << format_double(r.es_upper) << ','
            << r.floor_breaches << ',';
        ordered_json jr;
        jr["window"] = r.window_label;
        jr["maturity"] = r.maturity;
        jr["model"] = r.model_id;
        jr["pnl_var_lower"] = r.svar_lower;
        jr["pnl_var_upper"] = r.svar_upper;
        jr["pnl_es_lower"] = r.es_lower;
        jr["pnl_es_upper"] = r.es_upper;
        jr["floor_breaches"] = r.floor_breaches;
        if (is_stress) {
            const SvarTableRow& base = current_rows[i - current_rows.size()];
            const double cap = capital_charge(loss(base.svar_lower), loss(r.svar_lower), cap_mode);
            csv << format_double(cap);
            jr["capital"] = cap;
        }
        csv << '\n';
        jrows.push_back(std::move(jr));
    }
    write_file(a.output, csv.str());
    if (!a.json_out.empty()) {
        ordered_json j = stamp.json("var");
        j["rows"] = jrows;
        write_file(a.json_out, j.dump(2) + "\n");
    }
}

// -------------------------------------------------------- analyze-level

struct AnalyzeArgs {
    std::string input, out_prefix = "level";
    int holding = 10;
    double bucket_bp = 25.0;
    int thin_min = 20;
    int degree = 2;
    std::string weight = "unweighted";
    std::string field = "relative";
    std::string extrapolate = "flat";
    double boundary = 0.0; // 0: use the fit domain end
    double max_check_level = 0.20;
};

void run_analyze_level(const AnalyzeArgs& a) {
    RunStamp stamp;
    stamp.input_hash = hex64(hash_file(a.input));
    stamp.add("holding_days", a.holding);
    stamp.add("bucket_bp", a.bucket_bp);
    stamp.add("thin_min", a.thin_min);
    stamp.add("degree", a.degree);
    stamp.add("weight", a.weight);
    stamp.add("field", a.field);
    stamp.add("extrapolate", a.extrapolate);
    stamp.add("boundary", a.boundary);
    stamp.add("max_check_level", a.max_check_level);

    const FitWeight weight = fit_weight_from_string(a.weight);
    FitField field;
    if (a.field == "relative")
        field = FitField::relative_sd;
    else if (a.field == "absolute")
        field = FitField::absolute_sd;
    else
        throw ValidationError("--field must be relative or absolute");
    const Extrapolation extrap = extrapolation_from_string(a.extrapolate);

    const TimeSeries x = read_series_csv(a.input);
    const auto buckets = bucket_sd(x, a.holding, a.bucket_bp, a.thin_min);
    const FitResult fit = fit_level_function(buckets, a.degree, weight, field);
    const double boundary = a.boundary > 0.0 ? a.boundary : fit.domain_hi;
    const LevelFunction fn = make_level_function(fit, extrap, boundary, a.max_check_level);

    const std::string comment = stamp.csv_comment("analyze-level");

    std::ostringstream bcsv;
    bcsv << comment
         << "bucket_lo,bucket_hi,median_level,sd_relative,sd_absolute,count,thin\n";
    for (const auto& b : buckets)
        bcsv << format_double(b.bucket_lo) << ',' << format_double(b.bucket_hi) << ','
             << format_double(b.median_level) << ',' << format_double(b.sd_relative) << ','
             << format_double(b.sd_absolute) << ',' << b.count << ',' << (b.thin ? 1 : 0)
             << '\n';
    write_file(a.out_prefix + "_buckets.csv", bcsv.str());

    std::ostringstream pcsv;
    pcsv << comment << "level,sd,fitted,thin\n";
    for (const auto& b : buckets)
        pcsv << format_double(b.median_level) << ','
             << format_double(field == FitField::relative_sd ? b.sd_relative : b.sd_absolute)
             << ',' << format_double(fit.poly(b.median_level)) << ',' << (b.thin ? 1 : 0)
             << '\n';
    write_file(a.out_prefix + "_plot.csv", pcsv.str());

    ordered_json j = stamp.json("analyze-level");
    ordered_json jf;
    jf["degree"] = fit.degree;
    jf["a"] = fit.a;
    jf["b"] = fit.b;
    jf["c"] = fit.c;
    const int nparam = fit.degree + 1;
    jf["se"] = std::vector<double>(fit.se, fit.se + nparam);
    jf["t_stat"] = std::vector<double>(fit.t_stat, fit.t_stat + nparam);
    jf["p_value"] = std::vector<double>(fit.p_value, fit.p_value + nparam);
    jf["residual_sd"] = fit.residual_sd;
    jf["points"] = fit.points;
    jf["domain_lo"] = fit.domain_lo;
    jf["domain_hi"] = fit.domain_hi;
    jf["field"] = a.field;
    jf["weight"] = a.weight;
    j["fit"] = jf;
    j["level_function"] = level_function_json(fn);
    write_file(a.out_prefix + "_fit.json", j.dump(2) + "\n");
}

// --------------------------------------------------------------- lookup

struct LookupArgs {
    std::string input, output, csv_out;
    std::string stress_start, stress_end;
    std::string window_label = "stress";
    std::string models = "absolute,relative";
    std::string level_fn;
    std::string tenors = "2,5,10";
    double bucket_lo = 0.0, bucket_hi = 0.10, bucket_width = 0.0025;
    double alpha = 0.99, beta = 0.975;
    int holding = 10, window_days = 260;
};

void run_lookup(const LookupArgs& a) {
    RiskConfig cfg;
    cfg.alpha = a.alpha;
    cfg.beta = a.beta;
    cfg.holding_days = a.holding;
    cfg.window_days = a.window_days;
    cfg.validate();

    if (!(a.bucket_width > 0.0) || !(a.bucket_lo < a.bucket_hi))
        throw ValidationError("bucket grid requires lo < hi and positive width");

    LookupParams params;
    params.stress_window = {parse_date_flag(a.stress_start, "--stress-start"),
                            parse_date_flag(a.stress_end, "--stress-end")};
    params.window_label = a.window_label;
    // Tokens with a ':' are instrument ids (e.g. OIS:5Y); bare numbers are
    // tenors resolved against the panel.  Mixing the two is rejected.
    {
        const auto tokens = split_list(a.tenors);
        bool any_id = false, any_tenor = false;
        for (const auto& tok : tokens)
            (tok.find(':') != std::string::npos ? any_id : any_tenor) = true;
        if (any_id && any_tenor)
            throw ValidationError("--tenors must be all instrument ids or all bare tenors");
        if (any_id)
            params.instrument_ids = tokens;
        else
            params.tenors = parse_double_list(a.tenors, "--tenors");
    }
    for (double lo = a.bucket_lo; lo < a.bucket_hi - 1e-12; lo += a.bucket_width)
        params.level_buckets.emplace_back(lo, std::min(lo + a.bucket_width, a.bucket_hi));

    RunStamp stamp;
    stamp.input_hash = hex64(hash_file(a.input));
    stamp.add("stress_start", a.stress_start);
    stamp.add("stress_end", a.stress_end);
    stamp.add("window_label", a.window_label);
    stamp.add("models", a.models);
    if (!a.level_fn.empty()) stamp.add("level_fn_hash", hex64(hash_file(a.level_fn)));
    stamp.add("tenors", a.tenors);
    stamp.add("bucket_lo", a.bucket_lo);
    stamp.add("bucket_hi", a.bucket_hi);
    stamp.add("bucket_width", a.bucket_width);
    stamp.add("alpha", a.alpha);
    stamp.add("beta", a.beta);
    stamp.add("holding_days", a.holding);
    stamp.add("window_days", a.window_days);

    const auto specs = build_specs(a.models, a.holding, a.level_fn);
    const InstrumentPanel panel = read_panel_csv(a.input);
    panel.validate();
    const LookupTable table = build_lookup_table(panel, specs, params, cfg);

    ordered_json j = stamp.json("lookup");
    j["window_id"] = table.window_id;
    j["window_start"] = table.window.first.to_string();
    j["window_end"] = table.window.second.to_string();
    j["model_ids"] = table.model_ids;
    j["tenors"] = table.tenors;
    ordered_json jbuckets = ordered_json::array();
    for (const auto& [lo, hi] : table.level_buckets) jbuckets.push_back({lo, hi});
    j["level_buckets"] = jbuckets;
    j["data_hash"] = hex64(table.data_hash);
    j["config_hash"] = hex64(table.config_hash);
    ordered_json jcells = ordered_json::array();
    for (const auto& c : table.cells) {
        ordered_json jc;
        jc["model"] = c.model_id;
        jc["tenor"] = c.tenor;
        jc["bucket_lo"] = c.bucket_lo;
        jc["bucket_hi"] = c.bucket_hi;
        jc["level"] = c.level;
        jc["var_lower"] = c.var_lower;
        jc["var_upper"] = c.var_upper;
        jc["es_lower"] = c.es_lower;
        jc["es_upper"] = c.es_upper;
        jc["floor_breaches"] = c.floor_breaches;
        jcells.push_back(std::move(jc));
    }
    j["cells"] = jcells;
    write_file(a.output, j.dump(2) + "\n");

    if (!a.csv_out.empty()) {
        std::ostringstream csv;
        csv << stamp.csv_comment("lookup");
        csv << "# data_hash: " << hex64(table.data_hash) << "\n";
        csv << "# config_hash: " << hex64(table.config_hash) << "\n";
        csv << "model,tenor,bucket_lo,bucket_hi,level,var_lower,var_upper,es_lower,es_upper,"
               "floor_breaches\n";
        for (const auto& c : table.cells)
            csv << c.model_id << ',' << format_double(c.tenor) << ','
                << format_double(c.bucket_lo) << ',' << format_double(c.bucket_hi) << ','
                << format_double(c.level) << ',' << format_double(c.var_lower) << ','
                << format_double(c.var_upper) << ',' << format_double(c.es_lower) << ','
                << format_double(c.es_upper) << ',' << c.floor_breaches << '\n';
        write_file(a.csv_out, csv.str());
    }
}

// -------------------------------------------------------------- gapscan

struct GapscanArgs {
    std::string input, out_prefix = "gaps";
    std::string as_of, window_start, window_end;
    int k = 3, span = 10;
    double quantile = 0.9;
};

void run_gapscan(const GapscanArgs& a) {
    RunStamp stamp;
    stamp.input_hash = hex64(hash_file(a.input));
    stamp.add("as_of", a.as_of);
    stamp.add("window_start", a.window_start);
    stamp.add("window_end", a.window_end);
    stamp.add("k", a.k);
    stamp.add("span", a.span);
    stamp.add("quantile", a.quantile);

    const Date as_of = parse_date_flag(a.as_of, "--as-of");
    const std::pair<Date, Date> window = {parse_date_flag(a.window_start, "--window-start"),
                                          parse_date_flag(a.window_end, "--window-end")};
    const InstrumentPanel panel = read_panel_csv(a.input);

    const GapReport report = availability_report(panel, as_of, window);
    const GapTrack track = stress_gap_fraction(panel, window, a.k, a.span, as_of);
    const TimeSeries pct = percentile_track(panel, a.quantile);

    ordered_json j = stamp.json("gapscan");
    j["universe_count"] = report.universe_count;
    j["available_asof_count"] = report.available_asof_count;
    j["pct_available_in_window"] = report.pct_available_in_window;
    j["pct_available_throughout"] = report.pct_available_throughout;
    write_file(a.out_prefix + "_report.json", j.dump(2) + "\n");

    const std::string comment = stamp.csv_comment("gapscan");
    write_track_csv(a.out_prefix + "_gapfraction.csv", track, "pct_with_gaps");
    write_file(a.out_prefix + "_gapfraction.csv",
               comment + read_file(a.out_prefix + "_gapfraction.csv"));
    write_series_csv(a.out_prefix + "_percentile.csv", pct);
    write_file(a.out_prefix + "_percentile.csv",
               comment + read_file(a.out_prefix + "_percentile.csv"));
}

// ---------------------------------------------------------- sensitivity

struct SensitivityArgs {
    std::string input, output;
    double alpha = 0.99, beta = 0.975;
    int holding = 10, window_days = 260;
    CleaningConfig clean_cfg;
};

void run_sensitivity(const SensitivityArgs& a) {
    RiskConfig cfg;
    cfg.alpha = a.alpha;
    cfg.beta = a.beta;
    cfg.holding_days = a.holding;
    cfg.window_days = a.window_days;

    RunStamp stamp;
    stamp.input_hash = hex64(hash_file(a.input));
    stamp.add("alpha", a.alpha);
    stamp.add("beta", a.beta);
    stamp.add("holding_days", a.holding);
    stamp.add("window_days", a.window_days);
    stamp.add("spike_max_width_days", a.clean_cfg.spike_max_width_days);
    stamp.add("spike_return_tolerance", a.clean_cfg.spike_return_tolerance);
    stamp.add("small_level_floor", a.clean_cfg.small_level_floor);

    const TimeSeries x = read_series_csv(a.input);
    const auto points = rolling_clean_sensitivity(x, a.clean_cfg, cfg);

    std::ostringstream csv;
    csv << stamp.csv_comment("sensitivity");
    csv << "date,var_rel,es_rel,ratio,es_only\n";
    for (const auto& p : points)
        csv << p.date.to_string() << ',' << format_double(p.var_rel) << ','
            << format_double(p.es_rel) << ',' << format_double(p.ratio) << ','
            << (p.es_only ? 1 : 0) << '\n';
    write_file(a.output, csv.str());
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
    std::string kind = "rates";
    std::string output;
    std::uint64_t seed = 0;
    std::string start = "2015-01-05";
    int days = 780;
    int names = 50;
    double a = 5e-4, b = 0.0, c = 0.0;
    double sigma = 0.01;
    double lo = 0.01, hi = 0.12;
};

void run_synth(const SynthArgs& a) {
    const Date start = parse_date_flag(a.start, "--start");
    if (a.kind == "rates") {
        write_panel_csv(a.output, synth_rates_panel(a.seed, start, a.days));
    } else if (a.kind == "cds") {
        write_panel_csv(a.output, synth_cds_panel(a.seed, start, a.days, a.names));
    } else if (a.kind == "walk") {
        write_series_csv(a.output, synth_level_walk(a.seed, start, a.days, a.a, a.b, a.c, a.lo,
                                                    a.hi));
    } else if (a.kind == "geometric") {
        write_series_csv(a.output,
                         synth_geometric_walk(a.seed, start, a.days, a.sigma, a.lo, a.hi));
    } else {
        throw ValidationError("--kind must be rates, cds, walk, or geometric");
    }
}

void add_cleaning_flags(CLI::App* cmd, CleaningConfig& cfg, bool full) {
    if (full) {
        cmd->add_option("--trim-fraction", cfg.trim_fraction,
                        "Fraction of largest moves removed by the trimmed SD");
        cmd->add_option("--mc-trials", cfg.mc_trials, "Monte Carlo trials for detection");
        cmd->add_option("--threshold-sds", cfg.threshold_sds,
                        "Detection threshold in simulated SDs above the mean");
        cmd->add_option("--max-time-gap", cfg.max_time_gap_days,
                        "Longest calendar gap filled by interpolation");
    }
    cmd->add_option("--spike-max-width", cfg.spike_max_width_days,
                    "Widest spike removable, in points");
    cmd->add_option("--spike-tolerance", cfg.spike_return_tolerance,
                    "Relative distance that counts as returning to the pre-spike level");
    cmd->add_option("--level-floor", cfg.small_level_floor,
                    "Absolute tolerance near zero levels");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Historical VAR/ES toolkit: cleaning, curves, shock models, gap metrics"};
    app.require_subcommand(1);

    CleanArgs clean_args;
    auto* c_clean = app.add_subcommand("clean", "Clean a rates panel and log every change");
    c_clean->add_option("--input", clean_args.input, "Panel CSV")->required();
    c_clean->add_option("--output", clean_args.output, "Cleaned panel CSV")->required();
    c_clean->add_option("--changelog", clean_args.changelog,
                        "Changelog CSV (default <output>.changelog.csv)");
    c_clean->add_option("--detections", clean_args.detections, "Detection stats CSV");
    c_clean->add_option("--seed", clean_args.seed, "RNG seed for detection Monte Carlo")
        ->required();
    add_cleaning_flags(c_clean, clean_args.cfg, true);
    c_clean->set_config("--config");
    c_clean->callback([&] { run_clean(clean_args); });

    VarArgs var_args;
    auto* c_var = app.add_subcommand("var", "Stressed VAR/ES of par swaps by maturity and model");
    c_var->add_option("--input", var_args.input, "Panel CSV")->required();
    c_var->add_option("--output", var_args.output, "Report CSV")->required();
    c_var->add_option("--json", var_args.json_out, "Also write a JSON report");
    c_var->add_option("--seed", var_args.seed, "RNG seed for the cleaning pass")->required();
    c_var->add_option("--as-of", var_args.as_of, "Valuation date (a panel date)")->required();
    c_var->add_option("--stress-start", var_args.stress_start, "Stress window start")->required();
    c_var->add_option("--stress-end", var_args.stress_end, "Stress window end")->required();
    c_var->add_option("--window-label", var_args.window_label, "Stress window name");
    c_var->add_option("--models", var_args.models,
                      "Comma list: absolute, relative, level-relative");
    c_var->add_option("--level-fn", var_args.level_fn, "Level-function JSON file");
    c_var->add_option("--maturities", var_args.maturities, "Swap maturities, years");
    c_var->add_option("--tenor-grid", var_args.tenor_grid, "Curve sampling tenors, years");
    c_var->add_option("--regime", var_args.regime, "single or multi");
    c_var->add_option("--spread-model", var_args.spread_model, "Data model for spreads");
    c_var->add_option("--capital-mode", var_args.capital_mode, "sum or twomax");
    c_var->add_option("--alpha", var_args.alpha, "VAR confidence");
    c_var->add_option("--beta", var_args.beta, "ES confidence");
    c_var->add_option("--holding", var_args.holding, "Holding period, business days");
    c_var->add_option("--window-days", var_args.window_days, "Observations per window");
    c_var->add_option("--scenario-floor", var_args.scenario_floor,
                      "Scenario rates below this count as floor breaches");
    c_var->add_flag("--no-clean", var_args.no_clean, "Skip the cleaning pass");
    add_cleaning_flags(c_var, var_args.clean_cfg, true);
    c_var->set_config("--config");
    c_var->callback([&] { run_var(var_args); });

    AnalyzeArgs an_args;
    auto* c_an = app.add_subcommand("analyze-level",
                                    "Bucket move SDs by level and fit a level function");
    c_an->add_option("--input", an_args.input, "Series CSV")->required();
    c_an->add_option("--output-prefix", an_args.out_prefix, "Output path prefix");
    c_an->add_option("--holding", an_args.holding, "Move horizon, business days");
    c_an->add_option("--bucket-bp", an_args.bucket_bp, "Bucket width in basis points");
    c_an->add_option("--thin-min", an_args.thin_min, "Minimum bucket count used in fits");
    c_an->add_option("--degree", an_args.degree, "Fit degree: 1 or 2");
    c_an->add_option("--weight", an_args.weight, "unweighted or by-count");
    c_an->add_option("--field", an_args.field, "relative or absolute");
    c_an->add_option("--extrapolate", an_args.extrapolate, "flat or poly");
    c_an->add_option("--boundary", an_args.boundary,
                     "Domain end of the level function (default: fit domain end)");
    c_an->add_option("--max-check-level", an_args.max_check_level,
                     "Positivity is verified up to this level");
    c_an->set_config("--config");
    c_an->callback([&] { run_analyze_level(an_args); });

    LookupArgs lk_args;
    auto* c_lk = app.add_subcommand("lookup", "VAR/ES lookup table by model, tenor, and level");
    c_lk->add_option("--input", lk_args.input, "Cleaned panel CSV")->required();
    c_lk->add_option("--output", lk_args.output, "Table JSON")->required();
    c_lk->add_option("--csv", lk_args.csv_out, "Also write one row per cell as CSV");
    c_lk->add_option("--stress-start", lk_args.stress_start, "Stress window start")->required();
    c_lk->add_option("--stress-end", lk_args.stress_end, "Stress window end")->required();
    c_lk->add_option("--window-label", lk_args.window_label, "Stress window name");
    c_lk->add_option("--models", lk_args.models, "Comma list of data models");
    c_lk->add_option("--level-fn", lk_args.level_fn, "Level-function JSON file");
    c_lk->add_option("--tenors", lk_args.tenors, "Instrument tenors, years");
    c_lk->add_option("--bucket-lo", lk_args.bucket_lo, "First bucket edge");
    c_lk->add_option("--bucket-hi", lk_args.bucket_hi, "Last bucket edge");
    c_lk->add_option("--bucket-width", lk_args.bucket_width, "Bucket width, decimal rate");
    c_lk->add_option("--alpha", lk_args.alpha, "VAR confidence");
    c_lk->add_option("--beta", lk_args.beta, "ES confidence");
    c_lk->add_option("--holding", lk_args.holding, "Holding period, business days");
    c_lk->add_option("--window-days", lk_args.window_days, "Observations per window");
    c_lk->set_config("--config");
    c_lk->callback([&] { run_lookup(lk_args); });

    GapscanArgs gap_args;
    auto* c_gap = app.add_subcommand("gapscan", "Availability and gap metrics for a spread panel");
    c_gap->add_option("--input", gap_args.input, "Panel CSV")->required();
    c_gap->add_option("--output-prefix", gap_args.out_prefix, "Output path prefix");
    c_gap->add_option("--as-of", gap_args.as_of, "Availability date")->required();
    c_gap->add_option("--window-start", gap_args.window_start, "Window start")->required();
    c_gap->add_option("--window-end", gap_args.window_end, "Window end")->required();
    c_gap->add_option("--k", gap_args.k, "Missing-count threshold");
    c_gap->add_option("--span", gap_args.span, "Trailing span, panel rows");
    c_gap->add_option("--quantile", gap_args.quantile, "Cross-name percentile track");
    c_gap->set_config("--config");
    c_gap->callback([&] { run_gapscan(gap_args); });

    SensitivityArgs sen_args;
    auto* c_sen = app.add_subcommand("sensitivity",
                                     "Rolling effect of spike cleaning on VAR and ES");
    c_sen->add_option("--input", sen_args.input, "Series CSV")->required();
    c_sen->add_option("--output", sen_args.output, "Report CSV")->required();
    c_sen->add_option("--alpha", sen_args.alpha, "VAR confidence");
    c_sen->add_option("--beta", sen_args.beta, "ES confidence");
    c_sen->add_option("--holding", sen_args.holding, "Holding period, business days");
    c_sen->add_option("--window-days", sen_args.window_days, "Observations per window");
    add_cleaning_flags(c_sen, sen_args.clean_cfg, false);
    c_sen->set_config("--config");
    c_sen->callback([&] { run_sensitivity(sen_args); });

    SynthArgs syn_args;
    auto* c_syn = app.add_subcommand("synth", "Seeded synthetic data generators");
    c_syn->add_option("--kind", syn_args.kind, "rates, cds, walk, or geometric");
    c_syn->add_option("--output", syn_args.output, "Output CSV")->required();
    c_syn->add_option("--seed", syn_args.seed, "RNG seed")->required();
    c_syn->add_option("--start", syn_args.start, "First date");
    c_syn->add_option("--days", syn_args.days, "Number of business days / points");
    c_syn->add_option("--names", syn_args.names, "CDS names (kind=cds)");
    c_syn->add_option("--sd-a", syn_args.a, "Constant SD coefficient (kind=walk)");
    c_syn->add_option("--sd-b", syn_args.b, "Linear SD coefficient (kind=walk)");
    c_syn->add_option("--sd-c", syn_args.c, "Quadratic SD coefficient (kind=walk)");
    c_syn->add_option("--sigma", syn_args.sigma, "Relative volatility (kind=geometric)");
    c_syn->add_option("--lo", syn_args.lo, "Sweep low target");
    c_syn->add_option("--hi", syn_args.hi, "Sweep high target");
    c_syn->set_config("--config");
    c_syn->callback([&] { run_synth(syn_args); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ConfigError& e) {
        std::cerr << ordered_json{{"error", "io"}, {"message", e.what()}}.dump() << "\n";
        return 3;
    } catch (const CLI::ParseError& e) {
        std::cerr << ordered_json{{"error", "usage"}, {"message", e.what()}}.dump() << "\n";
        return 1;
    } catch (const ValidationError& e) {
        std::cerr << ordered_json{{"error", "validation"}, {"message", e.what()}}.dump() << "\n";
        return 1;
    } catch (const ComputationError& e) {
        std::cerr << ordered_json{{"error", "computation"}, {"message", e.what()}}.dump() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << ordered_json{{"error", "io"}, {"message", e.what()}}.dump() << "\n";
        return 3;
    }
    return 0;
}
