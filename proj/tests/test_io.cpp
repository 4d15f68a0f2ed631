// Tests for CSV serialization, number formatting, config parsing, and
// file hashing. Every writer/reader pair must round trip bitwise.

#include "doctest.h"
#include "oracles.hpp"

#include "varkit/cleaning.hpp"
#include "varkit/errors.hpp"
#include "varkit/gaps.hpp"
#include "varkit/io.hpp"

#include <cmath>
#include <cstring>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

using namespace varkit;

namespace {

const Date kStart = Date::parse("2016-01-04");

std::string tmp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("varkit_io_test_" + name)).string();
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

} // namespace

TEST_CASE("format_double: shortest form that parses back to the same bits") {
    const std::vector<double> cases = {
        0.0,    1.0,     -1.0,       0.1,         1.0 / 3.0,       M_PI,
        0.25,   1e-300,  -1e300,     1e308,       5e-324,          0.02749999999999999,
        1234.5, -0.0033, 1e16 + 2.0, 0.1 + 0.2,   123456789.123456, 2.2250738585072014e-308,
    };
    for (double v : cases) {
        const std::string s = format_double(v);
        const double back = parse_double(s, "roundtrip");
        CHECK(same_bits(back, v));
    }
    // Shortest form: clean values do not grow digits.
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(0.25) == "0.25");
    CHECK(format_double(0.1) == "0.1");
}

TEST_CASE("parse_double: strict full-token parse") {
    CHECK(parse_double("1.5", "x") == 1.5);
    CHECK(parse_double("-2e-3", "x") == -2e-3);
    CHECK_THROWS_WITH_AS(parse_double("1.5x", "shock"),
                         doctest::Contains("shock: cannot parse number '1.5x'"), IoError);
    CHECK_THROWS_AS(parse_double("", "x"), IoError);
    CHECK_THROWS_AS(parse_double("12,5", "x"), IoError);
    CHECK_THROWS_AS(parse_double(" 1.5", "x"), IoError);
}

TEST_CASE("series CSV: write/read round trips bitwise, including gaps") {
    TimeSeries x = oracles::make_series(kStart, {0.0212, 1.0 / 3.0, M_PI * 1e-3, -0.004});
    x.values[2].reset();
    const std::string path = tmp_path("series.csv");
    write_series_csv(path, x);

    const TimeSeries y = read_series_csv(path, "test");
    REQUIRE(y.size() == x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        CHECK(y.dates[i] == x.dates[i]);
        REQUIRE(y.values[i].has_value() == x.values[i].has_value());
        if (x.values[i]) CHECK(same_bits(*y.values[i], *x.values[i]));
    }
    CHECK(y.id == "test");

    // Writing the reread series reproduces the file byte for byte.
    const std::string path2 = tmp_path("series2.csv");
    write_series_csv(path2, y);
    CHECK(read_file(path) == read_file(path2));
}

TEST_CASE("series CSV: comments, headerless files, and parse errors") {
    const std::string path = tmp_path("series_in.csv");

    write_file(path, "# comment\ndate,value\n2016-01-04,0.5\n\n# more\n2016-01-05,\n");
    const TimeSeries ok = read_series_csv(path);
    REQUIRE(ok.size() == 2);
    CHECK(*ok.values[0] == 0.5);
    CHECK_FALSE(ok.values[1].has_value());

    // No header: first line is data.
    write_file(path, "2016-01-04,0.5\n");
    CHECK(read_series_csv(path).size() == 1);

    // Errors carry the path and 1-based line number.
    write_file(path, "date,value\n2016-01-04,0.5\nnot-a-date,1\n");
    CHECK_THROWS_WITH_AS(read_series_csv(path), doctest::Contains(":3:"), IoError);
    write_file(path, "date,value\n2016-01-04,zap\n");
    CHECK_THROWS_WITH_AS(read_series_csv(path), doctest::Contains("cannot parse number 'zap'"),
                         IoError);
    write_file(path, "date,value\n2016-01-04,1,2\n");
    CHECK_THROWS_WITH_AS(read_series_csv(path), doctest::Contains("expected 2 fields, got 3"),
                         IoError);
    write_file(path, "# only comments\n");
    CHECK_THROWS_WITH_AS(read_series_csv(path), doctest::Contains("no content lines"), IoError);
    CHECK_THROWS_WITH_AS(read_series_csv(tmp_path("missing_dir/nope.csv")),
                         doctest::Contains("cannot open"), IoError);
}

TEST_CASE("panel CSV: write/read round trips instruments, dates, and bits") {
    const std::vector<Instrument> insts = {{Instrument::Kind::ois_swap, 5.0, ""},
                                           {Instrument::Kind::deposit, 0.25, ""},
                                           {Instrument::Kind::cds, 5.0, "ACME"}};
    std::vector<std::vector<std::optional<double>>> cols(3);
    cols[0] = {0.02, 0.0201, 1.0 / 7.0};
    cols[1] = {0.015, std::nullopt, 0.0151};
    cols[2] = {std::nullopt, 0.0089, 0.009};
    const InstrumentPanel p = oracles::make_panel(kStart, insts, cols);

    const std::string path = tmp_path("panel.csv");
    write_panel_csv(path, p);
    const InstrumentPanel q = read_panel_csv(path);

    REQUIRE(q.rows() == p.rows());
    REQUIRE(q.cols() == p.cols());
    CHECK(q.instruments[0].id() == "OIS:5Y");
    CHECK(q.instruments[1].id() == "DEPO:3M");
    CHECK(q.instruments[2].id() == "CDS:ACME");
    CHECK(q.instruments[2].kind == Instrument::Kind::cds);
    for (std::size_t r = 0; r < p.rows(); ++r) {
        CHECK(q.dates[r] == p.dates[r]);
        for (std::size_t j = 0; j < p.cols(); ++j) {
            REQUIRE(q.quotes[r][j].has_value() == p.quotes[r][j].has_value());
            if (p.quotes[r][j]) CHECK(same_bits(*q.quotes[r][j], *p.quotes[r][j]));
        }
    }

    const std::string path2 = tmp_path("panel2.csv");
    write_panel_csv(path2, q);
    CHECK(read_file(path) == read_file(path2));
}

TEST_CASE("panel CSV: header and row validation") {
    const std::string path = tmp_path("panel_in.csv");

    write_file(path, "time,OIS:5Y\n2016-01-04,0.02\n");
    CHECK_THROWS_WITH_AS(read_panel_csv(path), doctest::Contains("panel header must be"),
                         IoError);
    write_file(path, "date\n2016-01-04\n");
    CHECK_THROWS_AS(read_panel_csv(path), IoError);
    write_file(path, "date,BOND:5Y\n2016-01-04,0.02\n");
    CHECK_THROWS_WITH_AS(read_panel_csv(path), doctest::Contains("column 2"), IoError);
    write_file(path, "date,OIS:5Y,IRS:10Y\n2016-01-04,0.02\n");
    CHECK_THROWS_WITH_AS(read_panel_csv(path), doctest::Contains("expected 3 fields, got 2"),
                         IoError);
    write_file(path, "date,OIS:5Y\n2016-01-04,oops\n");
    CHECK_THROWS_WITH_AS(read_panel_csv(path), doctest::Contains("cannot parse number"),
                         IoError);
}

TEST_CASE("changelog CSV: round trip preserves missing old values and actions") {
    ChangeLog log;
    ChangeEntry a;
    a.date = kStart;
    a.id = "OIS:5Y";
    a.action = ChangeAction::interpolated;
    a.old_value = std::nullopt; // cell was missing before the fill
    a.new_value = 0.02125;
    ChangeEntry b;
    b.date = kStart.next_business_day();
    b.id = "CDS:ACME";
    b.action = ChangeAction::outlier_replaced;
    b.old_value = 1.0 / 3.0;
    b.new_value = 0.0091;
    log.entries = {a, b};

    const std::string path = tmp_path("changelog.csv");
    write_changelog_csv(path, log);
    const ChangeLog back = read_changelog_csv(path);

    REQUIRE(back.entries.size() == 2);
    CHECK(back.entries[0].date == a.date);
    CHECK(back.entries[0].id == "OIS:5Y");
    CHECK(back.entries[0].action == ChangeAction::interpolated);
    CHECK_FALSE(back.entries[0].old_value.has_value());
    CHECK(same_bits(back.entries[0].new_value, a.new_value));
    CHECK(back.entries[1].action == ChangeAction::outlier_replaced);
    REQUIRE(back.entries[1].old_value.has_value());
    CHECK(same_bits(*back.entries[1].old_value, 1.0 / 3.0));

    const std::string path2 = tmp_path("changelog2.csv");
    write_changelog_csv(path2, back);
    CHECK(read_file(path) == read_file(path2));
}

TEST_CASE("changelog CSV: malformed rows are rejected with line numbers") {
    const std::string path = tmp_path("changelog_in.csv");
    write_file(path, "date,id,action,old_value,new_value\n2016-01-04,X,interpolated,1\n");
    CHECK_THROWS_WITH_AS(read_changelog_csv(path),
                         doctest::Contains("expected 5 fields, got 4"), IoError);
    write_file(path, "date,id,action,old_value,new_value\n2016-01-04,X,zapped,,1\n");
    CHECK_THROWS_WITH_AS(read_changelog_csv(path), doctest::Contains(":2:"), IoError);
}

TEST_CASE("change action strings round trip") {
    const std::vector<ChangeAction> all = {
        ChangeAction::interpolated,        ChangeAction::time_filled,
        ChangeAction::extrapolated_flat,   ChangeAction::extrapolated_spread,
        ChangeAction::outlier_replaced,    ChangeAction::spike_removed,
    };
    for (ChangeAction ax : all) CHECK(change_action_from_string(to_string(ax)) == ax);
    CHECK(to_string(ChangeAction::extrapolated_spread) == "extrapolated-constant-spread");
    CHECK_THROWS_AS(change_action_from_string("noise"), ValidationError);
}

TEST_CASE("detections and track CSV writers produce exact content") {
    DetectionResult det;
    det.id = "OIS:5Y";
    det.flagged = true;
    det.observed_ratio = 6.5;
    det.threshold = 5.25;
    det.simulated_mean = 1.5;
    det.simulated_sd = 0.75;
    const std::string dpath = tmp_path("detections.csv");
    write_detections_csv(dpath, {det});
    CHECK(read_file(dpath) ==
          "id,flagged,observed_ratio,threshold,simulated_mean,simulated_sd\n"
          "OIS:5Y,1,6.5,5.25,1.5,0.75\n");

    GapTrack track;
    track.dates = {kStart, kStart.next_business_day()};
    track.values = {0.0, 12.5};
    const std::string tpath = tmp_path("track.csv");
    write_track_csv(tpath, track, "pct_gapped");
    CHECK(read_file(tpath) == "date,pct_gapped\n2016-01-04,0\n2016-01-05,12.5\n");
}

TEST_CASE("config files: trimming, comments, ordering, and duplicate keys") {
    const std::string path = tmp_path("config.cfg");
    write_file(path,
               "# run settings\n"
               "alpha = 0.99\n"
               "\n"
               "window_days=260\n"
               "label =  stress 2016  \n"
               "formula = a=b\n");
    const auto kv = read_config_file(path);
    REQUIRE(kv.size() == 4);
    CHECK(kv[0].first == "alpha");
    CHECK(kv[0].second == "0.99");
    CHECK(kv[1].first == "window_days");
    CHECK(kv[1].second == "260");
    CHECK(kv[2].first == "label");
    CHECK(kv[2].second == "stress 2016"); // outer whitespace trimmed, inner kept
    CHECK(kv[3].second == "a=b");         // split on the first '=' only

    write_file(path, "alpha = 0.99\nalpha = 0.95\n");
    CHECK_THROWS_WITH_AS(read_config_file(path), doctest::Contains("duplicate key 'alpha'"),
                         IoError);
    write_file(path, "alpha 0.99\n");
    CHECK_THROWS_WITH_AS(read_config_file(path), doctest::Contains("expected key = value"),
                         IoError);
    write_file(path, " = 0.99\n");
    CHECK_THROWS_WITH_AS(read_config_file(path), doctest::Contains("empty key"), IoError);
    write_file(path, "");
    CHECK(read_config_file(path).empty());
}

TEST_CASE("file hashing: FNV-1a over raw bytes with stable hex rendering") {
    const std::string path = tmp_path("hash.bin");
    write_file(path, "abc");
    // Known FNV-1a test vector for "abc".
    CHECK(hex64(hash_file(path)) == "e71fa2190541574b");

    const std::string path2 = tmp_path("hash2.bin");
    write_file(path2, "abc");
    CHECK(hash_file(path) == hash_file(path2));
    write_file(path2, "abd");
    CHECK(hash_file(path) != hash_file(path2));

    CHECK(hex64(0) == "0000000000000000");
    CHECK(hex64(0xdeadbeefULL) == "00000000deadbeef");

    // Binary-safe read/write round trip, embedded NUL included.
    const std::string blob = std::string("a\0b\r\nc", 6);
    write_file(path, blob);
    CHECK(read_file(path) == blob);
}
