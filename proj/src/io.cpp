#include "varkit/io.hpp"

#include "varkit/errors.hpp"
#include "varkit/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace varkit {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& token, const std::string& where) {
    double v = 0.0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last)
        throw IoError(where + ": cannot parse number '" + token + "'");
    return v;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        const std::size_t comma = line.find(',', pos);
        if (comma == std::string::npos) {
            out.push_back(line.substr(pos));
            break;
        }
        out.push_back(line.substr(pos, comma - pos));
        pos = comma + 1;
    }
    return out;
}

std::string strip_cr(std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

/// Lines of a file with their 1-based numbers, comments and blank
/// lines removed.
std::vector<std::pair<int, std::string>> content_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::vector<std::pair<int, std::string>> out;
    std::string line;
    int no = 0;
    while (std::getline(in, line)) {
        ++no;
        line = strip_cr(line);
        if (line.empty() || line[0] == '#') continue;
        out.emplace_back(no, line);
    }
    return out;
}

Date parse_date_cell(const std::string& cell, const std::string& path, int line) {
    try {
        return Date::parse(cell);
    } catch (const ValidationError& e) {
        throw IoError(path + ":" + std::to_string(line) + ": " + e.what());
    }
}

double parse_value_cell(const std::string& cell, const std::string& path, int line) {
    try {
        return parse_double(cell, "value");
    } catch (const IoError& e) {
        throw IoError(path + ":" + std::to_string(line) + ": " + e.what());
    }
}

} // namespace

TimeSeries read_series_csv(const std::string& path, const std::string& id) {
    const auto lines = content_lines(path);
    if (lines.empty()) throw IoError(path + ": no content lines");

    TimeSeries out;
    out.id = id;
    std::size_t start = 0;
    {
        const auto cells = split_csv_line(lines[0].second);
        if (!cells.empty() && cells[0] == "date") start = 1;
    }
    for (std::size_t i = start; i < lines.size(); ++i) {
        const auto& [no, line] = lines[i];
        const auto cells = split_csv_line(line);
        if (cells.size() != 2)
            throw IoError(path + ":" + std::to_string(no) + ": expected 2 fields, got " +
                          std::to_string(cells.size()));
        out.dates.push_back(parse_date_cell(cells[0], path, no));
        if (cells[1].empty())
            out.values.push_back(std::nullopt);
        else
            out.values.push_back(parse_value_cell(cells[1], path, no));
    }
    return out;
}

void write_series_csv(const std::string& path, const TimeSeries& x) {
    std::ostringstream out;
    out << "date,value\n";
    for (std::size_t i = 0; i < x.size(); ++i) {
        out << x.dates[i].to_string() << ',';
        if (x.values[i]) out << format_double(*x.values[i]);
        out << '\n';
    }
    write_file(path, out.str());
}

InstrumentPanel read_panel_csv(const std::string& path) {
    const auto lines = content_lines(path);
    if (lines.empty()) throw IoError(path + ": no content lines");

    const auto header = split_csv_line(lines[0].second);
    if (header.size() < 2 || header[0] != "date")
        throw IoError(path + ":" + std::to_string(lines[0].first) +
                      ": panel header must be date,<instrument ids>");

    InstrumentPanel panel;
    for (std::size_t j = 1; j < header.size(); ++j) {
        try {
            panel.instruments.push_back(Instrument::parse(header[j]));
        } catch (const ValidationError& e) {
            throw IoError(path + ":" + std::to_string(lines[0].first) + ": column " +
                          std::to_string(j + 1) + ": " + e.what());
        }
    }
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto& [no, line] = lines[i];
        const auto cells = split_csv_line(line);
        if (cells.size() != header.size())
            throw IoError(path + ":" + std::to_string(no) + ": expected " +
                          std::to_string(header.size()) + " fields, got " +
                          std::to_string(cells.size()));
        panel.dates.push_back(parse_date_cell(cells[0], path, no));
        std::vector<std::optional<double>> row;
        row.reserve(cells.size() - 1);
        for (std::size_t j = 1; j < cells.size(); ++j) {
            if (cells[j].empty())
                row.push_back(std::nullopt);
            else
                row.push_back(parse_value_cell(cells[j], path, no));
        }
        panel.quotes.push_back(std::move(row));
    }
    return panel;
}

void write_panel_csv(const std::string& path, const InstrumentPanel& panel) {
    std::ostringstream out;
    out << "date";
    for (const auto& ins : panel.instruments) out << ',' << ins.id();
    out << '\n';
    for (std::size_t r = 0; r < panel.rows(); ++r) {
        out << panel.dates[r].to_string();
        for (std::size_t j = 0; j < panel.cols(); ++j) {
            out << ',';
            if (panel.quotes[r][j]) out << format_double(*panel.quotes[r][j]);
        }
        out << '\n';
    }
    write_file(path, out.str());
}

ChangeLog read_changelog_csv(const std::string& path) {
    const auto lines = content_lines(path);
    if (lines.empty()) throw IoError(path + ": no content lines");

    ChangeLog log;
    std::size_t start = 0;
    if (split_csv_line(lines[0].second)[0] == "date") start = 1;
    for (std::size_t i = start; i < lines.size(); ++i) {
        const auto& [no, line] = lines[i];
        const auto cells = split_csv_line(line);
        if (cells.size() != 5)
            throw IoError(path + ":" + std::to_string(no) + ": expected 5 fields, got " +
                          std::to_string(cells.size()));
        ChangeEntry e;
        e.date = parse_date_cell(cells[0], path, no);
        e.id = cells[1];
        try {
            e.action = change_action_from_string(cells[2]);
        } catch (const ValidationError& err) {
            throw IoError(path + ":" + std::to_string(no) + ": " + err.what());
        }
        if (!cells[3].empty()) e.old_value = parse_value_cell(cells[3], path, no);
        e.new_value = parse_value_cell(cells[4], path, no);
        log.entries.push_back(std::move(e));
    }
    return log;
}

void write_changelog_csv(const std::string& path, const ChangeLog& log) {
    std::ostringstream out;
    out << "date,id,action,old_value,new_value\n";
    for (const auto& e : log.entries) {
        out << e.date.to_string() << ',' << e.id << ',' << to_string(e.action) << ',';
        if (e.old_value) out << format_double(*e.old_value);
        out << ',' << format_double(e.new_value) << '\n';
    }
    write_file(path, out.str());
}

void write_detections_csv(const std::string& path, const std::vector<DetectionResult>& dets) {
    std::ostringstream out;
    out << "id,flagged,observed_ratio,threshold,simulated_mean,simulated_sd\n";
    for (const auto& d : dets) {
        out << d.id << ',' << (d.flagged ? 1 : 0) << ',' << format_double(d.observed_ratio)
            << ',' << format_double(d.threshold) << ',' << format_double(d.simulated_mean) << ','
            << format_double(d.simulated_sd) << '\n';
    }
    write_file(path, out.str());
}

void write_track_csv(const std::string& path, const GapTrack& track,
                     const std::string& value_header) {
    std::ostringstream out;
    out << "date," << value_header << '\n';
    for (std::size_t i = 0; i < track.dates.size(); ++i)
        out << track.dates[i].to_string() << ',' << format_double(track.values[i]) << '\n';
    write_file(path, out.str());
}

std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
    const auto lines = content_lines(path);
    std::vector<std::pair<std::string, std::string>> out;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t");
        const auto e = s.find_last_not_of(" \t");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    for (const auto& [no, line] : lines) {
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw IoError(path + ":" + std::to_string(no) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw IoError(path + ":" + std::to_string(no) + ": empty key");
        for (const auto& [k, v] : out)
            if (k == key)
                throw IoError(path + ":" + std::to_string(no) + ": duplicate key '" + key + "'");
        out.emplace_back(key, value);
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw IoError("failed writing '" + path + "'");
}

std::uint64_t hash_file(const std::string& path) {
    const std::string content = read_file(path);
    return fnv1a64_bytes(content.data(), content.size());
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

} // namespace varkit
