#include "rvkit/io.hpp"

#include "rvkit/diagnostics.hpp"
#include "rvkit/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>
#include <unistd.h>

namespace rvkit::io {

namespace {

class LineReader {
public:
    explicit LineReader(const std::filesystem::path& path) : path_(path), in_(path) {
        if (!in_) {
            throw FormatError("cannot open " + path.string());
        }
    }

    bool next(std::string& line) {
        if (!std::getline(in_, line)) {
            return false;
        }
        ++number_;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        return true;
    }

    [[nodiscard]] std::size_t number() const noexcept { return number_; }
    [[nodiscard]] std::string where() const {
        return path_.string() + ":" + std::to_string(number_);
    }

private:
    std::filesystem::path path_;
    std::ifstream in_;
    std::size_t number_ = 0;
};

std::string join(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) {
            out += ',';
        }
        const std::string& f = fields[i];
        if (f.find_first_of(",\"\n") != std::string::npos) {
            out += '"';
            for (char c : f) {
                out += c == '"' ? std::string("\"\"") : std::string(1, c);
            }
            out += '"';
        } else {
            out += f;
        }
    }
    return out;
}

std::string strip_dot(std::string_view s) {
    return std::string(!s.empty() && s.front() == '.' ? s.substr(1) : s);
}

std::ptrdiff_t column_index(const std::vector<std::string>& header,
                            std::initializer_list<std::string_view> names) {
    for (std::string_view name : names) {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it != header.end()) {
            return it - header.begin();
        }
    }
    return -1;
}

bool blank(const std::string& line) {
    return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); });
}

}  // namespace

std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> fields(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                fields.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                fields.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.emplace_back();
        } else {
            fields.back() += c;
        }
    }
    if (quoted) {
        throw FormatError("unterminated quote in CSV record");
    }
    return fields;
}

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::string format_shortest(double value) {
    char buf[40];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return ec == std::errc{} ? std::string(buf, ptr) : format_double(value);
}

double parse_double(std::string_view text, std::string_view what) {
    while (!text.empty() && text.front() == ' ') {
        text.remove_prefix(1);
    }
    while (!text.empty() && text.back() == ' ') {
        text.remove_suffix(1);
    }
    if (!text.empty() && text.front() == '+') {
        text.remove_prefix(1);
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() ||
        !std::isfinite(value)) {
        throw FormatError("invalid number '" + std::string(text) + "' in " + std::string(what));
    }
    return value;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw FormatError("cannot write " + tmp.string());
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            std::error_code ignored;
            std::filesystem::remove(tmp, ignored);
            throw FormatError("write to " + tmp.string() + " failed");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::error_code ignored;
        std::filesystem::remove(tmp, ignored);
        throw FormatError("cannot move output into place at " + path.string() + ": " +
                          ec.message());
    }
}

OmiData parse_omi_csv(const std::filesystem::path& path, const ZeroRvPolicy& policy) {
    LineReader reader(path);
    std::string line;
    OmiData data;
    if (!reader.next(line) || blank(line)) {
        diag::warn(path.string() + " is empty; no series read");
        return data;
    }
    const std::vector<std::string> header = split_csv_line(line);
    const auto require = [&](std::initializer_list<std::string_view> names) {
        const std::ptrdiff_t idx = column_index(header, names);
        if (idx < 0) {
            throw FormatError(path.string() + ": missing column '" + std::string(*names.begin()) +
                              "'");
        }
        return static_cast<std::size_t>(idx);
    };
    const std::size_t c_symbol = require({"Symbol", "symbol"});
    const std::size_t c_rv = require({"rv5_ss"});
    const std::size_t c_bv = require({"bv"});
    const std::size_t c_close = require({"close_price"});
    require({"open_price"});
    std::size_t c_date = 0;
    const std::ptrdiff_t named = column_index(header, {"date", "Date", "Unnamed: 0"});
    if (named >= 0) {
        c_date = static_cast<std::size_t>(named);
    } else if (header.front().empty()) {
        c_date = 0;
    } else {
        throw FormatError(path.string() + ": missing column 'date'");
    }
    const std::size_t width = std::max({c_symbol, c_rv, c_bv, c_close, c_date}) + 1;

    std::map<std::string, std::vector<RvObservation>> rows;
    while (reader.next(line)) {
        if (blank(line)) {
            continue;
        }
        try {
            const std::vector<std::string> f = split_csv_line(line);
            if (f.size() < width) {
                throw FormatError("expected at least " + std::to_string(width) + " fields");
            }
            RvObservation obs;
            obs.date = TradingDay::parse(f[c_date]);
            obs.rv = parse_double(f[c_rv], "rv5_ss");
            obs.close = parse_double(f[c_close], "close_price");
            if (!(obs.close > 0.0)) {
                throw FormatError("close_price must be positive");
            }
            if (!f[c_bv].empty()) {
                obs.bpv = parse_double(f[c_bv], "bv");
                if (*obs.bpv < 0.0) {
                    throw FormatError("bv must be nonnegative");
                }
            }
            if (f[c_symbol].empty()) {
                throw FormatError("empty symbol");
            }
            rows[f[c_symbol]].push_back(obs);
        } catch (const Error& e) {
            throw FormatError(reader.where() + ": " + e.what());
        }
    }

    for (auto& [symbol, obs] : rows) {
        std::stable_sort(obs.begin(), obs.end(), [](const RvObservation& a, const RvObservation& b) {
            return a.date < b.date;
        });
        for (std::size_t i = 1; i < obs.size(); ++i) {
            if (obs[i].date == obs[i - 1].date) {
                throw FormatError(path.string() + ": duplicate date " + obs[i].date.iso() +
                                  " for " + symbol);
            }
        }
        data.zero_rv_rows += apply_zero_policy(obs, policy);
        data.series.emplace(symbol, RvSeries(symbol, std::move(obs)));
    }
    if (data.series.empty()) {
        diag::warn(path.string() + " has no data rows");
    }
    return data;
}

std::map<std::string, RvSeries> read_canonical_csv(const std::filesystem::path& path) {
    LineReader reader(path);
    std::string line;
    if (!reader.next(line) || line != kCanonicalHeader) {
        throw FormatError(path.string() + ": header must be exactly '" +
                          std::string(kCanonicalHeader) + "'");
    }
    std::map<std::string, std::vector<RvObservation>> rows;
    while (reader.next(line)) {
        if (blank(line)) {
            continue;
        }
        try {
            const std::vector<std::string> f = split_csv_line(line);
            if (f.size() != 5) {
                throw FormatError("expected 5 fields, found " + std::to_string(f.size()));
            }
            if (f[0].empty()) {
                throw FormatError("empty symbol");
            }
            RvObservation obs;
            obs.date = TradingDay::parse(f[1]);
            if (f[1].size() != 10) {
                throw FormatError("date must be YYYY-MM-DD");
            }
            obs.close = parse_double(f[2], "close");
            obs.rv = parse_double(f[3], "rv");
            if (!f[4].empty()) {
                obs.bpv = parse_double(f[4], "bpv");
            }
            std::vector<RvObservation>& dest = rows[f[0]];
            if (!dest.empty() && !(dest.back().date < obs.date)) {
                throw FormatError("dates for " + f[0] + " must be strictly increasing");
            }
            dest.push_back(obs);
        } catch (const Error& e) {
            throw FormatError(reader.where() + ": " + e.what());
        }
    }
    std::map<std::string, RvSeries> out;
    for (auto& [symbol, obs] : rows) {
        try {
            out.emplace(symbol, RvSeries(symbol, std::move(obs)));
        } catch (const DomainError& e) {
            throw FormatError(path.string() + ": " + e.what());
        }
    }
    return out;
}

void write_canonical_csv(const std::map<std::string, RvSeries>& series,
                         const std::filesystem::path& path) {
    std::string out(kCanonicalHeader);
    out += '\n';
    for (const auto& [symbol, s] : series) {
        if (s.log_space()) {
            throw DomainError("canonical files hold linear-space series");
        }
        for (const RvObservation& obs : s.observations()) {
            out += join({symbol, obs.date.iso(), format_double(obs.close), format_double(obs.rv),
                         obs.bpv ? format_double(*obs.bpv) : std::string{}});
            out += '\n';
        }
    }
    write_file_atomic(path, out);
}

const RvSeries& find_series(const std::map<std::string, RvSeries>& series,
                            std::string_view symbol) {
    if (const auto it = series.find(std::string(symbol)); it != series.end()) {
        return it->second;
    }
    for (const auto& [name, s] : series) {
        if (strip_dot(name) == strip_dot(symbol)) {
            return s;
        }
    }
    throw DomainError("symbol '" + std::string(symbol) + "' not found");
}

std::vector<eval::ForecastSet> read_forecasts(const std::filesystem::path& path) {
    LineReader reader(path);
    std::string line;
    if (!reader.next(line) || line != kForecastHeader) {
        throw FormatError(path.string() + ": header must be exactly '" +
                          std::string(kForecastHeader) + "'");
    }
    std::vector<eval::ForecastSet> sets;
    std::map<std::pair<std::string, std::string>, std::size_t> index;
    while (reader.next(line)) {
        if (blank(line)) {
            continue;
        }
        try {
            const std::vector<std::string> f = split_csv_line(line);
            if (f.size() != 4) {
                throw FormatError("expected 4 fields, found " + std::to_string(f.size()));
            }
            if (f[0].empty() || f[1].empty()) {
                throw FormatError("empty model or symbol");
            }
            const TradingDay day = TradingDay::parse(f[2]);
            const double value = parse_double(f[3], "forecast");
            if (!(value > 0.0)) {
                throw FormatError("forecast must be positive");
            }
            const auto key = std::make_pair(f[0], f[1]);
            auto it = index.find(key);
            if (it == index.end()) {
                it = index.emplace(key, sets.size()).first;
                sets.emplace_back(f[0], f[1]);
            }
            eval::ForecastSet& set = sets[it->second];
            if (set.at(day)) {
                throw FormatError("duplicate row for (" + f[0] + ", " + f[1] + ", " + day.iso() +
                                  ")");
            }
            set.insert(day, value);
        } catch (const Error& e) {
            throw FormatError(reader.where() + ": " + e.what());
        }
    }
    return sets;
}

std::string format_forecasts(std::span<const eval::ForecastSet> sets) {
    std::set<std::pair<std::string, std::string>> seen;
    std::string out(kForecastHeader);
    out += '\n';
    for (const eval::ForecastSet& set : sets) {
        if (!seen.emplace(set.model_id(), set.symbol()).second) {
            throw DomainError("two forecast sets share model '" + set.model_id() +
                              "' and symbol '" + set.symbol() + "'");
        }
        for (const auto& [day, value] : set.entries()) {
            out += join({set.model_id(), set.symbol(), day.iso(), format_double(value)});
            out += '\n';
        }
    }
    return out;
}

void write_forecasts(std::span<const eval::ForecastSet> sets, const std::filesystem::path& path) {
    write_file_atomic(path, format_forecasts(sets));
}

std::string Table::to_csv() const {
    std::string out = join(header);
    out += '\n';
    for (const auto& row : rows) {
        out += join(row);
        out += '\n';
    }
    return out;
}

}  // namespace rvkit::io
