#include "ohr/csv.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include "ohr/errors.hpp"

namespace ohr {

namespace {

std::string trim(std::string s) {
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::optional<double> parse_number(const std::string& field) {
    const std::string s = trim(field);
    if (s.empty()) return std::nullopt;
    const std::string l = lower(s);
    if (l == "null" || l == "na" || l == "n/a" || l == "nan" || l == "." || l == "-") return std::nullopt;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

std::optional<Date> parse_date(const std::string& field, const std::string& format) {
    const std::string s = trim(field);
    if (s.empty()) return std::nullopt;
    int y = 0;
    unsigned m = 0, d = 0;
    if (format == "%Y-%m-%d") {
        // ISO-8601 date, optionally followed by a time part.
        if (s.size() < 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
        if (s.size() > 10 && s[10] != 'T' && s[10] != ' ') return std::nullopt;
        const auto num = [&](std::size_t pos, std::size_t len, auto& out) {
            const auto [ptr, ec] = std::from_chars(s.data() + pos, s.data() + pos + len, out);
            return ec == std::errc() && ptr == s.data() + pos + len;
        };
        if (!num(0, 4, y) || !num(5, 2, m) || !num(8, 2, d)) return std::nullopt;
    } else {
        std::tm tm{};
        std::istringstream iss(s);
        iss >> std::get_time(&tm, format.c_str());
        if (iss.fail()) return std::nullopt;
        y = tm.tm_year + 1900;
        m = static_cast<unsigned>(tm.tm_mon + 1);
        d = static_cast<unsigned>(tm.tm_mday);
    }
    const Date date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
    if (!date.ok()) return std::nullopt;
    return date;
}

}  // namespace

std::vector<std::string> split_csv_line(const std::string& line, char delimiter) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (ch == '"') {
                quoted = false;
            } else {
                cur += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == delimiter) {
            out.push_back(std::move(cur));
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(std::move(cur));
    return out;
}

IngestResult parse_csv(std::istream& in, const CsvOptions& options) {
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorKind::InvalidInput, "cli", "CSV input is empty");
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);

    std::vector<std::string> header = split_csv_line(line, options.delimiter);
    for (auto& h : header) h = trim(h);
    const auto column = [&](const std::string& name) {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) throw Error(ErrorKind::Config, "cli", "missing column '" + name + "'");
        return static_cast<std::size_t>(it - header.begin());
    };
    const std::size_t date_col = column(options.date_column);
    const std::size_t spot_col = column(options.spot_column);
    const std::size_t fut_col = column(options.futures_column);
    const std::size_t needed = std::max({date_col, spot_col, fut_col}) + 1;

    std::vector<Date> dates;
    std::vector<double> spot, futures;
    std::size_t total = 0, dropped = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        ++total;
        const std::vector<std::string> fields = split_csv_line(line, options.delimiter);
        if (fields.size() < needed) {
            ++dropped;
            continue;
        }
        const auto date = parse_date(fields[date_col], options.date_format);
        const auto s = parse_number(fields[spot_col]);
        const auto f = parse_number(fields[fut_col]);
        if (!date || !s || !f) {
            ++dropped;
            continue;
        }
        dates.push_back(*date);
        spot.push_back(*s);
        futures.push_back(*f);
    }
    return {PriceSeries(std::move(dates), std::move(spot), std::move(futures)), total, dropped};
}

IngestResult ingest_csv(const std::filesystem::path& path, const CsvOptions& options) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Config, "cli", "cannot open input file " + path.string());
    return parse_csv(in, options);
}

std::vector<std::vector<double>> read_numeric_columns(std::istream& in, const std::vector<std::string>& names,
                                                      char delimiter) {
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorKind::InvalidInput, "cli", "CSV input is empty");
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    std::vector<std::string> header = split_csv_line(line, delimiter);
    for (auto& h : header) h = trim(h);
    std::vector<std::size_t> cols;
    for (const auto& name : names) {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) throw Error(ErrorKind::Config, "cli", "missing column '" + name + "'");
        cols.push_back(static_cast<std::size_t>(it - header.begin()));
    }
    std::vector<std::vector<double>> out(names.size());
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const std::vector<std::string> fields = split_csv_line(line, delimiter);
        for (std::size_t k = 0; k < cols.size(); ++k) {
            const auto v = cols[k] < fields.size() ? parse_number(fields[cols[k]]) : std::nullopt;
            if (!v)
                throw Error(ErrorKind::InvalidInput, "cli",
                            "bad value in column '" + names[k] + "' on line " + std::to_string(line_no));
            out[k].push_back(*v);
        }
    }
    return out;
}

ComponentSeries parse_components_csv(std::istream& in, char delimiter) {
    auto cols = read_numeric_columns(in, {"ds_pos", "ds_neg", "df_pos", "df_neg"}, delimiter);
    ComponentSeries c{std::move(cols[0]), std::move(cols[1]), std::move(cols[2]), std::move(cols[3])};
    c.validate();
    return c;
}

ComponentSeries ingest_components_csv(const std::filesystem::path& path, char delimiter) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Config, "cli", "cannot open input file " + path.string());
    return parse_components_csv(in, delimiter);
}

}  // namespace ohr
