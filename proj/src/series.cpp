#include "volclust/series.hpp"

#include "volclust/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>

namespace volclust {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r' || s.front() == '"'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '"'))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view line, char delim) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(delim, start);
        if (pos == std::string_view::npos) {
            out.push_back(trim(line.substr(start)));
            return out;
        }
        out.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
}

bool iequals(std::string_view a, std::string_view b) {
    return a.size() == b.size() &&
           std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               return std::tolower(static_cast<unsigned char>(x)) ==
                      std::tolower(static_cast<unsigned char>(y));
           });
}

std::optional<double> parse_double(std::string_view s) {
    double v = 0.0;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || ptr != end) return std::nullopt;
    return v;
}

struct Row {
    std::size_t line;
    Date date;
    double value;
};

// Shared reader for price and return files.
std::vector<Row> read_rows(std::istream& in, const ColumnMapping& mapping) {
    std::string header;
    std::size_t line_no = 0;
    while (std::getline(in, header)) {
        ++line_no;
        if (!trim(header).empty()) break;
    }
    if (trim(header).empty()) throw InsufficientDataError("no observations: input is empty");

    const char delim = header.find('\t') != std::string::npos ? '\t' : ',';
    const auto cols = split(header, delim);
    auto find_col = [&](const std::string& name) -> std::size_t {
        for (std::size_t i = 0; i < cols.size(); ++i)
            if (iequals(cols[i], name)) return i;
        std::string avail;
        for (auto c : cols) avail += (avail.empty() ? "" : ", ") + std::string(c);
        throw ParseError(line_no, "column '" + name + "' not found (have: " + avail + ")");
    };
    const std::size_t date_idx = find_col(mapping.date_col);
    const std::size_t value_idx = find_col(mapping.value_col);

    std::vector<Row> rows;
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split(line, delim);
        if (fields.size() <= std::max(date_idx, value_idx))
            throw ParseError(line_no, "expected at least " +
                                          std::to_string(std::max(date_idx, value_idx) + 1) +
                                          " fields, got " + std::to_string(fields.size()));
        Date d;
        try {
            d = parse_date(fields[date_idx]);
        } catch (const DomainError& e) {
            throw ParseError(line_no, e.what());
        }
        const auto v = parse_double(fields[value_idx]);
        if (!v || !std::isfinite(*v))
            throw ParseError(line_no, "value '" + std::string(fields[value_idx]) + "' is not a finite number");
        rows.push_back({line_no, d, *v});
    }
    if (rows.empty()) throw InsufficientDataError("no observations: header only");

    std::stable_sort(rows.begin(), rows.end(),
                     [](const Row& a, const Row& b) { return a.date < b.date; });
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].date == rows[i - 1].date)
            throw DuplicateDateError("duplicate date " + format_date(rows[i].date) + " (lines " +
                                     std::to_string(rows[i - 1].line) + " and " +
                                     std::to_string(rows[i].line) + ")");
    return rows;
}

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    return in;
}

}  // namespace

Date parse_date(std::string_view text) {
    text = trim(text);
    auto bad = [&] { return DomainError("'" + std::string(text) + "' is not an ISO-8601 date (YYYY-MM-DD)"); };
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') throw bad();
    int y = 0;
    unsigned m = 0, d = 0;
    auto num = [&](std::size_t pos, std::size_t len, auto& out) {
        auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + pos + len, out);
        if (ec != std::errc{} || ptr != text.data() + pos + len) throw bad();
    };
    num(0, 4, y);
    num(5, 2, m);
    num(8, 2, d);
    const Date date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
    if (!date.ok()) throw bad();
    return date;
}

std::string format_date(Date d) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                  static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
    return buf;
}

std::vector<PricePoint> parse_prices(std::istream& in, const ColumnMapping& mapping) {
    const auto rows = read_rows(in, mapping);
    std::vector<PricePoint> out;
    out.reserve(rows.size());
    for (const auto& r : rows) {
        if (!(r.value > 0.0))
            throw DomainError("non-positive price " + std::to_string(r.value) + " on " +
                              format_date(r.date));
        out.push_back({r.date, r.value});
    }
    return out;
}

std::vector<PricePoint> load_prices(const std::string& path, const ColumnMapping& mapping) {
    auto in = open_or_throw(path);
    return parse_prices(in, mapping);
}

ReturnSeries to_log_returns(std::span<const PricePoint> prices, std::string id, std::string source) {
    if (prices.size() < 2)
        throw InsufficientDataError("need at least 2 prices to form a return, got " +
                                    std::to_string(prices.size()));
    ReturnSeries s{std::move(id), {}, {}, std::move(source)};
    s.dates.reserve(prices.size() - 1);
    s.returns.reserve(prices.size() - 1);
    for (std::size_t t = 1; t < prices.size(); ++t) {
        if (!(prices[t].close > 0.0) || !(prices[t - 1].close > 0.0))
            throw DomainError("non-positive price on " + format_date(prices[t].date));
        s.dates.push_back(prices[t].date);
        s.returns.push_back(std::log(prices[t].close / prices[t - 1].close));
    }
    return s;
}

ReturnSeries parse_returns(std::istream& in, const ColumnMapping& mapping, std::string id,
                           std::string source) {
    const auto rows = read_rows(in, mapping);
    ReturnSeries s{std::move(id), {}, {}, std::move(source)};
    for (const auto& r : rows) {
        s.dates.push_back(r.date);
        s.returns.push_back(r.value);
    }
    return s;
}

ReturnSeries load_returns(const std::string& path, const ColumnMapping& mapping) {
    auto in = open_or_throw(path);
    return parse_returns(in, mapping, path, path);
}

void write_returns(std::ostream& out, const ReturnSeries& series) {
    out << "date,return\n";
    char buf[40];
    for (std::size_t i = 0; i < series.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", series.returns[i]);
        out << format_date(series.dates[i]) << ',' << buf << '\n';
    }
}

}  // namespace volclust
