#pragma once

#include <chrono>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace volclust {

using Date = std::chrono::year_month_day;

/// Parses a strict ISO-8601 calendar date (YYYY-MM-DD).
[[nodiscard]] Date parse_date(std::string_view text);
[[nodiscard]] std::string format_date(Date d);

struct PricePoint {
    Date date;
    double close;  // index level, > 0
};

/// Log-returns with the date of the later observation of each pair.
struct ReturnSeries {
    std::string id;
    std::vector<Date> dates;
    std::vector<double> returns;
    std::string source;

    [[nodiscard]] std::size_t size() const noexcept { return returns.size(); }
};

/// Which columns of a delimited file carry the date and the value.
struct ColumnMapping {
    std::string date_col = "date";
    std::string value_col = "close";
};

/// Reads a comma- or tab-delimited file with a header row. The delimiter is
/// detected from the header line. Output is sorted by date; duplicate dates
/// and non-positive prices are rejected.
[[nodiscard]] std::vector<PricePoint> load_prices(const std::string& path,
                                                  const ColumnMapping& mapping);
[[nodiscard]] std::vector<PricePoint> parse_prices(std::istream& in,
                                                   const ColumnMapping& mapping);

/// returns[t] = ln(close[t+1] / close[t]).
[[nodiscard]] ReturnSeries to_log_returns(std::span<const PricePoint> prices,
                                          std::string id = {},
                                          std::string source = {});

/// Loads a file that already holds returns (`--returns` mode). Values may be
/// any finite real; dates must still be unique.
[[nodiscard]] ReturnSeries load_returns(const std::string& path, const ColumnMapping& mapping);
[[nodiscard]] ReturnSeries parse_returns(std::istream& in, const ColumnMapping& mapping,
                                         std::string id = {}, std::string source = {});

/// Writes `date,return` rows at round-trip precision; readable by parse_returns.
void write_returns(std::ostream& out, const ReturnSeries& series);

}  // namespace volclust
