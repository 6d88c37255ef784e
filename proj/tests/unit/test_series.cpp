#include "volclust/errors.hpp"
#include "volclust/series.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace volclust;
using namespace std::chrono;

namespace {

std::vector<PricePoint> parse(const std::string& text, ColumnMapping m = {}) {
    std::istringstream in(text);
    return parse_prices(in, m);
}

}  // namespace

TEST(Series, ParsesTwoRowsInDateOrder) {
    auto p = parse("date,close\n2002-06-03,1000.0\n2002-06-04,1010.0\n");
    ASSERT_EQ(p.size(), 2u);
    EXPECT_EQ(p[0].date, year_month_day{2002y / June / 3});
    EXPECT_DOUBLE_EQ(p[0].close, 1000.0);
    EXPECT_EQ(p[1].date, year_month_day{2002y / June / 4});
    EXPECT_DOUBLE_EQ(p[1].close, 1010.0);
}

TEST(Series, SortsRowsThatAreOutOfOrder) {
    auto p = parse("date,close\n2002-06-05,3\n2002-06-03,1\n2002-06-04,2\n");
    ASSERT_EQ(p.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(p[i].close, static_cast<double>(i + 1));
}

TEST(Series, ZeroPriceIsADomainErrorNamingTheDate) {
    try {
        (void)parse("date,close\n2002-06-03,1000\n2002-06-04,0\n");
        FAIL() << "expected DomainError";
    } catch (const DomainError& e) {
        EXPECT_NE(std::string(e.what()).find("2002-06-04"), std::string::npos);
    }
}

TEST(Series, MalformedRowNamesItsLine) {
    try {
        (void)parse("date,close\n2002-06-03,1000\n2002-06-04,abc\n");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
    }
    EXPECT_THROW((void)parse("date,close\n2002-13-03,1000\n"), ParseError);
    EXPECT_THROW((void)parse("date,close\n2002-06-03\n"), ParseError);
}

TEST(Series, DuplicateDateIsRejected) {
    EXPECT_THROW((void)parse("date,close\n2002-06-03,1\n2002-06-03,2\n"), DuplicateDateError);
}

TEST(Series, EmptyAndHeaderOnlyInputsHaveNoObservations) {
    EXPECT_THROW((void)parse(""), InsufficientDataError);
    EXPECT_THROW((void)parse("date,close\n"), InsufficientDataError);
}

TEST(Series, TabDelimitedAndCustomColumns) {
    ColumnMapping m{"Day", "Adj Close"};
    auto p = parse("Open\tDay\tAdj Close\n1\t2002-06-03\t5.5\n", m);
    ASSERT_EQ(p.size(), 1u);
    EXPECT_DOUBLE_EQ(p[0].close, 5.5);
    EXPECT_THROW((void)parse("date,close\n2002-06-03,1\n", ColumnMapping{"date", "price"}), ParseError);
}

TEST(Series, LogReturnExamples) {
    const Date d0 = 2002y / June / 3, d1 = 2002y / June / 4, d2 = 2002y / June / 5;
    std::vector<PricePoint> flat{{d0, 100.0}, {d1, 100.0}};
    EXPECT_EQ(to_log_returns(flat).returns.at(0), 0.0);

    std::vector<PricePoint> e{{d0, 100.0}, {d1, 100.0 * std::exp(1.0)}};
    EXPECT_NEAR(to_log_returns(e).returns.at(0), 1.0, 1e-15);

    std::vector<PricePoint> three{{d0, 100.0}, {d1, 110.0}, {d2, 99.0}};
    auto r = to_log_returns(three, "x");
    ASSERT_EQ(r.size(), 2u);
    EXPECT_NEAR(r.returns[0], 0.0953101798043249, 1e-15);
    EXPECT_NEAR(r.returns[1], -0.1053605156578263, 1e-15);
    EXPECT_EQ(r.dates[0], d1);
    EXPECT_EQ(r.dates[1], d2);
    EXPECT_EQ(r.id, "x");
}

TEST(Series, FewerThanTwoPricesIsInsufficient) {
    std::vector<PricePoint> one{{2002y / June / 3, 100.0}};
    EXPECT_THROW((void)to_log_returns(one), InsufficientDataError);
}

TEST(Series, ReturnsAreScaleInvariantAndTelescope) {
    std::mt19937_64 rng(11);
    std::lognormal_distribution<double> step(0.0, 0.02);
    std::vector<PricePoint> p, scaled;
    sys_days day = 2000y / January / 1;
    double level = 1000.0;
    for (int i = 0; i < 300; ++i, day += days{1}) {
        level *= step(rng);
        p.push_back({day, level});
        scaled.push_back({day, 37.5 * level});
    }
    auto a = to_log_returns(p);
    auto b = to_log_returns(scaled);
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_NEAR(a.returns[i], b.returns[i], 1e-12);
        sum += a.returns[i];
    }
    EXPECT_NEAR(sum, std::log(p.back().close / p.front().close), 1e-10);
}

TEST(Series, WriteThenParseRoundTripsExactly) {
    ReturnSeries s;
    sys_days day = 2000y / January / 1;
    std::mt19937_64 rng(3);
    std::normal_distribution<double> z;
    for (int i = 0; i < 100; ++i, day += days{1}) {
        s.dates.emplace_back(day);
        s.returns.push_back(z(rng) * 1e-3);
    }
    std::ostringstream out;
    write_returns(out, s);
    std::istringstream in(out.str());
    auto back = parse_returns(in, ColumnMapping{"date", "return"});
    ASSERT_EQ(back.size(), s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        EXPECT_EQ(back.returns[i], s.returns[i]);
        EXPECT_EQ(back.dates[i], s.dates[i]);
    }
}

TEST(Series, DateFormatting) {
    EXPECT_EQ(format_date(parse_date("2007-01-31")), "2007-01-31");
    EXPECT_THROW((void)parse_date("2007-02-30"), Error);
    EXPECT_THROW((void)parse_date("07-01-31"), Error);
}
