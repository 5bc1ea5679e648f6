#include <doctest.h>

#include "emsi/calendar.hpp"
#include "emsi/csv.hpp"
#include "emsi/error.hpp"
#include "emsi/util.hpp"

using namespace emsi;

TEST_CASE("month arithmetic and parsing") {
  const YearMonth m{1999, 11};
  CHECK(m.plus(1) == YearMonth{1999, 12});
  CHECK(m.plus(2) == YearMonth{2000, 1});
  CHECK(m.plus(-11) == YearMonth{1998, 12});
  CHECK(YearMonth::parse("2004-02").str() == "2004-02");
  CHECK_THROWS_AS(YearMonth::parse("2004-13"), DataError);
  CHECK_THROWS_AS(YearMonth::parse("junk"), DataError);
}

TEST_CASE("days in month and leap years") {
  CHECK(days_in_month(2000, 2) == 29);
  CHECK(days_in_month(1900, 2) == 28);
  CHECK(days_in_month(1996, 2) == 29);
  CHECK(days_in_month(2017, 4) == 30);
  CHECK(YearMonth{2016, 2}.days() == 29);
}

TEST_CASE("date validation and ordering") {
  CHECK(Date::make(2017, 2, 29) == std::nullopt);
  CHECK(Date::make(2016, 2, 29).has_value());
  CHECK(Date::parse("2017-04-10")->str() == "2017-04-10");
  CHECK(Date{2000, 1, 2} < Date{2000, 1, 3});
  CHECK(Date{1999, 12, 31}.serial() + 1 == Date{2000, 1, 1}.serial());
}

TEST_CASE("quarter months") {
  const Quarter q{2001, 3};
  CHECK(q.first_month() == YearMonth{2001, 7});
  CHECK(q.mid_month() == YearMonth{2001, 8});
  CHECK(q.last_month() == YearMonth{2001, 9});
  CHECK(Quarter::parse("2001-Q3") == q);
}

TEST_CASE("csv round trip with quoting") {
  CsvWriter w;
  w.meta("tool", "x 1.0");
  w.row({"id", "text"});
  w.row({"a", "plain"});
  w.row({"b", "comma, inside"});
  w.row({"c", "quote \" inside"});
  w.row({"d", "line\nbreak"});

  const CsvTable table = parse_csv(w.str());
  REQUIRE(table.header.size() == 2);
  REQUIRE(table.rows.size() == 4);
  CHECK(table.meta.size() == 1);
  CHECK(table.rows[1][1] == "comma, inside");
  CHECK(table.rows[2][1] == "quote \" inside");
  CHECK(table.rows[3][1] == "line\nbreak");
}

TEST_CASE("csv errors") {
  CHECK_THROWS_AS(parse_csv("a,b\n\"unterminated"), DataError);
  CHECK_THROWS_AS(parse_csv("a,b\n1,2,3\n"), DataError);  // ragged row
}

TEST_CASE("deterministic double formatting") {
  CHECK(fmt_double(0.5) == "0.5");
  CHECK(fmt_double(-0.0) == "0");
  CHECK(fmt_double(1.0 / 3.0) == "0.333333333333");
}
