#include <doctest.h>

#include "csv.hpp"
#include "errors.hpp"

using namespace scc;

TEST_CASE("ISO date round trip and ordering") {
  const Date d = Date::parse("2020-03-13");
  CHECK(d.iso() == "2020-03-13");
  CHECK(Date::parse("2020-03-14").serial == d.serial + 1);
  CHECK(Date::parse("2020-02-29").iso() == "2020-02-29");  // leap year
  CHECK_THROWS_AS(Date::parse("2020-13-01"), Error);
  CHECK_THROWS_AS(Date::parse("garbage"), Error);
}

TEST_CASE("March 13 to June 19 2020 spans 99 days") {
  CHECK(Date::parse("2020-06-19").serial - Date::parse("2020-03-13").serial + 1 == 99);
}

TEST_CASE("csv parse handles comments and validates width") {
  auto t = csv::parse("# config {}\na,b\n1,2\n3,4\n", "test");
  CHECK(t.header == std::vector<std::string>{"a", "b"});
  CHECK(t.rows.size() == 2);
  CHECK(t.comments.size() == 1);
  CHECK(t.column("b") == 1);
  CHECK(t.column("zz") == -1);
  CHECK_THROWS_AS(csv::parse("a,b\n1\n", "test"), Error);
  CHECK_THROWS_AS(csv::parse("", "test"), Error);
}

TEST_CASE("format_double round trips") {
  for (double v : {0.0, 1.0, -1.5, 0.1, 6e-5, 1.0 / 3.0, 1e300}) {
    CHECK(std::stod(csv::format_double(v)) == v);
  }
}
