#include <doctest.h>

#include <cmath>
#include <limits>
#include <string>

#include "cogra/csv.hpp"
#include "cogra/errors.hpp"

using namespace cogra;

TEST_CASE("quoting") {
    CHECK(csv_escape("plain") == "plain");
    CHECK(csv_escape("a,b") == "\"a,b\"");
    CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(csv_escape("two\nlines") == "\"two\nlines\"");
    CHECK(csv_escape("") == "");
}

TEST_CASE("number formatting") {
    CHECK(format_number(0.0) == "0");
    CHECK(format_number(-0.0) == "0");
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(1e-300) == "1e-300");
    CHECK(format_number(std::numeric_limits<double>::quiet_NaN()) == "nan");
    CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
    for (double x : {1.0 / 3.0, 2.176012345678901, 6.02214076e23, -1.25e-7}) {
        CHECK(std::stod(format_number(x)) == x);
    }
}

TEST_CASE("table round trip") {
    CsvTable t({"name", "value"});
    t.add_row({"x,y", format_number(0.5)});
    t.add_row({"q\"", "1"});
    CHECK(t.rows() == 2);
    const std::string s = t.str();
    CHECK(s == "name,value\r\n\"x,y\",0.5\r\n\"q\"\"\",1\r\n");
    const auto rows = parse_csv(s);
    REQUIRE(rows.size() == 3);
    CHECK(rows[1][0] == "x,y");
    CHECK(rows[2][0] == "q\"");
    CHECK_THROWS_AS(t.add_row({"only one"}), InvalidArgument);
}
