#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "field_file.hpp"

using namespace hjkit::tools;

namespace {

FieldFile parse(const std::string& text) {
  std::istringstream in(text);
  return parse_field(in);
}

}  // namespace

TEST_CASE("2D field round trip is byte-identical") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> d(-1e3, 1e3);
  FieldFile f{7, 5, 0, -1.5, 2.25, 0.0, 1.0 / 3.0, {}};
  for (std::size_t q = 0; q < f.expected_size(); ++q) f.values.push_back(d(rng));
  f.values[3] = std::numeric_limits<double>::infinity();
  f.values[4] = 5e-324;

  std::ostringstream first;
  write_field(first, f);
  const FieldFile back = parse(first.str());
  CHECK(back.nx == 7);
  CHECK(back.ny == 5);
  CHECK(back.ntheta == 0);
  CHECK(back.ymax == f.ymax);
  for (std::size_t q = 0; q < f.values.size(); ++q) CHECK(back.values[q] == f.values[q]);
  std::ostringstream second;
  write_field(second, back);
  CHECK(second.str() == first.str());
}

TEST_CASE("phase field header") {
  const FieldFile f = parse("2 2 3 0 1 0 1\n1 2\n3 4\n5 6\n7 8\n9 10\n11 12\n");
  CHECK(f.ntheta == 3);
  CHECK(f.expected_size() == 12);
  CHECK(f.values.back() == 12);
}

TEST_CASE("fixtures") {
  const FieldFile corridor = read_field(HJKIT_FIXTURES "/corridor_costs.fld");
  CHECK(corridor.values.size() == 16);
  CHECK(corridor.values[4] == 10);
  const FieldFile infinite = read_field(HJKIT_FIXTURES "/infinite_speed.fld");
  CHECK(std::isinf(infinite.values[4]));
  CHECK_THROWS_AS(read_field(HJKIT_FIXTURES "/bad_count.fld"), FieldFormatError);
  CHECK_THROWS_AS(read_field(HJKIT_FIXTURES "/missing.fld"), std::runtime_error);
}

TEST_CASE("malformed input") {
  CHECK_THROWS_AS(parse(""), FieldFormatError);
  CHECK_THROWS_AS(parse("2 2 0 1 0\n1 2 3 4\n"), FieldFormatError);
  CHECK_THROWS_AS(parse("2 x 0 1 0 1\n1 2 3 4\n"), FieldFormatError);
  CHECK_THROWS_AS(parse("2 2 0 1 1 1\n1 2 3 4\n"), FieldFormatError);
  CHECK_THROWS_AS(parse("2 2 0 1 0 1\n1 2 three 4\n"), FieldFormatError);
  CHECK_THROWS_AS(parse("2 2 0 1 0 1\n1 2 3 4 5\n"), FieldFormatError);
  CHECK_THROWS_AS(parse("-2 2 0 1 0 1\n1 2\n"), FieldFormatError);
}

TEST_CASE("format_double") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_double(2.0) == "2");
}
