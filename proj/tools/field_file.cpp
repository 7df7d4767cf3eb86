#include "field_file.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace hjkit::tools {

namespace {

double parse_double(const std::string& token) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size())
    throw FieldFormatError("bad number '" + token + "'");
  return v;
}

}  // namespace

std::size_t FieldFile::expected_size() const {
  return static_cast<std::size_t>(nx) * ny * (ntheta > 0 ? ntheta : 1);
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

FieldFile parse_field(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw FieldFormatError("empty field file");
  std::istringstream hs(header);
  std::vector<std::string> tokens;
  for (std::string t; hs >> t;) tokens.push_back(t);
  FieldFile f;
  auto as_int = [](const std::string& t) {
    std::int32_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || v < 1)
      throw FieldFormatError("bad dimension '" + t + "'");
    return v;
  };
  std::size_t at = 0;
  if (tokens.size() == 6) {
    f.nx = as_int(tokens[0]), f.ny = as_int(tokens[1]), at = 2;
  } else if (tokens.size() == 7) {
    f.nx = as_int(tokens[0]), f.ny = as_int(tokens[1]), f.ntheta = as_int(tokens[2]), at = 3;
  } else {
    throw FieldFormatError("header needs 6 or 7 entries, got " + std::to_string(tokens.size()));
  }
  f.xmin = parse_double(tokens[at]);
  f.xmax = parse_double(tokens[at + 1]);
  f.ymin = parse_double(tokens[at + 2]);
  f.ymax = parse_double(tokens[at + 3]);
  if (!(f.xmax > f.xmin) || !(f.ymax > f.ymin)) throw FieldFormatError("empty domain in header");

  f.values.reserve(f.expected_size());
  for (std::string t; in >> t;) {
    if (f.values.size() == f.expected_size())
      throw FieldFormatError("more values than the header declares");
    f.values.push_back(parse_double(t));
  }
  if (f.values.size() != f.expected_size())
    throw FieldFormatError("expected " + std::to_string(f.expected_size()) + " values, got " +
                           std::to_string(f.values.size()));
  return f;
}

FieldFile read_field(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return parse_field(in);
  } catch (const FieldFormatError& e) {
    throw FieldFormatError(path + ": " + e.what());
  }
}

void write_field(std::ostream& out, const FieldFile& f) {
  if (f.values.size() != f.expected_size())
    throw std::invalid_argument("field value count does not match its dimensions");
  out << f.nx << ' ' << f.ny << ' ';
  if (f.ntheta > 0) out << f.ntheta << ' ';
  out << format_double(f.xmin) << ' ' << format_double(f.xmax) << ' ' << format_double(f.ymin)
      << ' ' << format_double(f.ymax) << '\n';
  for (std::size_t r = 0; r < f.values.size(); r += f.nx) {
    for (std::int32_t i = 0; i < f.nx; ++i) {
      if (i) out << ' ';
      out << format_double(f.values[r + i]);
    }
    out << '\n';
  }
}

void write_field(const std::string& path, const FieldFile& f) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_field(out, f);
  if (!out.flush()) throw std::runtime_error("write failed for " + path);
}

}  // namespace hjkit::tools
