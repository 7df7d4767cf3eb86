#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace hjkit::tools {

/// Text grid file. Header "nx ny xmin xmax ymin ymax", or
/// "nx ny ntheta xmin xmax ymin ymax" for phase fields, then one line per
/// (j, k) row holding nx values. Values are j-outer, i-inner (k outermost).
struct FieldFile {
  std::int32_t nx = 0;
  std::int32_t ny = 0;
  /// 0 for a plain 2D field.
  std::int32_t ntheta = 0;
  double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
  std::vector<double> values;

  std::size_t expected_size() const;
};

class FieldFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

FieldFile parse_field(std::istream& in);
FieldFile read_field(const std::string& path);

/// %.17g throughout, so parse(write(f)) reproduces every value bit for bit.
void write_field(std::ostream& out, const FieldFile& f);
void write_field(const std::string& path, const FieldFile& f);

std::string format_double(double v);

}  // namespace hjkit::tools
