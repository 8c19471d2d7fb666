#ifndef ZERMELO_COMMON_HPP
#define ZERMELO_COMMON_HPP

#include <Eigen/Core>
#include <charconv>
#include <stdexcept>
#include <string>

namespace zermelo {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Raised when a path or segment has collapsed geometry (zero-length
/// interval, vanishing direction) that the functional cannot handle.
class degenerate_geometry_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Raised when the local wind speed reaches or exceeds the airspeed, which
/// makes the travel-time integrand undefined.
class wind_exceeds_airspeed_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Raised when two discrete paths with different grids are combined.
class grid_mismatch_error : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a segment plan would produce a segment shorter than the
/// minimum interval count.
class segment_too_short_error : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class invalid_config_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Shortest decimal representation that round-trips to the same double.
inline std::string format_double(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

} // namespace zermelo

#endif
