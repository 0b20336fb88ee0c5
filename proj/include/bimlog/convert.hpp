#pragma once

#include "bimlog/codec.hpp"

#include <vector>

namespace bimlog {

inline constexpr double kMetersPerFoot = 0.3048;

// The unit round trip measures how much information the nine-digit wire
// format loses when a log is exported in feet and re-imported in meters:
// every length is scaled by 1/0.3048, pushed through serialize/parse, and
// scaled back. Angles, knots, weights, counts and text ride along unscaled
// (they still pass through the nine-digit format). The perturbation per
// value is bounded by the format's relative rounding, at most 5e-9.

/// One length in meters through the feet-based wire format and back.
double unit_roundtrip_length(double meters);

GeometricBase unit_roundtrip_geometry(const GeometricBase& g);

/// Geometry plus every canonical length parameter; other parameters are
/// copied untouched.
LogEvent unit_roundtrip_event(const LogEvent& event);

std::vector<LogEvent> unit_roundtrip_events(const std::vector<LogEvent>& events);

} // namespace bimlog
