#pragma once

#include <string>
#include <string_view>

#include "htm/region.hpp"

namespace htm {

// Region specification grammar (keywords case-insensitive, tokens
// whitespace-separated, angles in degrees, radii in arc minutes):
//
//   regionSpec := 'REGION' {areaSpec}* | areaSpec
//   areaSpec   := circleSpec | rectSpec | polySpec | hullSpec | convexSpec
//   circleSpec := 'CIRCLE' frame2 lat lon radius | 'CIRCLE' ['CARTESIAN'] x y z radius
//   rectSpec   := 'RECT'   frame2 {lat lon}2    | 'RECT'   ['CARTESIAN'] {x y z}2
//   polySpec   := 'POLY'   frame2 {lat lon}3+   | 'POLY'   ['CARTESIAN'] {x y z}3+
//   hullSpec   := 'CHULL'  frame2 {lat lon}3+   | 'CHULL'  ['CARTESIAN'] {x y z}3+
//   convexSpec := 'CONVEX' frame2 {lat lon D}*  | 'CONVEX' ['CARTESIAN'] {x y z D}*
//   frame2     := 'LATLON' | 'J2000'
//
// J2000 point pairs read (ra, dec). The CARTESIAN keyword may be
// omitted. RECT edges are constant-latitude and constant-longitude
// lines; the longitude pair is wrap-around (358..2 is a 4-degree
// range), and a span wider than 180 degrees splits into two convexes.

/// Parses a region specification into halfspace normal form (not yet
/// simplified; see normalize_region). Throws RegionSyntaxError for
/// malformed text and RegionSemanticError for invalid shapes.
Region parse_region(std::string_view spec);

/// "OK" for a valid spec, otherwise the parse diagnostic followed by a
/// grammar synopsis. Never throws.
std::string region_error(std::string_view spec);

}  // namespace htm
