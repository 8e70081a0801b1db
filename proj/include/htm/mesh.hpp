#pragma once

#include <array>

#include "htm/htm_id.hpp"
#include "htm/sphere.hpp"

namespace htm {

// The mesh starts from an octahedron with vertices at the poles and at
// (±1,0,0), (0,±1,0). Face corner triplets and the child numbering
// follow the reference ordering:
//
//   S0=(V1,V5,V2)  S1=(V2,V5,V3)  S2=(V3,V5,V4)  S3=(V4,V5,V1)   ids 8..11
//   N0=(V1,V0,V4)  N1=(V4,V0,V3)  N2=(V3,V0,V2)  N3=(V2,V0,V1)   ids 12..15
//
// with V0=(0,0,1), V1=(1,0,0), V2=(0,1,0), V3=(-1,0,0), V4=(0,-1,0),
// V5=(0,0,-1). A trixel (v0,v1,v2) splits at the normalized edge
// midpoints w0=mid(v1,v2), w1=mid(v2,v0), w2=mid(v0,v1) into children
//   0=(v0,w2,w1)  1=(v1,w0,w2)  2=(v2,w1,w0)  3=(w0,w1,w2).

/// A trixel: its key plus the three corner vectors in canonical order.
struct Trixel {
    HtmId id = kMinHtmId;
    UnitVector v0, v1, v2;

    int level() const { return id_level(id); }
    int depth() const { return id_depth(id); }
};

/// The eight level-0 faces, ids 8..15 in order.
std::array<Trixel, 8> level0_trixels();

/// The four children of `t` in child-digit order. Throws
/// DepthExceededError when t is already at level 30.
std::array<Trixel, 4> children(const Trixel& t);

/// Rebuilds a trixel (corners included) from its key by replaying the
/// digit path from the level-0 face. Throws InvalidHtmIdError.
Trixel trixel_from_id(HtmId id);

/// Key of the depth-`depth` trixel containing v. The input point is
/// normalized; (0,0,0) maps to (1,0,0). Throws DepthExceededError for
/// depth outside [1, 31].
HtmId lookup_xyz(const UnitVector& v, int depth = kDefaultDepth);
inline HtmId lookup_xyz(double x, double y, double z, int depth = kDefaultDepth) {
    return lookup_xyz(normalize_point_input(x, y, z), depth);
}
HtmId lookup_latlon(double lat, double lon, int depth = kDefaultDepth);
HtmId lookup_eq(double ra, double dec, int depth = kDefaultDepth);

/// Normalized corner sum; strictly interior to the trixel.
UnitVector center_point(HtmId id);

std::array<UnitVector, 3> corner_points(HtmId id);

/// Spherical-excess area in steradians.
double trixel_area(const Trixel& t);
double trixel_area(HtmId id);

}  // namespace htm
