#include "htm/mesh.hpp"

#include <cmath>

#include "htm/errors.hpp"

namespace htm {

namespace {

// Tie-break tolerance for the edge-plane sign tests. Points this close
// to a boundary are claimed by the first child tested (ascending digit).
constexpr double kLookupEps = 1e-15;

constexpr UnitVector kV0{0.0, 0.0, 1.0};
constexpr UnitVector kV1{1.0, 0.0, 0.0};
constexpr UnitVector kV2{0.0, 1.0, 0.0};
constexpr UnitVector kV3{-1.0, 0.0, 0.0};
constexpr UnitVector kV4{0.0, -1.0, 0.0};
constexpr UnitVector kV5{0.0, 0.0, -1.0};

struct FaceDef {
    UnitVector v0, v1, v2;
};

constexpr FaceDef kFaces[8] = {
    {kV1, kV5, kV2},  // S0, id 8
    {kV2, kV5, kV3},  // S1, id 9
    {kV3, kV5, kV4},  // S2, id 10
    {kV4, kV5, kV1},  // S3, id 11
    {kV1, kV0, kV4},  // N0, id 12
    {kV4, kV0, kV3},  // N1, id 13
    {kV3, kV0, kV2},  // N2, id 14
    {kV2, kV0, kV1},  // N3, id 15
};

UnitVector edge_midpoint(const UnitVector& a, const UnitVector& b) {
    return normalize(a.x + b.x, a.y + b.y, a.z + b.z);
}

bool inside(const UnitVector& v0, const UnitVector& v1, const UnitVector& v2,
            const UnitVector& p) {
    return v0.cross(v1).dot(p) >= -kLookupEps &&
           v1.cross(v2).dot(p) >= -kLookupEps &&
           v2.cross(v0).dot(p) >= -kLookupEps;
}

void check_depth(int depth) {
    if (depth < 1 || depth > kMaxDepth)
        throw DepthExceededError("depth " + std::to_string(depth) + " outside [1, 31]");
}

double arc_length(const UnitVector& u, const UnitVector& v) {
    return std::atan2(u.cross(v).norm(), u.dot(v));
}

}  // namespace

std::array<Trixel, 8> level0_trixels() {
    std::array<Trixel, 8> out;
    for (int f = 0; f < 8; ++f)
        out[f] = Trixel{static_cast<HtmId>(8 + f), kFaces[f].v0, kFaces[f].v1, kFaces[f].v2};
    return out;
}

std::array<Trixel, 4> children(const Trixel& t) {
    if (t.level() >= kMaxDepth - 1)
        throw DepthExceededError("cannot subdivide below level 30");
    UnitVector w0 = edge_midpoint(t.v1, t.v2);
    UnitVector w1 = edge_midpoint(t.v2, t.v0);
    UnitVector w2 = edge_midpoint(t.v0, t.v1);
    HtmId base = t.id << 2;
    return {Trixel{base | 0, t.v0, w2, w1},
            Trixel{base | 1, t.v1, w0, w2},
            Trixel{base | 2, t.v2, w1, w0},
            Trixel{base | 3, w0, w1, w2}};
}

Trixel trixel_from_id(HtmId id) {
    int level = id_level(id);
    int face = id_face(id);
    Trixel t{static_cast<HtmId>(8 + face), kFaces[face].v0, kFaces[face].v1, kFaces[face].v2};
    for (int i = 1; i <= level; ++i) t = children(t)[id_digit(id, i)];
    return t;
}

HtmId lookup_xyz(const UnitVector& v, int depth) {
    check_depth(depth);
    UnitVector p = normalize_point_input(v.x, v.y, v.z);

    int face = 0;
    for (; face < 8; ++face)
        if (inside(kFaces[face].v0, kFaces[face].v1, kFaces[face].v2, p)) break;
    // The faces are closed coordinate octants, so one always matches.

    UnitVector v0 = kFaces[face].v0, v1 = kFaces[face].v1, v2 = kFaces[face].v2;
    HtmId id = static_cast<HtmId>(8 + face);
    for (int d = 1; d < depth; ++d) {
        UnitVector w0 = edge_midpoint(v1, v2);
        UnitVector w1 = edge_midpoint(v2, v0);
        UnitVector w2 = edge_midpoint(v0, v1);
        if (inside(v0, w2, w1, p)) {
            id = id << 2;
            v1 = w2; v2 = w1;
        } else if (inside(v1, w0, w2, p)) {
            id = (id << 2) | 1;
            v0 = v1; v1 = w0; v2 = w2;
        } else if (inside(v2, w1, w0, p)) {
            id = (id << 2) | 2;
            v0 = v2; v1 = w1; v2 = w0;
        } else {
            id = (id << 2) | 3;
            v0 = w0; v1 = w1; v2 = w2;
        }
    }
    return id;
}

HtmId lookup_latlon(double lat, double lon, int depth) {
    return lookup_xyz(latlon_to_xyz(lat, lon), depth);
}

HtmId lookup_eq(double ra, double dec, int depth) {
    return lookup_xyz(eq_to_xyz(ra, dec), depth);
}

UnitVector center_point(HtmId id) {
    Trixel t = trixel_from_id(id);
    return normalize(t.v0.x + t.v1.x + t.v2.x, t.v0.y + t.v1.y + t.v2.y,
                     t.v0.z + t.v1.z + t.v2.z);
}

std::array<UnitVector, 3> corner_points(HtmId id) {
    Trixel t = trixel_from_id(id);
    return {t.v0, t.v1, t.v2};
}

double trixel_area(const Trixel& t) {
    // Spherical excess via l'Huilier's theorem; keeps relative accuracy
    // for the tiny triangles at deep levels, where the raw angle sum
    // cancels catastrophically.
    double a = arc_length(t.v1, t.v2);
    double b = arc_length(t.v2, t.v0);
    double c = arc_length(t.v0, t.v1);
    double s = 0.5 * (a + b + c);
    double q = std::tan(0.5 * s) * std::tan(0.5 * (s - a)) * std::tan(0.5 * (s - b)) *
               std::tan(0.5 * (s - c));
    return 4.0 * std::atan(std::sqrt(std::max(q, 0.0)));
}

double trixel_area(HtmId id) { return trixel_area(trixel_from_id(id)); }

}  // namespace htm
