#pragma once

// Shared generators and brute-force oracles for the test suites. The
// oracles stay clear of the cover/range-scan machinery they check:
// membership and distance are evaluated by full scans.

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "htm/cover.hpp"
#include "htm/mesh.hpp"
#include "htm/region.hpp"
#include "htm/spatial_index.hpp"
#include "htm/sphere.hpp"

namespace htmtest {

using Rng = std::mt19937_64;

inline htm::UnitVector random_unit_vector(Rng& rng) {
    std::normal_distribution<double> n;
    for (;;) {
        double x = n(rng), y = n(rng), z = n(rng);
        double len = std::sqrt(x * x + y * y + z * z);
        if (len > 1e-6) return {x / len, y / len, z / len};
    }
}

/// Uniform point at angular distance <= radius_rad from center.
inline htm::UnitVector random_point_in_cap(Rng& rng, const htm::UnitVector& center,
                                           double radius_rad) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    double cos_r = std::cos(radius_rad);
    double cos_t = 1.0 - u01(rng) * (1.0 - cos_r);
    double sin_t = std::sqrt(std::max(0.0, 1.0 - cos_t * cos_t));
    double phi = u01(rng) * 2.0 * htm::kPi;

    // Orthonormal frame around the center.
    htm::UnitVector ref = std::fabs(center.z) < 0.9 ? htm::UnitVector{0, 0, 1}
                                                    : htm::UnitVector{1, 0, 0};
    htm::UnitVector e1 = htm::normalize(center.cross(ref));
    htm::UnitVector e2 = htm::normalize(center.cross(e1));
    return htm::normalize(center.x * cos_t + sin_t * (std::cos(phi) * e1.x + std::sin(phi) * e2.x),
                          center.y * cos_t + sin_t * (std::cos(phi) * e1.y + std::sin(phi) * e2.y),
                          center.z * cos_t + sin_t * (std::cos(phi) * e1.z + std::sin(phi) * e2.z));
}

/// Interior point of a trixel: normalized positive combination of the
/// corners.
inline htm::UnitVector random_point_in_trixel(Rng& rng, const htm::Trixel& t) {
    std::uniform_real_distribution<double> u01(1e-6, 1.0);
    double a = u01(rng), b = u01(rng), c = u01(rng);
    double s = a + b + c;
    a /= s; b /= s; c /= s;
    return htm::normalize(a * t.v0.x + b * t.v1.x + c * t.v2.x,
                          a * t.v0.y + b * t.v1.y + c * t.v2.y,
                          a * t.v0.z + b * t.v1.z + c * t.v2.z);
}

struct RegionSample {
    htm::Region region;
    // A cap guaranteed to contain the region, for member-point sampling.
    htm::UnitVector anchor;
    double anchor_radius_rad = 0.0;
};

inline RegionSample random_cap_region(Rng& rng, double min_arcmin = 5.0,
                                      double max_arcmin = 1200.0) {
    std::uniform_real_distribution<double> u(min_arcmin, max_arcmin);
    htm::UnitVector c = random_unit_vector(rng);
    double radius = u(rng);
    htm::Region r;
    r.convexes.push_back(
        htm::Convex{{htm::Halfspace{c, std::cos(htm::radians(radius / 60.0))}}});
    return {r, c, htm::radians(radius / 60.0)};
}

inline RegionSample random_rect_region(Rng& rng) {
    std::uniform_real_distribution<double> lat(-80.0, 70.0), lon(-180.0, 180.0),
        dlat(0.5, 15.0), dlon(0.5, 25.0);
    double lat0 = lat(rng), lon0 = lon(rng);
    double lat1 = std::min(lat0 + dlat(rng), 89.0);
    double lon_span = dlon(rng);
    htm::Region r;
    htm::Convex c;
    double l0 = htm::radians(lon0), l1 = htm::radians(lon0 + lon_span);
    c.halfspaces.push_back({{0.0, 0.0, 1.0}, std::sin(htm::radians(lat0))});
    c.halfspaces.push_back({{0.0, 0.0, -1.0}, -std::sin(htm::radians(lat1))});
    c.halfspaces.push_back({htm::normalize(-std::sin(l0), std::cos(l0), 0.0), 0.0});
    c.halfspaces.push_back({htm::normalize(std::sin(l1), -std::cos(l1), 0.0), 0.0});
    r.convexes.push_back(c);

    htm::UnitVector mid = htm::latlon_to_xyz(0.5 * (lat0 + lat1), lon0 + 0.5 * lon_span);
    double diag = htm::radians(std::hypot(lat1 - lat0, lon_span) * 0.75 + 1.0);
    return {r, mid, std::min(diag, htm::kPi)};
}

inline RegionSample random_hull_region(Rng& rng) {
    std::uniform_int_distribution<int> npts(3, 7);
    std::uniform_real_distribution<double> rad(htm::radians(0.5), htm::radians(15.0));
    htm::UnitVector center = random_unit_vector(rng);
    double spread = rad(rng);
    int n = npts(rng);
    std::vector<htm::UnitVector> pts;
    for (int i = 0; i < n; ++i) pts.push_back(random_point_in_cap(rng, center, spread));

    // Hull = intersection of supporting pair planes (same construction
    // the parser uses, assembled directly from vectors).
    htm::Convex hull;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            htm::UnitVector raw = pts[i].cross(pts[j]);
            if (raw.norm() < 1e-12) continue;
            htm::UnitVector nrm = htm::normalize(raw);
            bool ok = true;
            for (const htm::UnitVector& p : pts)
                if (nrm.dot(p) < -1e-12) { ok = false; break; }
            if (!ok) continue;
            bool dup = false;
            for (const htm::Halfspace& h : hull.halfspaces)
                if (h.normal.dot(nrm) > 1.0 - 1e-9) { dup = true; break; }
            if (!dup) hull.halfspaces.push_back({nrm, 0.0});
        }
    }
    if (hull.halfspaces.empty()) return random_cap_region(rng);  // degenerate draw
    htm::Region r;
    r.convexes.push_back(hull);
    return {r, center, spread + 1e-3};
}

inline RegionSample random_region(Rng& rng) {
    switch (rng() % 3) {
        case 0: return random_cap_region(rng);
        case 1: return random_rect_region(rng);
        default: return random_hull_region(rng);
    }
}

/// A member point of the region, by rejection inside its anchor cap.
/// Returns nullopt when the region is too thin to hit.
inline std::optional<htm::UnitVector> random_member_point(Rng& rng, const RegionSample& s,
                                                          int max_tries = 4000) {
    for (int i = 0; i < max_tries; ++i) {
        htm::UnitVector p = random_point_in_cap(rng, s.anchor, s.anchor_radius_rad);
        if (htm::point_in_region(p, s.region)) return p;
    }
    return std::nullopt;
}

// --- synthetic datasets ---------------------------------------------------

inline std::vector<htm::SpatialIndexRow> synthetic_rows(int count, Rng& rng) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::vector<htm::SpatialIndexRow> rows;
    rows.reserve(count);
    for (int i = 0; i < count; ++i) {
        double lat = htm::degrees(std::asin(2.0 * u01(rng) - 1.0));
        double lon = -180.0 + 360.0 * u01(rng);
        htm::UnitVector v = htm::latlon_to_xyz(lat, lon);
        htm::SpatialIndexRow r;
        r.htm_id = htm::lookup_xyz(v, htm::kDefaultDepth);
        r.lat = lat;
        r.lon = lon;
        r.x = v.x; r.y = v.y; r.z = v.z;
        r.type = (i % 2 == 0) ? 'P' : 'S';
        r.obj_id = static_cast<std::uint64_t>(i) + 1;
        rows.push_back(r);
    }
    return rows;
}

// --- brute-force oracles (full scans, no cover involved) -------------------

inline htm::ArcMinutes oracle_distance(const htm::UnitVector& a, const htm::UnitVector& b) {
    double c = std::clamp(a.dot(b), -1.0, 1.0);
    return std::acos(c) * (htm::kMaxArcMinutes / htm::kPi);
}

inline std::vector<htm::QueryHit> oracle_nearby(const std::vector<htm::SpatialIndexRow>& rows,
                                                char type, const htm::UnitVector& center,
                                                double radius) {
    std::vector<htm::QueryHit> hits;
    for (const htm::SpatialIndexRow& r : rows) {
        if (r.type != type) continue;
        double d = oracle_distance(center, r.xyz());
        if (d < radius) hits.push_back({r.obj_id, r.type, r.lat, r.lon, d});
    }
    std::sort(hits.begin(), hits.end(), [](const htm::QueryHit& a, const htm::QueryHit& b) {
        if (*a.distance != *b.distance) return *a.distance < *b.distance;
        return a.obj_id < b.obj_id;
    });
    return hits;
}

inline std::vector<htm::QueryHit> oracle_nearest(const std::vector<htm::SpatialIndexRow>& rows,
                                                 char type, const htm::UnitVector& center) {
    std::vector<htm::QueryHit> best;
    for (const htm::SpatialIndexRow& r : rows) {
        if (r.type != type) continue;
        double d = oracle_distance(center, r.xyz());
        if (best.empty() || d < *best[0].distance ||
            (d == *best[0].distance && r.obj_id < best[0].obj_id))
            best = {htm::QueryHit{r.obj_id, r.type, r.lat, r.lon, d}};
    }
    return best;
}

inline std::vector<htm::QueryHit> oracle_region(const std::vector<htm::SpatialIndexRow>& rows,
                                                char type, const htm::Region& region) {
    std::vector<htm::QueryHit> hits;
    for (const htm::SpatialIndexRow& r : rows) {
        if (r.type != type) continue;
        if (htm::point_in_region(r.xyz(), region))
            hits.push_back({r.obj_id, r.type, r.lat, r.lon, std::nullopt});
    }
    std::sort(hits.begin(), hits.end(),
              [](const htm::QueryHit& a, const htm::QueryHit& b) { return a.obj_id < b.obj_id; });
    return hits;
}

inline bool same_object_sequence(const std::vector<htm::QueryHit>& a,
                                 const std::vector<htm::QueryHit>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].obj_id != b[i].obj_id) return false;
    return true;
}

inline bool leaf_in_ranges(const std::vector<htm::TrixelRange>& ranges, htm::HtmId leaf) {
    auto it = std::upper_bound(ranges.begin(), ranges.end(), leaf,
                               [](htm::HtmId v, const htm::TrixelRange& r) { return v < r.start; });
    if (it == ranges.begin()) return false;
    --it;
    return leaf >= it->start && leaf <= it->end;
}

/// Spherical excess by the raw angle sum; the independent route used to
/// cross-check the library's area computation at coarse levels.
inline double girard_area(const htm::Trixel& t) {
    auto corner_angle = [](const htm::UnitVector& a, const htm::UnitVector& b,
                           const htm::UnitVector& c) {
        htm::UnitVector tb{b.x - a.dot(b) * a.x, b.y - a.dot(b) * a.y, b.z - a.dot(b) * a.z};
        htm::UnitVector tc{c.x - a.dot(c) * a.x, c.y - a.dot(c) * a.y, c.z - a.dot(c) * a.z};
        return std::atan2(tb.cross(tc).norm(), tb.dot(tc));
    };
    return corner_angle(t.v0, t.v1, t.v2) + corner_angle(t.v1, t.v2, t.v0) +
           corner_angle(t.v2, t.v0, t.v1) - htm::kPi;
}

}  // namespace htmtest
