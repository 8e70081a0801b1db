#include "htm/cover.hpp"

#include <algorithm>
#include <cmath>

#include "htm/errors.hpp"

namespace htm {

namespace {

constexpr double kAngleTol = 1e-12;

double angle_between(const UnitVector& a, const UnitVector& b) {
    return std::atan2(a.cross(b).norm(), a.dot(b));
}

// Smallest cap around the centroid that contains the trixel. For HTM
// trixels (edges at most 90 degrees) the farthest point from the
// centroid is a corner.
struct BoundingCap {
    UnitVector center;
    double radius;  // radians
};

BoundingCap bounding_cap(const Trixel& t) {
    UnitVector c = normalize(t.v0.x + t.v1.x + t.v2.x, t.v0.y + t.v1.y + t.v2.y,
                             t.v0.z + t.v1.z + t.v2.z);
    double r = std::max({angle_between(c, t.v0), angle_between(c, t.v1), angle_between(c, t.v2)});
    return {c, r};
}

// Does the boundary circle {p·n = d} meet the great-circle arc from a
// to b? Conservative: touching counts as meeting.
bool circle_meets_arc(const UnitVector& n, double d, const UnitVector& a, const UnitVector& b) {
    double ab = a.dot(b);
    UnitVector raw{b.x - ab * a.x, b.y - ab * a.y, b.z - ab * a.z};
    double raw_norm = raw.norm();
    if (raw_norm < 1e-15) return false;  // degenerate arc
    UnitVector e2{raw.x / raw_norm, raw.y / raw_norm, raw.z / raw_norm};
    double arc = std::atan2(a.cross(b).norm(), ab);

    // n·(a cos t + e2 sin t) = d  =>  R cos(t - t0) = d
    double A = n.dot(a);
    double B = n.dot(e2);
    double R = std::hypot(A, B);
    if (R < 1e-15) return std::fabs(d) <= kAngleTol;  // arc lies in the boundary plane
    double ratio = d / R;
    if (ratio > 1.0 || ratio < -1.0) return false;
    double t0 = std::atan2(B, A);
    double dt = std::acos(std::clamp(ratio, -1.0, 1.0));
    for (double t : {t0 + dt, t0 - dt}) {
        double w = std::fmod(t, 2.0 * kPi);
        if (w < 0.0) w += 2.0 * kPi;
        // w just below 2*pi is t = 0 up to rounding.
        if (w <= arc + kAngleTol || w >= 2.0 * kPi - kAngleTol) return true;
    }
    return false;
}

bool point_in_trixel(const Trixel& t, const UnitVector& p) {
    return t.v0.cross(t.v1).dot(p) >= -kAngleTol && t.v1.cross(t.v2).dot(p) >= -kAngleTol &&
           t.v2.cross(t.v0).dot(p) >= -kAngleTol;
}

TrixelOverlap classify_against_convex(const Trixel& t, const BoundingCap& cap, const Convex& c) {
    if (c.halfspaces.empty()) return TrixelOverlap::Full;  // whole sphere

    for (const Halfspace& h : c.halfspaces) {
        double sep = angle_between(cap.center, h.normal);
        if (sep > cap.radius + h.radius() + kAngleTol) return TrixelOverlap::Disjoint;
    }

    for (const Halfspace& h : c.halfspaces) {
        double sep = angle_between(cap.center, h.normal);
        if (sep + cap.radius <= h.radius() - kAngleTol) continue;  // cap inside halfspace

        for (const UnitVector& corner : {t.v0, t.v1, t.v2})
            if (corner.dot(h.normal) < h.d + kAngleTol) return TrixelOverlap::Partial;

        if (circle_meets_arc(h.normal, h.d, t.v0, t.v1) ||
            circle_meets_arc(h.normal, h.d, t.v1, t.v2) ||
            circle_meets_arc(h.normal, h.d, t.v2, t.v0))
            return TrixelOverlap::Partial;

        // Corners inside, no edge touched: the only remaining escape is
        // the halfspace's complement cap sitting wholly inside the
        // trixel; the complement always contains -normal.
        if (h.d > -1.0 + kAngleTol) {
            UnitVector anti{-h.normal.x, -h.normal.y, -h.normal.z};
            if (point_in_trixel(t, anti)) return TrixelOverlap::Partial;
        }
    }
    return TrixelOverlap::Full;
}

}  // namespace

TrixelOverlap classify_trixel(const Trixel& t, const Region& r) {
    if (r.empty()) return TrixelOverlap::Disjoint;
    BoundingCap cap = bounding_cap(t);
    bool all_disjoint = true;
    for (const Convex& c : r.convexes) {
        switch (classify_against_convex(t, cap, c)) {
            case TrixelOverlap::Full: return TrixelOverlap::Full;
            case TrixelOverlap::Partial: all_disjoint = false; break;
            case TrixelOverlap::Disjoint: break;
        }
    }
    return all_disjoint ? TrixelOverlap::Disjoint : TrixelOverlap::Partial;
}

namespace {

std::vector<TrixelRange> merge_ranges(std::vector<TrixelRange> ranges) {
    std::sort(ranges.begin(), ranges.end(),
              [](const TrixelRange& a, const TrixelRange& b) { return a.start < b.start; });
    std::vector<TrixelRange> out;
    for (const TrixelRange& r : ranges) {
        if (!out.empty() && r.start <= out.back().end + 1)
            out.back().end = std::max(out.back().end, r.end);
        else
            out.push_back(r);
    }
    return out;
}

std::vector<TrixelRange> merged_with_partials(const std::vector<TrixelRange>& full,
                                              const std::vector<Trixel>& partials,
                                              int leaf_depth) {
    std::vector<TrixelRange> all = full;
    for (const Trixel& t : partials) {
        auto [s, e] = leaf_range(t.id, leaf_depth);
        all.push_back({s, e});
    }
    return merge_ranges(std::move(all));
}

}  // namespace

std::vector<TrixelRange> cover_region(const Region& r, const CoverBudget& budget) {
    if (r.empty()) return {};

    std::vector<TrixelRange> full;
    std::vector<Trixel> partials;
    for (const Trixel& face : level0_trixels()) {
        switch (classify_trixel(face, r)) {
            case TrixelOverlap::Full: {
                auto [s, e] = leaf_range(face.id, budget.leaf_depth);
                full.push_back({s, e});
                break;
            }
            case TrixelOverlap::Partial: partials.push_back(face); break;
            case TrixelOverlap::Disjoint: break;
        }
    }

    int depth = 1;
    while (depth < budget.leaf_depth && !partials.empty()) {
        if (4 * partials.size() > static_cast<std::size_t>(budget.max_frontier)) break;

        std::vector<TrixelRange> refined_full = full;
        std::vector<Trixel> refined_partials;
        for (const Trixel& t : partials) {
            for (const Trixel& child : children(t)) {
                switch (classify_trixel(child, r)) {
                    case TrixelOverlap::Full: {
                        auto [s, e] = leaf_range(child.id, budget.leaf_depth);
                        refined_full.push_back({s, e});
                        break;
                    }
                    case TrixelOverlap::Partial: refined_partials.push_back(child); break;
                    case TrixelOverlap::Disjoint: break;
                }
            }
        }

        auto merged = merged_with_partials(refined_full, refined_partials, budget.leaf_depth);
        if (merged.size() > static_cast<std::size_t>(budget.max_ranges)) break;

        full = std::move(refined_full);
        partials = std::move(refined_partials);
        ++depth;
    }

    return merged_with_partials(full, partials, budget.leaf_depth);
}

std::vector<TrixelRange> cover_circle_xyz(double x, double y, double z, double radius_arcmin,
                                          const CoverBudget& budget) {
    UnitVector center = normalize_point_input(x, y, z);
    double radius = std::clamp(radius_arcmin, 0.0, kMaxArcMinutes);
    Region r;
    r.convexes.push_back(Convex{{Halfspace{center, std::cos(radians(radius / 60.0))}}});
    return cover_region(r, budget);
}

std::vector<TrixelRange> cover_circle_latlon(double lat, double lon, double radius_arcmin,
                                             const CoverBudget& budget) {
    UnitVector c = latlon_to_xyz(lat, lon);
    return cover_circle_xyz(c.x, c.y, c.z, radius_arcmin, budget);
}

std::vector<TrixelRange> cover_circle_eq(double ra, double dec, double radius_arcmin,
                                         const CoverBudget& budget) {
    UnitVector c = eq_to_xyz(ra, dec);
    return cover_circle_xyz(c.x, c.y, c.z, radius_arcmin, budget);
}

std::vector<TrixelRange> ranges_at_depth(const std::vector<TrixelRange>& ranges, int from_depth,
                                         int to_depth) {
    if (to_depth < from_depth)
        throw DepthExceededError("cannot re-express depth-" + std::to_string(from_depth) +
                                 " ranges at shallower depth " + std::to_string(to_depth));
    int shift = 2 * (to_depth - from_depth);
    std::vector<TrixelRange> out;
    out.reserve(ranges.size());
    for (const TrixelRange& r : ranges)
        out.push_back({r.start << shift, ((r.end + 1) << shift) - 1});
    return out;
}

std::uint64_t cover_span(const std::vector<TrixelRange>& ranges) {
    std::uint64_t n = 0;
    for (const TrixelRange& r : ranges) n += r.end - r.start + 1;
    return n;
}

}  // namespace htm
