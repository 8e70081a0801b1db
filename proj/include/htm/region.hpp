#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "htm/sphere.hpp"

namespace htm {

// Regions follow the halfspace normal form: a halfspace is the spherical
// cap {p : p·normal >= d}, a convex is the intersection of its
// halfspaces, and a region is the union of its convexes. Boundary points
// are members.

struct Halfspace {
    UnitVector normal;
    double d = 0.0;

    /// Angular radius of the cap, radians: arccos(d).
    double radius() const;
};

struct Convex {
    std::vector<Halfspace> halfspaces;
};

struct Region {
    std::vector<Convex> convexes;

    bool empty() const { return convexes.empty(); }
};

struct RegionTableRow {
    std::uint64_t convex_id = 0;
    std::uint64_t halfspace_id = 0;
    double x = 0.0, y = 0.0, z = 0.0, d = 0.0;
};

/// Membership in a single convex: min over halfspaces of (v·n - d) >= 0.
/// A convex with no halfspaces is the whole sphere.
bool point_in_convex(const UnitVector& v, const Convex& c);

/// Union semantics; the empty region matches nothing.
bool point_in_region(const UnitVector& v, const Region& r);

/// True when cap `a` lies entirely within cap `b`
/// (angle(na, nb) + radius(a) <= radius(b), up to tolerance).
bool halfspace_implies(const Halfspace& a, const Halfspace& b);

/// True when the two caps cannot share a point
/// (angle(na, nb) > radius(a) + radius(b)).
bool halfspaces_disjoint(const Halfspace& a, const Halfspace& b);

/// Drops convexes made empty by a pairwise-disjoint halfspace pair and,
/// within each convex, halfspaces implied by another. Pairwise
/// simplification only; membership is unchanged. Idempotent.
Region normalize_region(const Region& r);

/// Canonical single-line form "REGION CONVEX x y z d ... CONVEX ...".
/// Values print as shortest round-trip decimals. Does not normalize.
std::string to_normal_form_string(const Region& r);

/// Rows of the normalized region in (convex, halfspace) order.
std::vector<RegionTableRow> region_to_table(const Region& r);

}  // namespace htm
