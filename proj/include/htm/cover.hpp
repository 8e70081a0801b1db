#pragma once

#include <vector>

#include "htm/mesh.hpp"
#include "htm/region.hpp"

namespace htm {

/// Closed interval of leaf-depth trixel keys.
struct TrixelRange {
    HtmId start = 0;
    HtmId end = 0;

    friend bool operator==(const TrixelRange&, const TrixelRange&) = default;
};

/// Cover refinement limits. Refinement stops at leaf_depth, or earlier
/// when a further split would leave more than max_ranges merged ranges
/// or more than max_frontier candidate trixels in flight; pending
/// partial trixels are then emitted whole, which only loosens the
/// cover, never breaks it.
struct CoverBudget {
    int leaf_depth = kDefaultDepth;
    int max_ranges = 64;
    int max_frontier = 4096;
};

enum class TrixelOverlap { Full, Partial, Disjoint };

/// Conservative region/trixel classification: Full only when every
/// point of the trixel is provably inside, Disjoint only when provably
/// outside, Partial otherwise. Expects a normalized region.
TrixelOverlap classify_trixel(const Trixel& t, const Region& r);

/// Sorted, merged, pairwise-disjoint ranges of leaf-depth keys whose
/// trixels jointly contain every point of the region. The empty region
/// yields no ranges.
std::vector<TrixelRange> cover_region(const Region& r, const CoverBudget& budget = {});

/// Cover of a spherical cap. The radius is clamped to [0, 10800]; a
/// degenerate (0,0,0) center maps to (1,0,0).
std::vector<TrixelRange> cover_circle_xyz(double x, double y, double z, double radius_arcmin,
                                          const CoverBudget& budget = {});
std::vector<TrixelRange> cover_circle_latlon(double lat, double lon, double radius_arcmin,
                                             const CoverBudget& budget = {});
std::vector<TrixelRange> cover_circle_eq(double ra, double dec, double radius_arcmin,
                                         const CoverBudget& budget = {});

/// Re-expresses ranges of depth-`from_depth` keys as ranges of
/// depth-`to_depth` keys (from_depth <= to_depth).
std::vector<TrixelRange> ranges_at_depth(const std::vector<TrixelRange>& ranges, int from_depth,
                                         int to_depth);

/// Number of leaf keys covered: sum of range widths.
std::uint64_t cover_span(const std::vector<TrixelRange>& ranges);

}  // namespace htm
