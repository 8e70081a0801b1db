#include "htm/region.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace htm {

namespace {

constexpr double kGeomEps = 1e-12;

double angle_between(const UnitVector& a, const UnitVector& b) {
    return std::atan2(a.cross(b).norm(), a.dot(b));
}

void append_double(std::string& out, double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, res.ptr);
}

}  // namespace

double Halfspace::radius() const { return std::acos(std::clamp(d, -1.0, 1.0)); }

bool point_in_convex(const UnitVector& v, const Convex& c) {
    for (const Halfspace& h : c.halfspaces)
        if (v.dot(h.normal) - h.d < 0.0) return false;
    return true;
}

bool point_in_region(const UnitVector& v, const Region& r) {
    for (const Convex& c : r.convexes)
        if (point_in_convex(v, c)) return true;
    return false;
}

bool halfspace_implies(const Halfspace& a, const Halfspace& b) {
    return angle_between(a.normal, b.normal) + a.radius() <= b.radius() + kGeomEps;
}

bool halfspaces_disjoint(const Halfspace& a, const Halfspace& b) {
    return angle_between(a.normal, b.normal) > a.radius() + b.radius() + kGeomEps;
}

Region normalize_region(const Region& r) {
    Region out;
    for (const Convex& c : r.convexes) {
        const auto& hs = c.halfspaces;
        std::size_t n = hs.size();

        bool convex_empty = false;
        for (std::size_t i = 0; i < n && !convex_empty; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (halfspaces_disjoint(hs[i], hs[j])) {
                    convex_empty = true;
                    break;
                }
        if (convex_empty) continue;

        // Keep h[j] unless some other cap fits inside it; on mutual
        // implication (duplicates) the earlier one survives.
        Convex kept;
        for (std::size_t j = 0; j < n; ++j) {
            bool redundant = false;
            for (std::size_t i = 0; i < n && !redundant; ++i) {
                if (i == j) continue;
                if (halfspace_implies(hs[i], hs[j]) &&
                    (!halfspace_implies(hs[j], hs[i]) || i < j))
                    redundant = true;
            }
            if (!redundant) kept.halfspaces.push_back(hs[j]);
        }
        out.convexes.push_back(std::move(kept));
    }
    return out;
}

std::string to_normal_form_string(const Region& r) {
    std::string out = "REGION";
    for (const Convex& c : r.convexes) {
        out += " CONVEX";
        for (const Halfspace& h : c.halfspaces) {
            out += ' ';
            append_double(out, h.normal.x);
            out += ' ';
            append_double(out, h.normal.y);
            out += ' ';
            append_double(out, h.normal.z);
            out += ' ';
            append_double(out, h.d);
        }
    }
    return out;
}

std::vector<RegionTableRow> region_to_table(const Region& r) {
    Region n = normalize_region(r);
    std::vector<RegionTableRow> rows;
    for (std::size_t ci = 0; ci < n.convexes.size(); ++ci) {
        const Convex& c = n.convexes[ci];
        for (std::size_t hi = 0; hi < c.halfspaces.size(); ++hi) {
            const Halfspace& h = c.halfspaces[hi];
            rows.push_back({ci, hi, h.normal.x, h.normal.y, h.normal.z, h.d});
        }
    }
    return rows;
}

}  // namespace htm
