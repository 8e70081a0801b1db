#include "htm/region_parse.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <vector>

#include "htm/errors.hpp"

namespace htm {

namespace {

constexpr double kGeomEps = 1e-12;

enum class Keyword { Region, Circle, Rect, Poly, Chull, Convex, LatLon, J2000, Cartesian };

struct Token {
    std::string text;
    std::size_t offset = 0;
    std::optional<Keyword> keyword;
    std::optional<double> number;
};

std::optional<Keyword> match_keyword(const std::string& upper) {
    if (upper == "REGION") return Keyword::Region;
    if (upper == "CIRCLE") return Keyword::Circle;
    if (upper == "RECT") return Keyword::Rect;
    if (upper == "POLY") return Keyword::Poly;
    if (upper == "CHULL") return Keyword::Chull;
    if (upper == "CONVEX") return Keyword::Convex;
    if (upper == "LATLON") return Keyword::LatLon;
    if (upper == "J2000") return Keyword::J2000;
    if (upper == "CARTESIAN") return Keyword::Cartesian;
    return std::nullopt;
}

std::optional<double> match_number(const std::string& text) {
    for (char c : text)
        if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '+' || c == '-' ||
              c == '.' || c == 'e' || c == 'E'))
            return std::nullopt;
    const char* begin = text.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end != begin + text.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

std::vector<Token> lex(std::string_view spec) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < spec.size()) {
        if (std::isspace(static_cast<unsigned char>(spec[i]))) {
            ++i;
            continue;
        }
        std::size_t start = i;
        while (i < spec.size() && !std::isspace(static_cast<unsigned char>(spec[i]))) ++i;
        Token t;
        t.text = std::string(spec.substr(start, i - start));
        t.offset = start;
        std::string upper = t.text;
        for (char& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        t.keyword = match_keyword(upper);
        if (!t.keyword) t.number = match_number(t.text);
        tokens.push_back(std::move(t));
    }
    return tokens;
}

[[noreturn]] void syntax_error(const std::string& msg, std::size_t offset) {
    throw RegionSyntaxError("syntax error at offset " + std::to_string(offset) + ": " + msg,
                            offset);
}

class Parser {
public:
    explicit Parser(std::string_view spec) : spec_(spec), tokens_(lex(spec)) {}

    Region parse() {
        if (tokens_.empty()) syntax_error("empty region specification", 0);
        Region region;
        if (peek_keyword() == Keyword::Region) {
            ++pos_;
            while (pos_ < tokens_.size()) parse_area(region);
        } else {
            parse_area(region);
            if (pos_ < tokens_.size())
                syntax_error("unexpected trailing token '" + tokens_[pos_].text + "'",
                             tokens_[pos_].offset);
        }
        return region;
    }

private:
    std::string_view spec_;
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;

    std::optional<Keyword> peek_keyword() const {
        if (pos_ >= tokens_.size()) return std::nullopt;
        return tokens_[pos_].keyword;
    }

    std::size_t here() const {
        return pos_ < tokens_.size() ? tokens_[pos_].offset : spec_.size();
    }

    void parse_area(Region& region) {
        auto kw = peek_keyword();
        if (!kw || (*kw != Keyword::Circle && *kw != Keyword::Rect && *kw != Keyword::Poly &&
                    *kw != Keyword::Chull && *kw != Keyword::Convex)) {
            std::string got = pos_ < tokens_.size() ? "'" + tokens_[pos_].text + "'" : "end of input";
            syntax_error("expected a shape keyword (CIRCLE, RECT, POLY, CHULL, CONVEX), got " + got,
                         here());
        }
        Keyword shape = *kw;
        std::string shape_name = tokens_[pos_].text;
        ++pos_;

        Keyword frame = Keyword::Cartesian;
        if (auto f = peek_keyword();
            f == Keyword::LatLon || f == Keyword::J2000 || f == Keyword::Cartesian) {
            frame = *f;
            ++pos_;
        }

        std::vector<double> nums;
        std::size_t nums_offset = here();
        while (pos_ < tokens_.size() && tokens_[pos_].number) {
            nums.push_back(*tokens_[pos_].number);
            ++pos_;
        }
        if (pos_ < tokens_.size() && !tokens_[pos_].keyword)
            syntax_error("expected a number or keyword, got '" + tokens_[pos_].text + "'", here());

        switch (shape) {
            case Keyword::Circle: parse_circle(region, frame, nums, nums_offset); break;
            case Keyword::Rect: parse_rect(region, frame, nums, nums_offset); break;
            case Keyword::Poly: parse_poly_or_hull(region, frame, nums, nums_offset, false); break;
            case Keyword::Chull: parse_poly_or_hull(region, frame, nums, nums_offset, true); break;
            case Keyword::Convex: parse_convex(region, frame, nums, nums_offset); break;
            default: break;  // unreachable
        }
    }

    static int values_per_point(Keyword frame) { return frame == Keyword::Cartesian ? 3 : 2; }

    UnitVector point_from(Keyword frame, const double* v) const {
        switch (frame) {
            case Keyword::LatLon: return latlon_to_xyz(v[0], v[1]);
            case Keyword::J2000: return eq_to_xyz(v[0], v[1]);
            default:
                try {
                    return normalize(v[0], v[1], v[2]);
                } catch (const ZeroVectorError&) {
                    throw RegionSemanticError("Cartesian point is too close to (0, 0, 0)");
                }
        }
    }

    void require_count(std::size_t got, std::size_t want, const char* what,
                       std::size_t offset) const {
        if (got != want)
            syntax_error(std::string(what) + ": expected " + std::to_string(want) +
                             " numbers, got " + std::to_string(got),
                         offset);
    }

    void parse_circle(Region& region, Keyword frame, const std::vector<double>& nums,
                      std::size_t offset) {
        std::size_t want = static_cast<std::size_t>(values_per_point(frame)) + 1;
        require_count(nums.size(), want, "CIRCLE", offset);
        UnitVector center = point_from(frame, nums.data());
        double radius = nums.back();
        if (!(radius > 0.0 && radius < kMaxArcMinutes))
            throw RegionSemanticError(
                "circle radius must be positive and less than 180 degrees (10800 arc minutes)");
        region.convexes.push_back(Convex{{Halfspace{center, std::cos(radians(radius / 60.0))}}});
    }

    void parse_rect(Region& region, Keyword frame, const std::vector<double>& nums,
                    std::size_t offset) {
        std::size_t want = static_cast<std::size_t>(values_per_point(frame)) * 2;
        require_count(nums.size(), want, "RECT", offset);
        double lat_min, lon_min, lat_max, lon_max;
        if (frame == Keyword::LatLon) {
            lat_min = nums[0]; lon_min = nums[1]; lat_max = nums[2]; lon_max = nums[3];
        } else if (frame == Keyword::J2000) {
            lon_min = nums[0]; lat_min = nums[1]; lon_max = nums[2]; lat_max = nums[3];
        } else {
            LatLon a = xyz_to_latlon(point_from(frame, nums.data()));
            LatLon b = xyz_to_latlon(point_from(frame, nums.data() + 3));
            lat_min = a.lat; lon_min = a.lon; lat_max = b.lat; lon_max = b.lon;
        }
        lat_min = clamp_lat(lat_min);
        lat_max = clamp_lat(lat_max);
        if (!(lat_min < lat_max))
            throw RegionSemanticError("rect lat_min must be smaller than lat_max");
        double span = wrap_ra(lon_max - lon_min);
        if (span == 0.0)
            throw RegionSemanticError("rect longitude range is empty");
        if (span <= 180.0) {
            region.convexes.push_back(rect_wedge(lat_min, lat_max, lon_min, span));
        } else {
            region.convexes.push_back(rect_wedge(lat_min, lat_max, lon_min, span / 2.0));
            region.convexes.push_back(
                rect_wedge(lat_min, lat_max, lon_min + span / 2.0, span - span / 2.0));
        }
    }

    // Lat band plus a longitude wedge of the given eastward span (0, 180].
    static Convex rect_wedge(double lat_min, double lat_max, double lon_start, double span) {
        double l0 = radians(lon_start);
        double l1 = radians(lon_start + span);
        Convex c;
        c.halfspaces.push_back({{0.0, 0.0, 1.0}, std::sin(radians(lat_min))});
        c.halfspaces.push_back({{0.0, 0.0, -1.0}, -std::sin(radians(lat_max))});
        c.halfspaces.push_back({normalize(-std::sin(l0), std::cos(l0), 0.0), 0.0});
        c.halfspaces.push_back({normalize(std::sin(l1), -std::cos(l1), 0.0), 0.0});
        return c;
    }

    std::vector<UnitVector> read_points(Keyword frame, const std::vector<double>& nums,
                                        std::size_t offset, const char* what) const {
        std::size_t per = static_cast<std::size_t>(values_per_point(frame));
        if (nums.size() % per != 0 || nums.size() / per < 3)
            syntax_error(std::string(what) + ": expected at least 3 points (" +
                             std::to_string(per) + " numbers each), got " +
                             std::to_string(nums.size()) + " numbers",
                         offset);
        std::vector<UnitVector> pts;
        for (std::size_t i = 0; i < nums.size(); i += per)
            pts.push_back(point_from(frame, nums.data() + i));
        return pts;
    }

    void parse_poly_or_hull(Region& region, Keyword frame, const std::vector<double>& nums,
                            std::size_t offset, bool hull) {
        std::vector<UnitVector> pts = read_points(frame, nums, offset, hull ? "CHULL" : "POLY");
        region.convexes.push_back(hull ? hull_to_convex(pts) : poly_to_convex(pts));
    }

    static Convex poly_to_convex(std::vector<UnitVector> pts) {
        std::size_t n = pts.size();
        // Winding from the first well-conditioned vertex triple.
        double orient = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double o = pts[i].dot(pts[(i + 1) % n].cross(pts[(i + 2) % n]));
            if (std::fabs(o) >= kGeomEps) {
                orient = o;
                break;
            }
        }
        if (orient == 0.0)
            throw RegionSemanticError("polygon vertices are degenerate (all on one great circle)");
        if (orient < 0.0) std::reverse(pts.begin(), pts.end());

        Convex c;
        for (std::size_t i = 0; i < n; ++i) {
            UnitVector raw = pts[i].cross(pts[(i + 1) % n]);
            if (raw.norm() < kGeomEps)
                throw RegionSemanticError("polygon has coincident or antipodal adjacent vertices");
            UnitVector edge = normalize(raw);
            for (const UnitVector& p : pts)
                if (edge.dot(p) < -kGeomEps)
                    throw RegionSemanticError("polygon has a bowtie pattern or is not convex");
            c.halfspaces.push_back({edge, 0.0});
        }
        return c;
    }

    static Convex hull_to_convex(const std::vector<UnitVector>& pts) {
        UnitVector c;
        double sx = 0, sy = 0, sz = 0;
        for (const UnitVector& p : pts) { sx += p.x; sy += p.y; sz += p.z; }
        try {
            c = normalize(sx, sy, sz);
        } catch (const ZeroVectorError&) {
            throw RegionSemanticError("hull points are not within a single hemisphere");
        }
        for (const UnitVector& p : pts)
            if (c.dot(p) <= 1e-9)
                throw RegionSemanticError("hull points are not within a single hemisphere");

        Convex out;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            for (std::size_t j = 0; j < pts.size(); ++j) {
                if (i == j) continue;
                UnitVector raw = pts[i].cross(pts[j]);
                if (raw.norm() < kGeomEps) continue;
                UnitVector n = normalize(raw);
                bool supporting = true;
                for (const UnitVector& p : pts)
                    if (n.dot(p) < -kGeomEps) {
                        supporting = false;
                        break;
                    }
                if (!supporting) continue;
                bool duplicate = false;
                for (const Halfspace& h : out.halfspaces)
                    if (h.normal.dot(n) > 1.0 - 1e-9) {
                        duplicate = true;
                        break;
                    }
                if (!duplicate) out.halfspaces.push_back({n, 0.0});
            }
        }
        if (out.halfspaces.empty())
            throw RegionSemanticError("hull points are degenerate");
        return out;
    }

    void parse_convex(Region& region, Keyword frame, const std::vector<double>& nums,
                      std::size_t offset) {
        std::size_t per = static_cast<std::size_t>(values_per_point(frame)) + 1;
        if (nums.size() % per != 0)
            syntax_error("CONVEX: expected groups of " + std::to_string(per) +
                             " numbers, got " + std::to_string(nums.size()),
                         offset);
        Convex c;
        for (std::size_t i = 0; i < nums.size(); i += per) {
            UnitVector dir = point_from(frame, nums.data() + i);
            double d = nums[i + per - 1];
            if (std::fabs(d) > 1.0) {
                if (std::fabs(d) <= 1.0 + kGeomEps) d = std::clamp(d, -1.0, 1.0);
                else throw RegionSemanticError("halfspace displacement must lie in [-1, 1]");
            }
            c.halfspaces.push_back({dir, d});
        }
        region.convexes.push_back(std::move(c));
    }
};

constexpr const char* kGrammarSynopsis =
    "regionSpec := 'REGION' {areaSpec}* | areaSpec\n"
    "areaSpec   := circleSpec | rectSpec | polySpec | hullSpec | convexSpec\n"
    "circleSpec := 'CIRCLE' ('LATLON' lat lon | 'J2000' ra dec | ['CARTESIAN'] x y z) radius\n"
    "rectSpec   := 'RECT'   ('LATLON' {lat lon}2 | 'J2000' {ra dec}2 | ['CARTESIAN'] {x y z}2)\n"
    "polySpec   := 'POLY'   ('LATLON' {lat lon}3+ | 'J2000' {ra dec}3+ | ['CARTESIAN'] {x y z}3+)\n"
    "hullSpec   := 'CHULL'  ('LATLON' {lat lon}3+ | 'J2000' {ra dec}3+ | ['CARTESIAN'] {x y z}3+)\n"
    "convexSpec := 'CONVEX' ('LATLON' {lat lon D}* | 'J2000' {ra dec D}* | ['CARTESIAN'] {x y z D}*)\n"
    "Keywords are case-insensitive; angles are degrees, radii arc minutes.";

}  // namespace

Region parse_region(std::string_view spec) { return Parser(spec).parse(); }

std::string region_error(std::string_view spec) {
    try {
        parse_region(spec);
        return "OK";
    } catch (const HtmError& e) {
        return std::string(e.what()) + "\n" + kGrammarSynopsis;
    }
}

}  // namespace htm
