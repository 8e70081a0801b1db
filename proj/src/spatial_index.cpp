#include "htm/spatial_index.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include "htm/errors.hpp"
#include "htm/region_parse.hpp"

namespace htm {

namespace {

constexpr char kMagic[4] = {'H', 'T', 'M', 'I'};
constexpr std::uint32_t kFormatVersion = 1;

bool key_less(const SpatialIndexRow& a, const SpatialIndexRow& b) {
    if (a.htm_id != b.htm_id) return a.htm_id < b.htm_id;
    return a.obj_id < b.obj_id;
}

ArcMinutes unit_distance(const UnitVector& a, const UnitVector& b) {
    double c = std::clamp(a.dot(b), -1.0, 1.0);
    return std::acos(c) * (kMaxArcMinutes / kPi);
}

void write_u32(std::ostream& out, std::uint32_t v) {
    char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(b, 4);
}

void write_u64(std::ostream& out, std::uint64_t v) {
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(b, 8);
}

void write_f64(std::ostream& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    write_u64(out, bits);
}

std::uint32_t read_u32(std::istream& in) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    if (!in) throw DataError("index file truncated");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
}

std::uint64_t read_u64(std::istream& in) {
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    if (!in) throw DataError("index file truncated");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

double read_f64(std::istream& in) {
    std::uint64_t bits = read_u64(in);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

}  // namespace

bool is_registered_type(char type) { return type == 'P' || type == 'S'; }

SpatialIndex SpatialIndex::build(std::vector<SpatialIndexRow> rows) {
    for (const SpatialIndexRow& r : rows) {
        if (!is_registered_type(r.type))
            throw InvariantViolationError(std::string("unregistered object type '") + r.type +
                                          "'");
        UnitVector v = latlon_to_xyz(r.lat, r.lon);
        if (std::fabs(v.x - r.x) > 1e-12 || std::fabs(v.y - r.y) > 1e-12 ||
            std::fabs(v.z - r.z) > 1e-12)
            throw InvariantViolationError("stored (x, y, z) disagrees with lat/lon for objId " +
                                          std::to_string(r.obj_id));
        if (lookup_xyz(v, kDefaultDepth) != r.htm_id)
            throw InvariantViolationError("stored HtmID disagrees with lat/lon for objId " +
                                          std::to_string(r.obj_id));
    }
    std::sort(rows.begin(), rows.end(), key_less);
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i - 1].htm_id == rows[i].htm_id && rows[i - 1].obj_id == rows[i].obj_id)
            throw DuplicateKeyError("duplicate key (" + std::to_string(rows[i].htm_id) + ", " +
                                    std::to_string(rows[i].obj_id) + ")");
    SpatialIndex idx;
    idx.rows_ = std::move(rows);
    return idx;
}

template <typename Fn>
void SpatialIndex::scan(const std::vector<TrixelRange>& ranges, char type, Fn&& fn) const {
    for (const TrixelRange& range : ranges) {
        auto it = std::lower_bound(rows_.begin(), rows_.end(), range.start,
                                   [](const SpatialIndexRow& r, HtmId key) { return r.htm_id < key; });
        for (; it != rows_.end() && it->htm_id <= range.end; ++it)
            if (it->type == type) fn(*it);
    }
}

std::vector<SpatialIndexRow> SpatialIndex::range_scan(HtmId start, HtmId end, char type) const {
    std::vector<SpatialIndexRow> out;
    scan({{start, end}}, type, [&](const SpatialIndexRow& r) { out.push_back(r); });
    return out;
}

std::vector<QueryHit> SpatialIndex::nearby_latlon(char type, double lat, double lon,
                                                  ArcMinutes radius) const {
    UnitVector center = latlon_to_xyz(lat, lon);
    std::vector<QueryHit> hits;
    scan(cover_circle_xyz(center.x, center.y, center.z, radius), type,
         [&](const SpatialIndexRow& r) {
             ArcMinutes d = unit_distance(center, r.xyz());
             if (d < radius) hits.push_back({r.obj_id, r.type, r.lat, r.lon, d});
         });
    std::sort(hits.begin(), hits.end(), [](const QueryHit& a, const QueryHit& b) {
        if (*a.distance != *b.distance) return *a.distance < *b.distance;
        return a.obj_id < b.obj_id;
    });
    return hits;
}

std::vector<QueryHit> SpatialIndex::nearest_latlon(char type, double lat, double lon) const {
    for (ArcMinutes radius = 10.0;; radius *= 4.0) {
        ArcMinutes r = std::min(radius, kMaxArcMinutes);
        std::vector<QueryHit> hits = nearby_latlon(type, lat, lon, r);
        if (!hits.empty()) {
            // Re-scan at the best distance plus a hair so ties at
            // exactly that distance cannot hide in an unscanned trixel.
            ArcMinutes confirm = std::min(*hits.front().distance + 1e-9, kMaxArcMinutes);
            std::vector<QueryHit> final_hits = nearby_latlon(type, lat, lon, confirm);
            return {final_hits.empty() ? hits.front() : final_hits.front()};
        }
        if (r >= kMaxArcMinutes) break;
    }
    // Nothing strictly within 10800': only exactly-antipodal objects
    // remain possible; settle it with a direct scan.
    UnitVector center = latlon_to_xyz(lat, lon);
    const SpatialIndexRow* best = nullptr;
    ArcMinutes best_d = 0.0;
    for (const SpatialIndexRow& r : rows_) {
        if (r.type != type) continue;
        ArcMinutes d = unit_distance(center, r.xyz());
        if (!best || d < best_d || (d == best_d && r.obj_id < best->obj_id)) {
            best = &r;
            best_d = d;
        }
    }
    if (!best) return {};
    return {QueryHit{best->obj_id, best->type, best->lat, best->lon, best_d}};
}

std::vector<QueryHit> SpatialIndex::region_objects(std::string_view spec, char type) const {
    Region region = normalize_region(parse_region(spec));
    std::vector<QueryHit> hits;
    scan(cover_region(region), type, [&](const SpatialIndexRow& r) {
        if (point_in_region(r.xyz(), region))
            hits.push_back({r.obj_id, r.type, r.lat, r.lon, std::nullopt});
    });
    std::sort(hits.begin(), hits.end(),
              [](const QueryHit& a, const QueryHit& b) { return a.obj_id < b.obj_id; });
    return hits;
}

FalsePositiveStats SpatialIndex::false_positive_stats(std::string_view spec, char type,
                                                      int leaf_depth) const {
    if (leaf_depth < 1 || leaf_depth > kDefaultDepth)
        throw DepthExceededError("bench cover depth must lie in [1, 21]");
    Region region = normalize_region(parse_region(spec));
    // The bench measures key granularity, so the cover depth has to be
    // the binding limit; the query-path range budget would flatten the
    // sweep long before depth 21.
    CoverBudget budget;
    budget.leaf_depth = leaf_depth;
    budget.max_ranges = 1 << 16;
    budget.max_frontier = 1 << 16;
    std::vector<TrixelRange> ranges =
        ranges_at_depth(cover_region(region, budget), leaf_depth, kDefaultDepth);
    FalsePositiveStats stats;
    scan(ranges, type, [&](const SpatialIndexRow& r) {
        ++stats.coarse;
        if (point_in_region(r.xyz(), region)) ++stats.careful;
    });
    stats.fp_ratio = stats.coarse == 0
                         ? 0.0
                         : static_cast<double>(stats.coarse - stats.careful) /
                               static_cast<double>(stats.coarse);
    return stats;
}

void SpatialIndex::save(std::ostream& out) const {
    out.write(kMagic, 4);
    write_u32(out, kFormatVersion);
    write_u64(out, rows_.size());
    for (const SpatialIndexRow& r : rows_) {
        write_u64(out, r.htm_id);
        write_f64(out, r.lat);
        write_f64(out, r.lon);
        write_f64(out, r.x);
        write_f64(out, r.y);
        write_f64(out, r.z);
        out.put(r.type);
        write_u64(out, r.obj_id);
    }
    if (!out) throw DataError("failed to write index");
}

void SpatialIndex::save_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open '" + path + "' for writing");
    save(out);
}

SpatialIndex SpatialIndex::load(std::istream& in) {
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw DataError("not an index file (bad magic)");
    std::uint32_t version = read_u32(in);
    if (version != kFormatVersion)
        throw DataError("unsupported index format version " + std::to_string(version));
    std::uint64_t count = read_u64(in);
    std::vector<SpatialIndexRow> rows;
    rows.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        SpatialIndexRow r;
        r.htm_id = read_u64(in);
        r.lat = read_f64(in);
        r.lon = read_f64(in);
        r.x = read_f64(in);
        r.y = read_f64(in);
        r.z = read_f64(in);
        int c = in.get();
        if (c == std::char_traits<char>::eof()) throw DataError("index file truncated");
        r.type = static_cast<char>(c);
        r.obj_id = read_u64(in);
        rows.push_back(r);
    }
    return build(std::move(rows));
}

SpatialIndex SpatialIndex::load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open index file '" + path + "'");
    return load(in);
}

// --- CSV ingestion --------------------------------------------------------

namespace {

// One CSV line -> fields; RFC-4180 quotes, no embedded newlines.
std::vector<std::string> split_csv_line(const std::string& line, std::size_t line_no) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"' && cur.empty()) {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (quoted) throw BadRecordError("unterminated quote", line_no);
    fields.push_back(std::move(cur));
    return fields;
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

void expect_header(const std::string& line, const std::vector<std::string>& want) {
    std::vector<std::string> got = split_csv_line(line, 1);
    for (std::string& f : got) f = lower(f);
    if (got != want) {
        std::string msg = "unexpected CSV header; want";
        for (const std::string& w : want) msg += " " + w;
        throw BadRecordError(msg, 1);
    }
}

double parse_double(const std::string& s, const char* what, std::size_t line_no) {
    const char* begin = s.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end != begin + s.size() || s.empty() || !std::isfinite(v))
        throw BadRecordError(std::string("bad ") + what + " value '" + s + "'", line_no);
    return v;
}

std::int64_t parse_int(const std::string& s, const char* what, std::size_t line_no) {
    const char* begin = s.c_str();
    char* end = nullptr;
    long long v = std::strtoll(begin, &end, 10);
    if (end != begin + s.size() || s.empty())
        throw BadRecordError(std::string("bad ") + what + " value '" + s + "'", line_no);
    return v;
}

bool parse_bool(const std::string& s, const char* what, std::size_t line_no) {
    std::string l = lower(s);
    if (l == "1" || l == "true") return true;
    if (l == "0" || l == "false") return false;
    throw BadRecordError(std::string("bad ") + what + " value '" + s + "'", line_no);
}

bool next_line(std::istream& in, std::string& line) {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

}  // namespace

std::vector<PlaceRecord> read_places_csv(std::istream& in) {
    std::string line;
    if (!next_line(in, line)) throw BadRecordError("empty places file", 1);
    expect_header(line, {"placename", "state", "population", "households", "landarea",
                         "waterarea", "lat", "lon"});
    std::vector<PlaceRecord> out;
    std::size_t line_no = 1;
    while (next_line(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> f = split_csv_line(line, line_no);
        if (f.size() != 8) throw BadRecordError("expected 8 fields", line_no);
        PlaceRecord r;
        r.place_name = f[0];
        r.state = f[1];
        r.population = parse_int(f[2], "population", line_no);
        r.households = parse_int(f[3], "households", line_no);
        r.land_area = parse_int(f[4], "landarea", line_no);
        r.water_area = parse_int(f[5], "waterarea", line_no);
        r.lat = parse_double(f[6], "lat", line_no);
        r.lon = parse_double(f[7], "lon", line_no);
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<StationRecord> read_stations_csv(std::istream& in) {
    std::string line;
    if (!next_line(in, line)) throw BadRecordError("empty stations file", 1);
    expect_header(line, {"stationname", "state", "lat", "lon", "drainagearea", "firstyear",
                         "yearsrecorded", "isactive", "isrealtime", "stationnumber"});
    std::vector<StationRecord> out;
    std::size_t line_no = 1;
    while (next_line(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> f = split_csv_line(line, line_no);
        if (f.size() != 10) throw BadRecordError("expected 10 fields", line_no);
        StationRecord r;
        r.station_name = f[0];
        r.state = f[1];
        r.lat = parse_double(f[2], "lat", line_no);
        r.lon = parse_double(f[3], "lon", line_no);
        r.drainage_area = parse_double(f[4], "drainagearea", line_no);
        r.first_year = static_cast<int>(parse_int(f[5], "firstyear", line_no));
        r.years_recorded = static_cast<int>(parse_int(f[6], "yearsrecorded", line_no));
        r.is_active = parse_bool(f[7], "isactive", line_no);
        r.is_real_time = parse_bool(f[8], "isrealtime", line_no);
        r.station_number = static_cast<std::uint64_t>(parse_int(f[9], "stationnumber", line_no));
        out.push_back(std::move(r));
    }
    return out;
}

namespace {

SpatialIndexRow make_row(double lat, double lon, char type, std::uint64_t obj_id) {
    UnitVector v = latlon_to_xyz(lat, lon);
    SpatialIndexRow r;
    r.htm_id = lookup_xyz(v, kDefaultDepth);
    r.lat = lat;
    r.lon = lon;
    r.x = v.x;
    r.y = v.y;
    r.z = v.z;
    r.type = type;
    r.obj_id = obj_id;
    return r;
}

}  // namespace

std::vector<SpatialIndexRow> ingest_places(const std::vector<PlaceRecord>& records,
                                           std::vector<std::string>* warnings) {
    std::vector<SpatialIndexRow> rows;
    std::unordered_set<HtmId> seen;
    for (const PlaceRecord& p : records) {
        SpatialIndexRow row = make_row(p.lat, p.lon, 'P', 0);
        row.obj_id = row.htm_id;  // a place is keyed by its own trixel
        if (!seen.insert(row.htm_id).second) {
            if (warnings)
                warnings->push_back("duplicate place key " + std::to_string(row.htm_id) +
                                    " for '" + p.place_name + "'; record skipped");
            continue;
        }
        rows.push_back(row);
    }
    return rows;
}

std::vector<SpatialIndexRow> ingest_stations(const std::vector<StationRecord>& records) {
    std::vector<SpatialIndexRow> rows;
    rows.reserve(records.size());
    for (const StationRecord& s : records)
        rows.push_back(make_row(s.lat, s.lon, 'S', s.station_number));
    return rows;
}

}  // namespace htm
