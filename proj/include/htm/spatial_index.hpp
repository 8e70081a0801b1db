#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "htm/cover.hpp"
#include "htm/region.hpp"

namespace htm {

/// Registered object type codes: 'P' (place), 'S' (station).
bool is_registered_type(char type);

/// One row of the spatial index, ordered by (htm_id, obj_id).
/// htm_id is the depth-21 key of (lat, lon) and (x, y, z) its unit
/// vector; both are recomputed at build time, never trusted.
struct SpatialIndexRow {
    HtmId htm_id = 0;
    double lat = 0.0;
    double lon = 0.0;
    double x = 1.0, y = 0.0, z = 0.0;
    char type = 'P';
    std::uint64_t obj_id = 0;

    UnitVector xyz() const { return {x, y, z}; }
};

struct QueryHit {
    std::uint64_t obj_id = 0;
    char type = 'P';
    double lat = 0.0;
    double lon = 0.0;
    std::optional<ArcMinutes> distance;  // point queries only
};

struct FalsePositiveStats {
    std::uint64_t coarse = 0;
    std::uint64_t careful = 0;
    double fp_ratio = 0.0;  // (coarse - careful) / coarse, 0 when coarse == 0
};

/// Immutable ordered index over typed point objects. Queries run the
/// two-phase plan: a coarse range scan over a trixel cover, then the
/// exact geometric test. Safe for concurrent readers.
class SpatialIndex {
public:
    SpatialIndex() = default;

    /// Sorts, validates invariants (InvariantViolationError), and
    /// rejects duplicate (htm_id, obj_id) pairs (DuplicateKeyError).
    static SpatialIndex build(std::vector<SpatialIndexRow> rows);

    std::span<const SpatialIndexRow> rows() const { return rows_; }
    std::size_t size() const { return rows_.size(); }

    /// Rows with start <= htm_id <= end and the given type, key order.
    std::vector<SpatialIndexRow> range_scan(HtmId start, HtmId end, char type) const;

    /// Objects of `type` strictly within `radius` arc minutes, sorted by
    /// (distance, obj_id).
    std::vector<QueryHit> nearby_latlon(char type, double lat, double lon,
                                        ArcMinutes radius) const;

    /// The closest object of `type` (ties broken by obj_id), or an empty
    /// list when no such object exists. Expanding-radius search.
    std::vector<QueryHit> nearest_latlon(char type, double lat, double lon) const;

    /// Objects of `type` inside the region (boundary inclusive), sorted
    /// by obj_id. Region parse errors propagate.
    std::vector<QueryHit> region_objects(std::string_view spec, char type) const;

    /// Coarse/careful row counts for a region query whose cover refines
    /// to `leaf_depth` in [1, 21]. Unlike the query path, the cover's
    /// range budget is relaxed here so that depth is the binding limit;
    /// a finer depth therefore never raises fp_ratio.
    FalsePositiveStats false_positive_stats(std::string_view spec, char type,
                                            int leaf_depth = kDefaultDepth) const;

    /// Little-endian binary image: "HTMI", format version, row count,
    /// fixed-width rows. Bit-exact for identical row sets.
    void save(std::ostream& out) const;
    void save_file(const std::string& path) const;
    static SpatialIndex load(std::istream& in);
    static SpatialIndex load_file(const std::string& path);

private:
    std::vector<SpatialIndexRow> rows_;

    template <typename Fn>
    void scan(const std::vector<TrixelRange>& ranges, char type, Fn&& fn) const;
};

// --- ingestion -----------------------------------------------------------

struct PlaceRecord {
    std::string place_name;
    std::string state;
    std::int64_t population = 0;
    std::int64_t households = 0;
    std::int64_t land_area = 0;
    std::int64_t water_area = 0;
    double lat = 0.0;
    double lon = 0.0;
};

struct StationRecord {
    std::string station_name;
    std::string state;
    double lat = 0.0;
    double lon = 0.0;
    double drainage_area = 0.0;
    int first_year = 0;
    int years_recorded = 0;
    bool is_active = false;
    bool is_real_time = false;
    std::uint64_t station_number = 0;
};

/// CSV readers. Headers must match examples/docs:
///   placename,state,population,households,landarea,waterarea,lat,lon
///   stationname,state,lat,lon,drainagearea,firstyear,yearsrecorded,isactive,isrealtime,stationnumber
/// RFC-4180 quoting accepted for text fields. Bad rows raise
/// BadRecordError with their line number.
std::vector<PlaceRecord> read_places_csv(std::istream& in);
std::vector<StationRecord> read_stations_csv(std::istream& in);

/// Index rows for places: type 'P', obj_id = the place's own depth-21
/// key. Later records whose key collides with an earlier one are
/// skipped; a note per skip is appended to `warnings` when given.
std::vector<SpatialIndexRow> ingest_places(const std::vector<PlaceRecord>& records,
                                           std::vector<std::string>* warnings = nullptr);

/// Index rows for stations: type 'S', obj_id = station_number.
std::vector<SpatialIndexRow> ingest_stations(const std::vector<StationRecord>& records);

}  // namespace htm
