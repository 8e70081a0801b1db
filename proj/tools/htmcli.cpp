#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "htm/cover.hpp"
#include "htm/errors.hpp"
#include "htm/mesh.hpp"
#include "htm/region.hpp"
#include "htm/region_parse.hpp"
#include "htm/spatial_index.hpp"
#include "htm/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInternal = 3;

std::string fmt(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

int default_depth() {
    if (const char* env = std::getenv("HTM_DEFAULT_DEPTH")) {
        int d = std::atoi(env);
        if (d >= 1 && d <= htm::kMaxDepth) return d;
        std::cerr << "warning: ignoring HTM_DEFAULT_DEPTH='" << env << "' (want 1..31)\n";
    }
    return htm::kDefaultDepth;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw htm::DataError("cannot open region file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void print_ranges(const std::vector<htm::TrixelRange>& ranges) {
    std::cout << "htmidstart,htmidend\n";
    for (const htm::TrixelRange& r : ranges) std::cout << r.start << ',' << r.end << '\n';
}

void print_hits(const std::vector<htm::QueryHit>& hits, bool with_distance) {
    if (with_distance)
        std::cout << "objid,type,lat,lon,distance\n";
    else
        std::cout << "objid,type,lat,lon\n";
    for (const htm::QueryHit& h : hits) {
        std::cout << h.obj_id << ',' << h.type << ',' << fmt(h.lat) << ',' << fmt(h.lon);
        if (with_distance) std::cout << ',' << fmt(*h.distance);
        std::cout << '\n';
    }
}

bool same_hits(const std::vector<htm::QueryHit>& a, const std::vector<htm::QueryHit>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].obj_id != b[i].obj_id || a[i].type != b[i].type) return false;
    return true;
}

// Plain full-scan versions of the three queries, used by --self-check.
std::vector<htm::QueryHit> brute_nearby(const htm::SpatialIndex& idx, char type, double lat,
                                        double lon, double radius) {
    htm::UnitVector c = htm::latlon_to_xyz(lat, lon);
    std::vector<htm::QueryHit> hits;
    for (const htm::SpatialIndexRow& r : idx.rows()) {
        if (r.type != type) continue;
        double d = htm::distance_xyz(c, r.xyz());
        if (d < radius) hits.push_back({r.obj_id, r.type, r.lat, r.lon, d});
    }
    std::sort(hits.begin(), hits.end(), [](const htm::QueryHit& x, const htm::QueryHit& y) {
        if (*x.distance != *y.distance) return *x.distance < *y.distance;
        return x.obj_id < y.obj_id;
    });
    return hits;
}

std::vector<htm::QueryHit> brute_nearest(const htm::SpatialIndex& idx, char type, double lat,
                                         double lon) {
    std::vector<htm::QueryHit> all = brute_nearby(idx, type, lat, lon, 1e18);
    if (all.empty()) return {};
    return {all.front()};
}

std::vector<htm::QueryHit> brute_region(const htm::SpatialIndex& idx, const std::string& spec,
                                        char type) {
    htm::Region region = htm::normalize_region(htm::parse_region(spec));
    std::vector<htm::QueryHit> hits;
    for (const htm::SpatialIndexRow& r : idx.rows()) {
        if (r.type != type) continue;
        if (htm::point_in_region(r.xyz(), region))
            hits.push_back({r.obj_id, r.type, r.lat, r.lon, std::nullopt});
    }
    std::sort(hits.begin(), hits.end(),
              [](const htm::QueryHit& x, const htm::QueryHit& y) { return x.obj_id < y.obj_id; });
    return hits;
}

struct RegionSource {
    std::string inline_spec;
    std::string file_path;

    std::string text() const {
        if (!file_path.empty()) return read_file(file_path);
        return inline_spec;
    }
};

void add_region_source(CLI::App* cmd, RegionSource& src, bool required) {
    auto* a = cmd->add_option("--region", src.inline_spec, "region specification text");
    auto* b = cmd->add_option("--region-file", src.file_path, "file containing the specification");
    a->excludes(b);
    b->excludes(a);
    if (required) {
        cmd->callback([&src, cmd]() {
            if (src.inline_spec.empty() && src.file_path.empty())
                throw CLI::RequiredError(cmd->get_name() + ": --region or --region-file");
        });
    }
}

char parse_type(const std::string& t) {
    if (t.size() == 1 && htm::is_registered_type(t[0])) return t[0];
    throw htm::DataError("unknown object type '" + t + "' (use P or S)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hierarchical Triangular Mesh spatial index"};
    app.require_subcommand(1);

    // version
    auto* cmd_version = app.add_subcommand("version", "print library name and version");

    // point
    double pt_lat = 0, pt_lon = 0;
    int pt_depth = default_depth();
    auto* cmd_point = app.add_subcommand("point", "trixel key of a lat/lon point");
    cmd_point->add_option("lat", pt_lat, "latitude, degrees")->required();
    cmd_point->add_option("lon", pt_lon, "longitude, degrees")->required();
    cmd_point->add_option("--depth", pt_depth, "mesh depth (1..31)");

    // cover
    std::vector<double> cover_circle;
    RegionSource cover_src;
    int cover_depth = default_depth();
    htm::CoverBudget cover_budget;
    auto* cmd_cover = app.add_subcommand("cover", "trixel range cover of a circle or region");
    auto* opt_circle = cmd_cover->add_option("--circle", cover_circle, "lat lon radius_arcmin")
                           ->expected(3);
    add_region_source(cmd_cover, cover_src, false);
    cmd_cover->add_option("--depth", cover_depth, "leaf depth of the cover (1..31)");
    cmd_cover->add_option("--max-ranges", cover_budget.max_ranges, "range-count budget");
    cmd_cover->add_option("--max-frontier", cover_budget.max_frontier, "refinement budget");

    // region check|normalize|table
    auto* cmd_region = app.add_subcommand("region", "parse, simplify, or tabulate a region");
    cmd_region->require_subcommand(1);
    struct RegionArgs {
        std::string spec;
        std::string file;
    };
    RegionArgs reg_args[3];
    const char* reg_names[3] = {"check", "normalize", "table"};
    const char* reg_descs[3] = {"print OK or a diagnostic", "print the normal form string",
                                "print the region table CSV"};
    CLI::App* reg_cmds[3];
    for (int i = 0; i < 3; ++i) {
        reg_cmds[i] = cmd_region->add_subcommand(reg_names[i], reg_descs[i]);
        reg_cmds[i]->add_option("spec", reg_args[i].spec, "region specification");
        reg_cmds[i]->add_option("--file", reg_args[i].file, "read the specification from a file");
    }

    // ingest
    std::string ingest_places_path, ingest_stations_path, ingest_out;
    auto* cmd_ingest = app.add_subcommand("ingest", "build an index from CSV datasets");
    cmd_ingest->add_option("--places", ingest_places_path, "places CSV");
    cmd_ingest->add_option("--stations", ingest_stations_path, "stations CSV");
    cmd_ingest->add_option("--out", ingest_out, "output index file")->required();

    // query nearby|nearest|region
    auto* cmd_query = app.add_subcommand("query", "run a query against an index");
    cmd_query->require_subcommand(1);
    std::string q_index, q_type_str = "P";
    double q_lat = 0, q_lon = 0, q_radius = 0, q_min_distance = 0;
    bool q_self_check = false;
    RegionSource q_region;

    auto* q_nearby = cmd_query->add_subcommand("nearby", "objects within a radius");
    auto* q_nearest = cmd_query->add_subcommand("nearest", "the closest object");
    auto* q_regionc = cmd_query->add_subcommand("region", "objects inside a region");
    for (CLI::App* q : {q_nearby, q_nearest, q_regionc}) {
        q->add_option("--index", q_index, "index file")->required();
        q->add_option("--type", q_type_str, "object type (P or S)")->required();
        q->add_flag("--self-check", q_self_check, "verify against a full scan");
    }
    for (CLI::App* q : {q_nearby, q_nearest}) {
        q->add_option("--lat", q_lat)->required();
        q->add_option("--lon", q_lon)->required();
    }
    q_nearby->add_option("--radius", q_radius, "arc minutes")->required();
    q_nearby->add_option("--min-distance", q_min_distance, "drop hits closer than this");
    add_region_source(q_regionc, q_region, true);

    // bench
    std::string b_index, b_type_str = "P", b_sweep;
    int b_depth = htm::kDefaultDepth;
    RegionSource b_region;
    auto* cmd_bench = app.add_subcommand("bench", "coarse/careful counts and false-positive rate");
    cmd_bench->add_option("--index", b_index, "index file")->required();
    cmd_bench->add_option("--type", b_type_str, "object type (P or S)")->required();
    add_region_source(cmd_bench, b_region, true);
    cmd_bench->add_option("--depth", b_depth, "cover leaf depth");
    cmd_bench->add_option("--depth-sweep", b_sweep, "inclusive depth range, e.g. 9..21");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (cmd_version->parsed()) {
            std::cout << htm::kLibraryName << ' ' << htm::kLibraryVersion << " (built " << __DATE__
                      << ")\n";
            return kExitOk;
        }

        if (cmd_point->parsed()) {
            htm::UnitVector v = htm::latlon_to_xyz(pt_lat, pt_lon);
            htm::HtmId id = htm::lookup_xyz(v, pt_depth);
            std::cout << "htmid,trixel,x,y,z\n"
                      << id << ',' << htm::id_to_string(id) << ',' << fmt(v.x) << ',' << fmt(v.y)
                      << ',' << fmt(v.z) << '\n';
            return kExitOk;
        }

        if (cmd_cover->parsed()) {
            cover_budget.leaf_depth = cover_depth;
            bool have_circle = opt_circle->count() > 0;
            bool have_region = !cover_src.inline_spec.empty() || !cover_src.file_path.empty();
            if (have_circle == have_region) {
                std::cerr << "cover: give exactly one of --circle or --region/--region-file\n";
                return kExitUsage;
            }
            std::vector<htm::TrixelRange> ranges;
            if (have_circle) {
                ranges = htm::cover_circle_latlon(cover_circle[0], cover_circle[1],
                                                  cover_circle[2], cover_budget);
            } else {
                std::string spec = cover_src.text();
                try {
                    htm::Region r = htm::normalize_region(htm::parse_region(spec));
                    ranges = htm::cover_region(r, cover_budget);
                } catch (const htm::RegionSyntaxError&) {
                    std::cerr << htm::region_error(spec) << '\n';
                    return kExitData;
                } catch (const htm::RegionSemanticError&) {
                    std::cerr << htm::region_error(spec) << '\n';
                    return kExitData;
                }
            }
            print_ranges(ranges);
            return kExitOk;
        }

        if (cmd_region->parsed()) {
            int which = reg_cmds[0]->parsed() ? 0 : reg_cmds[1]->parsed() ? 1 : 2;
            std::string spec = !reg_args[which].file.empty() ? read_file(reg_args[which].file)
                                                             : reg_args[which].spec;
            if (which == 0) {
                std::cout << htm::region_error(spec) << '\n';
                return kExitOk;
            }
            htm::Region region;
            try {
                region = htm::normalize_region(htm::parse_region(spec));
            } catch (const htm::HtmError&) {
                std::cerr << htm::region_error(spec) << '\n';
                return kExitData;
            }
            if (which == 1) {
                std::cout << htm::to_normal_form_string(region) << '\n';
            } else {
                std::cout << "convexid,halfspaceid,x,y,z,d\n";
                for (const htm::RegionTableRow& r : htm::region_to_table(region))
                    std::cout << r.convex_id << ',' << r.halfspace_id << ',' << fmt(r.x) << ','
                              << fmt(r.y) << ',' << fmt(r.z) << ',' << fmt(r.d) << '\n';
            }
            return kExitOk;
        }

        if (cmd_ingest->parsed()) {
            if (ingest_places_path.empty() && ingest_stations_path.empty()) {
                std::cerr << "ingest: need --places and/or --stations\n";
                return kExitUsage;
            }
            std::vector<htm::SpatialIndexRow> rows;
            std::vector<std::string> warnings;
            if (!ingest_places_path.empty()) {
                std::ifstream in(ingest_places_path);
                if (!in) throw htm::DataError("cannot open '" + ingest_places_path + "'");
                auto recs = htm::read_places_csv(in);
                auto r = htm::ingest_places(recs, &warnings);
                rows.insert(rows.end(), r.begin(), r.end());
            }
            if (!ingest_stations_path.empty()) {
                std::ifstream in(ingest_stations_path);
                if (!in) throw htm::DataError("cannot open '" + ingest_stations_path + "'");
                auto recs = htm::read_stations_csv(in);
                auto r = htm::ingest_stations(recs);
                rows.insert(rows.end(), r.begin(), r.end());
            }
            for (const std::string& w : warnings) std::cerr << "warning: " << w << '\n';
            htm::SpatialIndex idx = htm::SpatialIndex::build(std::move(rows));
            idx.save_file(ingest_out);
            std::cerr << "wrote " << idx.size() << " rows to " << ingest_out << '\n';
            return kExitOk;
        }

        if (cmd_query->parsed()) {
            char type = parse_type(q_type_str);
            htm::SpatialIndex idx = htm::SpatialIndex::load_file(q_index);
            std::vector<htm::QueryHit> hits;
            std::vector<htm::QueryHit> check;
            bool with_distance = true;
            if (q_nearby->parsed()) {
                hits = idx.nearby_latlon(type, q_lat, q_lon, q_radius);
                if (q_min_distance > 0) {
                    std::erase_if(hits, [&](const htm::QueryHit& h) {
                        return *h.distance < q_min_distance;
                    });
                }
                if (q_self_check) {
                    check = brute_nearby(idx, type, q_lat, q_lon, q_radius);
                    if (q_min_distance > 0)
                        std::erase_if(check, [&](const htm::QueryHit& h) {
                            return *h.distance < q_min_distance;
                        });
                }
            } else if (q_nearest->parsed()) {
                hits = idx.nearest_latlon(type, q_lat, q_lon);
                if (q_self_check) check = brute_nearest(idx, type, q_lat, q_lon);
            } else {
                std::string spec = q_region.text();
                try {
                    hits = idx.region_objects(spec, type);
                } catch (const htm::RegionSyntaxError&) {
                    std::cerr << htm::region_error(spec) << '\n';
                    return kExitData;
                } catch (const htm::RegionSemanticError&) {
                    std::cerr << htm::region_error(spec) << '\n';
                    return kExitData;
                }
                if (q_self_check) check = brute_region(idx, spec, type);
                with_distance = false;
            }
            if (q_self_check && !same_hits(hits, check)) {
                std::cerr << "self-check failed: index result disagrees with full scan\n";
                return kExitInternal;
            }
            print_hits(hits, with_distance);
            return kExitOk;
        }

        if (cmd_bench->parsed()) {
            char type = parse_type(b_type_str);
            htm::SpatialIndex idx = htm::SpatialIndex::load_file(b_index);
            std::string spec = b_region.text();
            int lo = b_depth, hi = b_depth;
            if (!b_sweep.empty()) {
                auto dots = b_sweep.find("..");
                if (dots == std::string::npos) {
                    std::cerr << "bench: --depth-sweep wants A..B\n";
                    return kExitUsage;
                }
                lo = std::atoi(b_sweep.substr(0, dots).c_str());
                hi = std::atoi(b_sweep.substr(dots + 2).c_str());
                if (lo < 1 || hi > htm::kDefaultDepth || lo > hi) {
                    std::cerr << "bench: sweep depths must satisfy 1 <= A <= B <= 21\n";
                    return kExitUsage;
                }
            }
            std::cout << "depth,coarse,careful,fp_ratio\n";
            for (int d = lo; d <= hi; ++d) {
                htm::FalsePositiveStats s;
                try {
                    s = idx.false_positive_stats(spec, type, d);
                } catch (const htm::RegionSyntaxError&) {
                    std::cerr << htm::region_error(spec) << '\n';
                    return kExitData;
                } catch (const htm::RegionSemanticError&) {
                    std::cerr << htm::region_error(spec) << '\n';
                    return kExitData;
                }
                std::cout << d << ',' << s.coarse << ',' << s.careful << ',' << fmt(s.fp_ratio)
                          << '\n';
            }
            return kExitOk;
        }
    } catch (const htm::RegionSyntaxError& e) {
        std::cerr << e.what() << '\n';
        return kExitData;
    } catch (const htm::RegionSemanticError& e) {
        std::cerr << e.what() << '\n';
        return kExitData;
    } catch (const htm::BadRecordError& e) {
        std::cerr << e.what() << '\n';
        return kExitData;
    } catch (const htm::DataError& e) {
        std::cerr << e.what() << '\n';
        return kExitData;
    } catch (const htm::DuplicateKeyError& e) {
        std::cerr << e.what() << '\n';
        return kExitData;
    } catch (const htm::InvariantViolationError& e) {
        std::cerr << e.what() << '\n';
        return kExitInternal;
    } catch (const htm::HtmError& e) {
        std::cerr << e.what() << '\n';
        return kExitData;
    }

    return kExitUsage;
}
