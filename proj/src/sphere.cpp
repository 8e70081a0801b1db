#include "htm/sphere.hpp"

#include <algorithm>

#include "htm/errors.hpp"

namespace htm {

double degrees(double r) { return r * (180.0 / kPi); }
double radians(double d) { return d * (kPi / 180.0); }

double wrap_lon(double lon) {
    double w = std::fmod(lon + 180.0, 360.0);
    if (w < 0.0) w += 360.0;
    return w - 180.0;
}

double wrap_ra(double ra) {
    double w = std::fmod(ra, 360.0);
    if (w < 0.0) w += 360.0;
    return w;
}

double clamp_lat(double lat) { return std::clamp(lat, -90.0, 90.0); }

UnitVector normalize(double x, double y, double z) {
    double n = std::sqrt(x * x + y * y + z * z);
    if (!(n >= kZeroVectorTol)) throw ZeroVectorError();
    // Already-unit inputs pass through bit-exact, so re-normalizing a
    // canonical vector cannot perturb its printed form.
    if (std::fabs(n - 1.0) <= 1e-12) return {x, y, z};
    return {x / n, y / n, z / n};
}

UnitVector normalize_point_input(double x, double y, double z) {
    double n = std::sqrt(x * x + y * y + z * z);
    if (!(n >= kZeroVectorTol)) return {1.0, 0.0, 0.0};
    if (std::fabs(n - 1.0) <= 1e-12) return {x, y, z};
    return {x / n, y / n, z / n};
}

UnitVector latlon_to_xyz(const LatLon& p) {
    double lat = clamp_lat(p.lat);
    if (lat == 90.0) return {0.0, 0.0, 1.0};
    if (lat == -90.0) return {0.0, 0.0, -1.0};
    double la = radians(lat);
    double lo = radians(p.lon);
    return {std::cos(la) * std::cos(lo), std::cos(la) * std::sin(lo), std::sin(la)};
}

LatLon xyz_to_latlon(double x, double y, double z) {
    UnitVector v = normalize(x, y, z);
    // atan2(0, 0) == 0, so the poles report longitude 0.
    double lat = degrees(std::atan2(v.z, std::hypot(v.x, v.y)));
    double lon = (v.x == 0.0 && v.y == 0.0) ? 0.0 : degrees(std::atan2(v.y, v.x));
    return {clamp_lat(lat), wrap_lon(lon)};
}

UnitVector eq_to_xyz(const Equatorial& p) { return latlon_to_xyz({p.dec, p.ra}); }

Equatorial xyz_to_eq(double x, double y, double z) {
    LatLon ll = xyz_to_latlon(x, y, z);
    return {wrap_ra(ll.lon), ll.lat};
}

ArcMinutes distance_xyz(const UnitVector& a, const UnitVector& b) {
    UnitVector an = normalize(a);
    UnitVector bn = normalize(b);
    // Identical inputs are exactly coincident; the dot product alone
    // would round below 1 and report a few centimeters.
    if (an.x == bn.x && an.y == bn.y && an.z == bn.z) return 0.0;
    double c = std::clamp(an.dot(bn), -1.0, 1.0);
    return std::acos(c) * (kMaxArcMinutes / kPi);
}

ArcMinutes distance_latlon(const LatLon& a, const LatLon& b) {
    return distance_xyz(latlon_to_xyz(a), latlon_to_xyz(b));
}

ArcMinutes distance_eq(const Equatorial& a, const Equatorial& b) {
    return distance_xyz(eq_to_xyz(a), eq_to_xyz(b));
}

}  // namespace htm
