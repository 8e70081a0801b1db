#pragma once

#include <cmath>

namespace htm {

// Angles are degrees, distances are arc minutes (one arc minute of great
// circle equals one nautical mile on this sphere model).
using ArcMinutes = double;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

/// Maximum great-circle separation: 180 degrees.
inline constexpr ArcMinutes kMaxArcMinutes = 10800.0;

/// Cartesian inputs with norm below this cannot define a direction.
inline constexpr double kZeroVectorTol = 1e-9;

/// Greenwich latitude/longitude, degrees. Latitude is clamped to
/// [-90, 90] on conversion; longitude wraps.
struct LatLon {
    double lat = 0.0;
    double lon = 0.0;
};

/// J2000 right ascension/declination, degrees. ra is reported in
/// [0, 360), dec clamped to [-90, 90].
struct Equatorial {
    double ra = 0.0;
    double dec = 0.0;
};

/// Point on the unit sphere. The conversion functions below always
/// produce unit-norm vectors; raw aggregates are not re-checked.
struct UnitVector {
    double x = 1.0;
    double y = 0.0;
    double z = 0.0;

    double dot(const UnitVector& o) const { return x * o.x + y * o.y + z * o.z; }

    UnitVector cross(const UnitVector& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }

    double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

/// Normalizes (x, y, z). Throws ZeroVectorError when the norm is below
/// kZeroVectorTol.
UnitVector normalize(double x, double y, double z);
inline UnitVector normalize(const UnitVector& v) { return normalize(v.x, v.y, v.z); }

/// Normalizes a point-valued input, mapping a degenerate (0,0,0) to
/// (1,0,0) instead of failing. Used by the key and cover entry points.
UnitVector normalize_point_input(double x, double y, double z);

double degrees(double radians);
double radians(double degrees);

/// Wraps a longitude-like angle into [-180, 180).
double wrap_lon(double lon);
/// Wraps a right-ascension-like angle into [0, 360).
double wrap_ra(double ra);
/// Clamps a latitude/declination to [-90, 90].
double clamp_lat(double lat);

/// x = cos(lat)cos(lon), y = cos(lat)sin(lon), z = sin(lat).
/// Latitude is clamped to [-90, 90]; the poles map to exactly (0,0,±1).
UnitVector latlon_to_xyz(const LatLon& p);
inline UnitVector latlon_to_xyz(double lat, double lon) { return latlon_to_xyz({lat, lon}); }

/// Inverse of latlon_to_xyz. Accepts any non-degenerate vector (it is
/// normalized first). At the poles longitude is reported as 0.
LatLon xyz_to_latlon(double x, double y, double z);
inline LatLon xyz_to_latlon(const UnitVector& v) { return xyz_to_latlon(v.x, v.y, v.z); }

UnitVector eq_to_xyz(const Equatorial& p);
inline UnitVector eq_to_xyz(double ra, double dec) { return eq_to_xyz({ra, dec}); }

Equatorial xyz_to_eq(double x, double y, double z);
inline Equatorial xyz_to_eq(const UnitVector& v) { return xyz_to_eq(v.x, v.y, v.z); }

/// Great-circle separation in arc minutes. Inputs are normalized first;
/// degenerate vectors raise ZeroVectorError.
ArcMinutes distance_xyz(const UnitVector& a, const UnitVector& b);
ArcMinutes distance_latlon(const LatLon& a, const LatLon& b);
inline ArcMinutes distance_latlon(double lat1, double lon1, double lat2, double lon2) {
    return distance_latlon({lat1, lon1}, {lat2, lon2});
}
ArcMinutes distance_eq(const Equatorial& a, const Equatorial& b);
inline ArcMinutes distance_eq(double ra1, double dec1, double ra2, double dec2) {
    return distance_eq({ra1, dec1}, {ra2, dec2});
}

}  // namespace htm
