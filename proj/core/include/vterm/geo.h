#pragma once

#include <compare>

namespace vterm {

inline constexpr double kEarthRadiusM = 6'371'000.0;

struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

bool is_valid(const GeoPoint& p);

/// Great-circle distance in meters on a sphere of radius kEarthRadiusM.
double haversine_m(const GeoPoint& a, const GeoPoint& b);

/// Equirectangular tangent-plane projection around an anchor. Used to lay out
/// synthetic networks in meters; not a replacement for haversine_m.
class LocalFrame {
 public:
  explicit LocalFrame(GeoPoint anchor);

  GeoPoint to_geo(double east_m, double north_m) const;

 private:
  GeoPoint anchor_;
  double meters_per_deg_lat_;
  double meters_per_deg_lon_;
};

}  // namespace vterm
