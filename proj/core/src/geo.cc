#include "vterm/geo.h"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace vterm {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

}  // namespace

bool is_valid(const GeoPoint& p) {
  return std::isfinite(p.lat) && std::isfinite(p.lon) && p.lat >= -90.0 &&
         p.lat <= 90.0 && p.lon >= -180.0 && p.lon <= 180.0;
}

double haversine_m(const GeoPoint& a, const GeoPoint& b) {
  const double phi1 = a.lat * kDegToRad;
  const double phi2 = b.lat * kDegToRad;
  const double dphi = (b.lat - a.lat) * kDegToRad;
  const double dlambda = (b.lon - a.lon) * kDegToRad;
  const double s1 = std::sin(dphi / 2.0);
  const double s2 = std::sin(dlambda / 2.0);
  double h = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
  h = std::min(1.0, std::max(0.0, h));
  return 2.0 * kEarthRadiusM * std::asin(std::sqrt(h));
}

LocalFrame::LocalFrame(GeoPoint anchor)
    : anchor_(anchor),
      meters_per_deg_lat_(kEarthRadiusM * kDegToRad),
      meters_per_deg_lon_(kEarthRadiusM * kDegToRad *
                          std::cos(anchor.lat * kDegToRad)) {}

GeoPoint LocalFrame::to_geo(double east_m, double north_m) const {
  return {anchor_.lat + north_m / meters_per_deg_lat_,
          anchor_.lon + east_m / meters_per_deg_lon_};
}

}  // namespace vterm
