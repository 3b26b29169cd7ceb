#include "vterm/geo.h"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

namespace vterm {
namespace {

TEST(Haversine, Identity) {
  const GeoPoint p{-25.4437, -49.3473};
  EXPECT_EQ(haversine_m(p, p), 0.0);
}

TEST(Haversine, OneDegreeOfEquator) {
  const double expected = 6'371'000.0 * std::numbers::pi / 180.0;
  EXPECT_NEAR(haversine_m({0, 0}, {0, 1}), expected, 1e-6);
  EXPECT_NEAR(haversine_m({0, 0}, {1, 0}), expected, 1e-6);
}

TEST(Haversine, QuarterMeridian) {
  EXPECT_NEAR(haversine_m({0, 0}, {90, 0}), 6'371'000.0 * std::numbers::pi / 2,
              1e-6);
}

TEST(Haversine, SymmetricOnRandomPairs) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> lat(-90, 90), lon(-180, 180);
  for (int i = 0; i < 1000; ++i) {
    const GeoPoint a{lat(rng), lon(rng)};
    const GeoPoint b{lat(rng), lon(rng)};
    EXPECT_EQ(haversine_m(a, b), haversine_m(b, a));
    EXPECT_GE(haversine_m(a, b), 0.0);
  }
}

TEST(Haversine, MatchesSphericalLawOfCosines) {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> jitter(-0.05, 0.05);
  for (int i = 0; i < 200; ++i) {
    const GeoPoint a{-25.4 + jitter(rng), -49.3 + jitter(rng)};
    const GeoPoint b{-25.4 + jitter(rng), -49.3 + jitter(rng)};
    const double r = std::numbers::pi / 180.0;
    const double c = std::sin(a.lat * r) * std::sin(b.lat * r) +
                     std::cos(a.lat * r) * std::cos(b.lat * r) *
                         std::cos((b.lon - a.lon) * r);
    const double oracle = 6'371'000.0 * std::acos(std::min(1.0, c));
    EXPECT_NEAR(haversine_m(a, b), oracle, 0.05);
  }
}

TEST(GeoPoint, Validity) {
  EXPECT_TRUE(is_valid({-90, 180}));
  EXPECT_FALSE(is_valid({91, 0}));
  EXPECT_FALSE(is_valid({0, -181}));
  EXPECT_FALSE(is_valid({std::nan(""), 0}));
}

TEST(LocalFrame, DistancesCloseToPlanar) {
  const LocalFrame frame({-25.4437, -49.3473});
  const GeoPoint a = frame.to_geo(0, 0);
  const GeoPoint b = frame.to_geo(300, 400);
  EXPECT_NEAR(haversine_m(a, b), 500.0, 0.5);
}

}  // namespace
}  // namespace vterm
