#include "vterm/model.h"

#include <gtest/gtest.h>

#include "vterm/error.h"

namespace vterm {
namespace {

TEST(LineCategory, ParsesAccentAndCaseInsensitive) {
  EXPECT_EQ(parse_line_category("ALIMENTADOR"), LineCategory::kAlimentador);
  EXPECT_EQ(parse_line_category("expresso"), LineCategory::kExpresso);
  EXPECT_EQ(parse_line_category("Ligeirão"), LineCategory::kLigeirao);
  EXPECT_EQ(parse_line_category("linha direta"), LineCategory::kLinhaDireta);
  EXPECT_EQ(parse_line_category("LINHA_DIRETA"), LineCategory::kLinhaDireta);
  EXPECT_EQ(parse_line_category("Madrugueiro"), LineCategory::kMadrugueiro);
  EXPECT_FALSE(parse_line_category("METRO").has_value());
}

TEST(LineCategory, RoundTripsAllValues) {
  for (LineCategory c : kAllLineCategories) {
    EXPECT_EQ(parse_line_category(to_string(c)), c);
  }
}

TEST(StopType, ParsesNames) {
  for (StopType t : kAllStopTypes) EXPECT_EQ(parse_stop_type(to_string(t)), t);
  EXPECT_EQ(parse_stop_type("tube station"), StopType::kTubeStation);
  EXPECT_EQ(parse_stop_type("Estação Tubo"), StopType::kTubeStation);
  EXPECT_FALSE(parse_stop_type("airport").has_value());
}

ItineraryDef iti(std::vector<ItineraryStop> stops, bool circular) {
  return {"L", "D", std::move(stops), circular};
}

TEST(CheckItinerary, Invariants) {
  EXPECT_NO_THROW(check_itinerary(iti({{1, "a"}, {2, "b"}}, false)));
  EXPECT_NO_THROW(check_itinerary(iti({{1, "a"}, {2, "b"}, {3, "a"}}, true)));
  EXPECT_THROW(check_itinerary(iti({{1, "a"}}, false)), InvariantError);
  EXPECT_THROW(check_itinerary(iti({{2, "a"}, {2, "b"}}, false)), InvariantError);
  EXPECT_THROW(check_itinerary(iti({{3, "a"}, {2, "b"}}, false)), InvariantError);
  EXPECT_THROW(check_itinerary(iti({{1, "a"}, {2, "b"}, {3, "a"}}, false)),
               InvariantError);
  EXPECT_THROW(check_itinerary(iti({{1, "a"}, {2, "b"}}, true)), InvariantError);
}

TEST(GroupFixes, KeysOnVehicleLineDay) {
  auto fix = [](const char* v, const char* l, int day, int s) {
    return GpsFix{v, l, {0, 0}, {{2022, 11, day}, s}};
  };
  const std::vector<GpsFix> sorted = {fix("A", "1", 7, 10), fix("A", "1", 7, 20),
                                      fix("A", "1", 8, 5),  fix("A", "2", 7, 1),
                                      fix("B", "1", 7, 3)};
  const auto groups = group_fixes(sorted);
  ASSERT_EQ(groups.size(), 4u);
  EXPECT_EQ(groups[0].fixes.size(), 2u);
  EXPECT_EQ(groups[1].date, (ServiceDate{2022, 11, 8}));
  EXPECT_EQ(groups[2].line_code, "2");
  EXPECT_EQ(groups[3].vehicle_id, "B");
}

}  // namespace
}  // namespace vterm
