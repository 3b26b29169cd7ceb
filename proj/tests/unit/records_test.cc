#include "vterm/records.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "vterm/error.h"
#include "vterm/synthetic.h"

namespace vterm {
namespace {

TEST(ParseLines, Line829Line) {
  std::istringstream in(
      R"({"code":"829","name":"UNIVERSIDADE POSITIVO","category":"ALIMENTADOR","color":"LARANJA"})");
  const auto lines = parse_lines(in);
  ASSERT_EQ(lines.size(), 1u);
  EXPECT_EQ(lines[0].code, "829");
  EXPECT_EQ(lines[0].category, LineCategory::kAlimentador);
  EXPECT_EQ(lines[0].color, "LARANJA");
}

TEST(ParseLines, EmptyStream) {
  std::istringstream in("");
  EXPECT_TRUE(parse_lines(in).empty());
}

TEST(ParseLines, LowerCaseCategory) {
  std::istringstream in(
      R"({"code":"X1","name":"n","category":"expresso","color":"VERMELHO"})");
  EXPECT_EQ(parse_lines(in).at(0).category, LineCategory::kExpresso);
}

TEST(ParseLines, ErrorsCarryLineNumbers) {
  std::istringstream bad_json("{\"code\":\"1\",\"name\":\"a\",\"category\":\"TRONCAL\",\"color\":\"c\"}\n{oops\n");
  try {
    parse_lines(bad_json);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  std::istringstream unknown(R"({"code":"1","name":"a","category":"METRO","color":"c"})");
  try {
    parse_lines(unknown);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("METRO"), std::string::npos);
  }
}

std::string point(const std::string& stop, double lat, double lon,
                  const std::string& line, int seq,
                  const std::string& type = "STREET_STOP") {
  std::ostringstream os;
  os.precision(10);
  os << R"({"stop_id":")" << stop << R"(","name":"n )" << stop
     << R"(","stop_type":")" << type << R"(","lat":)" << lat << R"(,"lon":)"
     << lon << R"(,"line_code":")" << line << R"(","direction":"IDA","seq":)"
     << seq << "}\n";
  return os.str();
}

TEST(ParseLinePoints, Line829ItineraryIsCircular) {
  const auto fixture = synth::line829(false);
  std::ostringstream out;
  LinePoints lp;
  for (const auto& [id, s] : fixture.dataset.stops) lp.stops.push_back(s);
  lp.itineraries = fixture.dataset.itineraries;
  write_line_points(out, lp);
  std::istringstream in(out.str());
  const LinePoints parsed = parse_line_points(in);
  ASSERT_EQ(parsed.itineraries.size(), 1u);
  const ItineraryDef& iti = parsed.itineraries[0];
  EXPECT_EQ(iti.size(), 11u);
  EXPECT_TRUE(iti.circular);
  EXPECT_EQ(iti.stops.front().stop_id, iti.stops.back().stop_id);
  EXPECT_EQ(parsed.stops.size(), 10u);
  const auto term = std::find_if(parsed.stops.begin(), parsed.stops.end(),
                                 [&](const BusStop& s) {
                                   return s.stop_id == iti.stops.front().stop_id;
                                 });
  EXPECT_EQ(term->name, "Terminal Campo Comprido");
}

TEST(ParseLinePoints, SingleRecordViolatesLength) {
  std::istringstream in(point("A", -25.4, -49.3, "1", 1));
  EXPECT_THROW(parse_line_points(in), Error);
}

TEST(ParseLinePoints, SharedStopDeduplicated) {
  std::istringstream in(point("A", -25.4, -49.3, "1", 1) +
                        point("B", -25.41, -49.3, "1", 2) +
                        point("A", -25.4, -49.3, "2", 1) +
                        point("C", -25.4, -49.31, "2", 2));
  const LinePoints lp = parse_line_points(in);
  EXPECT_EQ(lp.stops.size(), 3u);
  EXPECT_EQ(lp.itineraries.size(), 2u);
}

TEST(ParseLinePoints, SortsBySeq) {
  std::istringstream in(point("C", -25.42, -49.3, "1", 3) +
                        point("A", -25.4, -49.3, "1", 1) +
                        point("B", -25.41, -49.3, "1", 2));
  const LinePoints lp = parse_line_points(in);
  ASSERT_EQ(lp.itineraries.size(), 1u);
  EXPECT_EQ(lp.itineraries[0].stops[0].stop_id, "A");
  EXPECT_EQ(lp.itineraries[0].stops[2].stop_id, "C");
  EXPECT_FALSE(lp.itineraries[0].circular);
}

TEST(ParseLinePoints, DuplicateSeqAndConflictingCoordinates) {
  std::istringstream dup(point("A", -25.4, -49.3, "1", 1) +
                         point("B", -25.41, -49.3, "1", 1));
  EXPECT_THROW(parse_line_points(dup), ParseError);
  std::istringstream moved(point("A", -25.4, -49.3, "1", 1) +
                           point("B", -25.41, -49.3, "1", 2) +
                           point("A", -25.4001, -49.3, "2", 1));
  EXPECT_THROW(parse_line_points(moved), ParseError);
}

TEST(ParseVehicleFixes, Line829Record) {
  std::istringstream in(
      R"({"vehicle_id":"BA020","line_code":"829","lat":-25.44123,"lon":-49.33456,"dthr":"07/11/2022 06:04:51"})");
  const auto fixes = parse_vehicle_fixes(in);
  ASSERT_EQ(fixes.size(), 1u);
  EXPECT_EQ(fixes[0].vehicle_id, "BA020");
  EXPECT_EQ(fixes[0].time.date, (ServiceDate{2022, 11, 7}));
  EXPECT_EQ(fixes[0].time.seconds, 21891);
}

TEST(ParseVehicleFixes, DuplicatesCollapsedAndSorted) {
  const std::string a =
      R"({"vehicle_id":"V","line_code":"1","lat":-25.4,"lon":-49.3,"dthr":"07/11/2022 06:10:00"})"
      "\n";
  const std::string b =
      R"({"vehicle_id":"V","line_code":"1","lat":-25.5,"lon":-49.3,"dthr":"07/11/2022 06:05:00"})"
      "\n";
  const std::string near_dup =
      R"({"vehicle_id":"V","line_code":"1","lat":-25.40001,"lon":-49.3,"dthr":"07/11/2022 06:10:00"})"
      "\n";
  std::istringstream in(a + b + a + near_dup);
  const auto fixes = parse_vehicle_fixes(in);
  ASSERT_EQ(fixes.size(), 3u);
  EXPECT_EQ(fixes[0].time.seconds, 6 * 3600 + 5 * 60);
  EXPECT_LE(fixes[1].time, fixes[2].time);
}

TEST(ParseVehicleFixes, RecordLevelErrors) {
  std::istringstream bad_time(
      R"({"vehicle_id":"V","line_code":"1","lat":-25.4,"lon":-49.3,"dthr":"2022-11-07"})");
  EXPECT_THROW(parse_vehicle_fixes(bad_time), ParseError);
  std::istringstream bad_lat(
      R"({"vehicle_id":"V","line_code":"1","lat":-95.4,"lon":-49.3,"dthr":"07/11/2022 06:10:00"})");
  EXPECT_THROW(parse_vehicle_fixes(bad_lat), ParseError);
}

TEST(Records, RoundTripOfFixtureFiles) {
  const Dataset d = synth::city_day({}).dataset;
  std::vector<GpsFix> fixes;
  for (const FixGroup& g : d.fix_groups) {
    fixes.insert(fixes.end(), g.fixes.begin(), g.fixes.end());
  }
  LinePoints lp;
  for (const auto& [id, s] : d.stops) lp.stops.push_back(s);
  lp.itineraries = d.itineraries;

  std::ostringstream l1, p1, f1;
  write_lines(l1, d.lines);
  write_line_points(p1, lp);
  write_vehicle_fixes(f1, fixes);
  std::istringstream li(l1.str()), pi(p1.str()), fi(f1.str());
  const auto lines = parse_lines(li);
  const auto points = parse_line_points(pi);
  const auto parsed_fixes = parse_vehicle_fixes(fi);

  std::ostringstream l2, p2, f2;
  write_lines(l2, lines);
  write_line_points(p2, points);
  write_vehicle_fixes(f2, parsed_fixes);
  EXPECT_EQ(l1.str(), l2.str());
  EXPECT_EQ(p1.str(), p2.str());
  EXPECT_EQ(f1.str(), f2.str());
  EXPECT_EQ(parsed_fixes.size(), fixes.size());
}

TEST(ParseLinePoints, RandomStreamsSatisfyInvariants) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    std::string text;
    const int lines = 1 + static_cast<int>(rng() % 4);
    for (int l = 0; l < lines; ++l) {
      const int n = 2 + static_cast<int>(rng() % 8);
      std::vector<int> seqs;
      int seq = 0;
      for (int i = 0; i < n; ++i) seqs.push_back(seq += 1 + static_cast<int>(rng() % 3));
      std::shuffle(seqs.begin(), seqs.end(), rng);
      for (int s : seqs) {
        const int stop = static_cast<int>(rng() % 15);
        text += point("S" + std::to_string(stop), -25.4 + stop * 0.001, -49.3,
                      "L" + std::to_string(l), s);
      }
    }
    std::istringstream in(text);
    const LinePoints lp = parse_line_points(in);
    for (const ItineraryDef& iti : lp.itineraries) {
      EXPECT_NO_THROW(check_itinerary(iti));
    }
  }
}

}  // namespace
}  // namespace vterm
