#include "vterm/time.h"

#include <gtest/gtest.h>

#include "vterm/error.h"

namespace vterm {
namespace {

TEST(ParseDthr, Line829Timestamp) {
  const Timestamp ts = parse_dthr("07/11/2022 06:04:51");
  EXPECT_EQ(ts.date, (ServiceDate{2022, 11, 7}));
  EXPECT_EQ(ts.seconds, 6 * 3600 + 4 * 60 + 51);
  EXPECT_EQ(ts.seconds, 21891);
}

TEST(ParseDthr, RoundTrip) {
  for (const char* text : {"01/01/2020 00:00:00", "29/02/2024 23:59:59",
                           "07/11/2022 06:31:41"}) {
    EXPECT_EQ(format_dthr(parse_dthr(text)), text);
  }
}

TEST(ParseDthr, RejectsMalformed) {
  EXPECT_THROW(parse_dthr(""), Error);
  EXPECT_THROW(parse_dthr("2022-11-07 06:04:51"), Error);
  EXPECT_THROW(parse_dthr("32/11/2022 06:04:51"), Error);
  EXPECT_THROW(parse_dthr("07/13/2022 06:04:51"), Error);
  EXPECT_THROW(parse_dthr("07/11/2022 24:00:00"), Error);
  EXPECT_THROW(parse_dthr("07/11/2022 06:60:00"), Error);
  EXPECT_THROW(parse_dthr("29/02/2023 06:00:00"), Error);
}

TEST(FormatHms, HalfUpRounding) {
  EXPECT_EQ(format_hms(22686.5), "06:18:07");  // 06:18:06.5
  EXPECT_EQ(format_hms(23088.0), "06:24:48");
  EXPECT_EQ(format_hms(22539.5), "06:15:40");
  EXPECT_EQ(format_hms(22539.49), "06:15:39");
  EXPECT_EQ(format_hms(0.0), "00:00:00");
}

TEST(RoundHalfUp, Values) {
  EXPECT_EQ(round_half_up(0.5), 1);
  EXPECT_EQ(round_half_up(1.5), 2);
  EXPECT_EQ(round_half_up(2.5), 3);
  EXPECT_EQ(round_half_up(2.4999), 2);
  EXPECT_EQ(round_half_up(7.0), 7);
}

TEST(ParseHms, Forms) {
  EXPECT_EQ(parse_hms("06:15:39"), 22539);
  EXPECT_EQ(parse_hms("17:00"), 17 * 3600);
  EXPECT_THROW(parse_hms("6h"), Error);
}

TEST(ServiceDate, Iso) {
  const ServiceDate d{2022, 11, 7};
  EXPECT_EQ(d.iso(), "2022-11-07");
  EXPECT_EQ(ServiceDate::from_iso("2022-11-07"), d);
  EXPECT_THROW(ServiceDate::from_iso("07/11/2022"), Error);
}

}  // namespace
}  // namespace vterm
