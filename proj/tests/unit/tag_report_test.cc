#include "vterm/tag_report.h"

#include <gtest/gtest.h>

#include "vterm/pipeline.h"
#include "vterm/synthetic.h"

namespace vterm {
namespace {

TEST(TagReport, Line829Counts) {
  const DetectionRun run = run_detection(synth::line829(true).dataset, {}, {});
  const TagCounts t = run.report.total();
  EXPECT_EQ(t.total_marks, 9u);
  EXPECT_EQ(t.valid_tags, 9u);
  EXPECT_EQ(t.out_of_order, 1u);
  EXPECT_EQ(t.missing, 3u);
  EXPECT_EQ(t.accepted_itineraries, 1u);
  EXPECT_DOUBLE_EQ(t.valid_pct(), 100.0);
  EXPECT_NEAR(t.error_pct(), 400.0 / 9.0, 1e-12);
  EXPECT_EQ(run.report.by_category.count(LineCategory::kAlimentador), 1u);
}

TEST(TagReport, CleanLoopIsFullyValid) {
  const DetectionRun run =
      run_detection(synth::uniform_loop_day(12, 5, 60), {}, {});
  const TagCounts t = run.report.total();
  EXPECT_EQ(t.total_marks, 5u * 12u + 1u);
  EXPECT_EQ(t.valid_tags, t.total_marks);
  EXPECT_EQ(t.out_of_order, 0u);
  EXPECT_EQ(t.missing, 0u);
  EXPECT_EQ(t.accepted_itineraries, 5u);
  EXPECT_EQ(t.error_pct(), 0.0);
}

TEST(TagCounts, SumsAndPercentages) {
  TagCounts a{10, 8, 1, 2, 1, 0, 0};
  TagCounts b{5, 5, 0, 1, 1, 1, 1};
  a += b;
  EXPECT_EQ(a, (TagCounts{15, 13, 1, 3, 2, 1, 1}));
  EXPECT_DOUBLE_EQ(a.error_pct(), 400.0 / 13.0);
  EXPECT_EQ(TagCounts{}.valid_pct(), 0.0);
  EXPECT_EQ(TagCounts{}.error_pct(), 0.0);
}

TEST(CountTags, RejectedSegmentsCountOnlyInTotal) {
  ItineraryDef iti{"L", "IDA", {{1, "A"}, {2, "B"}, {3, "C"}}, false};
  std::vector<StopMark> marks = {{"B", 2, 10, 0, "V"}, {"C", 3, 20, 0, "V"}};
  Segmentation seg;
  seg.segments.push_back({0, 1});
  std::vector<DetectionResult> results{detect(iti, gather(marks, seg.segments[0]))};
  const TagCounts c = count_tags(marks, seg, results);
  EXPECT_EQ(c.total_marks, 2u);
  EXPECT_EQ(c.valid_tags, 0u);
  EXPECT_EQ(c.rejected_segments, 1u);
}

}  // namespace
}  // namespace vterm
