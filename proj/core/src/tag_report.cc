#include "vterm/tag_report.h"

#include "vterm/error.h"

namespace vterm {

double TagCounts::valid_pct() const {
  return total_marks == 0 ? 0.0
                          : 100.0 * static_cast<double>(valid_tags) /
                                static_cast<double>(total_marks);
}

double TagCounts::error_pct() const {
  return valid_tags == 0 ? 0.0
                         : 100.0 * static_cast<double>(out_of_order + missing) /
                               static_cast<double>(valid_tags);
}

TagCounts& TagCounts::operator+=(const TagCounts& o) {
  total_marks += o.total_marks;
  valid_tags += o.valid_tags;
  out_of_order += o.out_of_order;
  missing += o.missing;
  accepted_itineraries += o.accepted_itineraries;
  rejected_segments += o.rejected_segments;
  discarded_segments += o.discarded_segments;
  return *this;
}

TagCounts count_tags(std::span<const StopMark> marks,
                     const Segmentation& segmentation,
                     std::span<const DetectionResult> results) {
  if (results.size() != segmentation.segments.size()) {
    throw Error("one detection result per segment is required");
  }
  TagCounts c;
  c.total_marks = marks.size();
  c.discarded_segments = segmentation.discarded.size();

  // A circular terminal mark can sit in two segments; count marks once.
  std::vector<char> valid(marks.size(), 0);
  std::vector<char> used(marks.size(), 0);
  for (std::size_t s = 0; s < results.size(); ++s) {
    const auto& segment = segmentation.segments[s];
    const DetectionResult& r = results[s];
    if (!r.accepted()) {
      ++c.rejected_segments;
      continue;
    }
    ++c.accepted_itineraries;
    c.missing += r.itinerary->interpolated_count();
    for (std::size_t idx : segment) valid[idx] = 1;
    for (std::size_t j : r.used_marks) used[segment[j]] = 1;
  }
  for (std::size_t i = 0; i < marks.size(); ++i) {
    if (!valid[i]) continue;
    ++c.valid_tags;
    if (!used[i]) ++c.out_of_order;
  }
  return c;
}

void TagReport::add(LineCategory category, const TagCounts& counts) {
  by_category[category] += counts;
}

TagCounts TagReport::total() const {
  TagCounts t;
  for (const auto& [category, counts] : by_category) t += counts;
  return t;
}

}  // namespace vterm
