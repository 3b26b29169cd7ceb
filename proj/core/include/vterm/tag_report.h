#pragma once

#include <map>
#include <span>

#include "vterm/detection.h"
#include "vterm/model.h"

namespace vterm {

/// Mark accounting for one or more vehicle-days.
///
/// total_marks counts every map-matching mark, including marks of segments
/// that were rejected or discarded. valid_tags counts marks belonging to a
/// segment whose detection was accepted; out_of_order are valid tags that
/// detection dropped, missing are interpolated positions.
struct TagCounts {
  std::size_t total_marks = 0;
  std::size_t valid_tags = 0;
  std::size_t out_of_order = 0;
  std::size_t missing = 0;
  std::size_t accepted_itineraries = 0;
  std::size_t rejected_segments = 0;
  std::size_t discarded_segments = 0;

  double valid_pct() const;
  /// (out_of_order + missing) relative to valid_tags.
  double error_pct() const;

  TagCounts& operator+=(const TagCounts& other);
  friend bool operator==(const TagCounts&, const TagCounts&) = default;
};

/// Tally for one mark stream, its segmentation and the detection result of
/// each kept segment (same order as segmentation.segments).
TagCounts count_tags(std::span<const StopMark> marks,
                     const Segmentation& segmentation,
                     std::span<const DetectionResult> results);

struct TagReport {
  std::map<LineCategory, TagCounts> by_category;

  void add(LineCategory category, const TagCounts& counts);
  TagCounts total() const;
};

}  // namespace vterm
