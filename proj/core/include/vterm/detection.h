#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vterm/map_matching.h"
#include "vterm/model.h"

namespace vterm {

enum class Provenance { kObserved, kInterpolated };

std::string_view to_string(Provenance p);

struct TimedStop {
  std::string stop_id;
  int position = 0;   // 1-based
  double time = 0.0;  // seconds of day, full precision
  Provenance provenance = Provenance::kObserved;

  friend bool operator==(const TimedStop&, const TimedStop&) = default;
};

/// Every position 1..n of an itinerary with an observed or estimated time.
struct DetectedItinerary {
  std::string line_code;
  std::string vehicle_id;
  std::string direction;
  ServiceDate date;
  std::vector<TimedStop> entries;

  std::size_t observed_count() const;
  std::size_t interpolated_count() const;
};

/// Throws InvariantError unless positions are 1..n, times strictly increase,
/// and the first and last entries are observed.
void check_detected(const DetectedItinerary& det);

struct SegmentOptions {
  int idle_gap_seconds = 30 * 60;
  /// Fallback threshold as a fraction of itinerary length.
  double wrap_fraction = 0.5;
};

/// Segments are index lists into the mark stream they were cut from.
struct Segmentation {
  std::vector<std::vector<std::size_t>> segments;
  /// Segments dropped for covering fewer than two distinct positions.
  std::vector<std::vector<std::size_t>> discarded;
};

std::vector<StopMark> gather(std::span<const StopMark> marks,
                             std::span<const std::size_t> indices);

/// Splits a time-ordered mark stream of one vehicle into candidate trips.
///
/// A new segment starts after an idle gap, or when a mark's position falls
/// back more than wrap_fraction * n below the running maximum position. The
/// running maximum ignores a forward jump larger than that threshold unless
/// the next mark confirms it, so a single stray mark near the end of the
/// route cannot fake a wrap. On circular itineraries the closing
/// terminal mark is shared by the trip it ends and the trip it starts.
Segmentation segment_trips(std::span<const StopMark> marks,
                           const ItineraryDef& iti,
                           const SegmentOptions& options = {});

enum class RejectionReason {
  kNoFirstAnchor,
  kNoLastAnchor,
  kTooFewObserved,
};

std::string_view to_string(RejectionReason r);

struct DetectionResult {
  std::optional<DetectedItinerary> itinerary;
  std::optional<RejectionReason> rejection;
  /// Indices into the segment of the marks taken as observed entries.
  std::vector<std::size_t> used_marks;

  bool accepted() const { return itinerary.has_value(); }
};

/// Associates a time-ordered mark segment with an itinerary. Each position
/// takes the first mark of its stop later than the previously accepted time;
/// interior gaps are filled by interpolate_gap. Instances without observed
/// first and last positions are rejected rather than extrapolated.
DetectionResult detect(const ItineraryDef& iti,
                       std::span<const StopMark> segment);

/// Uniform estimates strictly between two anchors `intervals` positions
/// apart: returns intervals - 1 values t_k + j * (t_kw - t_k) / intervals.
/// Throws vterm::Error when t_kw <= t_k or intervals < 2.
std::vector<double> interpolate_gap(double t_k, double t_kw, int intervals);

}  // namespace vterm
