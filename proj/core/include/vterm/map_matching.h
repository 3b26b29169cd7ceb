#pragma once

#include <span>
#include <string>
#include <vector>

#include "vterm/model.h"

namespace vterm {

/// A map-matched passage of a vehicle at an itinerary stop.
struct StopMark {
  std::string stop_id;
  int seq_hint = 0;  // 1-based smallest itinerary position holding stop_id
  int time = 0;      // seconds of day
  double distance_m = 0.0;
  std::string vehicle_id;

  friend bool operator==(const StopMark&, const StopMark&) = default;
};

struct MatchOptions {
  double acceptance_radius_m = 100.0;
};

/// Nearest itinerary position for a point; ties go to the smaller position.
/// Returns the 0-based position and its distance.
struct NearestStop {
  std::size_t position0 = 0;
  double distance_m = 0.0;
};

/// Precomputed stop geometry of one itinerary for repeated nearest-stop
/// queries.
class ItineraryMatcher {
 public:
  /// Throws vterm::Error if an itinerary stop is missing from `stops`.
  ItineraryMatcher(const ItineraryDef& iti, const StopIndex& stops);

  NearestStop nearest(const GeoPoint& p) const;
  const ItineraryDef& itinerary() const { return *iti_; }

  /// Labels each fix with its nearest stop, collapses consecutive same-stop
  /// runs and emits one mark per run whose closest fix lies within the
  /// acceptance radius, stamped with that fix's time.
  std::vector<StopMark> match(std::span<const GpsFix> fixes,
                              const MatchOptions& options = {}) const;

 private:
  struct UniqueStop {
    std::string stop_id;
    GeoPoint location;
    std::size_t first_position0;
  };

  const ItineraryDef* iti_;
  std::vector<UniqueStop> unique_;
};

std::vector<StopMark> match_fixes(std::span<const GpsFix> fixes,
                                  const ItineraryDef& iti,
                                  const StopIndex& stops,
                                  const MatchOptions& options = {});

/// Stable ascending sort by time.
std::vector<StopMark> sequence_marks(std::vector<StopMark> marks);

}  // namespace vterm
