#include "vterm/map_matching.h"

#include <algorithm>
#include <limits>

#include "vterm/error.h"

namespace vterm {

ItineraryMatcher::ItineraryMatcher(const ItineraryDef& iti,
                                   const StopIndex& stops)
    : iti_(&iti) {
  for (std::size_t pos = 0; pos < iti.stops.size(); ++pos) {
    const std::string& id = iti.stops[pos].stop_id;
    auto seen = std::find_if(unique_.begin(), unique_.end(),
                             [&](const UniqueStop& u) { return u.stop_id == id; });
    if (seen != unique_.end()) continue;
    auto it = stops.find(id);
    if (it == stops.end()) {
      throw Error("itinerary " + iti.line_code + "/" + iti.direction +
                  " references unknown stop '" + id + "'");
    }
    unique_.push_back({id, it->second.location, pos});
  }
}

NearestStop ItineraryMatcher::nearest(const GeoPoint& p) const {
  NearestStop best{0, std::numeric_limits<double>::infinity()};
  // unique_ is ordered by first position, so strict '<' keeps the smaller
  // position on ties.
  for (const UniqueStop& u : unique_) {
    const double d = haversine_m(p, u.location);
    if (d < best.distance_m) best = {u.first_position0, d};
  }
  return best;
}

std::vector<StopMark> ItineraryMatcher::match(std::span<const GpsFix> fixes,
                                              const MatchOptions& options) const {
  std::vector<NearestStop> labels;
  labels.reserve(fixes.size());
  for (const GpsFix& fix : fixes) labels.push_back(nearest(fix.location));

  std::vector<StopMark> marks;
  std::size_t i = 0;
  while (i < fixes.size()) {
    std::size_t best_fix = i;
    std::size_t j = i + 1;
    for (; j < fixes.size() && labels[j].position0 == labels[i].position0; ++j) {
      if (labels[j].distance_m < labels[best_fix].distance_m) best_fix = j;
    }
    if (labels[best_fix].distance_m <= options.acceptance_radius_m) {
      const std::size_t pos0 = labels[i].position0;
      marks.push_back({iti_->stops[pos0].stop_id, static_cast<int>(pos0) + 1,
                       fixes[best_fix].time.seconds, labels[best_fix].distance_m,
                       fixes[best_fix].vehicle_id});
    }
    i = j;
  }
  return marks;
}

std::vector<StopMark> match_fixes(std::span<const GpsFix> fixes,
                                  const ItineraryDef& iti,
                                  const StopIndex& stops,
                                  const MatchOptions& options) {
  return ItineraryMatcher(iti, stops).match(fixes, options);
}

std::vector<StopMark> sequence_marks(std::vector<StopMark> marks) {
  std::stable_sort(marks.begin(), marks.end(),
                   [](const StopMark& a, const StopMark& b) { return a.time < b.time; });
  return marks;
}

}  // namespace vterm
