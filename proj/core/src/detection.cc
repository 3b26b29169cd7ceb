#include "vterm/detection.h"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "vterm/error.h"

namespace vterm {

std::string_view to_string(Provenance p) {
  return p == Provenance::kObserved ? "OBSERVED" : "INTERPOLATED";
}

std::string_view to_string(RejectionReason r) {
  switch (r) {
    case RejectionReason::kNoFirstAnchor: return "no_first_anchor";
    case RejectionReason::kNoLastAnchor: return "no_last_anchor";
    case RejectionReason::kTooFewObserved: return "too_few_observed";
  }
  return "?";
}

std::size_t DetectedItinerary::observed_count() const {
  return static_cast<std::size_t>(std::count_if(
      entries.begin(), entries.end(),
      [](const TimedStop& e) { return e.provenance == Provenance::kObserved; }));
}

std::size_t DetectedItinerary::interpolated_count() const {
  return entries.size() - observed_count();
}

void check_detected(const DetectedItinerary& det) {
  if (det.entries.size() < 2) {
    throw InvariantError("detected itinerary has fewer than 2 entries");
  }
  for (std::size_t i = 0; i < det.entries.size(); ++i) {
    const TimedStop& e = det.entries[i];
    if (e.position != static_cast<int>(i) + 1) {
      throw InvariantError("detected itinerary positions are not 1..n");
    }
    if (e.time < 0.0) throw InvariantError("negative passage time");
    if (i > 0 && !(e.time > det.entries[i - 1].time)) {
      throw InvariantError("detected itinerary times are not strictly increasing");
    }
  }
  if (det.entries.front().provenance != Provenance::kObserved ||
      det.entries.back().provenance != Provenance::kObserved) {
    throw InvariantError("detected itinerary anchors must be observed");
  }
}

std::vector<StopMark> gather(std::span<const StopMark> marks,
                             std::span<const std::size_t> indices) {
  std::vector<StopMark> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(marks[i]);
  return out;
}

Segmentation segment_trips(std::span<const StopMark> marks,
                           const ItineraryDef& iti,
                           const SegmentOptions& options) {
  Segmentation out;
  const double threshold = options.wrap_fraction * static_cast<double>(iti.size());
  const std::string& first_stop = iti.stops.front().stop_id;

  std::vector<std::size_t> current;
  int running_max = 0;

  auto close = [&] {
    if (current.empty()) return;
    // A lone closing terminal already belongs to the trip it ended.
    if (current.size() == 1 && !out.segments.empty() &&
        out.segments.back().back() == current.front()) {
      current.clear();
      return;
    }
    std::set<int> positions;
    for (std::size_t i : current) positions.insert(marks[i].seq_hint);
    (positions.size() >= 2 ? out.segments : out.discarded)
        .push_back(std::move(current));
    current.clear();
  };

  for (std::size_t i = 0; i < marks.size(); ++i) {
    const int pos = marks[i].seq_hint;
    if (!current.empty()) {
      const int gap = marks[i].time - marks[current.back()].time;
      if (gap > options.idle_gap_seconds) {
        close();
      } else if (pos < running_max - threshold) {
        if (iti.circular && marks[i].stop_id == first_stop) {
          current.push_back(i);
        }
        close();
      }
    }
    if (current.empty()) {
      running_max = pos;
    } else if (pos > running_max) {
      const bool small_step = pos - running_max <= threshold;
      const bool confirmed = i + 1 < marks.size() &&
                             marks[i + 1].seq_hint >= pos &&
                             marks[i + 1].time - marks[i].time <=
                                 options.idle_gap_seconds;
      if (small_step || confirmed) running_max = pos;
    }
    current.push_back(i);
  }
  close();
  return out;
}

std::vector<double> interpolate_gap(double t_k, double t_kw, int intervals) {
  if (intervals < 2) {
    throw Error("interpolation needs at least 2 intervals");
  }
  const double dt = t_kw - t_k;
  if (!(dt > 0.0)) {
    throw Error("interpolation anchors are not increasing in time");
  }
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(intervals - 1));
  for (int j = 1; j < intervals; ++j) {
    out.push_back(t_k + dt * j / intervals);
  }
  return out;
}

DetectionResult detect(const ItineraryDef& iti,
                       std::span<const StopMark> segment) {
  DetectionResult result;
  const std::size_t n = iti.size();

  std::unordered_map<std::string_view, std::vector<std::size_t>> by_stop;
  for (std::size_t j = 0; j < segment.size(); ++j) {
    by_stop[segment[j].stop_id].push_back(j);
  }

  std::vector<std::optional<std::size_t>> observed(n);
  int last_time = -1;
  for (std::size_t pos0 = 0; pos0 < n; ++pos0) {
    auto it = by_stop.find(iti.stop_at(pos0));
    if (it == by_stop.end()) continue;
    for (std::size_t j : it->second) {
      if (segment[j].time > last_time) {
        observed[pos0] = j;
        last_time = segment[j].time;
        break;
      }
    }
  }

  const auto observed_count = static_cast<std::size_t>(
      std::count_if(observed.begin(), observed.end(),
                    [](const auto& o) { return o.has_value(); }));
  if (!observed.front()) {
    result.rejection = RejectionReason::kNoFirstAnchor;
    return result;
  }
  if (!observed.back()) {
    result.rejection = RejectionReason::kNoLastAnchor;
    return result;
  }
  if (observed_count < 2) {
    result.rejection = RejectionReason::kTooFewObserved;
    return result;
  }

  DetectedItinerary det;
  det.line_code = iti.line_code;
  det.direction = iti.direction;
  det.vehicle_id = segment[*observed.front()].vehicle_id;
  det.entries.resize(n);

  std::size_t anchor = 0;
  for (std::size_t pos0 = 0; pos0 < n; ++pos0) {
    TimedStop& e = det.entries[pos0];
    e.stop_id = iti.stop_at(pos0);
    e.position = static_cast<int>(pos0) + 1;
    if (!observed[pos0]) continue;
    e.time = segment[*observed[pos0]].time;
    e.provenance = Provenance::kObserved;
    result.used_marks.push_back(*observed[pos0]);
    const std::size_t w = pos0 - anchor;
    if (w >= 2) {
      const auto filled = interpolate_gap(det.entries[anchor].time, e.time,
                                          static_cast<int>(w));
      for (std::size_t k = 0; k < filled.size(); ++k) {
        det.entries[anchor + 1 + k].time = filled[k];
        det.entries[anchor + 1 + k].provenance = Provenance::kInterpolated;
      }
    }
    anchor = pos0;
  }
  result.itinerary = std::move(det);
  return result;
}

}  // namespace vterm
