#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "vterm/detection.h"

namespace vterm {

struct InterpolationErrorSample {
  int w = 0;
  double err_seconds = 0.0;
  std::size_t itinerary_index = 0;
  int position = 0;  // 1-based position of the deleted stop
};

/// Deletes the observed entries at `deleted_positions` (1-based) from a
/// complete itinerary, re-runs detection on the remaining marks and returns
/// |true - estimated| for each deleted position, in the given order.
std::vector<double> reestimate_errors(const ItineraryDef& iti,
                                      const DetectedItinerary& full,
                                      std::span<const int> deleted_positions);

/// Samples `samples` distinct (itinerary, gap start) pairs without
/// replacement; for each, deletes the w-1 interior stops of the gap and
/// records the estimation error of every deleted stop.
///
/// `full` must contain only observed entries and `itineraries[i]` must be the
/// static definition of `full[i]`. Throws vterm::Error if fewer than
/// `samples` gap starts are eligible.
std::vector<InterpolationErrorSample> evaluate_interpolation_error(
    std::span<const ItineraryDef* const> itineraries,
    std::span<const DetectedItinerary> full, int w, std::size_t samples,
    std::uint64_t seed);

}  // namespace vterm
