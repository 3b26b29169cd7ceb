#include "vterm/interpolation_error.h"

#include <cmath>
#include <random>
#include <utility>

#include "vterm/error.h"

namespace vterm {

std::vector<double> reestimate_errors(const ItineraryDef& iti,
                                      const DetectedItinerary& full,
                                      std::span<const int> deleted_positions) {
  if (full.entries.size() != iti.size()) {
    throw Error("itinerary length does not match the detected itinerary");
  }
  std::vector<char> deleted(iti.size(), 0);
  for (int p : deleted_positions) {
    if (p < 1 || p > static_cast<int>(iti.size())) {
      throw Error("deleted position out of range");
    }
    deleted[static_cast<std::size_t>(p - 1)] = 1;
  }

  std::vector<StopMark> marks;
  for (const TimedStop& e : full.entries) {
    if (e.provenance != Provenance::kObserved) {
      throw Error("error evaluation needs an all-observed itinerary");
    }
    if (deleted[static_cast<std::size_t>(e.position - 1)]) continue;
    marks.push_back({e.stop_id, e.position,
                     static_cast<int>(std::lround(e.time)), 0.0, full.vehicle_id});
  }

  const DetectionResult redetected = detect(iti, marks);
  if (!redetected.accepted()) {
    throw Error("deletion plan removes an itinerary anchor");
  }
  std::vector<double> errors;
  errors.reserve(deleted_positions.size());
  for (int p : deleted_positions) {
    const auto i = static_cast<std::size_t>(p - 1);
    errors.push_back(
        std::abs(full.entries[i].time - redetected.itinerary->entries[i].time));
  }
  return errors;
}

std::vector<InterpolationErrorSample> evaluate_interpolation_error(
    std::span<const ItineraryDef* const> itineraries,
    std::span<const DetectedItinerary> full, int w, std::size_t samples,
    std::uint64_t seed) {
  if (itineraries.size() != full.size()) {
    throw Error("itinerary definitions and detected itineraries differ in count");
  }
  if (w < 2) throw Error("gap width w must be at least 2");

  std::vector<std::pair<std::size_t, std::size_t>> eligible;  // (itinerary, k0)
  for (std::size_t i = 0; i < full.size(); ++i) {
    const std::size_t n = full[i].entries.size();
    for (std::size_t k0 = 0; k0 + static_cast<std::size_t>(w) < n; ++k0) {
      eligible.emplace_back(i, k0);
    }
  }
  if (eligible.size() < samples) {
    throw Error("insufficient eligible gap positions for w=" + std::to_string(w) +
                ": need " + std::to_string(samples) + ", have " +
                std::to_string(eligible.size()) + " (shortfall " +
                std::to_string(samples - eligible.size()) + ")");
  }

  // Partial Fisher-Yates: the first `samples` slots are drawn without
  // replacement.
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < samples; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, eligible.size() - 1);
    std::swap(eligible[i], eligible[pick(rng)]);
  }

  std::vector<InterpolationErrorSample> out;
  out.reserve(samples * static_cast<std::size_t>(w - 1));
  std::vector<int> deleted;
  for (std::size_t s = 0; s < samples; ++s) {
    const auto [i, k0] = eligible[s];
    deleted.clear();
    for (int j = 1; j < w; ++j) deleted.push_back(static_cast<int>(k0) + 1 + j);
    const auto errors = reestimate_errors(*itineraries[i], full[i], deleted);
    for (std::size_t j = 0; j < errors.size(); ++j) {
      out.push_back({w, errors[j], i, deleted[j]});
    }
  }
  return out;
}

}  // namespace vterm
