#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vterm/geo.h"
#include "vterm/time.h"

namespace vterm {

enum class LineCategory {
  kAlimentador,
  kConvencional,
  kExpresso,
  kJardineira,
  kLigeirao,
  kLinhaDireta,
  kMadrugueiro,
  kTroncal,
};

inline constexpr std::array<LineCategory, 8> kAllLineCategories = {
    LineCategory::kAlimentador, LineCategory::kConvencional,
    LineCategory::kExpresso,    LineCategory::kJardineira,
    LineCategory::kLigeirao,    LineCategory::kLinhaDireta,
    LineCategory::kMadrugueiro, LineCategory::kTroncal,
};

enum class StopType { kTerminal, kStreetStop, kTubeStation };

inline constexpr std::array<StopType, 3> kAllStopTypes = {
    StopType::kTerminal, StopType::kStreetStop, StopType::kTubeStation};

/// Canonical upper-case names ("LINHA_DIRETA", "TUBE_STATION", ...).
std::string_view to_string(LineCategory c);
std::string_view to_string(StopType t);

/// Accent-, case- and separator-insensitive lookups. "Ligeirão",
/// "linha direta" and "LINHA_DIRETA" all resolve.
std::optional<LineCategory> parse_line_category(std::string_view text);
std::optional<StopType> parse_stop_type(std::string_view text);

/// Upper-cases ASCII, folds common Latin-1 accented letters encoded as UTF-8
/// to their base letter and maps spaces/hyphens to '_'.
std::string normalize_token(std::string_view text);

struct BusLine {
  std::string code;
  std::string name;
  LineCategory category = LineCategory::kConvencional;
  std::string color;

  friend bool operator==(const BusLine&, const BusLine&) = default;
};

struct BusStop {
  std::string stop_id;
  std::string name;
  StopType stop_type = StopType::kStreetStop;
  GeoPoint location;

  friend bool operator==(const BusStop&, const BusStop&) = default;
};

struct ItineraryStop {
  int seq = 0;
  std::string stop_id;

  friend bool operator==(const ItineraryStop&, const ItineraryStop&) = default;
};

/// Ordered stop sequence of one line in one direction. A circular itinerary
/// repeats its first stop as the last position.
struct ItineraryDef {
  std::string line_code;
  std::string direction;
  std::vector<ItineraryStop> stops;
  bool circular = false;

  std::size_t size() const { return stops.size(); }
  const std::string& stop_at(std::size_t position0) const {
    return stops[position0].stop_id;
  }

  friend bool operator==(const ItineraryDef&, const ItineraryDef&) = default;
};

/// Throws InvariantError if seq is not strictly increasing, n < 2, or the
/// circular flag disagrees with the first/last stop.
void check_itinerary(const ItineraryDef& iti);

struct GpsFix {
  std::string vehicle_id;
  std::string line_code;
  GeoPoint location;
  Timestamp time;

  friend bool operator==(const GpsFix&, const GpsFix&) = default;
};

/// Fixes of one vehicle on one line during one service day, time-sorted.
struct FixGroup {
  std::string vehicle_id;
  std::string line_code;
  ServiceDate date;
  std::vector<GpsFix> fixes;
};

/// Groups fixes by (vehicle, line, day). Input must already be sorted by that
/// key and time (parse_vehicle_fixes output is).
std::vector<FixGroup> group_fixes(const std::vector<GpsFix>& sorted);

using StopIndex = std::map<std::string, BusStop, std::less<>>;

struct Dataset {
  std::vector<BusLine> lines;
  StopIndex stops;
  std::vector<ItineraryDef> itineraries;
  std::vector<FixGroup> fix_groups;

  const BusLine* find_line(std::string_view code) const;
  const BusStop* find_stop(std::string_view stop_id) const;
  std::vector<const ItineraryDef*> itineraries_of(std::string_view line) const;
};

}  // namespace vterm
