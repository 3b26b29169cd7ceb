#include "vterm/model.h"

#include <algorithm>
#include <cctype>
#include <tuple>

#include "vterm/error.h"

namespace vterm {
namespace {

// Base letter of a UTF-8 Latin-1 supplement character encoded as 0xC3 <b>.
char fold_latin1(unsigned char b) {
  const unsigned char c = b | 0x20;  // lower-case half: 0xA0..0xBF
  if (c >= 0xA0 && c <= 0xA5) return 'A';
  if (c == 0xA7) return 'C';
  if (c >= 0xA8 && c <= 0xAB) return 'E';
  if (c >= 0xAC && c <= 0xAF) return 'I';
  if (c == 0xB1) return 'N';
  if (c >= 0xB2 && c <= 0xB6) return 'O';
  if (c >= 0xB9 && c <= 0xBC) return 'U';
  if (c == 0xBD || c == 0xBF) return 'Y';
  return '?';
}

}  // namespace

std::string normalize_token(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (c == 0xC3 && i + 1 < text.size()) {
      out.push_back(fold_latin1(static_cast<unsigned char>(text[++i])));
    } else if (c == ' ' || c == '-' || c == '_') {
      if (!out.empty() && out.back() != '_') out.push_back('_');
    } else {
      out.push_back(static_cast<char>(std::toupper(c)));
    }
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  return out;
}

std::string_view to_string(LineCategory c) {
  switch (c) {
    case LineCategory::kAlimentador: return "ALIMENTADOR";
    case LineCategory::kConvencional: return "CONVENCIONAL";
    case LineCategory::kExpresso: return "EXPRESSO";
    case LineCategory::kJardineira: return "JARDINEIRA";
    case LineCategory::kLigeirao: return "LIGEIRAO";
    case LineCategory::kLinhaDireta: return "LINHA_DIRETA";
    case LineCategory::kMadrugueiro: return "MADRUGUEIRO";
    case LineCategory::kTroncal: return "TRONCAL";
  }
  return "?";
}

std::string_view to_string(StopType t) {
  switch (t) {
    case StopType::kTerminal: return "TERMINAL";
    case StopType::kStreetStop: return "STREET_STOP";
    case StopType::kTubeStation: return "TUBE_STATION";
  }
  return "?";
}

std::optional<LineCategory> parse_line_category(std::string_view text) {
  const std::string token = normalize_token(text);
  for (LineCategory c : kAllLineCategories) {
    if (token == to_string(c)) return c;
  }
  return std::nullopt;
}

std::optional<StopType> parse_stop_type(std::string_view text) {
  const std::string token = normalize_token(text);
  for (StopType t : kAllStopTypes) {
    if (token == to_string(t)) return t;
  }
  // Upstream labels.
  if (token == "ESTACAO_TUBO" || token == "TUBO") return StopType::kTubeStation;
  if (token == "RUA" || token == "NOVO_MOBILIARIO" || token == "PONTO") {
    return StopType::kStreetStop;
  }
  return std::nullopt;
}

void check_itinerary(const ItineraryDef& iti) {
  const std::string name = iti.line_code + "/" + iti.direction;
  if (iti.stops.size() < 2) {
    throw InvariantError("itinerary " + name + " has fewer than 2 stops");
  }
  for (std::size_t i = 1; i < iti.stops.size(); ++i) {
    if (iti.stops[i].seq <= iti.stops[i - 1].seq) {
      throw InvariantError("itinerary " + name +
                           " sequence numbers are not strictly increasing");
    }
  }
  if (iti.stops.front().seq < 1) {
    throw InvariantError("itinerary " + name + " has a non-positive seq");
  }
  const bool closes = iti.stops.front().stop_id == iti.stops.back().stop_id;
  if (closes != iti.circular) {
    throw InvariantError("itinerary " + name +
                         " circular flag disagrees with its first/last stop");
  }
}

std::vector<FixGroup> group_fixes(const std::vector<GpsFix>& sorted) {
  std::vector<FixGroup> groups;
  for (const GpsFix& fix : sorted) {
    if (groups.empty() || groups.back().vehicle_id != fix.vehicle_id ||
        groups.back().line_code != fix.line_code ||
        groups.back().date != fix.time.date) {
      groups.push_back({fix.vehicle_id, fix.line_code, fix.time.date, {}});
    }
    groups.back().fixes.push_back(fix);
  }
  return groups;
}

const BusLine* Dataset::find_line(std::string_view code) const {
  auto it = std::find_if(lines.begin(), lines.end(),
                         [&](const BusLine& l) { return l.code == code; });
  return it == lines.end() ? nullptr : &*it;
}

const BusStop* Dataset::find_stop(std::string_view stop_id) const {
  auto it = stops.find(stop_id);
  return it == stops.end() ? nullptr : &it->second;
}

std::vector<const ItineraryDef*> Dataset::itineraries_of(
    std::string_view line) const {
  std::vector<const ItineraryDef*> out;
  for (const ItineraryDef& iti : itineraries) {
    if (iti.line_code == line) out.push_back(&iti);
  }
  return out;
}

}  // namespace vterm
