#include "vterm/validation.h"

#include <algorithm>
#include <set>

namespace vterm {

std::string_view to_string(IssueKind kind) {
  switch (kind) {
    case IssueKind::kDanglingStopReference: return "dangling_stop_reference";
    case IssueKind::kLineWithoutItinerary: return "line_without_itinerary";
    case IssueKind::kUnresolvableLine: return "unresolvable_line";
    case IssueKind::kVehicleWithoutFixes: return "vehicle_without_fixes";
  }
  return "?";
}

std::size_t ValidationReport::count(IssueKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(issues.begin(), issues.end(),
                    [&](const ValidationIssue& i) { return i.kind == kind; }));
}

ValidationReport validate_dataset(const Dataset& dataset) {
  ValidationReport report;
  std::set<std::string, std::less<>> lines_with_itinerary;
  for (const ItineraryDef& iti : dataset.itineraries) {
    lines_with_itinerary.insert(iti.line_code);
    std::set<std::string> reported;
    for (const ItineraryStop& s : iti.stops) {
      if (dataset.find_stop(s.stop_id) == nullptr &&
          reported.insert(s.stop_id).second) {
        report.issues.push_back({IssueKind::kDanglingStopReference,
                                 iti.line_code + "/" + iti.direction,
                                 "unknown stop_id " + s.stop_id});
      }
    }
  }
  for (const BusLine& line : dataset.lines) {
    if (!lines_with_itinerary.contains(line.code)) {
      report.issues.push_back(
          {IssueKind::kLineWithoutItinerary, line.code, "no itinerary defined"});
    }
  }
  std::set<std::string> unresolved;
  for (const FixGroup& g : dataset.fix_groups) {
    if (g.fixes.empty()) {
      report.issues.push_back({IssueKind::kVehicleWithoutFixes, g.vehicle_id,
                               "line " + g.line_code + " on " + g.date.iso()});
    }
    const bool known_line = dataset.find_line(g.line_code) != nullptr;
    if ((!known_line || !lines_with_itinerary.contains(g.line_code)) &&
        unresolved.insert(g.vehicle_id + "\x1f" + g.line_code).second) {
      report.issues.push_back(
          {IssueKind::kUnresolvableLine, g.vehicle_id,
           known_line ? "line " + g.line_code + " has no itinerary"
                      : "unknown line " + g.line_code});
    }
  }
  return report;
}

}  // namespace vterm
