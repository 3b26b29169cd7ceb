#pragma once

#include <filesystem>
#include <istream>
#include <ostream>
#include <vector>

#include "vterm/model.h"

namespace vterm {

// Newline-delimited JSON records, one object per line. Blank lines are
// skipped. Field names:
//   lines        code, name, category, color
//   line points  stop_id, name, stop_type, lat, lon, line_code, direction, seq
//   fixes        vehicle_id, line_code, lat, lon, dthr ("dd/MM/yyyy HH:mm:ss")
// lat/lon may be JSON numbers or decimal strings (a comma decimal separator
// is accepted for upstream exports).

std::vector<BusLine> parse_lines(std::istream& in);

struct LinePoints {
  std::vector<BusStop> stops;  // deduplicated, ascending stop_id
  std::vector<ItineraryDef> itineraries;  // sorted by (line_code, direction)
};

/// Maximum separation for two records of the same stop_id to be accepted as
/// the same stop.
inline constexpr double kStopCoordinateToleranceM = 1.0;

LinePoints parse_line_points(std::istream& in);

/// Returns fixes sorted by (vehicle, line, date, time) with exact duplicates
/// collapsed.
std::vector<GpsFix> parse_vehicle_fixes(std::istream& in);

void write_lines(std::ostream& out, const std::vector<BusLine>& lines);
void write_line_points(std::ostream& out, const LinePoints& points);
void write_vehicle_fixes(std::ostream& out, const std::vector<GpsFix>& fixes);

struct DatasetPaths {
  std::filesystem::path lines;
  std::filesystem::path line_points;
  std::filesystem::path fixes;
};

/// Parses the three files and assembles a Dataset. Referential problems are
/// left for validate_dataset; parse errors propagate.
Dataset load_dataset(const DatasetPaths& paths);

void write_dataset(const DatasetPaths& paths, const Dataset& dataset);

}  // namespace vterm
