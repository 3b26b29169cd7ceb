#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vterm/geo.h"
#include "vterm/model.h"
#include "vterm/od_evaluation.h"

// Seeded generators for fixtures, tests and benchmarks. Geometry is laid out
// in meters on a LocalFrame and converted to coordinates.
namespace vterm::synth {

/// Reference point of every synthetic layout (west Curitiba).
inline constexpr GeoPoint kAnchor{-25.4437, -49.3473};
inline constexpr ServiceDate kDefaultDate{2022, 11, 7};

struct Keyframe {
  int time = 0;  // seconds of day
  double east_m = 0.0;
  double north_m = 0.0;
};

/// Piecewise-linear trajectory through the keyframes, sampled at every
/// multiple of step_seconds inside the keyframe span plus each keyframe time.
std::vector<GpsFix> sample_keyframes(const LocalFrame& frame,
                                     std::span<const Keyframe> keys,
                                     const std::string& vehicle_id,
                                     const std::string& line_code,
                                     const ServiceDate& date, int step_seconds);

/// Sorts fixes and builds a dataset around them.
Dataset assemble(std::vector<BusLine> lines, std::vector<BusStop> stops,
                 std::vector<ItineraryDef> itineraries,
                 std::vector<GpsFix> fixes);

// --- line 829 fixture ----------------------------------------------------

struct Line829 {
  Dataset dataset;
  /// Passage time of every itinerary position (11 entries).
  std::vector<int> true_times;
  std::vector<std::pair<int, int>> failure_windows;  // closed, seconds
};

/// One circular trip of vehicle BA020 on 2022-11-07. With failures, fixes in
/// the three windows around stops 3, 5 and 8 are deleted. The route from the
/// terminal to stop 2 passes about 54 m from stop 10.
Line829 line829(bool inject_failures = true);

// --- loop lines ---------------------------------------------------------

/// A circular line laid out as a regular polygon of `stop_count` stops.
struct LoopLine {
  BusLine line;
  ItineraryDef itinerary;  // stop_count + 1 positions
  std::vector<BusStop> stops;
  std::vector<std::pair<double, double>> xy;  // meters, per stop
};

LoopLine make_loop_line(const LocalFrame& frame, const std::string& code,
                        LineCategory category, int stop_count,
                        double spacing_m, double center_east_m,
                        double center_north_m);

/// A fix placed near stop `stop_pos` (1-based, not the terminal) while the
/// vehicle drives the link that starts at visit `visit`.
struct SpuriousFix {
  std::size_t visit = 0;
  int stop_pos = 0;
};

/// Drives a vehicle around the loop. visit_times[v] is the arrival at visit
/// v (visit v is stop v mod stop_count). Emits a fix at each stop unless
/// the visit is in `dropped`, plus fixes at one and two thirds of each link.
/// Link durations must be at least 6 s.
std::vector<GpsFix> drive_loop(const LocalFrame& frame, const LoopLine& loop,
                               const std::string& vehicle_id,
                               const ServiceDate& date,
                               std::span<const int> visit_times,
                               const std::set<std::size_t>& dropped = {},
                               std::span<const SpuriousFix> spurious = {});

/// Constant-speed loop: `trips` back-to-back circuits, every link taking
/// link_seconds.
Dataset uniform_loop_day(int stop_count, int trips, int link_seconds);

/// Loop whose link durations follow an autocorrelated random process around
/// base_link_seconds.
Dataset jittered_loop_day(int stop_count, int trips, int base_link_seconds,
                          std::uint64_t seed);

// --- city day with injected faults --------------------------------------

struct CityDaySpec {
  int lines_per_category = 2;
  int vehicles_per_line = 3;
  int trips_per_vehicle = 10;
  int min_stops = 12;
  int max_stops = 24;
  double gap_rate = 0.04;          // per non-terminal visit
  double spurious_rate = 0.25;     // per trip
  double anchor_loss_rate = 0.05;  // per interior trip boundary
  std::uint64_t seed = 7;
};

/// What the generator did to one vehicle-day.
struct VehicleLog {
  std::string vehicle_id;
  std::string line_code;
  LineCategory category = LineCategory::kConvencional;
  int positions = 0;  // itinerary length including the closing terminal
  int trips = 0;
  std::vector<std::size_t> gap_visits;
  std::vector<int> spurious_trips;    // 0-based trip index
  std::vector<int> lost_boundaries;   // boundary b sits between trips b-1, b
};

struct CityDay {
  Dataset dataset;
  std::vector<VehicleLog> log;
};

/// Loop lines of the ALIMENTADOR, CONVENCIONAL and TRONCAL categories.
CityDay city_day(const CityDaySpec& spec);

/// Fault-free loop traffic with roughly `target_fixes` fixes.
Dataset throughput_day(std::size_t target_fixes, std::uint64_t seed);

// --- route networks -----------------------------------------------------

struct Network {
  std::vector<BusLine> lines;
  StopIndex stops;
  std::vector<ItineraryDef> itineraries;

  std::vector<BusStop> stop_list() const;
};

/// Two-direction lines built by nearest-neighbour walks over random stops.
Network random_network(int stop_count, int line_count, int stops_per_line,
                       double box_m, std::uint64_t seed);

/// Three lines meeting only at a shared terminal. Lines A and C run parallel
/// 2 km apart with line B in between. B dips toward A at 6 km and C dips
/// toward B at 7 km; each dip stop lies 500 m from the corridor below it.
struct Corridor {
  Network network;
  std::vector<std::string> dip_stops;
};

Corridor corridor();

/// Origins near the far end of line A, destinations near the far end of
/// line C.
std::vector<ODPair> corridor_od_pairs(std::size_t count, std::uint64_t seed);

}  // namespace vterm::synth
