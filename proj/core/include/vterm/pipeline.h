#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vterm/correlation.h"
#include "vterm/detection.h"
#include "vterm/map_matching.h"
#include "vterm/model.h"
#include "vterm/tag_report.h"

namespace vterm {

/// Every tunable of a pipeline run. Loaded from a flat JSON object; keys
/// match the field names (periods are {"name", "start", "end"} with HH:MM
/// times, idle_gap_minutes replaces idle_gap_seconds).
struct PipelineConfig {
  std::filesystem::path lines;
  std::filesystem::path line_points;
  std::filesystem::path fixes;
  std::filesystem::path output_dir = "out";
  std::filesystem::path od_file;  // optional CSV of OD pairs

  double acceptance_radius_m = 100.0;
  int idle_gap_minutes = 30;
  double wrap_fraction = 0.5;
  std::vector<int> error_widths = {2, 3, 4, 5, 6, 7, 8};
  std::size_t error_samples = 100;

  int window_minutes = 10;
  std::vector<int> window_set = {10, 15, 20, 25, 30, 35, 40, 45};
  std::vector<DayPeriod> periods = default_periods();

  double cluster_radius_m = 600.0;

  std::size_t k_paths = 30;
  double od_search_radius_m = 600.0;
  std::size_t od_pairs = 1000;
  double od_jitter_m = 400.0;

  std::uint64_t seed = 1;
  int jobs = 1;

  /// Throws vterm::Error on a non-positive radius or window, K < 1, or an
  /// empty/ill-formed period list.
  void validate() const;
};

/// Relative input paths are resolved against the config file's directory.
/// Unknown keys are rejected. Throws ParseError on malformed JSON.
PipelineConfig load_config(const std::filesystem::path& path);
PipelineConfig parse_config(const std::string& json_text,
                            const std::filesystem::path& base_dir = {});
/// Canonical JSON rendering (sorted keys), as stored in the manifest.
std::string config_to_json(const PipelineConfig& config);

// --- detection over a whole dataset ---------------------------------------

struct RejectedSegment {
  std::string vehicle_id;
  std::string line_code;
  std::string direction;
  ServiceDate date;
  RejectionReason reason;
  std::size_t marks = 0;
  int first_time = 0;
};

struct DetectionRun {
  /// Accepted itineraries in (group, itinerary, segment) order.
  std::vector<DetectedItinerary> itineraries;
  std::vector<RejectedSegment> rejected;
  TagReport report;
};

/// Match, sequence, segment and detect every (vehicle, line, day) group
/// against every itinerary of its line. Groups run on `jobs` threads; the
/// result does not depend on jobs.
DetectionRun run_detection(const Dataset& dataset, const MatchOptions& match,
                           const SegmentOptions& segment, int jobs = 1);

// --- stages ---------------------------------------------------------------

enum class Stage { kValidate, kDetect, kAnalyze, kCluster, kRoute };

std::string_view to_string(Stage stage);
/// Stages run by a subcommand; "all" expands to every stage in order.
std::vector<Stage> stages_for(std::string_view subcommand);

/// Runs the stages in order, writing CSV artifacts and manifest.json into
/// config.output_dir. Throws on failure after removing the files written by
/// the failing stage. Stages that need earlier artifacts throw
/// MissingDependencyError when they are absent.
void run_pipeline(const PipelineConfig& config, const std::vector<Stage>& stages);

/// Hex SHA-256 of a file's contents.
std::string sha256_file(const std::filesystem::path& path);

/// Reads detected_itineraries.csv as written by the detect stage.
std::vector<DetectedItinerary> read_detected_itineraries(
    const std::filesystem::path& path);

}  // namespace vterm
