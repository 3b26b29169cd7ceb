#include "vterm/pipeline.h"

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "vterm/availability.h"
#include "vterm/clustering.h"
#include "vterm/error.h"
#include "vterm/interpolation_error.h"
#include "vterm/od_evaluation.h"
#include "vterm/records.h"
#include "vterm/transit_graph.h"
#include "vterm/validation.h"

namespace vterm {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// --- formatting -----------------------------------------------------------

std::string num(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::string fixed(double v, int digits) {
  char buf[64];
  auto [end, ec] =
      std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, digits);
  return std::string(buf, end);
}

std::string opt_num(const std::optional<double>& v) {
  return v ? num(*v) : "NA";
}

std::string hhmm(int minute) {
  std::ostringstream os;
  os << std::setfill('0') << std::setw(2) << minute / 60 << ':' << std::setw(2)
     << minute % 60;
  return os.str();
}

int parse_hhmm(const std::string& text) {
  return parse_hms(text) / 60;
}

std::string join(const std::vector<std::string>& items, char sep = ' ') {
  std::string out;
  for (const std::string& s : items) {
    if (!out.empty()) out += sep;
    out += s;
  }
  return out;
}

std::vector<std::string> split_ws(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string tok; is >> tok;) out.push_back(tok);
  return out;
}

// --- CSV ------------------------------------------------------------------

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

class CsvWriter {
 public:
  CsvWriter(const fs::path& path, const std::vector<std::string>& header)
      : out_(path, std::ios::binary) {
    if (!out_) throw Error("cannot write " + path.string());
    row(header);
  }
  void row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out_ << ',';
      out_ << csv_field(fields[i]);
    }
    out_ << '\n';
  }
  void close() {
    out_.close();
    if (!out_) throw Error("write failed");
  }

 private:
  std::ofstream out_;
};

std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        out.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        out.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back();
    } else if (c != '\r') {
      out.back() += c;
    }
  }
  return out;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name, const fs::path& file) const {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw ParseError(1, "missing column '" + name + "'", file.string());
    }
    return static_cast<std::size_t>(it - header.begin());
  }
};

CsvTable read_csv(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  CsvTable t;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto fields = csv_split(line);
    if (t.header.empty()) {
      t.header = std::move(fields);
      continue;
    }
    if (fields.size() != t.header.size()) {
      throw ParseError(line_no, "expected " + std::to_string(t.header.size()) +
                                    " fields, found " +
                                    std::to_string(fields.size()),
                       path.string());
    }
    t.rows.push_back(std::move(fields));
  }
  return t;
}

double to_double(const std::string& s, const fs::path& file) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError(0, "not a number: '" + s + "'", file.string());
  }
  return v;
}

// --- artifacts ------------------------------------------------------------

constexpr const char* kDetected = "detected_itineraries.csv";
constexpr const char* kDailyAverages = "stop_daily_averages.csv";
constexpr const char* kClusters = "clusters.csv";
constexpr const char* kManifest = "manifest.json";

class StageContext {
 public:
  StageContext(const PipelineConfig& config, Stage stage)
      : config_(config), stage_(stage) {}

  const PipelineConfig& config() const { return config_; }

  fs::path artifact(const std::string& name) {
    written_.push_back(name);
    return config_.output_dir / name;
  }

  fs::path require(const std::string& name) const {
    const fs::path p = config_.output_dir / name;
    if (!fs::exists(p)) {
      throw MissingDependencyError(std::string(to_string(stage_)) +
                                   " needs " + name +
                                   "; run the stage that produces it first");
    }
    return p;
  }

  const std::vector<std::string>& written() const { return written_; }

  void remove_written() const {
    for (const std::string& name : written_) {
      std::error_code ec;
      fs::remove(config_.output_dir / name, ec);
    }
  }

 private:
  const PipelineConfig& config_;
  Stage stage_;
  std::vector<std::string> written_;
};

Dataset load_inputs(const PipelineConfig& c) {
  for (const fs::path& p : {c.lines, c.line_points, c.fixes}) {
    if (p.empty()) throw Error("config is missing an input path");
    if (!fs::exists(p)) throw Error("input not found: " + p.string());
  }
  return load_dataset({c.lines, c.line_points, c.fixes});
}

// --- validate -------------------------------------------------------------

void stage_validate(StageContext& ctx, const Dataset& d) {
  const ValidationReport report = validate_dataset(d);
  CsvWriter out(ctx.artifact("validation_report.csv"),
                {"kind", "subject", "detail"});
  for (const ValidationIssue& i : report.issues) {
    out.row({std::string(to_string(i.kind)), i.subject, i.detail});
  }
  out.close();
}

// --- detect ---------------------------------------------------------------

std::string trip_id(std::size_t i) {
  std::ostringstream os;
  os << 'T' << std::setfill('0') << std::setw(6) << i + 1;
  return os.str();
}

void write_tag_row(CsvWriter& out, const std::string& label, const TagCounts& c) {
  out.row({label, std::to_string(c.total_marks), std::to_string(c.valid_tags),
           fixed(c.valid_pct(), 2), std::to_string(c.out_of_order),
           std::to_string(c.missing), fixed(c.error_pct(), 2),
           std::to_string(c.accepted_itineraries),
           std::to_string(c.rejected_segments),
           std::to_string(c.discarded_segments)});
}

void stage_detect(StageContext& ctx, const Dataset& d) {
  const PipelineConfig& c = ctx.config();
  MatchOptions match;
  match.acceptance_radius_m = c.acceptance_radius_m;
  SegmentOptions seg;
  seg.idle_gap_seconds = c.idle_gap_minutes * 60;
  seg.wrap_fraction = c.wrap_fraction;
  const DetectionRun run = run_detection(d, match, seg, c.jobs);

  CsvWriter det(ctx.artifact(kDetected),
                {"trip_id", "line_code", "vehicle_id", "direction", "date",
                 "position", "stop_id", "time", "time_seconds", "provenance"});
  for (std::size_t i = 0; i < run.itineraries.size(); ++i) {
    const DetectedItinerary& it = run.itineraries[i];
    for (const TimedStop& e : it.entries) {
      det.row({trip_id(i), it.line_code, it.vehicle_id, it.direction,
               it.date.iso(), std::to_string(e.position), e.stop_id,
               format_hms(e.time), num(e.time),
               std::string(to_string(e.provenance))});
    }
  }
  det.close();

  CsvWriter tags(ctx.artifact("tag_report.csv"),
                 {"category", "total_marks_incl_rejected", "valid_tags",
                  "valid_pct", "out_of_order", "missing", "error_pct",
                  "accepted_itineraries", "rejected_segments",
                  "discarded_segments"});
  for (const auto& [category, counts] : run.report.by_category) {
    write_tag_row(tags, std::string(to_string(category)), counts);
  }
  write_tag_row(tags, "TOTAL", run.report.total());
  tags.close();

  CsvWriter rej(ctx.artifact("rejected_segments.csv"),
                {"vehicle_id", "line_code", "direction", "date", "reason",
                 "marks", "first_mark_time"});
  for (const RejectedSegment& r : run.rejected) {
    rej.row({r.vehicle_id, r.line_code, r.direction, r.date.iso(),
             std::string(to_string(r.reason)), std::to_string(r.marks),
             format_hms(r.first_time)});
  }
  rej.close();

  // Interpolation error over the fully observed trips.
  std::vector<const ItineraryDef*> defs;
  std::vector<DetectedItinerary> full;
  std::vector<std::string> full_ids;
  for (std::size_t i = 0; i < run.itineraries.size(); ++i) {
    const DetectedItinerary& it = run.itineraries[i];
    if (it.interpolated_count() != 0) continue;
    for (const ItineraryDef* def : d.itineraries_of(it.line_code)) {
      if (def->direction == it.direction) {
        defs.push_back(def);
        full.push_back(it);
        full_ids.push_back(trip_id(i));
        break;
      }
    }
  }
  CsvWriter samples(ctx.artifact("interpolation_error.csv"),
                    {"w", "trip_id", "position", "err_seconds"});
  CsvWriter summary(ctx.artifact("interpolation_error_summary.csv"),
                    {"w", "seed", "status", "errors", "median_s", "mean_s",
                     "max_s", "detail"});
  for (int w : c.error_widths) {
    const std::uint64_t seed = c.seed * 1000003ULL + static_cast<std::uint64_t>(w);
    try {
      const auto result =
          evaluate_interpolation_error(defs, full, w, c.error_samples, seed);
      std::vector<double> errs;
      for (const InterpolationErrorSample& s : result) {
        samples.row({std::to_string(w), full_ids[s.itinerary_index],
                     std::to_string(s.position), num(s.err_seconds)});
        errs.push_back(s.err_seconds);
      }
      double mean = 0.0;
      for (double e : errs) mean += e / static_cast<double>(errs.size());
      summary.row({std::to_string(w), std::to_string(seed), "ok",
                   std::to_string(errs.size()), num(quantile_type7(errs, 0.5)),
                   num(mean), num(*std::max_element(errs.begin(), errs.end())),
                   ""});
    } catch (const Error& e) {
      summary.row({std::to_string(w), std::to_string(seed), "insufficient", "0",
                   "NA", "NA", "NA", e.what()});
    }
  }
  samples.close();
  summary.close();
}

// --- analyze ----------------------------------------------------------------

/// Analytics view of the stops: terminals sharing a name collapse into one
/// key; every other stop keeps its id.
struct StopView {
  std::map<std::string, std::string> key_of;  // stop_id -> key
  struct Info {
    std::string name;
    StopType type = StopType::kStreetStop;
    double lat = 0.0;
    double lon = 0.0;
    int members = 0;
  };
  std::map<std::string, Info> info;  // key -> info
};

StopView build_view(const Dataset& d) {
  std::set<std::string> served;
  for (const ItineraryDef& iti : d.itineraries) {
    for (const ItineraryStop& s : iti.stops) served.insert(s.stop_id);
  }
  StopView v;
  for (const auto& [id, stop] : d.stops) {
    if (!served.contains(id)) continue;
    const std::string key = stop.stop_type == StopType::kTerminal
                                ? "TERMINAL:" + normalize_token(stop.name)
                                : id;
    v.key_of[id] = key;
    auto& info = v.info[key];
    if (info.members == 0) {
      info.name = stop.name;
      info.type = stop.stop_type;
    }
    ++info.members;
    info.lat += stop.location.lat;
    info.lon += stop.location.lon;
  }
  for (auto& [key, info] : v.info) {
    info.lat /= info.members;
    info.lon /= info.members;
  }
  return v;
}

void stage_analyze(StageContext& ctx, const Dataset& d) {
  const PipelineConfig& c = ctx.config();
  std::vector<DetectedItinerary> trips =
      read_detected_itineraries(ctx.require(kDetected));
  const StopView view = build_view(d);
  for (DetectedItinerary& t : trips) {
    for (TimedStop& e : t.entries) {
      auto it = view.key_of.find(e.stop_id);
      if (it != view.key_of.end()) e.stop_id = it->second;
    }
  }
  const PassageIndex index(trips);

  std::map<std::string, std::vector<double>> series;
  std::map<std::string, StopType> category_of;
  std::map<std::string, double> averages;
  for (const auto& [key, info] : view.info) {
    series[key] = index.day_averaged_series(key, c.window_minutes);
    category_of[key] = info.type;
    averages[key] = daily_average(std::span<const double>(series[key]));
  }
  const CategorySeries by_category = aggregate_by_category(series, category_of);
  const OutlierResult outliers = find_outlier_stops(averages, category_of);
  const std::set<std::string> outlier_set(outliers.stops.begin(),
                                          outliers.stops.end());

  CsvWriter cat(ctx.artifact("category_series.csv"),
                {"category", "window_minutes", "window_start", "mean_buses"});
  for (const auto& [type, values] : by_category.mean) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      cat.row({std::string(to_string(type)), std::to_string(c.window_minutes),
               hhmm(kSpanStartMinute + static_cast<int>(i)), num(values[i])});
    }
  }
  cat.close();

  CsvWriter avg(ctx.artifact(kDailyAverages),
                {"stop_id", "name", "category", "lat", "lon", "member_stops",
                 "daily_avg_buses", "outlier"});
  for (const auto& [key, info] : view.info) {
    avg.row({key, info.name, std::string(to_string(info.type)), num(info.lat),
             num(info.lon), std::to_string(info.members), num(averages[key]),
             outlier_set.contains(key) ? "1" : "0"});
  }
  avg.close();

  CsvWriter warn(ctx.artifact("analysis_warnings.csv"), {"source", "message"});
  for (const std::string& w : by_category.warnings) warn.row({"category_series", w});
  for (const std::string& w : outliers.warnings) warn.row({"outliers", w});
  warn.close();
}

// --- cluster ------------------------------------------------------------------

void stage_cluster(StageContext& ctx, const Dataset& d) {
  const PipelineConfig& c = ctx.config();
  const fs::path avg_path = ctx.require(kDailyAverages);
  const std::vector<DetectedItinerary> trips =
      read_detected_itineraries(ctx.require(kDetected));

  const CsvTable avg = read_csv(avg_path);
  const std::size_t id_col = avg.column("stop_id", avg_path);
  const std::size_t avg_col = avg.column("daily_avg_buses", avg_path);
  const std::size_t out_col = avg.column("outlier", avg_path);
  std::map<std::string, double> averages;
  std::vector<std::string> outliers;
  for (const auto& row : avg.rows) {
    averages[row[id_col]] = to_double(row[avg_col], avg_path);
    if (row[out_col] == "1") outliers.push_back(row[id_col]);
  }

  std::vector<BusStop> bus_stops;
  for (const auto& [id, s] : d.stops) bus_stops.push_back(s);
  const auto candidates = build_candidates(outliers, averages);
  std::vector<Cluster> clusters =
      cluster_stops(candidates, bus_stops, c.cluster_radius_m);

  const PassageIndex index(trips);
  const ClusterStats stats = cluster_stats(clusters, index, c.window_minutes);
  const ClusterCoverage cov = coverage(clusters);

  CsvWriter cl(ctx.artifact(kClusters),
               {"cluster_id", "centroid_stop_id", "members", "consumed",
                "shared_members", "lines_served", "avg_buses"});
  CsvWriter cen(ctx.artifact("centroids.csv"),
                {"cluster_id", "stop_id", "lat", "lon", "member_count",
                 "avg_buses"});
  for (const Cluster& k : clusters) {
    cl.row({std::to_string(k.cluster_id), k.centroid_stop_id, join(k.members),
            join(k.consumed), std::to_string(k.shared_members),
            join(k.lines_served), num(k.avg_buses)});
    const BusStop& s = d.stops.at(k.centroid_stop_id);
    cen.row({std::to_string(k.cluster_id), s.stop_id, num(s.location.lat),
             num(s.location.lon), std::to_string(k.members.size()),
             num(k.avg_buses)});
  }
  cl.close();
  cen.close();

  CsvWriter st(ctx.artifact("cluster_stats.csv"), {"metric", "value"});
  st.row({"clusters", std::to_string(cov.clusters)});
  st.row({"total_memberships", std::to_string(cov.total_memberships)});
  st.row({"distinct_stops", std::to_string(cov.distinct_stops)});
  st.row({"pearson_r_avg_buses_vs_lines", opt_num(stats.r)});
  st.row({"p_value", opt_num(stats.p_value)});
  st.close();

  std::map<std::pair<std::string, int>, std::vector<double>> cache;
  const SeriesLookup lookup = [&](const std::string& stop,
                                  int w) -> const std::vector<double>* {
    if (!index.has_stop(stop)) return nullptr;
    auto key = std::make_pair(stop, w);
    auto it = cache.find(key);
    if (it == cache.end()) {
      it = cache.emplace(key, index.day_averaged_series(stop, w)).first;
    }
    return &it->second;
  };

  std::vector<DayPeriod> matrix_periods = c.periods;
  matrix_periods.push_back(full_day_period());
  CsvWriter mat(ctx.artifact("correlation_matrices.csv"),
                {"cluster_id", "period", "window_minutes", "stop_a", "stop_b",
                 "r"});
  CsvWriter prof(ctx.artifact("sync_profiles.csv"),
                 {"cluster_id", "period", "window_minutes", "mean_r",
                  "defined_pairs", "total_pairs"});
  std::vector<std::vector<SyncProfileEntry>> profiles;
  for (const Cluster& k : clusters) {
    std::vector<std::string> ids;
    for (const std::string& m : k.members) {
      if (lookup(m, c.window_minutes)) ids.push_back(m);
    }
    if (ids.size() < 2) continue;
    for (const DayPeriod& p : matrix_periods) {
      std::vector<std::vector<double>> restricted;
      for (const std::string& id : ids) {
        restricted.push_back(restrict_to_period(*lookup(id, c.window_minutes),
                                                kSpanStartMinute, p));
      }
      const CorrelationMatrix m = correlation_matrix(ids, restricted, p.name);
      for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = 0; j < m.size(); ++j) {
          mat.row({std::to_string(k.cluster_id), p.name,
                   std::to_string(c.window_minutes), ids[i], ids[j],
                   opt_num(m.at(i, j))});
        }
      }
    }
    auto profile = cluster_sync_profile(ids, lookup, c.periods, c.window_set,
                                        kSpanStartMinute);
    for (const SyncProfileEntry& e : profile) {
      prof.row({std::to_string(k.cluster_id), e.period,
                std::to_string(e.window_minutes), opt_num(e.mean_r),
                std::to_string(e.defined_pairs), std::to_string(e.total_pairs)});
    }
    profiles.push_back(std::move(profile));
  }
  for (const SyncProfileEntry& e : average_profiles(profiles)) {
    prof.row({"ALL", e.period, std::to_string(e.window_minutes),
              opt_num(e.mean_r), std::to_string(e.defined_pairs),
              std::to_string(e.total_pairs)});
  }
  mat.close();
  prof.close();
}

// --- route ----------------------------------------------------------------------

std::vector<ODPair> read_od_file(const fs::path& path) {
  const CsvTable t = read_csv(path);
  const std::size_t a = t.column("origin_lat", path);
  const std::size_t b = t.column("origin_lon", path);
  const std::size_t e = t.column("dest_lat", path);
  const std::size_t f = t.column("dest_lon", path);
  std::vector<ODPair> out;
  for (const auto& row : t.rows) {
    ODPair p{{to_double(row[a], path), to_double(row[b], path)},
             {to_double(row[e], path), to_double(row[f], path)}};
    if (!is_valid(p.origin) || !is_valid(p.destination)) {
      throw ParseError(0, "invalid OD coordinate", path.string());
    }
    out.push_back(p);
  }
  return out;
}

void stage_route(StageContext& ctx, const Dataset& d) {
  const PipelineConfig& c = ctx.config();
  const fs::path clusters_path = ctx.require(kClusters);
  const std::vector<DetectedItinerary> trips =
      read_detected_itineraries(ctx.require(kDetected));

  const CsvTable ct = read_csv(clusters_path);
  const std::size_t id_col = ct.column("cluster_id", clusters_path);
  const std::size_t mem_col = ct.column("members", clusters_path);
  std::vector<Cluster> clusters;
  for (const auto& row : ct.rows) {
    Cluster k;
    k.cluster_id = static_cast<int>(to_double(row[id_col], clusters_path));
    k.members = split_ws(row[mem_col]);
    for (const std::string& m : k.members) {
      if (!d.stops.contains(m)) {
        throw InvariantError("cluster member '" + m + "' is not a known stop");
      }
    }
    clusters.push_back(std::move(k));
  }

  std::set<std::string> detected_lines;
  for (const DetectedItinerary& t : trips) detected_lines.insert(t.line_code);
  std::vector<ItineraryDef> served;
  for (const ItineraryDef& iti : d.itineraries) {
    if (detected_lines.contains(iti.line_code)) served.push_back(iti);
  }
  const TransitGraph base = build_graph(served, d.stops);
  const TransitGraph clustered = add_cluster_transfers(base, clusters);

  const std::vector<ODPair> pairs =
      c.od_file.empty()
          ? generate_od_pairs(d.stops, c.od_pairs, c.seed, c.od_jitter_m)
          : read_od_file(c.od_file);
  RoutingOptions options;
  options.k_paths = c.k_paths;
  options.search_radius_m = c.od_search_radius_m;
  const ODEvaluation ev =
      evaluate_od(pairs, base, clustered, d.stops, options, c.jobs);

  CsvWriter od(ctx.artifact("od_pairs.csv"),
               {"pair_id", "origin_lat", "origin_lon", "dest_lat", "dest_lon"});
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    od.row({std::to_string(i + 1), num(pairs[i].origin.lat),
            num(pairs[i].origin.lon), num(pairs[i].destination.lat),
            num(pairs[i].destination.lon)});
  }
  od.close();

  CsvWriter res(ctx.artifact("od_results.csv"),
                {"pair_id", "network", "feasible", "distance_m", "walk_m",
                 "transfers", "lines", "stops"});
  CsvWriter kp(ctx.artifact("od_kpaths.csv"),
               {"pair_id", "network", "rank", "distance_m", "walk_m",
                "transfers", "lines"});
  auto emit = [&](const char* network,
                  const std::vector<std::vector<TripResult>>& all) {
    for (std::size_t i = 0; i < all.size(); ++i) {
      const TripResult& best = ODEvaluation::best(all[i]);
      res.row({std::to_string(i + 1), network, best.feasible ? "1" : "0",
               best.feasible ? num(best.distance_m) : "NA",
               best.feasible ? num(best.walk_m) : "NA",
               best.feasible ? std::to_string(best.transfers) : "NA",
               join(best.lines), join(best.stops)});
      for (std::size_t r = 0; r < all[i].size(); ++r) {
        const TripResult& t = all[i][r];
        kp.row({std::to_string(i + 1), network, std::to_string(r + 1),
                num(t.distance_m), num(t.walk_m), std::to_string(t.transfers),
                join(t.lines)});
      }
    }
  };
  emit("base", ev.base);
  emit("clustered", ev.clustered);
  res.close();
  kp.close();

  CsvWriter sum(ctx.artifact("od_summary.csv"),
                {"network", "feasible", "infeasible", "mean_distance_m",
                 "q1_distance_m", "median_distance_m", "q3_distance_m",
                 "mean_transfers", "q1_transfers", "median_transfers",
                 "q3_transfers"});
  auto summary_row = [&](const char* name, const NetworkSummary& s) {
    sum.row({name, std::to_string(s.feasible), std::to_string(s.infeasible),
             num(s.mean_distance_m), num(s.q1_distance_m),
             num(s.median_distance_m), num(s.q3_distance_m),
             num(s.mean_transfers), num(s.q1_transfers),
             num(s.median_transfers), num(s.q3_transfers)});
  };
  summary_row("base", ev.base_summary);
  summary_row("clustered", ev.clustered_summary);
  sum.close();
}

// --- manifest -------------------------------------------------------------------

void update_manifest(const PipelineConfig& c, Stage stage,
                     const std::vector<std::string>& written) {
  const fs::path path = c.output_dir / kManifest;
  json m = json::object();
  if (fs::exists(path)) {
    std::ifstream in(path);
    try {
      m = json::parse(in);
    } catch (const json::exception&) {
      m = json::object();
    }
  }
  m["config"] = json::parse(config_to_json(c));
  m["seed"] = c.seed;
  json inputs = json::object();
  inputs["lines"] = {{"path", c.lines.filename().string()},
                     {"sha256", sha256_file(c.lines)}};
  inputs["line_points"] = {{"path", c.line_points.filename().string()},
                           {"sha256", sha256_file(c.line_points)}};
  inputs["fixes"] = {{"path", c.fixes.filename().string()},
                     {"sha256", sha256_file(c.fixes)}};
  if (!c.od_file.empty()) {
    inputs["od_file"] = {{"path", c.od_file.filename().string()},
                         {"sha256", sha256_file(c.od_file)}};
  }
  m["inputs"] = inputs;
  if (!m.contains("artifacts")) m["artifacts"] = json::object();
  if (!m.contains("stages")) m["stages"] = json::object();
  std::vector<std::string> names;
  for (const std::string& name : written) {
    m["artifacts"][name] = sha256_file(c.output_dir / name);
    names.push_back(name);
  }
  m["stages"][std::string(to_string(stage))] = names;
  std::ofstream out(path, std::ios::binary);
  out << m.dump(2) << '\n';
  if (!out) throw Error("cannot write " + path.string());
}

}  // namespace

// --- config ---------------------------------------------------------------------

void PipelineConfig::validate() const {
  if (!(acceptance_radius_m > 0.0)) throw Error("acceptance_radius_m must be positive");
  if (!(cluster_radius_m > 0.0)) throw Error("cluster_radius_m must be positive");
  if (!(od_search_radius_m > 0.0)) throw Error("od_search_radius_m must be positive");
  if (window_minutes < 1 || window_minutes > 18 * 60) {
    throw Error("window_minutes must lie in [1, 1080]");
  }
  if (window_set.empty()) throw Error("window_set must not be empty");
  for (int w : window_set) {
    if (w < 1 || w > 18 * 60) throw Error("window_set entries must lie in [1, 1080]");
  }
  for (int w : error_widths) {
    if (w < 2) throw Error("error_widths entries must be at least 2");
  }
  if (k_paths < 1) throw Error("k_paths must be at least 1");
  if (idle_gap_minutes < 1) throw Error("idle_gap_minutes must be positive");
  if (!(wrap_fraction > 0.0 && wrap_fraction < 1.0)) {
    throw Error("wrap_fraction must lie in (0, 1)");
  }
  if (periods.empty()) throw Error("periods must not be empty");
  for (const DayPeriod& p : periods) {
    if (p.name.empty() || p.start_minute >= p.end_minute) {
      throw Error("period '" + p.name + "' is ill-formed");
    }
  }
  if (jobs < 1) throw Error("jobs must be at least 1");
}

PipelineConfig parse_config(const std::string& json_text,
                            const fs::path& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(0, std::string("malformed config: ") + e.what());
  }
  if (!j.is_object()) throw ParseError(0, "config must be a JSON object");

  PipelineConfig c;
  auto path = [&](const json& v) {
    fs::path p = v.get<std::string>();
    return p.is_relative() && !base_dir.empty() ? base_dir / p : p;
  };
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "lines") c.lines = path(v);
      else if (key == "line_points") c.line_points = path(v);
      else if (key == "fixes") c.fixes = path(v);
      else if (key == "output_dir") c.output_dir = path(v);
      else if (key == "od_file") c.od_file = path(v);
      else if (key == "acceptance_radius_m") c.acceptance_radius_m = v.get<double>();
      else if (key == "idle_gap_minutes") c.idle_gap_minutes = v.get<int>();
      else if (key == "wrap_fraction") c.wrap_fraction = v.get<double>();
      else if (key == "error_widths") c.error_widths = v.get<std::vector<int>>();
      else if (key == "error_samples") c.error_samples = v.get<std::size_t>();
      else if (key == "window_minutes") c.window_minutes = v.get<int>();
      else if (key == "window_set") c.window_set = v.get<std::vector<int>>();
      else if (key == "cluster_radius_m") c.cluster_radius_m = v.get<double>();
      else if (key == "k_paths") c.k_paths = v.get<std::size_t>();
      else if (key == "od_search_radius_m") c.od_search_radius_m = v.get<double>();
      else if (key == "od_pairs") c.od_pairs = v.get<std::size_t>();
      else if (key == "od_jitter_m") c.od_jitter_m = v.get<double>();
      else if (key == "seed") c.seed = v.get<std::uint64_t>();
      else if (key == "jobs") c.jobs = v.get<int>();
      else if (key == "periods") {
        c.periods.clear();
        for (const json& p : v) {
          c.periods.push_back({p.at("name").get<std::string>(),
                               parse_hhmm(p.at("start").get<std::string>()),
                               parse_hhmm(p.at("end").get<std::string>())});
        }
      } else {
        throw ParseError(0, "unknown config key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw ParseError(0, std::string("bad config value: ") + e.what());
  }
  c.validate();
  return c;
}

PipelineConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str(), path.parent_path());
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.detail(), path.string());
  }
}

std::string config_to_json(const PipelineConfig& c) {
  // Output location and thread count do not affect results and are left out.
  json j;
  j["lines"] = c.lines.filename().string();
  j["line_points"] = c.line_points.filename().string();
  j["fixes"] = c.fixes.filename().string();
  if (!c.od_file.empty()) j["od_file"] = c.od_file.filename().string();
  j["acceptance_radius_m"] = c.acceptance_radius_m;
  j["idle_gap_minutes"] = c.idle_gap_minutes;
  j["wrap_fraction"] = c.wrap_fraction;
  j["error_widths"] = c.error_widths;
  j["error_samples"] = c.error_samples;
  j["window_minutes"] = c.window_minutes;
  j["window_set"] = c.window_set;
  j["cluster_radius_m"] = c.cluster_radius_m;
  j["k_paths"] = c.k_paths;
  j["od_search_radius_m"] = c.od_search_radius_m;
  j["od_pairs"] = c.od_pairs;
  j["od_jitter_m"] = c.od_jitter_m;
  j["seed"] = c.seed;
  json periods = json::array();
  for (const DayPeriod& p : c.periods) {
    periods.push_back({{"name", p.name},
                       {"start", hhmm(p.start_minute)},
                       {"end", hhmm(p.end_minute)}});
  }
  j["periods"] = periods;
  return j.dump();
}

// --- detection run ----------------------------------------------------------------

DetectionRun run_detection(const Dataset& dataset, const MatchOptions& match,
                           const SegmentOptions& segment, int jobs) {
  struct GroupOut {
    std::vector<DetectedItinerary> accepted;
    std::vector<RejectedSegment> rejected;
    std::optional<LineCategory> category;
    TagCounts counts;
  };
  const auto& groups = dataset.fix_groups;
  std::vector<GroupOut> outs(groups.size());

  auto process = [&](std::size_t g) {
    const FixGroup& group = groups[g];
    GroupOut& out = outs[g];
    const BusLine* line = dataset.find_line(group.line_code);
    if (line == nullptr) return;
    out.category = line->category;
    for (const ItineraryDef* iti : dataset.itineraries_of(group.line_code)) {
      const ItineraryMatcher matcher(*iti, dataset.stops);
      const std::vector<StopMark> marks =
          sequence_marks(matcher.match(group.fixes, match));
      const Segmentation seg = segment_trips(marks, *iti, segment);
      std::vector<DetectionResult> results;
      for (const auto& indices : seg.segments) {
        DetectionResult r = detect(*iti, gather(marks, indices));
        if (r.itinerary) {
          r.itinerary->date = group.date;
          check_detected(*r.itinerary);
          out.accepted.push_back(*r.itinerary);
        } else {
          out.rejected.push_back({group.vehicle_id, group.line_code,
                                  iti->direction, group.date, *r.rejection,
                                  indices.size(),
                                  marks[indices.front()].time});
        }
        results.push_back(std::move(r));
      }
      out.counts += count_tags(marks, seg, results);
    }
  };

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t g = next++; g < groups.size(); g = next++) process(g);
  };
  const int n = std::max(1, std::min<int>(jobs, static_cast<int>(groups.size())));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
  }

  DetectionRun run;
  for (GroupOut& out : outs) {
    if (!out.category) continue;
    run.report.add(*out.category, out.counts);
    for (auto& it : out.accepted) run.itineraries.push_back(std::move(it));
    for (auto& r : out.rejected) run.rejected.push_back(std::move(r));
  }
  return run;
}

// --- stages ---------------------------------------------------------------------

std::string_view to_string(Stage stage) {
  switch (stage) {
    case Stage::kValidate: return "validate";
    case Stage::kDetect: return "detect";
    case Stage::kAnalyze: return "analyze";
    case Stage::kCluster: return "cluster";
    case Stage::kRoute: return "route";
  }
  return "unknown";
}

std::vector<Stage> stages_for(std::string_view subcommand) {
  if (subcommand == "validate") return {Stage::kValidate};
  if (subcommand == "detect") return {Stage::kDetect};
  if (subcommand == "analyze") return {Stage::kAnalyze};
  if (subcommand == "cluster") return {Stage::kCluster};
  if (subcommand == "route") return {Stage::kRoute};
  if (subcommand == "all") {
    return {Stage::kValidate, Stage::kDetect, Stage::kAnalyze, Stage::kCluster,
            Stage::kRoute};
  }
  throw Error("unknown subcommand '" + std::string(subcommand) + "'");
}

void run_pipeline(const PipelineConfig& config, const std::vector<Stage>& stages) {
  config.validate();
  fs::create_directories(config.output_dir);
  const Dataset dataset = load_inputs(config);
  for (Stage stage : stages) {
    StageContext ctx(config, stage);
    try {
      switch (stage) {
        case Stage::kValidate: stage_validate(ctx, dataset); break;
        case Stage::kDetect: stage_detect(ctx, dataset); break;
        case Stage::kAnalyze: stage_analyze(ctx, dataset); break;
        case Stage::kCluster: stage_cluster(ctx, dataset); break;
        case Stage::kRoute: stage_route(ctx, dataset); break;
      }
      update_manifest(config, stage, ctx.written());
    } catch (...) {
      ctx.remove_written();
      throw;
    }
  }
}

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  EVP_MD_CTX* md = EVP_MD_CTX_new();
  if (md == nullptr || EVP_DigestInit_ex(md, EVP_sha256(), nullptr) != 1) {
    EVP_MD_CTX_free(md);
    throw Error("sha256 unavailable");
  }
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    if (in.gcount() > 0) EVP_DigestUpdate(md, buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(md, digest, &len);
  EVP_MD_CTX_free(md);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex << std::hex << std::setw(2) << std::setfill('0')
        << static_cast<int>(digest[i]);
  }
  return hex.str();
}

std::vector<DetectedItinerary> read_detected_itineraries(const fs::path& path) {
  const CsvTable t = read_csv(path);
  const std::size_t trip = t.column("trip_id", path);
  const std::size_t line = t.column("line_code", path);
  const std::size_t vehicle = t.column("vehicle_id", path);
  const std::size_t direction = t.column("direction", path);
  const std::size_t date = t.column("date", path);
  const std::size_t position = t.column("position", path);
  const std::size_t stop = t.column("stop_id", path);
  const std::size_t seconds = t.column("time_seconds", path);
  const std::size_t prov = t.column("provenance", path);

  std::vector<DetectedItinerary> out;
  std::string current;
  for (const auto& row : t.rows) {
    if (out.empty() || row[trip] != current) {
      current = row[trip];
      DetectedItinerary d;
      d.line_code = row[line];
      d.vehicle_id = row[vehicle];
      d.direction = row[direction];
      d.date = ServiceDate::from_iso(row[date]);
      out.push_back(std::move(d));
    }
    TimedStop e;
    e.stop_id = row[stop];
    e.position = static_cast<int>(to_double(row[position], path));
    e.time = to_double(row[seconds], path);
    if (row[prov] == to_string(Provenance::kObserved)) {
      e.provenance = Provenance::kObserved;
    } else if (row[prov] == to_string(Provenance::kInterpolated)) {
      e.provenance = Provenance::kInterpolated;
    } else {
      throw ParseError(0, "unknown provenance '" + row[prov] + "'", path.string());
    }
    out.back().entries.push_back(std::move(e));
  }
  for (const DetectedItinerary& d : out) check_detected(d);
  return out;
}

}  // namespace vterm
