// Acceptance suite: one line per criterion, "criterion N: PASS|FAIL|WARN ...".
// Usage: acceptance [--criterion N]. Exit status is non-zero when any
// selected criterion fails; warnings do not fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "../support/cluster_oracle.h"
#include "../support/path_oracle.h"
#include "vterm/availability.h"
#include "vterm/clustering.h"
#include "vterm/correlation.h"
#include "vterm/interpolation_error.h"
#include "vterm/od_evaluation.h"
#include "vterm/pipeline.h"
#include "vterm/synthetic.h"
#include "vterm/transit_graph.h"

namespace vterm {
namespace {

enum class Status { kPass, kFail, kWarn };

struct Outcome {
  Status status = Status::kPass;
  std::string detail;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(double v, int digits = 3) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(digits);
  os << v;
  return os.str();
}

Outcome fail_or_pass(bool ok, std::string detail) {
  return {ok ? Status::kPass : Status::kFail, std::move(detail)};
}

// 1 ------------------------------------------------------------------------
Outcome line829_trip() {
  const Stopwatch clock;
  const auto f = synth::line829(true);
  const DetectionRun run = run_detection(f.dataset, {}, {});
  const double elapsed = clock.seconds();
  if (run.itineraries.size() != 1) {
    return {Status::kFail, "expected 1 itinerary, got " +
                               std::to_string(run.itineraries.size())};
  }
  const std::vector<std::string> expected = {
      "06:04:51", "06:14:36", "06:15:39", "06:16:43", "06:18:07", "06:19:30",
      "06:21:06", "06:24:48", "06:28:30", "06:29:06", "06:31:41"};
  const DetectedItinerary& det = run.itineraries[0];
  std::string mismatches;
  bool ok = det.entries.size() == expected.size();
  for (std::size_t i = 0; ok && i < expected.size(); ++i) {
    const std::string got = format_hms(det.entries[i].time);
    if (got != expected[i] || det.entries[i].stop_id != f.dataset.itineraries[0].stop_at(i)) {
      ok = false;
      mismatches += " pos" + std::to_string(i + 1) + "=" + got + "(expected " +
                    expected[i] + ", exact " + fmt(det.entries[i].time, 1) + " s)";
    }
  }
  for (const TimedStop& e : det.entries) {
    if (format_hms(e.time) == "06:14:08") {
      ok = false;
      mismatches += " spurious mark present";
    }
  }
  if (elapsed >= 1.0) ok = false;
  return fail_or_pass(ok, std::to_string(det.entries.size()) + " rows" +
                              (mismatches.empty() ? ", all match" : mismatches) +
                              ", " + fmt(elapsed) + " s");
}

std::vector<std::vector<InterpolationErrorSample>> error_by_w(const Dataset& d,
                                                              std::uint64_t seed) {
  const DetectionRun run = run_detection(d, {}, {});
  std::vector<DetectedItinerary> full;
  for (const DetectedItinerary& it : run.itineraries) {
    if (it.interpolated_count() == 0) full.push_back(it);
  }
  std::vector<const ItineraryDef*> defs(full.size(), &d.itineraries.at(0));
  std::vector<std::vector<InterpolationErrorSample>> out;
  for (int w = 2; w <= 8; ++w) {
    out.push_back(evaluate_interpolation_error(
        defs, full, w, 100, seed * 1000003u + static_cast<std::uint64_t>(w)));
  }
  return out;
}

// 2 ------------------------------------------------------------------------
Outcome interpolation_oracle() {
  const Stopwatch clock;
  const auto by_w = error_by_w(synth::uniform_loop_day(20, 16, 60), 1);
  double worst = 0.0;
  std::size_t samples = 0;
  for (const auto& v : by_w) {
    for (const auto& s : v) worst = std::max(worst, s.err_seconds);
    samples += v.size();
  }
  const double elapsed = clock.seconds();
  return fail_or_pass(worst == 0.0 && elapsed < 5.0,
                      std::to_string(samples) + " estimates over w=2..8, max err " +
                          fmt(worst, 6) + " s, " + fmt(elapsed) + " s");
}

// 3 ------------------------------------------------------------------------
Outcome error_growth() {
  const auto by_w =
      error_by_w(synth::jittered_loop_day(20, 16, 90, 1), 1);
  std::vector<double> medians;
  for (const auto& v : by_w) {
    std::vector<double> e;
    for (const auto& s : v) e.push_back(s.err_seconds);
    medians.push_back(quantile_type7(e, 0.5));
  }
  bool ok = true;
  std::string detail = "medians";
  for (std::size_t i = 0; i < medians.size(); ++i) {
    detail += " w" + std::to_string(i + 2) + "=" + fmt(medians[i], 2);
    if (i > 0 && medians[i] < medians[i - 1]) ok = false;
  }
  return fail_or_pass(ok, detail);
}

// 4 ------------------------------------------------------------------------
TagCounts tally(const synth::VehicleLog& v) {
  const auto n = static_cast<std::size_t>(v.positions);
  const auto links = n - 1;
  const auto trips = static_cast<std::size_t>(v.trips);
  std::vector<std::size_t> gaps(trips, 0), spurious(trips, 0);
  for (std::size_t g : v.gap_visits) ++gaps[g / links];
  for (int s : v.spurious_trips) ++spurious[static_cast<std::size_t>(s)];
  std::vector<char> boundary(trips + 1, 1);
  for (int b : v.lost_boundaries) boundary[static_cast<std::size_t>(b)] = 0;

  TagCounts c;
  c.total_marks = trips * links + 1 - v.gap_visits.size() -
                  v.lost_boundaries.size() + v.spurious_trips.size();
  std::vector<char> accepted(trips, 0);
  for (std::size_t j = 0; j < trips; ++j) {
    accepted[j] = boundary[j] && boundary[j + 1];
    if (!accepted[j]) {
      ++c.rejected_segments;
      continue;
    }
    ++c.accepted_itineraries;
    c.valid_tags += n - gaps[j] + spurious[j];
    c.out_of_order += spurious[j];
    c.missing += gaps[j];
    if (j > 0 && accepted[j - 1]) --c.valid_tags;  // shared terminal mark
  }
  return c;
}

Outcome tag_report() {
  const synth::CityDay city = synth::city_day({});
  const DetectionRun run = run_detection(city.dataset, {}, {});
  std::map<LineCategory, TagCounts> expected;
  for (const auto& v : city.log) expected[v.category] += tally(v);
  bool ok = expected == run.report.by_category;
  TagCounts total;
  for (const auto& [cat, c] : expected) total += c;
  const TagCounts got = run.report.total();
  std::string detail = "tally valid=" + std::to_string(total.valid_tags) + "/" +
                       std::to_string(total.total_marks) +
                       " ooo=" + std::to_string(total.out_of_order) +
                       " missing=" + std::to_string(total.missing) +
                       "; report valid=" + std::to_string(got.valid_tags) + "/" +
                       std::to_string(got.total_marks) +
                       " ooo=" + std::to_string(got.out_of_order) +
                       " missing=" + std::to_string(got.missing) + " (" +
                       fmt(got.valid_pct(), 2) + "% valid, " +
                       fmt(got.error_pct(), 2) + "% error)";
  return fail_or_pass(ok, detail);
}

// 5 ------------------------------------------------------------------------
Outcome moving_window() {
  const Stopwatch clock;
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> t(4.5 * 3600, 23.5 * 3600);
  std::uniform_int_distribution<int> count(0, 400), window(1, 60);
  std::size_t mismatches = 0;
  for (int fixture = 0; fixture < 200; ++fixture) {
    std::vector<double> p(static_cast<std::size_t>(count(rng)));
    for (double& x : p) x = fixture % 3 == 0 ? std::floor(t(rng) / 60) * 60 : t(rng);
    const int w = fixture % 4 == 0 ? kDefaultWindowSet[fixture / 4 % 8] : window(rng);
    const auto got = moving_window_counts(p, w);
    std::vector<int> want;
    for (int m = kSpanStartMinute; m + w <= kSpanEndMinute; ++m) {
      int c = 0;
      for (double x : p) c += x >= m * 60.0 && x < (m + w) * 60.0;
      want.push_back(c);
    }
    mismatches += got != want;
  }
  const double elapsed = clock.seconds();
  return fail_or_pass(mismatches == 0 && elapsed < 5.0,
                      "200 fixtures, " + std::to_string(mismatches) +
                          " mismatches, " + fmt(elapsed) + " s");
}

// 6 ------------------------------------------------------------------------
bool matrix_ok(const CorrelationMatrix& m,
               const std::vector<std::vector<double>>& series) {
  for (std::size_t i = 0; i < m.size(); ++i) {
    const auto& s = series[i];
    const bool constant =
        s.size() < 2 || std::all_of(s.begin(), s.end(), [&](double v) { return v == s[0]; });
    if (constant ? m.at(i, i).has_value() : m.at(i, i) != std::optional<double>(1.0)) {
      return false;
    }
    for (std::size_t j = 0; j < m.size(); ++j) {
      if (m.at(i, j) != m.at(j, i)) return false;
      if (m.at(i, j) && std::abs(*m.at(i, j)) > 1.0 + 1e-12) return false;
    }
  }
  return true;
}

Outcome correlation() {
  bool ok = true;
  std::string notes;
  const std::vector<double> x{1, 2, 3}, y{1, 3, 2};
  const std::vector<double> a{2, 4, 4, 4, 5, 5, 7, 9}, b{1, 2, 3, 4, 5, 6, 7, 8};
  const double closed = 34.0 / std::sqrt(32.0 * 42.0);
  if (std::abs(*pearson(x, y) - 0.5) > 1e-12 || std::abs(*pearson(a, b) - closed) > 1e-12) {
    ok = false;
    notes += " closed-form mismatch";
  }
  const std::vector<double> flat{4, 4, 4};
  if (pearson(flat, x).has_value()) {
    ok = false;
    notes += " constant series coerced";
  }

  // Random matrices with some constant series.
  std::mt19937 rng(6);
  std::poisson_distribution<int> pois(1.5);
  std::size_t matrices = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng() % 8, len = 2 + rng() % 200;
    std::vector<std::string> ids;
    std::vector<std::vector<double>> series(n, std::vector<double>(len));
    for (std::size_t i = 0; i < n; ++i) {
      ids.push_back("s" + std::to_string(i));
      const bool constant = rng() % 5 == 0;
      for (double& v : series[i]) v = constant ? 2.0 : pois(rng);
    }
    ok = ok && matrix_ok(correlation_matrix(ids, series, "R"), series);
    ++matrices;
  }

  // Matrices over day-averaged series of a detected city day.
  const synth::CityDay city = synth::city_day({});
  const DetectionRun run = run_detection(city.dataset, {}, {});
  const PassageIndex idx(run.itineraries);
  std::vector<std::string> ids = idx.stop_ids();
  ids.resize(std::min<std::size_t>(ids.size(), 40));
  std::vector<DayPeriod> periods = default_periods();
  periods.push_back(full_day_period());
  for (const DayPeriod& p : periods) {
    std::vector<std::vector<double>> series;
    for (const auto& id : ids) {
      series.push_back(restrict_to_period(idx.day_averaged_series(id, 10),
                                          kSpanStartMinute, p));
    }
    ok = ok && matrix_ok(correlation_matrix(ids, series, p.name), series);
    ++matrices;
  }
  return fail_or_pass(ok, "closed-form within 1e-12, " + std::to_string(matrices) +
                              " matrices symmetric with unit/undefined diagonal" + notes);
}

// 7 ------------------------------------------------------------------------
Outcome clustering() {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0.0, 3000.0);
  const LocalFrame frame(synth::kAnchor);
  std::size_t mismatches = 0, radius_violations = 0, partition_violations = 0;
  std::size_t clusters_seen = 0, shared = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<BusStop> stops;
    const std::size_t n = 2 + rng() % 49;
    std::map<std::string, double> avg;
    std::vector<std::string> outliers;
    for (std::size_t i = 0; i < n; ++i) {
      const std::string id = "S" + std::to_string(1000 + i);
      stops.push_back({id, "", StopType::kStreetStop, frame.to_geo(u(rng), u(rng))});
      avg[id] = static_cast<double>(rng() % 30);
      if (rng() % 2 == 0) outliers.push_back(id);
    }
    const auto cands = build_candidates(outliers, avg);
    const auto got = cluster_stops(cands, stops);
    const auto want = testing::greedy_clusters(cands, stops, kDefaultClusterRadiusM);
    bool same = got.size() == want.size();
    std::multiset<std::string> consumed;
    for (std::size_t i = 0; same && i < got.size(); ++i) {
      same = got[i].members == want[i].members && got[i].consumed == want[i].consumed &&
             got[i].centroid_stop_id == want[i].members.front();
      consumed.insert(got[i].consumed.begin(), got[i].consumed.end());
      const auto& c = *std::find_if(stops.begin(), stops.end(), [&](const BusStop& s) {
        return s.stop_id == got[i].centroid_stop_id;
      });
      for (const auto& m : got[i].members) {
        const auto& s = *std::find_if(stops.begin(), stops.end(),
                                      [&](const BusStop& b) { return b.stop_id == m; });
        radius_violations += haversine_m(c.location, s.location) > kDefaultClusterRadiusM;
      }
      shared += got[i].shared_members;
    }
    clusters_seen += got.size();
    mismatches += !same;
    std::multiset<std::string> all;
    for (const auto& c : cands) all.insert(c.stop_id);
    partition_violations += consumed != all;
  }
  return fail_or_pass(
      mismatches == 0 && radius_violations == 0 && partition_violations == 0,
      "100 instances, " + std::to_string(clusters_seen) + " clusters, " +
          std::to_string(mismatches) + " oracle mismatches, " +
          std::to_string(radius_violations) + " radius violations, " +
          std::to_string(partition_violations) + " consumption-partition violations (" +
          std::to_string(shared) + " shared memberships)");
}

// 8 ------------------------------------------------------------------------
Outcome yen() {
  const Stopwatch clock;
  std::mt19937 rng(8);
  std::size_t mismatches = 0, k1_mismatches = 0, paths = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Digraph g = testing::random_digraph(rng, 10, 0.45);
    const NodeId t = static_cast<NodeId>(g.node_count() - 1);
    auto all = testing::all_simple_paths(g, 0, t);
    if (all.size() > 30) all.resize(30);
    const auto got = yen_k_shortest(g, 0, t, 30);
    mismatches += got != all;
    paths += got.size();
    const auto one = yen_k_shortest(g, 0, t, 1);
    const auto sp = shortest_path(g, 0, t);
    k1_mismatches += sp ? (one.size() != 1 || one[0] != *sp) : !one.empty();
  }
  const double elapsed = clock.seconds();
  return fail_or_pass(mismatches == 0 && k1_mismatches == 0 && elapsed < 10.0,
                      "100 graphs, " + std::to_string(paths) + " paths, " +
                          std::to_string(mismatches) + " K=30 mismatches, " +
                          std::to_string(k1_mismatches) + " K=1 mismatches, " +
                          fmt(elapsed) + " s");
}

// 9 ------------------------------------------------------------------------
std::vector<Cluster> network_clusters(const synth::Network& net) {
  // Candidates rank stops by how many itineraries serve them.
  std::map<std::string, double> served;
  for (const auto& iti : net.itineraries) {
    for (const auto& s : iti.stops) served[s.stop_id] += 1.0;
  }
  std::vector<std::string> outliers;
  for (const auto& [id, count] : served) {
    if (count >= 4.0) outliers.push_back(id);
  }
  return cluster_stops(build_candidates(outliers, served), net.stop_list());
}

Outcome dominance() {
  const Stopwatch clock;
  std::size_t pairs = 0, violations = 0, both_feasible = 0, improved = 0;
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const synth::Network net = synth::random_network(200, 16, 20, 6000, seed);
    const TransitGraph base = build_graph(net.itineraries, net.stops);
    const TransitGraph clustered = add_cluster_transfers(base, network_clusters(net));
    const auto od = generate_od_pairs(net.stops, 250, seed);
    const ODEvaluation ev = evaluate_od(od, base, clustered, net.stops, {}, 1);
    for (std::size_t i = 0; i < od.size(); ++i) {
      ++pairs;
      const TripResult& b = ODEvaluation::best(ev.base[i]);
      const TripResult& c = ODEvaluation::best(ev.clustered[i]);
      if (b.feasible && (!c.feasible || c.distance_m > b.distance_m)) ++violations;
      if (b.feasible && c.feasible) {
        ++both_feasible;
        improved += c.distance_m < b.distance_m;
      }
    }
  }
  return fail_or_pass(pairs >= 1000 && violations == 0,
                      std::to_string(pairs) + " OD pairs, " + std::to_string(violations) +
                          " violations, " + std::to_string(improved) + "/" +
                          std::to_string(both_feasible) + " shortened, " +
                          fmt(clock.seconds(), 1) + " s");
}

// 10 -----------------------------------------------------------------------
Outcome corridor() {
  const synth::Corridor c = synth::corridor();
  const TransitGraph base = build_graph(c.network.itineraries, c.network.stops);
  std::vector<Candidate> cands;
  for (const auto& id : c.dip_stops) cands.push_back({id, 1.0});
  const auto clusters = cluster_stops(cands, c.network.stop_list());
  const TransitGraph clustered = add_cluster_transfers(base, clusters);
  const auto od = synth::corridor_od_pairs(200, 10);
  const ODEvaluation ev = evaluate_od(od, base, clustered, c.network.stops, {}, 1);
  const NetworkSummary& b = ev.base_summary;
  const NetworkSummary& k = ev.clustered_summary;
  const double reduction =
      b.mean_distance_m > 0 ? 1.0 - k.mean_distance_m / b.mean_distance_m : 0.0;
  const bool ok = b.infeasible == 0 && k.infeasible == 0 && reduction >= 0.30 &&
                  k.mean_transfers > b.mean_transfers;
  return fail_or_pass(ok, "mean distance " + fmt(b.mean_distance_m / 1000, 2) + " km -> " +
                              fmt(k.mean_distance_m / 1000, 2) + " km (" +
                              fmt(100 * reduction, 1) + "% shorter), mean transfers " +
                              fmt(b.mean_transfers, 2) + " -> " +
                              fmt(k.mean_transfers, 2) + ", " +
                              std::to_string(clusters.size()) + " clusters");
}

// 11 -----------------------------------------------------------------------
Outcome throughput() {
  const Dataset d = synth::throughput_day(1'000'000, 11);
  std::size_t fixes = 0;
  for (const FixGroup& g : d.fix_groups) fixes += g.fixes.size();
  const Stopwatch clock;
  const DetectionRun run = run_detection(d, {}, {}, 1);
  const double elapsed = clock.seconds();
  return {elapsed < 30.0 ? Status::kPass : Status::kWarn,
          std::to_string(fixes) + " fixes, " + std::to_string(run.itineraries.size()) +
              " itineraries, " + fmt(elapsed, 2) + " s single-threaded (soft limit 30 s)"};
}

const std::vector<std::function<Outcome()>>& criteria() {
  static const std::vector<std::function<Outcome()>> all = {
      line829_trip, interpolation_oracle, error_growth, tag_report,
      moving_window, correlation, clustering, yen,
      dominance, corridor, throughput};
  return all;
}

}  // namespace
}  // namespace vterm

int main(int argc, char** argv) {
  using vterm::Status;
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      selected.push_back(std::atoi(argv[++i]));
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N]...\n", argv[0]);
      return 2;
    }
  }
  const auto& all = vterm::criteria();
  if (selected.empty()) {
    for (std::size_t i = 1; i <= all.size(); ++i) selected.push_back(static_cast<int>(i));
  }
  int failures = 0;
  for (int n : selected) {
    if (n < 1 || n > static_cast<int>(all.size())) {
      std::fprintf(stderr, "unknown criterion %d\n", n);
      return 2;
    }
    vterm::Outcome o;
    try {
      o = all[static_cast<std::size_t>(n - 1)]();
    } catch (const std::exception& e) {
      o = {Status::kFail, std::string("exception: ") + e.what()};
    }
    const char* label = o.status == Status::kPass   ? "PASS"
                        : o.status == Status::kWarn ? "WARN"
                                                    : "FAIL";
    std::printf("criterion %d: %s %s\n", n, label, o.detail.c_str());
    std::fflush(stdout);
    failures += o.status == Status::kFail;
  }
  return failures == 0 ? 0 : 1;
}
