#include "vterm/synthetic.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "vterm/error.h"

namespace vterm::synth {

namespace {

GpsFix make_fix(const LocalFrame& frame, double east, double north,
                const std::string& vehicle, const std::string& line,
                const ServiceDate& date, int t) {
  return {vehicle, line, frame.to_geo(east, north), Timestamp{date, t}};
}

BusStop make_stop(const LocalFrame& frame, std::string id, std::string name,
                  StopType type, double east, double north) {
  return {std::move(id), std::move(name), type, frame.to_geo(east, north)};
}

ItineraryDef make_itinerary(const std::string& line, const std::string& direction,
                            const std::vector<std::string>& stop_ids) {
  ItineraryDef iti;
  iti.line_code = line;
  iti.direction = direction;
  for (std::size_t i = 0; i < stop_ids.size(); ++i) {
    iti.stops.push_back({static_cast<int>(i) + 1, stop_ids[i]});
  }
  iti.circular = stop_ids.size() > 2 && stop_ids.front() == stop_ids.back();
  return iti;
}

std::string numbered(const std::string& prefix, int i, int width = 3) {
  std::string digits = std::to_string(i);
  if (static_cast<int>(digits.size()) < width) {
    digits.insert(0, static_cast<std::size_t>(width) - digits.size(), '0');
  }
  return prefix + digits;
}

}  // namespace

std::vector<GpsFix> sample_keyframes(const LocalFrame& frame,
                                     std::span<const Keyframe> keys,
                                     const std::string& vehicle_id,
                                     const std::string& line_code,
                                     const ServiceDate& date, int step_seconds) {
  if (keys.empty()) return {};
  if (step_seconds <= 0) throw Error("sampling step must be positive");
  std::set<int> times;
  for (const Keyframe& k : keys) times.insert(k.time);
  const int first = keys.front().time;
  const int last = keys.back().time;
  for (int t = (first / step_seconds + 1) * step_seconds; t < last;
       t += step_seconds) {
    times.insert(t);
  }

  std::vector<GpsFix> out;
  std::size_t seg = 0;
  for (int t : times) {
    while (seg + 1 < keys.size() && keys[seg + 1].time < t) ++seg;
    const Keyframe& a = keys[seg];
    const Keyframe& b = keys[std::min(seg + 1, keys.size() - 1)];
    double f = 0.0;
    if (b.time > a.time) {
      f = static_cast<double>(t - a.time) / static_cast<double>(b.time - a.time);
    }
    if (t == a.time) f = 0.0;
    if (t == b.time) f = 1.0;
    out.push_back(make_fix(frame, a.east_m + f * (b.east_m - a.east_m),
                           a.north_m + f * (b.north_m - a.north_m), vehicle_id,
                           line_code, date, t));
  }
  return out;
}

Dataset assemble(std::vector<BusLine> lines, std::vector<BusStop> stops,
                 std::vector<ItineraryDef> itineraries,
                 std::vector<GpsFix> fixes) {
  Dataset d;
  d.lines = std::move(lines);
  for (BusStop& s : stops) {
    const std::string id = s.stop_id;
    d.stops.emplace(id, std::move(s));
  }
  d.itineraries = std::move(itineraries);
  std::sort(fixes.begin(), fixes.end(), [](const GpsFix& a, const GpsFix& b) {
    return std::tie(a.vehicle_id, a.line_code, a.time) <
           std::tie(b.vehicle_id, b.line_code, b.time);
  });
  d.fix_groups = group_fixes(fixes);
  return d;
}

Line829 line829(bool inject_failures) {
  const LocalFrame frame(kAnchor);
  struct StopDef {
    const char* id;
    const char* name;
    double x_km, y_km;
  };
  static const StopDef kStops[] = {
      {"CC01", "Terminal Campo Comprido", 0.0, 0.0},
      {"CC02", "R. Angelo Nebosne, 75", 0.25, 1.05},
      {"CC03", "R. Prof. Pedro Viriato Parigot de Souza, 4716", 0.6, 1.25},
      {"CC04", "R. Prof. Pedro Viriato Parigot de Souza, 5136", 0.9, 1.65},
      {"CC05", "R. Casemiro Augusto Rodacki, 233", 0.8, 2.35},
      {"CC06", "R. Carlos Müller, 331", 0.4, 2.7},
      {"CC07", "R. Carlos Müller, 871", -0.2, 2.5},
      {"CC08", "R. Eduardo Sprada, 5273", -0.6, 1.8},
      {"CC09", "R. Dep. Heitor Alencar Furtado, 5181", -0.25, 1.05},
      {"CC10", "R. Dep. Heitor Alencar Furtado, 4900", 0.0, 0.9},
  };

  Line829 out;
  std::vector<BusStop> stops;
  std::vector<std::string> ids;
  for (const StopDef& s : kStops) {
    stops.push_back(make_stop(frame, s.id, s.name,
                              ids.empty() ? StopType::kTerminal
                                          : StopType::kStreetStop,
                              s.x_km * 1000.0, s.y_km * 1000.0));
    ids.push_back(s.id);
  }
  ids.push_back(ids.front());

  auto hms = [](int h, int m, int s) { return h * 3600 + m * 60 + s; };
  out.true_times = {hms(6, 4, 51),  hms(6, 14, 36), hms(6, 15, 30),
                    hms(6, 16, 43), hms(6, 18, 20), hms(6, 19, 30),
                    hms(6, 21, 6),  hms(6, 27, 0),  hms(6, 28, 30),
                    hms(6, 29, 6),  hms(6, 31, 41)};
  out.failure_windows = {{hms(6, 15, 0), hms(6, 16, 0)},
                         {hms(6, 17, 0), hms(6, 19, 0)},
                         {hms(6, 26, 0), hms(6, 28, 0)}};

  auto at = [&](int t, const StopDef& s) {
    return Keyframe{t, s.x_km * 1000.0, s.y_km * 1000.0};
  };
  std::vector<Keyframe> keys;
  keys.push_back(at(out.true_times[0], kStops[0]));
  keys.push_back(at(hms(6, 12, 30), kStops[0]));  // dwell at the terminal
  keys.push_back({hms(6, 14, 8), 50.0, 880.0});   // passes close to stop 10
  for (int p = 1; p < 10; ++p) {
    if (p == 7) {
      // Slow traffic halfway between stops 7 and 8.
      keys.push_back({hms(6, 22, 0), -400.0, 2150.0});
      keys.push_back({hms(6, 25, 50), -400.0, 2150.0});
    }
    keys.push_back(at(out.true_times[static_cast<std::size_t>(p)], kStops[p]));
  }
  keys.push_back(at(out.true_times[10], kStops[0]));

  std::vector<GpsFix> fixes =
      sample_keyframes(frame, keys, "BA020", "829", kDefaultDate, 20);
  if (inject_failures) {
    std::erase_if(fixes, [&](const GpsFix& f) {
      return std::any_of(out.failure_windows.begin(), out.failure_windows.end(),
                         [&](const auto& w) {
                           return f.time.seconds >= w.first &&
                                  f.time.seconds <= w.second;
                         });
    });
  }

  BusLine line{"829", "UNIVERSIDADE POSITIVO", LineCategory::kAlimentador,
               "LARANJA"};
  out.dataset = assemble({line}, std::move(stops),
                         {make_itinerary("829", "CIRCULAR", ids)},
                         std::move(fixes));
  return out;
}

LoopLine make_loop_line(const LocalFrame& frame, const std::string& code,
                        LineCategory category, int stop_count,
                        double spacing_m, double center_east_m,
                        double center_north_m) {
  if (stop_count < 4) throw Error("loop lines need at least 4 stops");
  LoopLine loop;
  loop.line = {code, "LOOP " + code, category, "CINZA"};
  const double radius =
      spacing_m / (2.0 * std::sin(std::numbers::pi / stop_count));
  std::vector<std::string> ids;
  for (int i = 0; i < stop_count; ++i) {
    const double a = 2.0 * std::numbers::pi * i / stop_count;
    const double x = center_east_m + radius * std::cos(a);
    const double y = center_north_m + radius * std::sin(a);
    loop.xy.emplace_back(x, y);
    const std::string id = numbered(code + "-", i + 1);
    loop.stops.push_back(make_stop(
        frame, id, "Stop " + id, i == 0 ? StopType::kTerminal : StopType::kStreetStop,
        x, y));
    ids.push_back(id);
  }
  ids.push_back(ids.front());
  loop.itinerary = make_itinerary(code, "CIRCULAR", ids);
  return loop;
}

std::vector<GpsFix> drive_loop(const LocalFrame& frame, const LoopLine& loop,
                               const std::string& vehicle_id,
                               const ServiceDate& date,
                               std::span<const int> visit_times,
                               const std::set<std::size_t>& dropped,
                               std::span<const SpuriousFix> spurious) {
  const std::size_t m = loop.xy.size();
  double cx = 0.0;
  double cy = 0.0;
  for (const auto& [x, y] : loop.xy) {
    cx += x / static_cast<double>(m);
    cy += y / static_cast<double>(m);
  }

  std::vector<GpsFix> out;
  auto emit = [&](double x, double y, int t) {
    out.push_back(make_fix(frame, x, y, vehicle_id, loop.line.code, date, t));
  };
  for (std::size_t v = 0; v < visit_times.size(); ++v) {
    const auto [ax, ay] = loop.xy[v % m];
    if (!dropped.contains(v)) emit(ax, ay, visit_times[v]);
    if (v + 1 == visit_times.size()) break;
    const auto [bx, by] = loop.xy[(v + 1) % m];
    const int t0 = visit_times[v];
    const int len = visit_times[v + 1] - t0;
    if (len < 6) throw Error("link durations must be at least 6 s");
    emit(ax + (bx - ax) / 3.0, ay + (by - ay) / 3.0, t0 + len / 3);
    for (const SpuriousFix& s : spurious) {
      if (s.visit != v) continue;
      const auto [qx, qy] = loop.xy[static_cast<std::size_t>(s.stop_pos - 1) % m];
      const double r = std::hypot(qx - cx, qy - cy);
      emit(qx + 30.0 * (qx - cx) / r, qy + 30.0 * (qy - cy) / r, t0 + len / 2);
    }
    emit(ax + 2.0 * (bx - ax) / 3.0, ay + 2.0 * (by - ay) / 3.0,
         t0 + (2 * len) / 3);
  }
  return out;
}

Dataset uniform_loop_day(int stop_count, int trips, int link_seconds) {
  const LocalFrame frame(kAnchor);
  LoopLine loop = make_loop_line(frame, "U01", LineCategory::kAlimentador,
                                 stop_count, 400.0, 0.0, 0.0);
  std::vector<int> times;
  const int visits = trips * stop_count + 1;
  for (int v = 0; v < visits; ++v) times.push_back(6 * 3600 + v * link_seconds);
  auto fixes = drive_loop(frame, loop, "V001", kDefaultDate, times);
  return assemble({loop.line}, loop.stops, {loop.itinerary}, std::move(fixes));
}

Dataset jittered_loop_day(int stop_count, int trips, int base_link_seconds,
                          std::uint64_t seed) {
  const LocalFrame frame(kAnchor);
  LoopLine loop = make_loop_line(frame, "J01", LineCategory::kAlimentador,
                                 stop_count, 400.0, 0.0, 0.0);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 0.18);
  std::vector<int> times{5 * 3600};
  double state = 0.0;
  const int visits = trips * stop_count + 1;
  for (int v = 1; v < visits; ++v) {
    state = 0.8 * state + noise(rng);
    const double link = base_link_seconds * std::exp(state);
    times.push_back(times.back() + std::max(6, static_cast<int>(std::lround(link))));
  }
  auto fixes = drive_loop(frame, loop, "V001", kDefaultDate, times);
  return assemble({loop.line}, loop.stops, {loop.itinerary}, std::move(fixes));
}

CityDay city_day(const CityDaySpec& spec) {
  const LocalFrame frame(kAnchor);
  std::mt19937_64 rng(spec.seed);
  auto chance = [&](double p) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
  };
  auto uniform = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };

  static constexpr LineCategory kCategories[] = {
      LineCategory::kAlimentador, LineCategory::kConvencional,
      LineCategory::kTroncal};
  CityDay city;
  std::vector<BusLine> lines;
  std::vector<BusStop> stops;
  std::vector<ItineraryDef> itineraries;
  std::vector<GpsFix> fixes;
  int line_no = 0;
  for (LineCategory category : kCategories) {
    for (int l = 0; l < spec.lines_per_category; ++l, ++line_no) {
      const int stop_count = uniform(spec.min_stops, spec.max_stops);
      LoopLine loop = make_loop_line(frame, numbered("L", line_no + 1), category,
                                     stop_count, 400.0, 12000.0 * line_no, 0.0);
      const int positions = stop_count + 1;
      for (int veh = 0; veh < spec.vehicles_per_line; ++veh) {
        VehicleLog log;
        log.vehicle_id = numbered("B", line_no * 100 + veh + 1, 4);
        log.line_code = loop.line.code;
        log.category = category;
        log.positions = positions;
        log.trips = spec.trips_per_vehicle;

        const std::size_t visits =
            static_cast<std::size_t>(spec.trips_per_vehicle * stop_count + 1);
        std::vector<int> times{5 * 3600 + 240 * veh};
        for (std::size_t v = 1; v < visits; ++v) {
          times.push_back(times.back() + uniform(60, 120));
        }

        std::set<std::size_t> dropped;
        for (int b = 1; b < spec.trips_per_vehicle; ++b) {
          const bool previous_lost =
              !log.lost_boundaries.empty() && log.lost_boundaries.back() == b - 1;
          if (!previous_lost && chance(spec.anchor_loss_rate)) {
            log.lost_boundaries.push_back(b);
            dropped.insert(static_cast<std::size_t>(b * stop_count));
          }
        }
        for (std::size_t v = 0; v < visits; ++v) {
          if (v % static_cast<std::size_t>(stop_count) == 0) continue;
          if (chance(spec.gap_rate)) {
            log.gap_visits.push_back(v);
            dropped.insert(v);
          }
        }
        std::vector<SpuriousFix> spurious;
        for (int trip = 0; trip < spec.trips_per_vehicle; ++trip) {
          if (!chance(spec.spurious_rate)) continue;
          const int k = uniform(1, positions - 3);
          const int q = uniform(k + 2, positions - 1);
          spurious.push_back(
              {static_cast<std::size_t>(trip * stop_count + k - 1), q});
          log.spurious_trips.push_back(trip);
        }
        auto vfixes = drive_loop(frame, loop, log.vehicle_id, kDefaultDate,
                                 times, dropped, spurious);
        fixes.insert(fixes.end(), vfixes.begin(), vfixes.end());
        city.log.push_back(std::move(log));
      }
      lines.push_back(loop.line);
      stops.insert(stops.end(), loop.stops.begin(), loop.stops.end());
      itineraries.push_back(loop.itinerary);
    }
  }
  city.dataset = assemble(std::move(lines), std::move(stops),
                          std::move(itineraries), std::move(fixes));
  return city;
}

Dataset throughput_day(std::size_t target_fixes, std::uint64_t seed) {
  const LocalFrame frame(kAnchor);
  std::mt19937_64 rng(seed);
  constexpr int kStops = 20;
  constexpr int kTrips = 40;
  constexpr std::size_t kFixesPerVehicle = 3 * kTrips * kStops + 1;
  const std::size_t vehicles =
      std::max<std::size_t>(1, (target_fixes + kFixesPerVehicle - 1) / kFixesPerVehicle);
  constexpr std::size_t kVehiclesPerLine = 10;

  std::vector<BusLine> lines;
  std::vector<BusStop> stops;
  std::vector<ItineraryDef> itineraries;
  std::vector<GpsFix> fixes;
  fixes.reserve(vehicles * kFixesPerVehicle);
  std::uniform_int_distribution<int> link(45, 75);
  LoopLine loop;
  for (std::size_t v = 0; v < vehicles; ++v) {
    if (v % kVehiclesPerLine == 0) {
      const int l = static_cast<int>(v / kVehiclesPerLine);
      loop = make_loop_line(frame, numbered("T", l + 1, 4),
                            kAllLineCategories[static_cast<std::size_t>(l) % 8],
                            kStops, 400.0, 6000.0 * (l % 20), 6000.0 * (l / 20));
      lines.push_back(loop.line);
      stops.insert(stops.end(), loop.stops.begin(), loop.stops.end());
      itineraries.push_back(loop.itinerary);
    }
    std::vector<int> times{5 * 3600};
    for (int i = 0; i < kTrips * kStops; ++i) times.push_back(times.back() + link(rng));
    auto vfixes = drive_loop(frame, loop, numbered("V", static_cast<int>(v) + 1, 5),
                             kDefaultDate, times);
    fixes.insert(fixes.end(), vfixes.begin(), vfixes.end());
  }
  return assemble(std::move(lines), std::move(stops), std::move(itineraries),
                  std::move(fixes));
}

std::vector<BusStop> Network::stop_list() const {
  std::vector<BusStop> out;
  out.reserve(stops.size());
  for (const auto& [id, s] : stops) out.push_back(s);
  return out;
}

Network random_network(int stop_count, int line_count, int stops_per_line,
                       double box_m, std::uint64_t seed) {
  if (stops_per_line < 2 || stops_per_line > stop_count) {
    throw Error("stops_per_line must lie in [2, stop_count]");
  }
  const LocalFrame frame(kAnchor);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(0.0, box_m);
  Network net;
  std::vector<std::pair<double, double>> xy;
  while (static_cast<int>(xy.size()) < stop_count) {
    const double x = coord(rng);
    const double y = coord(rng);
    const bool crowded = std::any_of(xy.begin(), xy.end(), [&](const auto& p) {
      return std::hypot(p.first - x, p.second - y) < 50.0;
    });
    if (crowded) continue;
    xy.emplace_back(x, y);
    const std::string id = numbered("R", static_cast<int>(xy.size()));
    net.stops.emplace(id, make_stop(frame, id, "Stop " + id,
                                    StopType::kStreetStop, x, y));
  }
  std::uniform_int_distribution<int> pick(0, stop_count - 1);
  for (int l = 0; l < line_count; ++l) {
    const std::string code = numbered("N", l + 1, 2);
    std::vector<int> seq{pick(rng)};
    std::vector<char> used(static_cast<std::size_t>(stop_count), 0);
    used[static_cast<std::size_t>(seq.back())] = 1;
    while (static_cast<int>(seq.size()) < stops_per_line) {
      const auto [cx, cy] = xy[static_cast<std::size_t>(seq.back())];
      int best = -1;
      double best_d = 0.0;
      for (int i = 0; i < stop_count; ++i) {
        if (used[static_cast<std::size_t>(i)]) continue;
        const double d = std::hypot(xy[static_cast<std::size_t>(i)].first - cx,
                                    xy[static_cast<std::size_t>(i)].second - cy);
        if (best < 0 || d < best_d) {
          best = i;
          best_d = d;
        }
      }
      seq.push_back(best);
      used[static_cast<std::size_t>(best)] = 1;
    }
    std::vector<std::string> ids;
    for (int i : seq) ids.push_back(numbered("R", i + 1));
    net.lines.push_back({code, "RANDOM " + code, LineCategory::kConvencional, "AZUL"});
    net.itineraries.push_back(make_itinerary(code, "IDA", ids));
    std::reverse(ids.begin(), ids.end());
    net.itineraries.push_back(make_itinerary(code, "VOLTA", ids));
  }
  return net;
}

Corridor corridor() {
  const LocalFrame frame(kAnchor);
  Corridor c;
  Network& net = c.network;
  net.stops.emplace("T", make_stop(frame, "T", "Terminal", StopType::kTerminal, 0, 0));
  auto add_line = [&](const std::string& code, double y, int dip_index,
                      double dip_y) {
    std::vector<std::string> ids{"T"};
    for (int i = 1; i <= 20; ++i) {
      const std::string id = numbered(code, i, 2);
      const double yy = i == dip_index ? dip_y : y;
      net.stops.emplace(id, make_stop(frame, id, "Stop " + id,
                                      StopType::kStreetStop, 500.0 * i, yy));
      ids.push_back(id);
      if (i == dip_index) c.dip_stops.push_back(id);
    }
    net.lines.push_back({code, "CORRIDOR " + code, LineCategory::kConvencional, "AMARELO"});
    net.itineraries.push_back(make_itinerary(code, "IDA", ids));
    std::reverse(ids.begin(), ids.end());
    net.itineraries.push_back(make_itinerary(code, "VOLTA", ids));
  };
  add_line("A", 0.0, 0, 0.0);
  add_line("B", 1000.0, 12, 500.0);
  add_line("C", 2000.0, 14, 1500.0);
  return c;
}

std::vector<ODPair> corridor_od_pairs(std::size_t count, std::uint64_t seed) {
  const LocalFrame frame(kAnchor);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> x(8000.0, 10000.0);
  std::uniform_real_distribution<double> dy(-250.0, 250.0);
  std::vector<ODPair> out;
  for (std::size_t i = 0; i < count; ++i) {
    const GeoPoint o = frame.to_geo(x(rng), dy(rng));
    const GeoPoint d = frame.to_geo(x(rng), 2000.0 + dy(rng));
    out.push_back({o, d});
  }
  return out;
}

}  // namespace vterm::synth
