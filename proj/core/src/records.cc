#include "vterm/records.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <tuple>

#include "json.hpp"
#include "vterm/error.h"

namespace vterm {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

template <typename Fn>
void for_each_record(std::istream& in, Fn&& fn) {
  std::string text;
  std::size_t line_no = 0;
  while (std::getline(in, text)) {
    ++line_no;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.find_first_not_of(" \t") == std::string::npos) continue;
    json record;
    try {
      record = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ParseError(line_no, std::string("malformed record: ") + e.what());
    }
    if (!record.is_object()) {
      throw ParseError(line_no, "record is not an object");
    }
    try {
      fn(record, line_no);
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(line_no, e.what());
    }
  }
}

std::string string_field(const json& r, const char* key, std::size_t line_no,
                         bool allow_empty = false) {
  auto it = r.find(key);
  if (it == r.end() || it->is_null()) {
    throw ParseError(line_no, std::string("missing field '") + key + "'");
  }
  std::string value;
  if (it->is_string()) {
    value = it->get<std::string>();
  } else if (it->is_number_integer()) {
    value = std::to_string(it->get<long long>());
  } else {
    throw ParseError(line_no, std::string("field '") + key + "' is not a string");
  }
  if (value.empty() && !allow_empty) {
    throw ParseError(line_no, std::string("field '") + key + "' is empty");
  }
  return value;
}

double number_field(const json& r, const char* key, std::size_t line_no) {
  auto it = r.find(key);
  if (it == r.end() || it->is_null()) {
    throw ParseError(line_no, std::string("missing field '") + key + "'");
  }
  if (it->is_number()) return it->get<double>();
  if (it->is_string()) {
    std::string s = it->get<std::string>();
    std::replace(s.begin(), s.end(), ',', '.');
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec == std::errc{} && ptr == s.data() + s.size() && !s.empty()) {
      return value;
    }
  }
  throw ParseError(line_no, std::string("field '") + key + "' is not numeric");
}

GeoPoint point_fields(const json& r, std::size_t line_no) {
  GeoPoint p{number_field(r, "lat", line_no), number_field(r, "lon", line_no)};
  if (!is_valid(p)) throw ParseError(line_no, "coordinate out of range");
  return p;
}

}  // namespace

std::vector<BusLine> parse_lines(std::istream& in) {
  std::vector<BusLine> lines;
  std::map<std::string, std::size_t> seen;
  for_each_record(in, [&](const json& r, std::size_t line_no) {
    BusLine line;
    line.code = string_field(r, "code", line_no);
    line.name = string_field(r, "name", line_no, true);
    const std::string category = string_field(r, "category", line_no);
    auto parsed = parse_line_category(category);
    if (!parsed) {
      throw ParseError(line_no, "unknown category '" + category + "'");
    }
    line.category = *parsed;
    line.color = r.contains("color") ? string_field(r, "color", line_no, true)
                                     : std::string{};
    if (!seen.emplace(line.code, line_no).second) {
      throw ParseError(line_no, "duplicate line code '" + line.code + "'");
    }
    lines.push_back(std::move(line));
  });
  return lines;
}

LinePoints parse_line_points(std::istream& in) {
  std::map<std::string, BusStop> stops;
  std::map<std::pair<std::string, std::string>, std::map<int, std::string>>
      sequences;

  for_each_record(in, [&](const json& r, std::size_t line_no) {
    BusStop stop;
    stop.stop_id = string_field(r, "stop_id", line_no);
    stop.name = string_field(r, "name", line_no, true);
    const std::string type = string_field(r, "stop_type", line_no);
    auto parsed = parse_stop_type(type);
    if (!parsed) throw ParseError(line_no, "unknown stop_type '" + type + "'");
    stop.stop_type = *parsed;
    stop.location = point_fields(r, line_no);

    const std::string line_code = string_field(r, "line_code", line_no);
    const std::string direction = string_field(r, "direction", line_no, true);
    const double seq_value = number_field(r, "seq", line_no);
    const int seq = static_cast<int>(seq_value);
    if (seq != seq_value || seq < 1) {
      throw ParseError(line_no, "seq must be a positive integer");
    }

    auto [it, inserted] = stops.emplace(stop.stop_id, stop);
    if (!inserted &&
        haversine_m(it->second.location, stop.location) >
            kStopCoordinateToleranceM) {
      throw ParseError(line_no, "stop '" + stop.stop_id +
                                    "' referenced with conflicting coordinates");
    }
    auto& seqs = sequences[{line_code, direction}];
    if (!seqs.emplace(seq, stop.stop_id).second) {
      throw ParseError(line_no, "duplicate seq " + std::to_string(seq) +
                                    " for line " + line_code + " direction '" +
                                    direction + "'");
    }
  });

  LinePoints out;
  for (auto& [id, stop] : stops) out.stops.push_back(std::move(stop));
  for (auto& [key, seqs] : sequences) {
    ItineraryDef iti;
    iti.line_code = key.first;
    iti.direction = key.second;
    for (auto& [seq, stop_id] : seqs) iti.stops.push_back({seq, stop_id});
    iti.circular = iti.stops.size() >= 2 &&
                   iti.stops.front().stop_id == iti.stops.back().stop_id;
    check_itinerary(iti);
    out.itineraries.push_back(std::move(iti));
  }
  return out;
}

std::vector<GpsFix> parse_vehicle_fixes(std::istream& in) {
  std::vector<GpsFix> fixes;
  for_each_record(in, [&](const json& r, std::size_t line_no) {
    GpsFix fix;
    fix.vehicle_id = string_field(r, "vehicle_id", line_no);
    fix.line_code = string_field(r, "line_code", line_no);
    fix.location = point_fields(r, line_no);
    fix.time = parse_dthr(string_field(r, "dthr", line_no));
    fixes.push_back(std::move(fix));
  });
  auto key = [](const GpsFix& f) {
    return std::tie(f.vehicle_id, f.line_code, f.time.date, f.time.seconds);
  };
  std::stable_sort(fixes.begin(), fixes.end(),
                   [&](const GpsFix& a, const GpsFix& b) { return key(a) < key(b); });
  // Exact duplicates are adjacent only if they share a timestamp slot; scan
  // each equal-key run.
  std::vector<GpsFix> out;
  out.reserve(fixes.size());
  std::size_t run_start = 0;
  for (GpsFix& fix : fixes) {
    if (!out.empty() && key(out.back()) != key(fix)) run_start = out.size();
    bool dup = false;
    for (std::size_t i = run_start; i < out.size(); ++i) {
      if (out[i] == fix) {
        dup = true;
        break;
      }
    }
    if (!dup) out.push_back(std::move(fix));
  }
  return out;
}

void write_lines(std::ostream& out, const std::vector<BusLine>& lines) {
  for (const BusLine& l : lines) {
    ordered_json r;
    r["code"] = l.code;
    r["name"] = l.name;
    r["category"] = std::string(to_string(l.category));
    r["color"] = l.color;
    out << r.dump() << '\n';
  }
}

void write_line_points(std::ostream& out, const LinePoints& points) {
  std::map<std::string, const BusStop*> by_id;
  for (const BusStop& s : points.stops) by_id[s.stop_id] = &s;
  for (const ItineraryDef& iti : points.itineraries) {
    for (const ItineraryStop& is : iti.stops) {
      auto it = by_id.find(is.stop_id);
      if (it == by_id.end()) {
        throw Error("itinerary " + iti.line_code + " references unknown stop '" +
                    is.stop_id + "'");
      }
      const BusStop& s = *it->second;
      ordered_json r;
      r["stop_id"] = s.stop_id;
      r["name"] = s.name;
      r["stop_type"] = std::string(to_string(s.stop_type));
      r["lat"] = s.location.lat;
      r["lon"] = s.location.lon;
      r["line_code"] = iti.line_code;
      r["direction"] = iti.direction;
      r["seq"] = is.seq;
      out << r.dump() << '\n';
    }
  }
}

void write_vehicle_fixes(std::ostream& out, const std::vector<GpsFix>& fixes) {
  for (const GpsFix& f : fixes) {
    ordered_json r;
    r["vehicle_id"] = f.vehicle_id;
    r["line_code"] = f.line_code;
    r["lat"] = f.location.lat;
    r["lon"] = f.location.lon;
    r["dthr"] = format_dthr(f.time);
    out << r.dump() << '\n';
  }
}

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open input file " + path.string());
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write file " + path.string());
  return out;
}

template <typename Fn>
auto parse_file(const std::filesystem::path& path, Fn&& fn) {
  auto in = open_input(path);
  try {
    return fn(in);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.detail(), path.filename().string());
  }
}

}  // namespace

Dataset load_dataset(const DatasetPaths& paths) {
  Dataset d;
  d.lines = parse_file(paths.lines, [](std::istream& in) { return parse_lines(in); });
  LinePoints points = parse_file(
      paths.line_points, [](std::istream& in) { return parse_line_points(in); });
  for (BusStop& s : points.stops) {
    const std::string id = s.stop_id;
    d.stops.emplace(id, std::move(s));
  }
  d.itineraries = std::move(points.itineraries);
  d.fix_groups = group_fixes(parse_file(
      paths.fixes, [](std::istream& in) { return parse_vehicle_fixes(in); }));
  return d;
}

void write_dataset(const DatasetPaths& paths, const Dataset& dataset) {
  {
    auto out = open_output(paths.lines);
    write_lines(out, dataset.lines);
  }
  {
    LinePoints points;
    for (const auto& [id, stop] : dataset.stops) points.stops.push_back(stop);
    points.itineraries = dataset.itineraries;
    auto out = open_output(paths.line_points);
    write_line_points(out, points);
  }
  {
    std::vector<GpsFix> fixes;
    for (const FixGroup& g : dataset.fix_groups) {
      fixes.insert(fixes.end(), g.fixes.begin(), g.fixes.end());
    }
    auto out = open_output(paths.fixes);
    write_vehicle_fixes(out, fixes);
  }
}

}  // namespace vterm
