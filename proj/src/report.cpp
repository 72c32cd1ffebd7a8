#include "irsim/report.hpp"

#include <map>
#include <set>

#include <json.hpp>

namespace irsim {

namespace {

using json = nlohmann::json;

std::string pair_name(const std::pair<AsId, AsId>& key) {
  return to_string(key.first) + "-" + to_string(key.second);
}

std::string intervals_text(const std::vector<std::pair<Tick, Tick>>& intervals) {
  std::string out;
  for (const auto& [a, b] : intervals) {
    if (!out.empty()) out += ';';
    out += std::to_string(a) + ":" + std::to_string(b);
  }
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::vector<std::pair<std::string, std::string>> report_rows(const MetricsReport& r) {
  std::vector<std::pair<std::string, std::string>> rows;
  auto add = [&](std::string name, std::uint64_t v) { rows.emplace_back(std::move(name), std::to_string(v)); };
  rows.emplace_back("protocol", r.protocol);
  add("converged", r.converged ? 1 : 0);
  add("quiescence_time", r.quiescence_time);
  add("end_time", r.end_time);
  rows.emplace_back("first_failure", r.first_failure ? std::to_string(*r.first_failure) : "");
  add("messages.total", r.message_total);
  for (const auto& [kind, n] : r.messages) add("messages." + kind, n);
  add("messages.voided", r.voided);
  add("probes.total", r.probes);
  add("probes.delivered", r.delivered);
  add("probes.dropped", r.dropped);
  add("probes.dropped_loop", r.dropped_loop);
  add("probes.dropped_no_route", r.dropped_no_route);
  add("disconnectivity_ticks", r.disconnectivity_ticks);
  add("rib_in.total", r.rib_in_total);
  add("rib_in.max", r.rib_in_max);
  add("local_rib.total", r.local_rib_total);
  add("local_rib.max", r.local_rib_max);
  for (const auto& [name, v] : r.counters) add("counters." + name, v);
  for (const auto& [key, ps] : r.pairs) {
    const std::string base = "pair." + pair_name(key) + ".";
    add(base + "probes", ps.probes);
    add(base + "delivered", ps.delivered);
    add(base + "dropped", ps.dropped);
    add(base + "loops", ps.loops);
    rows.emplace_back(base + "intervals", intervals_text(ps.intervals));
  }
  return rows;
}

std::string report_json(const MetricsReport& r) {
  json doc;
  doc["protocol"] = r.protocol;
  doc["converged"] = r.converged;
  doc["quiescence_time"] = r.quiescence_time;
  doc["end_time"] = r.end_time;
  doc["first_failure"] = r.first_failure ? json(*r.first_failure) : json(nullptr);
  doc["messages"] = {{"total", r.message_total}, {"voided", r.voided}, {"by_kind", r.messages}};
  doc["probes"] = {{"total", r.probes},
                   {"delivered", r.delivered},
                   {"dropped", r.dropped},
                   {"dropped_loop", r.dropped_loop},
                   {"dropped_no_route", r.dropped_no_route}};
  doc["disconnectivity_ticks"] = r.disconnectivity_ticks;
  doc["rib"] = {{"rib_in_total", r.rib_in_total},
                {"rib_in_max", r.rib_in_max},
                {"local_rib_total", r.local_rib_total},
                {"local_rib_max", r.local_rib_max}};
  doc["counters"] = json::object();
  for (const auto& [name, v] : r.counters) doc["counters"][name] = v;
  json pairs = json::array();
  for (const auto& [key, ps] : r.pairs) {
    json intervals = json::array();
    for (const auto& [a, b] : ps.intervals) intervals.push_back({a, b});
    pairs.push_back({{"src", key.first.value},
                     {"dst", key.second.value},
                     {"probes", ps.probes},
                     {"delivered", ps.delivered},
                     {"dropped", ps.dropped},
                     {"loops", ps.loops},
                     {"intervals", intervals}});
  }
  doc["pairs"] = std::move(pairs);
  return doc.dump(2) + "\n";
}

std::string report_csv(const MetricsReport& r) {
  std::string out = "metric,value\n";
  for (const auto& [name, value] : report_rows(r)) {
    out += csv_field(name) + "," + csv_field(value) + "\n";
  }
  return out;
}

std::string format_report(const MetricsReport& report, ReportFormat format) {
  return format == ReportFormat::Json ? report_json(report) : report_csv(report);
}

namespace {

struct Table {
  std::vector<std::string> protocols;
  std::vector<std::string> metrics;
  std::map<std::string, std::map<std::string, std::string>> cells;  // metric -> protocol -> value
};

Table build_table(const std::vector<MetricsReport>& reports) {
  if (reports.size() < 2) throw ValidationError("compare needs at least two protocols");
  Table t;
  std::set<std::string> seen;
  for (const MetricsReport& r : reports) {
    t.protocols.push_back(r.protocol);
    for (const auto& [name, value] : report_rows(r)) {
      if (name == "protocol") continue;
      if (seen.insert(name).second) t.metrics.push_back(name);
      t.cells[name][r.protocol] = value;
    }
  }
  return t;
}

}  // namespace

std::string compare_json(const std::vector<MetricsReport>& reports) {
  const Table t = build_table(reports);
  json doc;
  doc["protocols"] = t.protocols;
  json metrics = json::object();
  for (const std::string& m : t.metrics) {
    json row = json::object();
    for (const std::string& p : t.protocols) {
      auto it = t.cells.at(m).find(p);
      row[p] = it == t.cells.at(m).end() ? json(nullptr) : json(it->second);
    }
    metrics[m] = std::move(row);
  }
  doc["metrics"] = std::move(metrics);
  return doc.dump(2) + "\n";
}

std::string compare_csv(const std::vector<MetricsReport>& reports) {
  const Table t = build_table(reports);
  std::string out = "metric";
  for (const std::string& p : t.protocols) out += "," + csv_field(p);
  out += "\n";
  for (const std::string& m : t.metrics) {
    out += csv_field(m);
    for (const std::string& p : t.protocols) {
      auto it = t.cells.at(m).find(p);
      out += "," + (it == t.cells.at(m).end() ? std::string() : csv_field(it->second));
    }
    out += "\n";
  }
  return out;
}

std::string format_compare(const std::vector<MetricsReport>& reports, ReportFormat format) {
  return format == ReportFormat::Json ? compare_json(reports) : compare_csv(reports);
}

}  // namespace irsim
