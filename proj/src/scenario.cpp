#include "irsim/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

namespace irsim {

namespace {

using json = nlohmann::json;

class Parser {
 public:
  explicit Parser(bool strict) : strict_(strict) {}

  void keys(const json& obj, std::initializer_list<std::string_view> allowed,
            const std::string& where) const {
    if (!obj.is_object()) throw ValidationError(where + ": expected an object");
    if (!strict_) return;
    for (const auto& item : obj.items()) {
      if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
        throw ValidationError(where + ": unknown field '" + item.key() + "'");
      }
    }
  }

  AsId as(const json& v, const std::string& where) const {
    if (v.is_number_integer()) {
      const auto n = v.get<std::int64_t>();
      if (n <= 0 || n > std::numeric_limits<std::uint32_t>::max()) {
        throw ValidationError(where + ": AS ids must be positive");
      }
      return AsId(static_cast<std::uint32_t>(n));
    }
    if (v.is_string()) {
      const auto& s = v.get_ref<const std::string&>();
      if (auto it = names.find(s); it != names.end()) return it->second;
      std::uint32_t n = 0;
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
      if (ec == std::errc{} && ptr == s.data() + s.size() && n > 0) return AsId(n);
      throw ValidationError(where + ": unknown AS name '" + s + "'");
    }
    throw ValidationError(where + ": expected an AS id or name");
  }

  Tick tick(const json& v, const std::string& where) const {
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
      throw ValidationError(where + ": expected a non-negative integer");
    }
    return v.get<Tick>();
  }

  LinkKey link(const json& v, const std::string& where) const {
    if (!v.is_array() || v.size() != 2) throw ValidationError(where + ": expected [a, b]");
    const AsId a = as(v[0], where);
    const AsId b = as(v[1], where);
    if (a == b) throw ValidationError(where + ": link endpoints must differ");
    return LinkKey(a, b);
  }

  std::string string(const json& v, const std::string& where) const {
    if (!v.is_string()) throw ValidationError(where + ": expected a string");
    return v.get<std::string>();
  }

  const json& required(const json& obj, const char* key, const std::string& where) const {
    if (!obj.contains(key)) throw ValidationError(where + ": missing field '" + key + "'");
    return obj.at(key);
  }

  std::map<std::string, AsId> names;

 private:
  bool strict_;
};

ScenarioEvent parse_event(const Parser& p, const json& e, std::size_t index) {
  const std::string where = "events[" + std::to_string(index) + "]";
  if (!e.is_object()) throw ValidationError(where + ": expected an object");
  const std::string type = p.string(p.required(e, "type", where), where + ".type");
  ScenarioEvent ev;
  ev.time = p.tick(p.required(e, "time", where), where + ".time");

  if (type == "originate") {
    p.keys(e, {"time", "type", "as"}, where);
    ev.what = OriginateEvent{p.as(p.required(e, "as", where), where + ".as")};
  } else if (type == "link_down" || type == "link_up") {
    p.keys(e, {"time", "type", "a", "b"}, where);
    LinkEvent le{p.as(p.required(e, "a", where), where + ".a"),
                 p.as(p.required(e, "b", where), where + ".b"), type == "link_up"};
    if (le.a == le.b) throw ValidationError(where + ": link endpoints must differ");
    ev.what = le;
  } else if (type == "probe") {
    p.keys(e, {"time", "type", "src", "dst", "label", "class"}, where);
    ProbeEvent pe{p.as(p.required(e, "src", where), where + ".src"),
                  p.as(p.required(e, "dst", where), where + ".dst"), PathLabel{}, ""};
    if (e.contains("label")) {
      auto label = parse_label(p.string(e["label"], where + ".label"));
      if (!label) throw ValidationError(where + ".label: expected \"d\" or \"a-b\"");
      pe.label = *label;
    }
    if (e.contains("class")) pe.traffic_class = p.string(e["class"], where + ".class");
    ev.what = pe;
  } else if (type == "miro_request") {
    p.keys(e,
           {"time", "type", "requester", "responder", "dest", "avoid_as", "avoid_links", "budget",
            "accept", "class"},
           where);
    MiroIssueEvent me;
    me.requester = p.as(p.required(e, "requester", where), where + ".requester");
    me.request.responder = p.as(p.required(e, "responder", where), where + ".responder");
    me.request.dest = p.as(p.required(e, "dest", where), where + ".dest");
    if (me.requester == me.request.responder) {
      throw ValidationError(where + ": requester and responder must differ");
    }
    if (e.contains("avoid_as")) {
      if (!e["avoid_as"].is_array()) throw ValidationError(where + ".avoid_as: expected a list");
      for (const auto& v : e["avoid_as"]) me.request.avoid.ases.insert(p.as(v, where + ".avoid_as"));
    }
    if (e.contains("avoid_links")) {
      if (!e["avoid_links"].is_array()) throw ValidationError(where + ".avoid_links: expected a list");
      for (const auto& v : e["avoid_links"]) me.request.avoid.links.insert(p.link(v, where + ".avoid_links"));
    }
    if (me.request.avoid.ases.count(me.request.dest)) {
      throw ValidationError(where + ": destination cannot be avoided");
    }
    if (e.contains("budget")) me.request.budget = static_cast<int>(p.tick(e["budget"], where + ".budget"));
    if (e.contains("accept")) {
      const json& a = e["accept"];
      if (a.is_string() && a == "first") {
        me.request.accept.kind = AcceptPolicy::Kind::First;
      } else if (a.is_string() && a == "none") {
        me.request.accept.kind = AcceptPolicy::Kind::None;
      } else if (a.is_object()) {
        p.keys(a, {"via"}, where + ".accept");
        me.request.accept.kind = AcceptPolicy::Kind::Via;
        me.request.accept.via = p.as(p.required(a, "via", where + ".accept"), where + ".accept.via");
      } else {
        throw ValidationError(where + ".accept: expected \"first\", \"none\" or {\"via\": AS}");
      }
    }
    if (e.contains("class")) me.request.traffic_class = p.string(e["class"], where + ".class");
    ev.what = me;
  } else {
    throw ValidationError(where + ": unknown event type '" + type + "'");
  }
  return ev;
}

}  // namespace

ScenarioSpec parse_scenario(std::string_view json_text, bool strict) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("scenario is not valid JSON: ") + e.what());
  }
  Parser p(strict);
  p.keys(doc,
         {"version", "topology", "names", "origins", "protocols", "quiesce_limit", "delays", "events",
          "probes", "miro", "rbgp"},
         "scenario");
  const json& version = p.required(doc, "version", "scenario");
  if (!version.is_number_integer() || version.get<int>() != 1) {
    throw ValidationError("scenario: unsupported version (expected 1)");
  }

  ScenarioSpec spec;
  if (doc.contains("topology")) spec.topology = p.string(doc["topology"], "topology");
  if (doc.contains("names")) {
    const json& names = doc["names"];
    if (!names.is_object()) throw ValidationError("names: expected an object");
    for (const auto& item : names.items()) {
      if (!item.value().is_number_integer()) {
        throw ValidationError("names." + item.key() + ": expected an AS id");
      }
      p.names[item.key()] = p.as(item.value(), "names." + item.key());
    }
    spec.names = p.names;
  }

  if (doc.contains("protocols")) {
    const json& protos = doc["protocols"];
    if (!protos.is_array()) throw ValidationError("protocols: expected a list");
    for (const auto& v : protos) {
      const std::string name = p.string(v, "protocols");
      auto proto = parse_protocol(name);
      if (!proto) throw ValidationError("protocols: unknown protocol '" + name + "'");
      if (std::find(spec.protocols.begin(), spec.protocols.end(), *proto) == spec.protocols.end()) {
        spec.protocols.push_back(*proto);
      }
    }
  }

  if (doc.contains("quiesce_limit")) spec.quiesce_limit = p.tick(doc["quiesce_limit"], "quiesce_limit");

  if (doc.contains("delays")) {
    const json& d = doc["delays"];
    p.keys(d, {"default", "links"}, "delays");
    if (d.contains("default")) spec.default_delay = p.tick(d["default"], "delays.default");
    if (spec.default_delay == 0) throw ValidationError("delays.default: must be at least 1");
    if (d.contains("links")) {
      if (!d["links"].is_array()) throw ValidationError("delays.links: expected a list");
      for (const auto& l : d["links"]) {
        p.keys(l, {"a", "b", "delay"}, "delays.links");
        const LinkKey key(p.as(p.required(l, "a", "delays.links"), "delays.links.a"),
                          p.as(p.required(l, "b", "delays.links"), "delays.links.b"));
        const Tick t = p.tick(p.required(l, "delay", "delays.links"), "delays.links.delay");
        if (t == 0) throw ValidationError("delays.links.delay: must be at least 1");
        spec.link_delays[key] = t;
      }
    }
  }

  if (doc.contains("origins")) {
    if (!doc["origins"].is_array()) throw ValidationError("origins: expected a list");
    for (const auto& v : doc["origins"]) {
      spec.scenario.events.push_back(ScenarioEvent{0, OriginateEvent{p.as(v, "origins")}});
    }
  }
  if (doc.contains("events")) {
    if (!doc["events"].is_array()) throw ValidationError("events: expected a list");
    std::size_t i = 0;
    for (const auto& e : doc["events"]) spec.scenario.events.push_back(parse_event(p, e, i++));
  }
  std::stable_sort(spec.scenario.events.begin(), spec.scenario.events.end(),
                   [](const ScenarioEvent& a, const ScenarioEvent& b) { return a.time < b.time; });

  if (doc.contains("probes")) {
    const json& s = doc["probes"];
    p.keys(s, {"pairs", "start", "end", "every"}, "probes");
    ProbeSampling sampling;
    const json& pairs = p.required(s, "pairs", "probes");
    if (!pairs.is_array()) throw ValidationError("probes.pairs: expected a list");
    for (const auto& pair : pairs) {
      if (!pair.is_array() || pair.size() != 2) throw ValidationError("probes.pairs: expected [src, dst]");
      sampling.pairs.emplace_back(p.as(pair[0], "probes.pairs"), p.as(pair[1], "probes.pairs"));
    }
    if (s.contains("start")) sampling.start = p.tick(s["start"], "probes.start");
    if (s.contains("end")) sampling.end = p.tick(s["end"], "probes.end");
    if (s.contains("every")) sampling.every = p.tick(s["every"], "probes.every");
    if (sampling.every == 0) throw ValidationError("probes.every: must be at least 1");
    if (sampling.end && *sampling.end < sampling.start) {
      throw ValidationError("probes.end: must not precede probes.start");
    }
    spec.scenario.sampling = std::move(sampling);
  }

  if (doc.contains("miro")) {
    const json& m = doc["miro"];
    p.keys(m, {"tunnel_id_start", "deployed", "max_offer", "allow_remote", "price_tags"}, "miro");
    if (m.contains("tunnel_id_start")) {
      spec.miro.tunnel_id_start = static_cast<std::uint32_t>(p.tick(m["tunnel_id_start"], "miro.tunnel_id_start"));
    }
    if (m.contains("max_offer")) spec.miro.max_offer = p.tick(m["max_offer"], "miro.max_offer");
    if (m.contains("allow_remote")) {
      if (!m["allow_remote"].is_boolean()) throw ValidationError("miro.allow_remote: expected a boolean");
      spec.miro.allow_remote = m["allow_remote"].get<bool>();
    }
    if (m.contains("deployed")) {
      if (!m["deployed"].is_array()) throw ValidationError("miro.deployed: expected a list");
      std::set<AsId> deployed;
      for (const auto& v : m["deployed"]) deployed.insert(p.as(v, "miro.deployed"));
      spec.miro.deployed = std::move(deployed);
    }
    if (m.contains("price_tags")) {
      const json& tags = m["price_tags"];
      if (!tags.is_object()) throw ValidationError("miro.price_tags: expected an object");
      for (const auto& holder : tags.items()) {
        const AsId h = p.as(json(holder.key()), "miro.price_tags");
        if (!holder.value().is_object()) throw ValidationError("miro.price_tags: expected an object");
        for (const auto& from : holder.value().items()) {
          spec.miro.price_tags[h][p.as(json(from.key()), "miro.price_tags")] =
              p.string(from.value(), "miro.price_tags");
        }
      }
    }
  }

  if (doc.contains("rbgp")) {
    const json& r = doc["rbgp"];
    p.keys(r, {"rci"}, "rbgp");
    if (r.contains("rci")) {
      if (!r["rci"].is_boolean()) throw ValidationError("rbgp.rci: expected a boolean");
      spec.rbgp.rci = r["rci"].get<bool>();
    }
  }
  return spec;
}

ScenarioSpec load_scenario_file(const std::filesystem::path& path, bool strict) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read scenario file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  ScenarioSpec spec = parse_scenario(text.str(), strict);
  if (spec.topology && spec.topology->is_relative()) {
    spec.topology = path.parent_path() / *spec.topology;
  }
  return spec;
}

void validate_scenario(const ScenarioSpec& spec, const AsGraph& graph) {
  auto need = [&](AsId as, const char* what) {
    if (!graph.contains(as)) {
      throw ValidationError(std::string(what) + " names AS " + to_string(as) + " not in topology");
    }
  };
  for (const auto& [name, as] : spec.names) need(as, "names");
  for (const auto& [link, d] : spec.link_delays) {
    if (!graph.has_link(link.lo, link.hi)) throw ValidationError("delay for unknown link " + to_string(link));
  }
  for (const ScenarioEvent& ev : spec.scenario.events) {
    if (const auto* e = std::get_if<OriginateEvent>(&ev.what)) {
      need(e->as, "originate");
    } else if (const auto* e = std::get_if<LinkEvent>(&ev.what)) {
      if (!graph.has_link(e->a, e->b)) {
        throw ValidationError("link event names unknown link " + to_string(e->a) + "-" + to_string(e->b));
      }
    } else if (const auto* e = std::get_if<ProbeEvent>(&ev.what)) {
      need(e->src, "probe");
      need(e->dst, "probe");
    } else if (const auto* e = std::get_if<MiroIssueEvent>(&ev.what)) {
      need(e->requester, "miro_request");
      need(e->request.responder, "miro_request");
      need(e->request.dest, "miro_request");
      for (AsId a : e->request.avoid.ases) need(a, "miro_request avoid_as");
    }
  }
  if (spec.scenario.sampling) {
    for (const auto& [src, dst] : spec.scenario.sampling->pairs) {
      need(src, "probes");
      need(dst, "probes");
    }
  }
  if (spec.miro.deployed) {
    for (AsId as : *spec.miro.deployed) need(as, "miro.deployed");
  }
}

SimConfig sim_config(const ScenarioSpec& spec, Protocol protocol) {
  SimConfig c;
  c.protocol = protocol;
  c.default_delay = spec.default_delay;
  c.link_delays = spec.link_delays;
  if (spec.quiesce_limit) c.quiesce_limit = *spec.quiesce_limit;
  c.rbgp = spec.rbgp;
  c.miro = spec.miro;
  return c;
}

}  // namespace irsim
