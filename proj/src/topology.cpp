#include "irsim/topology.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <fstream>
#include <sstream>

namespace irsim {

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto first = s.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(ws);
  return s.substr(first, last - first + 1);
}

bool parse_int(std::string_view s, long long& out) {
  s = trim(s);
  if (s.empty()) return false;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

const char* code_of(RelKind rel) {
  switch (rel) {
    case RelKind::ProviderToCustomer: return "-1";
    case RelKind::Peer: return "0";
    case RelKind::Sibling: return "2";
  }
  return "?";
}

}  // namespace

std::string_view to_string(Relation rel) {
  switch (rel) {
    case Relation::Customer: return "customer";
    case Relation::Sibling: return "sibling";
    case Relation::Peer: return "peer";
    case Relation::Provider: return "provider";
  }
  return "?";
}

TopologyError::TopologyError(std::size_t line, const std::string& what)
    : ValidationError(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
      line_(line) {}

void AsGraph::add_node(AsId id) {
  if (id.value == 0) throw TopologyError(0, "AS identifiers must be >= 1");
  if (nodes_.insert(id).second) adjacency_[id];
}

void AsGraph::add_link(AsId a, AsId b, RelKind rel) {
  if (a == b) throw TopologyError(0, "self-loop on AS " + to_string(a));
  Link link{a, b, rel, true};
  if (rel != RelKind::ProviderToCustomer && b < a) std::swap(link.a, link.b);

  const LinkKey key(a, b);
  if (auto it = links_.find(key); it != links_.end()) {
    const Link& prev = it->second;
    if (prev.rel != link.rel || prev.a != link.a || prev.b != link.b) {
      throw TopologyError(0, "conflicting relationship for pair " + to_string(key));
    }
    return;
  }
  add_node(a);
  add_node(b);
  links_.emplace(key, link);
  for (auto [x, y] : {std::pair{a, b}, std::pair{b, a}}) {
    auto& adj = adjacency_[x];
    adj.insert(std::upper_bound(adj.begin(), adj.end(), y), y);
  }
}

bool AsGraph::has_link(AsId a, AsId b) const {
  return links_.count(LinkKey(a, b)) != 0;
}

const Link& AsGraph::link(AsId a, AsId b) const {
  auto it = links_.find(LinkKey(a, b));
  if (it == links_.end()) {
    throw ValidationError("no link between AS " + to_string(a) + " and AS " + to_string(b));
  }
  return it->second;
}

bool AsGraph::link_up(AsId a, AsId b) const {
  auto it = links_.find(LinkKey(a, b));
  return it != links_.end() && it->second.up;
}

void AsGraph::set_link_state(AsId a, AsId b, bool up) {
  auto it = links_.find(LinkKey(a, b));
  if (it == links_.end()) {
    throw ValidationError("no link between AS " + to_string(a) + " and AS " + to_string(b));
  }
  it->second.up = up;
}

const std::vector<AsId>& AsGraph::neighbors(AsId id) const {
  static const std::vector<AsId> none;
  auto it = adjacency_.find(id);
  return it == adjacency_.end() ? none : it->second;
}

Relation AsGraph::relation(AsId me, AsId neighbor) const {
  const Link& l = link(me, neighbor);
  switch (l.rel) {
    case RelKind::ProviderToCustomer:
      return l.a == me ? Relation::Customer : Relation::Provider;
    case RelKind::Peer:
      return Relation::Peer;
    case RelKind::Sibling:
      return Relation::Sibling;
  }
  return Relation::Peer;
}

std::vector<Link> AsGraph::links() const {
  std::vector<Link> out;
  out.reserve(links_.size());
  for (const auto& [key, l] : links_) out.push_back(l);
  return out;
}

bool AsGraph::operator==(const AsGraph& other) const {
  return nodes_ == other.nodes_ && links_ == other.links_;
}

AsGraph load_topology(std::string_view text) {
  AsGraph g;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    std::string_view fields[3];
    std::size_t count = 0;
    while (true) {
      const auto bar = line.find('|');
      if (count == 3) throw TopologyError(line_no, "expected a|b|code");
      fields[count++] = line.substr(0, bar);
      if (bar == std::string_view::npos) break;
      line = line.substr(bar + 1);
    }
    if (count != 3) throw TopologyError(line_no, "expected a|b|code");

    long long a = 0, b = 0, code = 0;
    if (!parse_int(fields[0], a) || !parse_int(fields[1], b) || !parse_int(fields[2], code)) {
      throw TopologyError(line_no, "non-integer field");
    }
    if (a < 1 || b < 1 || a > UINT32_MAX || b > UINT32_MAX) {
      throw TopologyError(line_no, "AS identifiers must be in [1, 2^32)");
    }
    RelKind rel;
    switch (code) {
      case -1: rel = RelKind::ProviderToCustomer; break;
      case 0: rel = RelKind::Peer; break;
      case 2: rel = RelKind::Sibling; break;
      default: throw TopologyError(line_no, "unknown relationship code " + std::to_string(code));
    }
    try {
      g.add_link(AsId(static_cast<std::uint32_t>(a)), AsId(static_cast<std::uint32_t>(b)), rel);
    } catch (const TopologyError& e) {
      throw TopologyError(line_no, e.what());
    }
  }
  return g;
}

AsGraph load_topology_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read topology file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_topology(buf.str());
}

std::string serialize_topology(const AsGraph& graph) {
  std::string out;
  for (const Link& l : graph.links()) {
    out += to_string(l.a) + "|" + to_string(l.b) + "|" + code_of(l.rel) + "\n";
  }
  return out;
}

Relation rel_from_perspective(const AsGraph& graph, AsId me, AsId neighbor) {
  return graph.relation(me, neighbor);
}

AsGraph& set_link_state(AsGraph& graph, AsId a, AsId b, bool up) {
  graph.set_link_state(a, b, up);
  return graph;
}

Path shortest_up_path(const AsGraph& graph, AsId from, AsId to) {
  if (!graph.contains(from) || !graph.contains(to)) return {};
  if (from == to) return {from};
  // BFS from the target so every node's next hop is consistent with the
  // paths of its successors.
  std::map<AsId, std::size_t> dist;
  std::deque<AsId> queue{to};
  dist[to] = 0;
  while (!queue.empty()) {
    AsId cur = queue.front();
    queue.pop_front();
    for (AsId n : graph.neighbors(cur)) {
      if (!graph.link_up(cur, n) || dist.count(n)) continue;
      dist[n] = dist[cur] + 1;
      queue.push_back(n);
    }
  }
  if (!dist.count(from)) return {};
  Path path{from};
  AsId cur = from;
  while (cur != to) {
    for (AsId n : graph.neighbors(cur)) {
      auto it = dist.find(n);
      if (graph.link_up(cur, n) && it != dist.end() && it->second + 1 == dist[cur]) {
        cur = n;
        break;
      }
    }
    path.push_back(cur);
  }
  return path;
}

}  // namespace irsim
