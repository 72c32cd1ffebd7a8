#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "irsim/types.hpp"

namespace irsim {

/// Relationship stored on a link. ProviderToCustomer is directed (a is the
/// provider); Peer and Sibling are symmetric.
enum class RelKind { ProviderToCustomer, Peer, Sibling };

/// What a neighbor is from one AS's point of view.
enum class Relation { Customer, Sibling, Peer, Provider };

std::string_view to_string(Relation rel);

struct Link {
  AsId a;
  AsId b;
  RelKind rel = RelKind::Peer;
  bool up = true;

  bool operator==(const Link&) const = default;
};

class TopologyError : public ValidationError {
 public:
  TopologyError(std::size_t line, const std::string& what);

  /// 1-based line of the offending record, 0 when not tied to a line.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// AS-level graph with typed business relationships and per-link state.
class AsGraph {
 public:
  void add_node(AsId id);

  /// Adds a link. Re-adding an identical link is a no-op; a conflicting
  /// relationship for the same pair or a self-loop throws TopologyError.
  void add_link(AsId a, AsId b, RelKind rel);

  bool contains(AsId id) const { return nodes_.count(id) != 0; }
  bool has_link(AsId a, AsId b) const;
  const Link& link(AsId a, AsId b) const;
  bool link_up(AsId a, AsId b) const;

  /// Idempotent. Throws ValidationError for an unknown link.
  void set_link_state(AsId a, AsId b, bool up);

  /// Sorted neighbor list, regardless of link state.
  const std::vector<AsId>& neighbors(AsId id) const;

  /// Relationship of `neighbor` as seen by `me`.
  Relation relation(AsId me, AsId neighbor) const;

  const std::set<AsId>& nodes() const { return nodes_; }

  /// Links in canonical (lo, hi) order.
  std::vector<Link> links() const;

  std::size_t size() const { return nodes_.size(); }
  std::size_t link_count() const { return links_.size(); }

  bool operator==(const AsGraph& other) const;

 private:
  std::set<AsId> nodes_;
  std::map<LinkKey, Link> links_;
  std::map<AsId, std::vector<AsId>> adjacency_;
};

/// Parses `a|b|code` records (-1 provider->customer, 0 peer, 2 sibling).
/// `#` starts a comment; blank lines are ignored.
AsGraph load_topology(std::string_view text);
AsGraph load_topology_file(const std::filesystem::path& path);

/// Canonical text form: one record per link in (lo, hi) order.
std::string serialize_topology(const AsGraph& graph);

Relation rel_from_perspective(const AsGraph& graph, AsId me, AsId neighbor);

/// Free-function form of AsGraph::set_link_state.
AsGraph& set_link_state(AsGraph& graph, AsId a, AsId b, bool up);

/// Shortest path over links that are currently up, from `from` to `to`
/// inclusive. Ties go to the lowest-numbered next hop. Empty when
/// unreachable.
Path shortest_up_path(const AsGraph& graph, AsId from, AsId to);

}  // namespace irsim
