#pragma once

#include <span>
#include <string_view>

#include "irsim/topology.hpp"

namespace irsim {

/// Import preference; lower is preferred (0 customer, 1 sibling, 2 peer,
/// 3 provider).
struct PrefRank {
  int value = 0;

  auto operator<=>(const PrefRank&) const = default;
};

/// How a route was obtained, for export filtering. Self marks locally
/// originated routes.
enum class Learned { Self, Customer, Sibling, Peer, Provider };

std::string_view to_string(Learned learned);

PrefRank import_rank(Relation rel);

/// Gao-Rexford export rule: customer, sibling and own routes go to everyone;
/// peer and provider routes go only to customers and siblings.
bool export_allowed(Learned learned_from, Relation to);

/// Export class of a route learned over an edge of kind `rel` from a
/// neighbor that held it with class `sender`. Sibling edges are transparent:
/// the sibling's own class carries over.
Learned learned_via(Relation rel, Learned sender);

/// True iff the edge sequence toward the destination is
/// up* (peer)? down*, with sibling edges allowed anywhere. Throws
/// ValidationError when consecutive ASes are not linked.
bool valley_free(std::span<const AsId> path, const AsGraph& graph);

}  // namespace irsim
