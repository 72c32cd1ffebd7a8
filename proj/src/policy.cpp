#include "irsim/policy.hpp"

namespace irsim {

std::string_view to_string(Learned learned) {
  switch (learned) {
    case Learned::Self: return "self";
    case Learned::Customer: return "customer";
    case Learned::Sibling: return "sibling";
    case Learned::Peer: return "peer";
    case Learned::Provider: return "provider";
  }
  return "?";
}

PrefRank import_rank(Relation rel) {
  switch (rel) {
    case Relation::Customer: return PrefRank{0};
    case Relation::Sibling: return PrefRank{1};
    case Relation::Peer: return PrefRank{2};
    case Relation::Provider: return PrefRank{3};
  }
  return PrefRank{3};
}

bool export_allowed(Learned learned_from, Relation to) {
  switch (learned_from) {
    case Learned::Self:
    case Learned::Customer:
    case Learned::Sibling:
      return true;
    case Learned::Peer:
    case Learned::Provider:
      return to == Relation::Customer || to == Relation::Sibling;
  }
  return false;
}

Learned learned_via(Relation rel, Learned sender) {
  switch (rel) {
    case Relation::Customer: return Learned::Customer;
    case Relation::Peer: return Learned::Peer;
    case Relation::Provider: return Learned::Provider;
    case Relation::Sibling:
      return sender == Learned::Self ? Learned::Sibling : sender;
  }
  return Learned::Provider;
}

bool valley_free(std::span<const AsId> path, const AsGraph& graph) {
  // Phases: 0 climbing, 1 after the peer step or first descent.
  int phase = 0;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const Relation next = graph.relation(path[i], path[i + 1]);
    switch (next) {
      case Relation::Sibling:
        break;
      case Relation::Provider:
        if (phase != 0) return false;
        break;
      case Relation::Peer:
        if (phase != 0) return false;
        phase = 1;
        break;
      case Relation::Customer:
        phase = 1;
        break;
    }
  }
  return true;
}

}  // namespace irsim
