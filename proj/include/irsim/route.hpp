#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "irsim/policy.hpp"
#include "irsim/types.hpp"

namespace irsim {

/// Path label: the default path ("d") or an alternative that avoids one
/// link. Default orders before every Avoid label.
struct PathLabel {
  std::optional<LinkKey> avoid;

  static PathLabel avoiding(LinkKey link) { return PathLabel{link}; }
  bool is_default() const { return !avoid.has_value(); }

  auto operator<=>(const PathLabel&) const = default;
};

std::string to_string(const PathLabel& label);

/// Parses "d" or "a-b". Returns nullopt on malformed input.
std::optional<PathLabel> parse_label(std::string_view text);

struct Route {
  AsId dest;
  Path as_path;                      // holder first, dest last
  std::optional<AsId> learned_from;  // nullopt: originated here
  PrefRank rank;
  Learned export_class = Learned::Self;
  PathLabel label;
  bool failover = false;
  std::string price_tag;
  std::optional<std::uint32_t> tunnel_id;

  AsId holder() const { return as_path.front(); }
  std::optional<AsId> next_hop() const {
    if (as_path.size() < 2) return std::nullopt;
    return as_path[1];
  }
  std::size_t length() const { return as_path.size(); }

  bool operator==(const Route&) const = default;
};

Route self_route(AsId me);

/// Strict decision order: (rank, path length, next-hop id).
bool preferred(const Route& a, const Route& b);

/// Best candidate under `preferred`; nullopt iff empty.
std::optional<Route> decide(std::span<const Route> candidates);

/// AS and link avoidance constraint carried by MIRO requests.
struct Avoidance {
  std::set<AsId> ases;
  std::set<LinkKey> links;

  bool empty() const { return ases.empty() && links.empty(); }
  /// True when the path touches none of the avoided ASes or links.
  bool permits(const Path& path) const;

  bool operator==(const Avoidance&) const = default;
};

enum class MsgKind {
  Announce,
  Withdraw,
  MiroRequest,
  MiroOffer,
  MiroAccept,
  MiroGrant,
  MiroRefuse,
  MiroTeardown,
};

std::string_view to_string(MsgKind kind);
bool is_miro(MsgKind kind);

struct MiroRequestBody {
  std::uint32_t request_id = 0;
  AsId requester;
  AsId responder;
  Avoidance avoid;
  int budget = 0;
};

struct OfferedRoute {
  Path path;  // starts at the responder
  std::string price_tag;

  bool operator==(const OfferedRoute&) const = default;
};

struct MiroOfferBody {
  std::uint32_t request_id = 0;
  AsId requester;
  AsId responder;
  std::vector<OfferedRoute> routes;
};

struct MiroAcceptBody {
  std::uint32_t request_id = 0;
  AsId requester;
  AsId responder;
  Path path;
};

struct MiroGrantBody {
  std::uint32_t request_id = 0;
  AsId requester;
  AsId responder;
  std::uint32_t tunnel_id = 0;
  Path path;
};

struct MiroRefuseBody {
  std::uint32_t request_id = 0;
  AsId requester;
  AsId responder;
};

struct MiroTeardownBody {
  std::uint32_t tunnel_id = 0;
  AsId requester;
  AsId responder;
  bool from_requester = false;
};

using MiroBody = std::variant<std::monostate, MiroRequestBody, MiroOfferBody, MiroAcceptBody,
                              MiroGrantBody, MiroRefuseBody, MiroTeardownBody>;

/// Control message on a directed per-link channel. Route messages travel
/// one hop; MIRO messages name an end-to-end origin/target and are relayed
/// opaquely by the scheduler when the two are not adjacent.
struct UpdateMsg {
  MsgKind kind = MsgKind::Announce;
  AsId sender;
  AsId receiver;
  AsId origin;
  AsId target;
  AsId dest;
  Path path;  // Announce: sender's path, sender first
  Learned export_class = Learned::Self;
  PathLabel label;
  bool failover = false;
  std::optional<LinkKey> rci;       // root cause of the change, if known
  std::optional<LinkKey> repaired;  // link whose repair triggered the change
  MiroBody miro;
  std::vector<AsId> relay;          // hops still to traverse (scheduler use)
};

UpdateMsg make_announce(AsId from, AsId to, const Route& route);
UpdateMsg make_withdraw(AsId from, AsId to, AsId dest, PathLabel label = {});
UpdateMsg make_miro(MsgKind kind, AsId from, AsId to, AsId dest, MiroBody body);

}  // namespace irsim
