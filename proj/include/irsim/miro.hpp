#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "irsim/bgp.hpp"

namespace irsim {

/// How a requester picks from an offer.
struct AcceptPolicy {
  enum class Kind { First, Via, None };
  Kind kind = Kind::First;
  AsId via;  // Via: first offered path containing this AS
};

struct MiroOptions {
  bool deployed = true;
  bool allow_remote = true;
  std::uint32_t tunnel_id_start = 1;
  std::size_t max_offer = 2;
  std::map<AsId, std::string> price_tags;  // by neighbor the route was learned from
};

/// Run-wide MIRO configuration; `options_for` derives one AS's options.
struct MiroConfig {
  std::optional<std::set<AsId>> deployed;  // nullopt: every AS
  bool allow_remote = true;
  std::uint32_t tunnel_id_start = 1;
  std::size_t max_offer = 2;
  std::map<AsId, std::map<AsId, std::string>> price_tags;

  MiroOptions options_for(AsId as) const;
};

struct MiroRequest {
  AsId responder;
  AsId dest;
  Avoidance avoid;
  int budget = 1;
  AcceptPolicy accept;
  std::string traffic_class = "*";
};

/// Default price tag: the relationship the route was learned over.
std::string default_price_tag(Relation learned_over);

/// BGP plus on-demand alternate-route negotiation and tunnel forwarding.
/// Default route dissemination is inherited unchanged.
class MiroSpeaker : public BgpSpeaker {
 public:
  MiroSpeaker(AsId me, const AsGraph& graph, MiroOptions options = {});

  Outbox receive(const UpdateMsg& msg) override;
  Outbox link_down(AsId neighbor) override;
  ForwardStep forward(AsId dest, const ForwardCtx& ctx,
                      std::optional<AsId> prev) const override;

  /// Builds a request message; throws ValidationError when the request is
  /// malformed or `dest` has no route here.
  UpdateMsg issue_request(const MiroRequest& request);

  /// Routes this AS would offer `requester` for `dest` under `avoid`:
  /// non-default, compliant, exportable, ordered and truncated.
  std::vector<OfferedRoute> offer_routes(AsId dest, AsId requester,
                                         const Avoidance& avoid) const;

  struct ResponderTunnel {
    std::uint32_t id = 0;
    AsId requester;
    AsId dest;
    Path bound_path;
    // Set when the bound path continues through a tunnel at another AS.
    std::optional<AsId> sub_responder;
    std::uint32_t sub_tunnel = 0;
    Path sub_relay;
  };

  struct RequesterTunnel {
    AsId responder;
    std::uint32_t id = 0;
    AsId dest;
    std::string traffic_class;
    Path relay_path;
    Path bound_path;
  };

  const std::map<std::uint32_t, ResponderTunnel>& responder_tunnels() const { return tunnels_; }
  std::vector<RequesterTunnel> requester_tunnels() const;
  /// Last offer received for each of this AS's request ids.
  const std::map<std::uint32_t, MiroOfferBody>& offers() const { return offers_; }
  bool deployed() const { return options_.deployed; }

 protected:
  void after_decision(AsId dest, DestState& st, const Cause& cause, Outbox& out) override;

 private:
  struct Parent {
    AsId requester;
    std::uint32_t request_id = 0;
  };

  struct Outstanding {
    MiroRequest request;
    std::optional<Parent> parent;
    Path accepted;  // full path from the parent's responder view
  };

  struct Served {
    AsId dest;
    Avoidance avoid;
    std::optional<std::uint32_t> sub_request;  // forwarded, awaiting sub-offer
  };

  Path path_to(AsId target) const;
  UpdateMsg message(MsgKind kind, AsId to, AsId dest, MiroBody body) const;
  std::string price_tag(const Route& route) const;

  void handle_request(const UpdateMsg& msg, Outbox& out);
  void handle_offer(const UpdateMsg& msg, Outbox& out);
  void handle_accept(const UpdateMsg& msg, Outbox& out);
  void handle_grant(const UpdateMsg& msg, Outbox& out);
  void handle_refuse(const UpdateMsg& msg, Outbox& out);
  void handle_teardown(const UpdateMsg& msg, Outbox& out);

  bool bound_path_live(const ResponderTunnel& t) const;
  void drop_responder_tunnel(std::uint32_t id, Outbox& out, bool notify_sub);
  void drop_requester_tunnel(std::pair<AsId, std::string> key, Outbox& out);

  MiroOptions options_;
  std::uint32_t next_request_id_ = 1;
  std::uint32_t next_tunnel_id_;
  std::map<std::uint32_t, Outstanding> outstanding_;
  std::map<std::uint32_t, MiroOfferBody> offers_;
  std::map<std::pair<AsId, std::uint32_t>, Served> served_;  // (requester, request id)
  std::map<std::uint32_t, ResponderTunnel> tunnels_;
  std::map<std::pair<AsId, std::string>, RequesterTunnel> installed_;  // (dest, class)
};

}  // namespace irsim
