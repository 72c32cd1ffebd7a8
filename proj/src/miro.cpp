#include "irsim/miro.hpp"

#include <algorithm>

namespace irsim {

MiroOptions MiroConfig::options_for(AsId as) const {
  MiroOptions o;
  o.deployed = !deployed || deployed->count(as) != 0;
  o.allow_remote = allow_remote;
  o.tunnel_id_start = tunnel_id_start;
  o.max_offer = max_offer;
  if (auto it = price_tags.find(as); it != price_tags.end()) o.price_tags = it->second;
  return o;
}

std::string default_price_tag(Relation learned_over) {
  return std::string(to_string(learned_over));
}

MiroSpeaker::MiroSpeaker(AsId me, const AsGraph& graph, MiroOptions options)
    : BgpSpeaker(me, graph),
      options_(std::move(options)),
      next_tunnel_id_(options_.tunnel_id_start) {}

std::vector<MiroSpeaker::RequesterTunnel> MiroSpeaker::requester_tunnels() const {
  std::vector<RequesterTunnel> out;
  for (const auto& [key, t] : installed_) out.push_back(t);
  return out;
}

Path MiroSpeaker::path_to(AsId target) const {
  if (graph_.has_link(me_, target) && up(target)) return {me_, target};
  if (auto r = best(target); r && r->length() >= 2) return r->as_path;
  return shortest_up_path(graph_, me_, target);
}

UpdateMsg MiroSpeaker::message(MsgKind kind, AsId to, AsId dest, MiroBody body) const {
  UpdateMsg m = make_miro(kind, me_, to, dest, std::move(body));
  const Path path = path_to(to);
  if (path.size() >= 2) {
    m.receiver = path[1];
    m.relay.assign(path.begin() + 2, path.end());
  }
  return m;
}

std::string MiroSpeaker::price_tag(const Route& route) const {
  if (!route.learned_from) return "self";
  if (auto it = options_.price_tags.find(*route.learned_from); it != options_.price_tags.end()) {
    return it->second;
  }
  return default_price_tag(rel(*route.learned_from));
}

std::vector<OfferedRoute> MiroSpeaker::offer_routes(AsId dest, AsId requester,
                                                    const Avoidance& avoid) const {
  const DestState* st = find(dest);
  if (!st) return {};
  const Path back = path_to(requester);
  if (back.size() < 2) return {};
  const Relation toward = rel(back[1]);

  std::vector<const Route*> picks;
  for (const auto& [n, r] : st->rib_in) {
    if (!up(n)) continue;
    if (st->best && st->best->as_path == r.as_path) continue;
    if (!avoid.permits(r.as_path) || path_contains(r.as_path, requester)) continue;
    if (!export_allowed(r.export_class, toward)) continue;
    picks.push_back(&r);
  }
  std::sort(picks.begin(), picks.end(),
            [](const Route* a, const Route* b) { return preferred(*a, *b); });
  if (picks.size() > options_.max_offer) picks.resize(options_.max_offer);

  std::vector<OfferedRoute> out;
  for (const Route* r : picks) out.push_back({r->as_path, price_tag(*r)});
  return out;
}

UpdateMsg MiroSpeaker::issue_request(const MiroRequest& request) {
  if (request.responder == me_ || !graph_.contains(request.responder)) {
    throw ValidationError("invalid MIRO responder " + to_string(request.responder));
  }
  if (!graph_.contains(request.dest) || request.avoid.ases.count(request.dest)) {
    throw ValidationError("invalid MIRO destination " + to_string(request.dest));
  }
  if (request.budget < 0) throw ValidationError("MIRO recursion budget must be >= 0");
  if (!graph_.has_link(me_, request.responder) && !options_.allow_remote) {
    throw ValidationError("remote MIRO negotiation disabled");
  }
  if (!best(request.dest)) {
    throw ValidationError("AS " + to_string(me_) + " has no route to " + to_string(request.dest));
  }
  const std::uint32_t id = next_request_id_++;
  outstanding_[id] = Outstanding{request, std::nullopt, {}};
  bump("miro_requests");
  return message(MsgKind::MiroRequest, request.responder, request.dest,
                 MiroRequestBody{id, me_, request.responder, request.avoid, request.budget});
}

Outbox MiroSpeaker::receive(const UpdateMsg& msg) {
  if (!is_miro(msg.kind)) return BgpSpeaker::receive(msg);
  check_neighbor(msg);
  if (!options_.deployed) {
    bump("miro_ignored");
    return {};
  }
  Outbox out;
  switch (msg.kind) {
    case MsgKind::MiroRequest: handle_request(msg, out); break;
    case MsgKind::MiroOffer: handle_offer(msg, out); break;
    case MsgKind::MiroAccept: handle_accept(msg, out); break;
    case MsgKind::MiroGrant: handle_grant(msg, out); break;
    case MsgKind::MiroRefuse: handle_refuse(msg, out); break;
    case MsgKind::MiroTeardown: handle_teardown(msg, out); break;
    default: break;
  }
  return out;
}

void MiroSpeaker::handle_request(const UpdateMsg& msg, Outbox& out) {
  const auto& body = std::get<MiroRequestBody>(msg.miro);
  const auto key = std::make_pair(body.requester, body.request_id);
  served_[key] = Served{msg.dest, body.avoid, std::nullopt};

  auto routes = offer_routes(msg.dest, body.requester, body.avoid);
  if (routes.empty() && body.budget > 0) {
    for (AsId n : graph_.neighbors(me_)) {
      if (!up(n) || n == body.requester || n == msg.dest) continue;
      if (body.avoid.ases.count(n) || body.avoid.links.count(LinkKey(me_, n))) continue;
      const std::uint32_t id = next_request_id_++;
      MiroRequest sub{n, msg.dest, body.avoid, body.budget - 1, {}, "*"};
      outstanding_[id] = Outstanding{sub, Parent{body.requester, body.request_id}, {}};
      served_[key].sub_request = id;
      bump("miro_subrequests");
      out.push_back(message(MsgKind::MiroRequest, n, msg.dest,
                            MiroRequestBody{id, me_, n, body.avoid, body.budget - 1}));
      return;
    }
  }
  out.push_back(message(MsgKind::MiroOffer, body.requester, msg.dest,
                        MiroOfferBody{body.request_id, body.requester, me_, std::move(routes)}));
}

void MiroSpeaker::handle_offer(const UpdateMsg& msg, Outbox& out) {
  const auto& body = std::get<MiroOfferBody>(msg.miro);
  auto it = outstanding_.find(body.request_id);
  if (it == outstanding_.end()) {
    bump("miro_unknown_replies");
    return;
  }
  Outstanding& pending = it->second;

  if (pending.parent) {
    const Parent parent = *pending.parent;
    const auto served = served_.find({parent.requester, parent.request_id});
    const Path back = path_to(parent.requester);
    std::vector<OfferedRoute> routes;
    if (served != served_.end() && back.size() >= 2) {
      const Relation toward = rel(back[1]);
      const Learned cls = learned_via(rel(msg.origin), Learned::Self);
      for (const OfferedRoute& r : body.routes) {
        if (path_contains(r.path, me_)) continue;
        Path full{me_};
        full.insert(full.end(), r.path.begin(), r.path.end());
        if (path_contains(full, parent.requester) || !served->second.avoid.permits(full)) continue;
        if (!export_allowed(cls, toward)) continue;
        routes.push_back({std::move(full), r.price_tag});
        if (routes.size() == options_.max_offer) break;
      }
    }
    out.push_back(message(MsgKind::MiroOffer, parent.requester, msg.dest,
                          MiroOfferBody{parent.request_id, parent.requester, me_, std::move(routes)}));
    return;
  }

  offers_[body.request_id] = body;
  if (body.routes.empty()) {
    bump("miro_empty_offers");
    outstanding_.erase(it);
    return;
  }
  const AcceptPolicy& policy = pending.request.accept;
  const OfferedRoute* chosen = nullptr;
  if (policy.kind == AcceptPolicy::Kind::First) {
    chosen = &body.routes.front();
  } else if (policy.kind == AcceptPolicy::Kind::Via) {
    for (const OfferedRoute& r : body.routes) {
      if (path_contains(r.path, policy.via)) {
        chosen = &r;
        break;
      }
    }
  }
  if (!chosen) {
    bump("miro_offers_declined");
    outstanding_.erase(it);
    return;
  }
  pending.accepted = chosen->path;
  out.push_back(message(MsgKind::MiroAccept, msg.origin, msg.dest,
                        MiroAcceptBody{body.request_id, me_, msg.origin, chosen->path}));
}

void MiroSpeaker::handle_accept(const UpdateMsg& msg, Outbox& out) {
  const auto& body = std::get<MiroAcceptBody>(msg.miro);
  auto refuse = [&] {
    bump("miro_refused");
    out.push_back(message(MsgKind::MiroRefuse, body.requester, msg.dest,
                          MiroRefuseBody{body.request_id, body.requester, me_}));
  };
  auto served = served_.find({body.requester, body.request_id});
  if (served == served_.end() || served->second.dest != msg.dest) {
    refuse();
    return;
  }
  const Path& path = body.path;

  if (served->second.sub_request) {
    auto sub = outstanding_.find(*served->second.sub_request);
    if (sub == outstanding_.end() || path.size() < 3 || path[0] != me_ ||
        path[1] != sub->second.request.responder) {
      refuse();
      return;
    }
    sub->second.accepted = path;
    const AsId next = path[1];
    out.push_back(message(MsgKind::MiroAccept, next, msg.dest,
                          MiroAcceptBody{sub->first, me_, next, Path(path.begin() + 1, path.end())}));
    return;
  }

  const auto& rib = rib_in(msg.dest);
  const bool live = path.size() >= 2 && path[0] == me_ && up(path[1]) && rib.count(path[1]) &&
                    rib.at(path[1]).as_path == path;
  if (!live || !served->second.avoid.permits(path) || path_contains(path, body.requester)) {
    refuse();
    return;
  }
  const std::uint32_t id = next_tunnel_id_++;
  tunnels_[id] = ResponderTunnel{id, body.requester, msg.dest, path, std::nullopt, 0, {}};
  bump("miro_tunnels_granted");
  out.push_back(message(MsgKind::MiroGrant, body.requester, msg.dest,
                        MiroGrantBody{body.request_id, body.requester, me_, id, path}));
}

void MiroSpeaker::handle_grant(const UpdateMsg& msg, Outbox& out) {
  const auto& body = std::get<MiroGrantBody>(msg.miro);
  auto it = outstanding_.find(body.request_id);
  if (it == outstanding_.end()) {
    bump("miro_unknown_replies");
    return;
  }
  const Outstanding pending = it->second;
  outstanding_.erase(it);

  if (pending.parent) {
    const std::uint32_t id = next_tunnel_id_++;
    tunnels_[id] = ResponderTunnel{id,       pending.parent->requester, msg.dest, pending.accepted,
                                   msg.origin, body.tunnel_id,           path_to(msg.origin)};
    bump("miro_tunnels_granted");
    out.push_back(message(
        MsgKind::MiroGrant, pending.parent->requester, msg.dest,
        MiroGrantBody{pending.parent->request_id, pending.parent->requester, me_, id, pending.accepted}));
    return;
  }

  const auto key = std::make_pair(msg.dest, pending.request.traffic_class);
  if (installed_.count(key)) drop_requester_tunnel(key, out);
  installed_[key] = RequesterTunnel{msg.origin, body.tunnel_id, msg.dest,
                                    pending.request.traffic_class, path_to(msg.origin), body.path};
  bump("miro_tunnels_installed");
}

void MiroSpeaker::handle_refuse(const UpdateMsg& msg, Outbox& out) {
  const auto& body = std::get<MiroRefuseBody>(msg.miro);
  auto it = outstanding_.find(body.request_id);
  if (it == outstanding_.end()) {
    bump("miro_unknown_replies");
    return;
  }
  if (const auto parent = it->second.parent) {
    out.push_back(message(MsgKind::MiroRefuse, parent->requester, msg.dest,
                          MiroRefuseBody{parent->request_id, parent->requester, me_}));
  }
  bump("miro_refusals");
  outstanding_.erase(it);
}

void MiroSpeaker::handle_teardown(const UpdateMsg& msg, Outbox& out) {
  const auto& body = std::get<MiroTeardownBody>(msg.miro);
  if (body.from_requester) {
    auto it = tunnels_.find(body.tunnel_id);
    if (it == tunnels_.end() || it->second.requester != msg.origin) {
      bump("miro_unknown_teardowns");
      return;
    }
    const ResponderTunnel t = it->second;
    tunnels_.erase(it);
    bump("miro_teardowns");
    if (t.sub_responder) {
      out.push_back(message(MsgKind::MiroTeardown, *t.sub_responder, t.dest,
                            MiroTeardownBody{t.sub_tunnel, me_, *t.sub_responder, true}));
    }
    return;
  }
  for (auto it = installed_.begin(); it != installed_.end(); ++it) {
    if (it->second.responder == msg.origin && it->second.id == body.tunnel_id) {
      installed_.erase(it);
      bump("miro_teardowns");
      return;
    }
  }
  for (const auto& [id, t] : tunnels_) {
    if (t.sub_responder == msg.origin && t.sub_tunnel == body.tunnel_id) {
      drop_responder_tunnel(id, out, false);
      return;
    }
  }
  bump("miro_unknown_teardowns");
}

bool MiroSpeaker::bound_path_live(const ResponderTunnel& t) const {
  const AsId next = t.bound_path[1];
  const auto& rib = rib_in(t.dest);
  auto it = rib.find(next);
  return up(next) && it != rib.end() && it->second.as_path == t.bound_path;
}

void MiroSpeaker::drop_responder_tunnel(std::uint32_t id, Outbox& out, bool notify_sub) {
  const ResponderTunnel t = tunnels_.at(id);
  tunnels_.erase(id);
  bump("miro_teardowns");
  out.push_back(message(MsgKind::MiroTeardown, t.requester, t.dest,
                        MiroTeardownBody{t.id, t.requester, me_, false}));
  if (notify_sub && t.sub_responder) {
    out.push_back(message(MsgKind::MiroTeardown, *t.sub_responder, t.dest,
                          MiroTeardownBody{t.sub_tunnel, me_, *t.sub_responder, true}));
  }
}

void MiroSpeaker::drop_requester_tunnel(std::pair<AsId, std::string> key, Outbox& out) {
  const RequesterTunnel t = installed_.at(key);
  installed_.erase(key);
  bump("miro_teardowns");
  out.push_back(message(MsgKind::MiroTeardown, t.responder, t.dest,
                        MiroTeardownBody{t.id, me_, t.responder, true}));
}

void MiroSpeaker::after_decision(AsId dest, DestState& st, const Cause& cause, Outbox& out) {
  (void)st, (void)cause;
  std::vector<std::uint32_t> dead;
  for (const auto& [id, t] : tunnels_) {
    if (t.dest == dest && !t.sub_responder && !bound_path_live(t)) dead.push_back(id);
    if (t.sub_responder == dest && path_to(dest) != t.sub_relay) dead.push_back(id);
  }
  for (std::uint32_t id : dead) {
    if (tunnels_.count(id)) drop_responder_tunnel(id, out, true);
  }

  std::vector<std::pair<AsId, std::string>> moved;
  for (const auto& [key, t] : installed_) {
    if (t.responder == dest && path_to(dest) != t.relay_path) moved.push_back(key);
  }
  for (const auto& key : moved) drop_requester_tunnel(key, out);
}

Outbox MiroSpeaker::link_down(AsId neighbor) {
  Outbox out = BgpSpeaker::link_down(neighbor);
  std::vector<std::pair<AsId, std::string>> broken;
  for (const auto& [key, t] : installed_) {
    if (t.relay_path.size() >= 2 && t.relay_path[1] == neighbor) broken.push_back(key);
  }
  for (const auto& key : broken) drop_requester_tunnel(key, out);

  std::vector<std::uint32_t> dead;
  for (const auto& [id, t] : tunnels_) {
    if (t.sub_responder && t.sub_relay.size() >= 2 && t.sub_relay[1] == neighbor) dead.push_back(id);
  }
  for (std::uint32_t id : dead) drop_responder_tunnel(id, out, true);
  return out;
}

ForwardStep MiroSpeaker::forward(AsId dest, const ForwardCtx& ctx,
                                 std::optional<AsId> prev) const {
  ForwardCtx plain = ctx;
  plain.mode = ForwardCtx::Mode::Plain;
  plain.tunnel_endpoint = AsId{};
  plain.tunnel_id = 0;
  plain.tunnel_path.clear();

  if (ctx.mode == ForwardCtx::Mode::Tunnel && ctx.tunnel_endpoint == me_) {
    auto it = tunnels_.find(ctx.tunnel_id);
    if (it != tunnels_.end()) {
      const ResponderTunnel& t = it->second;
      if (t.sub_responder) {
        ForwardStep step{std::nullopt, plain};
        const Path path = path_to(*t.sub_responder);
        if (path.size() < 2) return step;
        step.ctx.mode = ForwardCtx::Mode::Tunnel;
        step.ctx.tunnel_endpoint = *t.sub_responder;
        step.ctx.tunnel_id = t.sub_tunnel;
        step.ctx.tunnel_path = path;
        step.next = path[1];
        return step;
      }
      ForwardStep step{std::nullopt, plain};
      if (up(t.bound_path[1])) step.next = t.bound_path[1];
      return step;
    }
    return BgpSpeaker::forward(dest, plain, prev);
  }

  if (options_.deployed && dest != me_) {
    auto it = installed_.find({dest, ctx.traffic_class});
    if (it == installed_.end()) it = installed_.find({dest, std::string("*")});
    if (it != installed_.end()) {
      const RequesterTunnel& t = it->second;
      ForwardStep step{std::nullopt, plain};
      const Path path = path_to(t.responder);
      if (path.size() < 2) return step;
      step.ctx.mode = ForwardCtx::Mode::Tunnel;
      step.ctx.tunnel_endpoint = t.responder;
      step.ctx.tunnel_id = t.id;
      step.ctx.tunnel_path = path;
      step.next = path[1];
      return step;
    }
  }
  return BgpSpeaker::forward(dest, plain, prev);
}

}  // namespace irsim
