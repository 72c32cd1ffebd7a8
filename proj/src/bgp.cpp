#include "irsim/bgp.hpp"

#include <algorithm>

namespace irsim {

namespace {
const std::map<AsId, Route> kEmptyRib;
}

const BgpSpeaker::DestState* BgpSpeaker::find(AsId dest) const {
  auto it = dests_.find(dest);
  return it == dests_.end() ? nullptr : &it->second;
}

const std::map<AsId, Route>& BgpSpeaker::rib_in(AsId dest) const {
  const DestState* st = find(dest);
  return st ? st->rib_in : kEmptyRib;
}

std::optional<Path> BgpSpeaker::advertised(AsId dest, AsId neighbor) const {
  const DestState* st = find(dest);
  if (!st) return std::nullopt;
  auto it = st->adj_out.find(neighbor);
  if (it == st->adj_out.end()) return std::nullopt;
  return it->second.path;
}

std::optional<Route> BgpSpeaker::best(AsId dest) const {
  const DestState* st = find(dest);
  if (!st) return std::nullopt;
  return st->best;
}

RibSize BgpSpeaker::rib_size() const {
  RibSize size;
  for (const auto& [dest, st] : dests_) {
    size.rib_in += st.rib_in.size();
    if (st.best) ++size.local;
  }
  return size;
}

void BgpSpeaker::check_neighbor(const UpdateMsg& msg) const {
  if (msg.receiver != me_ || !graph_.has_link(me_, msg.sender)) {
    throw ValidationError("AS " + to_string(me_) + " got a message from non-neighbor " +
                          to_string(msg.sender));
  }
}

Route BgpSpeaker::candidate(const UpdateMsg& msg) const {
  Route r;
  r.dest = msg.dest;
  r.as_path.reserve(msg.path.size() + 1);
  r.as_path.push_back(me_);
  r.as_path.insert(r.as_path.end(), msg.path.begin(), msg.path.end());
  r.learned_from = msg.sender;
  const Relation relation = rel(msg.sender);
  r.rank = import_rank(relation);
  r.export_class = learned_via(relation, msg.export_class);
  r.label = msg.label;
  r.failover = msg.failover;
  return r;
}

void BgpSpeaker::apply_route_update(const UpdateMsg& msg) {
  DestState& st = dests_[msg.dest];
  if (msg.kind == MsgKind::Withdraw || path_contains(msg.path, me_)) {
    // A looped path is an implicit withdrawal of the previous route.
    if (msg.kind == MsgKind::Announce) bump("loop_discards");
    st.rib_in.erase(msg.sender);
    return;
  }
  st.rib_in[msg.sender] = candidate(msg);
}

std::vector<Route> BgpSpeaker::eligible(AsId dest, const DestState& st) {
  std::vector<Route> out;
  if (originated_.count(dest)) out.push_back(self_route(me_));
  for (const auto& [n, r] : st.rib_in) {
    if (up(n)) out.push_back(r);
  }
  return out;
}

void BgpSpeaker::stamp(UpdateMsg& msg, const Cause& cause) {
  msg.rci = cause.rci;
  msg.repaired = cause.repaired;
}

void BgpSpeaker::recompute_into(AsId dest, const Cause& cause, Outbox& out) {
  DestState& st = dests_[dest];
  const auto candidates = eligible(dest, st);
  st.best = decide(candidates);

  for (AsId n : graph_.neighbors(me_)) {
    if (!up(n)) continue;
    std::optional<Advert> want;
    if (st.best && st.best->learned_from != n && export_allowed(st.best->export_class, rel(n)) &&
        !path_contains(st.best->as_path, n)) {
      want = Advert{st.best->as_path, st.best->export_class};
    }
    auto it = st.adj_out.find(n);
    const bool had = it != st.adj_out.end();
    if (want) {
      if (had && it->second == *want) continue;
      UpdateMsg m = make_announce(me_, n, *st.best);
      m.label = PathLabel{};
      m.failover = false;
      stamp(m, cause);
      out.push_back(std::move(m));
      st.adj_out[n] = *want;
    } else if (had) {
      UpdateMsg m = make_withdraw(me_, n, dest);
      stamp(m, cause);
      out.push_back(std::move(m));
      st.adj_out.erase(it);
    }
  }
  after_decision(dest, st, cause, out);
}

Outbox BgpSpeaker::recompute(AsId dest, const Cause& cause) {
  Outbox out;
  recompute_into(dest, cause, out);
  return out;
}

Outbox BgpSpeaker::recompute_all(const Cause& cause) {
  Outbox out;
  std::vector<AsId> keys;
  keys.reserve(dests_.size());
  for (const auto& entry : dests_) keys.push_back(entry.first);
  for (AsId d : keys) recompute_into(d, cause, out);
  return out;
}

void BgpSpeaker::forget_neighbor(AsId neighbor) {
  for (auto& [dest, st] : dests_) {
    st.rib_in.erase(neighbor);
    st.adj_out.erase(neighbor);
  }
}

Outbox BgpSpeaker::originate(AsId dest) {
  if (dest != me_) {
    throw ValidationError("AS " + to_string(me_) + " cannot originate " + to_string(dest));
  }
  originated_.insert(dest);
  return recompute(dest, {});
}

Outbox BgpSpeaker::receive(const UpdateMsg& msg) {
  check_neighbor(msg);
  if (msg.kind != MsgKind::Announce && msg.kind != MsgKind::Withdraw) {
    bump("ignored_messages");
    return {};
  }
  apply_route_update(msg);
  return recompute(msg.dest, {});
}

Outbox BgpSpeaker::link_down(AsId neighbor) {
  forget_neighbor(neighbor);
  return recompute_all({});
}

Outbox BgpSpeaker::link_up(AsId neighbor) {
  (void)neighbor;
  return recompute_all({});
}

ForwardStep BgpSpeaker::forward(AsId dest, const ForwardCtx& ctx,
                                std::optional<AsId> prev) const {
  (void)prev;
  ForwardStep step{std::nullopt, ctx};
  step.ctx.mode = ForwardCtx::Mode::Plain;
  const DestState* st = find(dest);
  if (st && st->best) step.next = st->best->next_hop();
  return step;
}

}  // namespace irsim
