#include "irsim/rbgp.hpp"

namespace irsim {

namespace {
const std::map<AsId, Route> kNoFailovers;

bool same_advert(const std::optional<RbgpSpeaker::FailoverAdvert>& a,
                 const std::optional<RbgpSpeaker::FailoverAdvert>& b) {
  if (a.has_value() != b.has_value()) return false;
  if (!a) return true;
  return a->to == b->to && a->route.as_path == b->route.as_path;
}
}  // namespace

std::optional<Route> select_failover(const Route& primary, std::span<const Route> candidates) {
  const Route* best = nullptr;
  std::size_t best_overlap = 0;
  for (const Route& r : candidates) {
    const std::size_t overlap = common_suffix(primary.as_path, r.as_path);
    if (best == nullptr || overlap < best_overlap ||
        (overlap == best_overlap && preferred(r, *best))) {
      best = &r;
      best_overlap = overlap;
    }
  }
  if (best == nullptr) return std::nullopt;
  return *best;
}

std::vector<Route> rci_filter(const std::set<LinkKey>& failed, std::span<const Route> candidates) {
  std::vector<Route> out;
  for (const Route& r : candidates) {
    bool clean = true;
    for (const LinkKey& link : failed) {
      if (path_contains_link(r.as_path, link)) {
        clean = false;
        break;
      }
    }
    if (clean) out.push_back(r);
  }
  return out;
}

std::optional<RbgpSpeaker::FailoverAdvert> RbgpSpeaker::failover_advertised(AsId dest) const {
  auto it = failover_.find(dest);
  if (it == failover_.end()) return std::nullopt;
  return it->second.sent;
}

const std::map<AsId, Route>& RbgpSpeaker::failover_received(AsId dest) const {
  auto it = failover_.find(dest);
  return it == failover_.end() ? kNoFailovers : it->second.received;
}

std::optional<RbgpSpeaker::FibEntry> RbgpSpeaker::fib(AsId dest) const {
  auto it = failover_.find(dest);
  if (it == failover_.end()) return std::nullopt;
  return it->second.fib;
}

RibSize RbgpSpeaker::rib_size() const {
  RibSize size = BgpSpeaker::rib_size();
  for (const auto& [dest, fs] : failover_) size.rib_in += fs.received.size();
  return size;
}

std::vector<Route> RbgpSpeaker::filtered(std::vector<Route> routes) {
  if (!options_.rci || failed_.empty()) return routes;
  auto kept = rci_filter(failed_, routes);
  if (kept.size() != routes.size()) bump("rci_discards", routes.size() - kept.size());
  return kept;
}

std::vector<Route> RbgpSpeaker::eligible(AsId dest, const DestState& st) {
  return filtered(BgpSpeaker::eligible(dest, st));
}

std::optional<Route> RbgpSpeaker::usable_failover(const FailoverState& fs) const {
  std::vector<Route> routes;
  for (const auto& [n, r] : fs.received) {
    if (up(n)) routes.push_back(r);
  }
  if (options_.rci) routes = rci_filter(failed_, routes);
  return decide(routes);
}

void RbgpSpeaker::after_decision(AsId dest, DestState& st, const Cause& cause, Outbox& out) {
  FailoverState& fs = failover_[dest];

  std::optional<FailoverAdvert> want;
  // A destination reached directly needs no failover from us.
  if (st.best && st.best->learned_from && *st.best->next_hop() != dest) {
    const AsId nh = *st.best->next_hop();
    std::vector<Route> candidates;
    for (const auto* slot : {&st.rib_in, &fs.received}) {
      for (const auto& [n, r] : *slot) {
        if (n != nh && up(n) && !path_contains(r.as_path, nh)) candidates.push_back(r);
      }
    }
    if (auto f = select_failover(*st.best, filtered(std::move(candidates)))) {
      want = FailoverAdvert{nh, *f};
    }
  }

  if (!same_advert(fs.sent, want)) {
    if (fs.sent && (!want || fs.sent->to != want->to) && up(fs.sent->to)) {
      UpdateMsg m = make_withdraw(me_, fs.sent->to, dest);
      m.failover = true;
      stamp(m, cause);
      out.push_back(std::move(m));
    }
    if (want) {
      UpdateMsg m = make_announce(me_, want->to, want->route);
      m.label = PathLabel{};
      m.failover = true;
      stamp(m, cause);
      out.push_back(std::move(m));
      bump("failover_adverts");
    }
    fs.sent = want;
  }

  std::optional<FibEntry> fib;
  if (st.best) {
    if (auto nh = st.best->next_hop()) fib = FibEntry{*nh, false, false};
  } else if (auto f = usable_failover(fs)) {
    fib = FibEntry{*f->next_hop(), true, false};
  } else if (fs.fib && up(fs.fib->next)) {
    // No route at all: keep sending towards the previous next hop.
    fib = FibEntry{fs.fib->next, fs.fib->failover, true};
  }
  if (fib && fib->failover && !(fs.fib && fs.fib->failover)) bump("failover_switches");
  fs.fib = fib;
}

Outbox RbgpSpeaker::receive(const UpdateMsg& msg) {
  check_neighbor(msg);
  if (msg.kind != MsgKind::Announce && msg.kind != MsgKind::Withdraw) {
    bump("ignored_messages");
    return {};
  }
  Cause cause;
  bool changed = false;
  if (options_.rci) {
    if (msg.rci) {
      cause.rci = msg.rci;
      changed |= failed_.insert(*msg.rci).second;
    }
    if (msg.repaired) {
      cause.repaired = msg.repaired;
      changed |= failed_.erase(*msg.repaired) > 0;
    }
  }
  if (msg.failover) {
    dests_[msg.dest];
    FailoverState& fs = failover_[msg.dest];
    if (msg.kind == MsgKind::Withdraw || path_contains(msg.path, me_)) {
      fs.received.erase(msg.sender);
    } else {
      fs.received[msg.sender] = candidate(msg);
    }
  } else {
    apply_route_update(msg);
  }
  return changed ? recompute_all(cause) : recompute(msg.dest, cause);
}

Outbox RbgpSpeaker::link_down(AsId neighbor) {
  Cause cause;
  if (options_.rci) {
    cause.rci = LinkKey(me_, neighbor);
    failed_.insert(*cause.rci);
  }
  forget_neighbor(neighbor);
  for (auto& [dest, fs] : failover_) {
    fs.received.erase(neighbor);
    if (fs.sent && fs.sent->to == neighbor) fs.sent.reset();
  }
  return recompute_all(cause);
}

Outbox RbgpSpeaker::link_up(AsId neighbor) {
  Cause cause;
  if (options_.rci) {
    cause.repaired = LinkKey(me_, neighbor);
    failed_.erase(*cause.repaired);
  }
  return recompute_all(cause);
}

ForwardStep RbgpSpeaker::forward(AsId dest, const ForwardCtx& ctx,
                                 std::optional<AsId> prev) const {
  ForwardStep step{std::nullopt, ctx};
  step.ctx.mode = ForwardCtx::Mode::Plain;
  auto it = failover_.find(dest);
  if (it == failover_.end()) return step;
  const FailoverState& fs = it->second;

  if (ctx.mode == ForwardCtx::Mode::Failover && prev && fs.sent && fs.sent->to == *prev) {
    const AsId nh = *fs.sent->route.next_hop();
    if (up(nh)) {
      step.next = nh;
      if (fs.sent->route.failover) step.ctx.mode = ForwardCtx::Mode::Failover;
      return step;
    }
  }
  if (fs.fib && up(fs.fib->next)) {
    step.next = fs.fib->next;
    if (fs.fib->failover) step.ctx.mode = ForwardCtx::Mode::Failover;
  }
  return step;
}

}  // namespace irsim
