#include "irsim/yamr.hpp"

#include <vector>

namespace irsim {

namespace {

struct Candidate {
  Route route;
  std::optional<YamrSpeaker::InKey> source;
};

const Candidate* pick(const std::vector<Candidate>& cands) {
  const Candidate* best = nullptr;
  for (const Candidate& c : cands) {
    if (best == nullptr || preferred(c.route, best->route)) best = &c;
  }
  return best;
}

}  // namespace

std::map<PathLabel, Route> YamrSpeaker::table(AsId dest) const {
  std::map<PathLabel, Route> out;
  auto it = dests_.find(dest);
  if (it == dests_.end()) return out;
  for (const auto& [label, sel] : it->second.local) out.emplace(label, sel.route);
  return out;
}

std::map<YamrSpeaker::InKey, YamrSpeaker::InEntry> YamrSpeaker::rib_in(AsId dest) const {
  auto it = dests_.find(dest);
  if (it == dests_.end()) return {};
  return it->second.rib_in;
}

std::optional<Route> YamrSpeaker::deflection(AsId dest, const PathLabel& label) const {
  auto it = dests_.find(dest);
  if (it == dests_.end()) return std::nullopt;
  auto d = it->second.deflect.find(label);
  if (d == it->second.deflect.end()) return std::nullopt;
  return d->second;
}

std::size_t YamrSpeaker::lame_count() const {
  std::size_t n = 0;
  for (const auto& [dest, st] : dests_) {
    for (const auto& [key, e] : st.rib_in) n += e.lame ? 1 : 0;
  }
  return n;
}

std::optional<Route> YamrSpeaker::best(AsId dest) const {
  auto it = dests_.find(dest);
  if (it == dests_.end()) return std::nullopt;
  auto sel = it->second.local.find(PathLabel{});
  if (sel == it->second.local.end()) return std::nullopt;
  return sel->second.route;
}

RibSize YamrSpeaker::rib_size() const {
  RibSize size;
  for (const auto& [dest, st] : dests_) {
    size.rib_in += st.rib_in.size();
    size.local += st.local.size();
  }
  return size;
}

void YamrSpeaker::gauges(Counters& out) const {
  out["lame_count"] += lame_count();
  out["labeled_rib_size"] += rib_size().local;
}

void YamrSpeaker::select(AsId dest, DestState& st) const {
  st.local.clear();
  if (originated_.count(dest)) {
    st.local[PathLabel{}] = Selected{self_route(me_), std::nullopt};
    return;
  }
  auto usable = [&](const InKey& key, const InEntry& e) { return e.lame || up(key.first); };

  std::vector<Candidate> defaults;
  for (const auto& [key, e] : st.rib_in) {
    if (key.second.is_default() && usable(key, e)) defaults.push_back({e.route, key});
  }
  const Candidate* def = pick(defaults);
  if (!def) return;
  st.local[PathLabel{}] = Selected{def->route, def->source};

  const Path path = def->route.as_path;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const LinkKey link(path[i], path[i + 1]);
    const PathLabel label = PathLabel::avoiding(link);
    std::vector<Candidate> cands;
    for (AsId n : graph_.neighbors(me_)) {
      auto it = st.rib_in.find({n, label});
      if (it == st.rib_in.end() || !usable(it->first, it->second)) it = st.rib_in.find({n, PathLabel{}});
      if (it == st.rib_in.end() || !usable(it->first, it->second)) continue;
      if (path_contains_link(it->second.route.as_path, link)) continue;
      Route r = it->second.route;
      r.label = label;
      cands.push_back({std::move(r), it->first});
    }
    if (const Candidate* alt = pick(cands)) st.local[label] = Selected{alt->route, alt->source};
  }
}

bool YamrSpeaker::is_lame(const DestState& st, const Selected& sel) const {
  if (!sel.source) return false;
  auto it = st.rib_in.find(*sel.source);
  return it != st.rib_in.end() && it->second.lame;
}

std::optional<Route> YamrSpeaker::pick_deflection(const DestState& st, const PathLabel& label,
                                                  std::optional<LinkKey> failed) const {
  std::vector<Route> cands;
  for (const auto& [other, sel] : st.local) {
    if (other == label || is_lame(st, sel)) continue;
    const Path& p = sel.route.as_path;
    if (failed && path_contains_link(p, *failed)) continue;
    if (label.avoid && path_contains_link(p, *label.avoid)) continue;
    const auto nh = sel.route.next_hop();
    if (!nh || !up(*nh)) continue;
    cands.push_back(sel.route);
  }
  return decide(cands);
}

void YamrSpeaker::settle(AsId dest, DestState& st) {
  std::map<PathLabel, Route> bound;
  for (;;) {
    select(dest, st);
    bound.clear();
    if (!options_.hiding) break;

    std::set<InKey> used;
    for (const auto& [label, sel] : st.local) {
      if (sel.source) used.insert(*sel.source);
    }
    for (auto it = st.rib_in.begin(); it != st.rib_in.end();) {
      if (it->second.lame && !used.count(it->first)) {
        it = st.rib_in.erase(it);
      } else {
        ++it;
      }
    }

    bool erased = false;
    for (const auto& [label, sel] : st.local) {
      if (!is_lame(st, sel)) continue;
      const InEntry& entry = st.rib_in.at(*sel.source);
      if (auto d = pick_deflection(st, label, entry.cause)) {
        bound[label] = *d;
      } else {
        st.rib_in.erase(*sel.source);
        erased = true;
        break;
      }
    }
    if (!erased) break;
  }

  for (const auto& [label, d] : bound) {
    auto old = st.deflect.find(label);
    if (old == st.deflect.end()) {
      bump("hidden_failures");
    } else if (old->second.as_path != d.as_path) {
      bump("deflection_switches");
    }
  }
  st.deflect = std::move(bound);
}

void YamrSpeaker::export_to_neighbors(AsId dest, DestState& st, const Cause& cause, Outbox& out) {
  for (AsId n : graph_.neighbors(me_)) {
    if (!up(n)) continue;
    const Relation r = rel(n);
    std::map<PathLabel, std::pair<Path, Learned>> want;
    for (const auto& [label, sel] : st.local) {
      const Route& route = sel.route;
      if (!export_allowed(route.export_class, r) || path_contains(route.as_path, n)) continue;
      if (auto d = st.deflect.find(label); d != st.deflect.end()) {
        // Hidden only from neighbors that can still use the deflection.
        if (!export_allowed(d->second.export_class, r) || path_contains(d->second.as_path, n)) {
          continue;
        }
      }
      want[label] = {route.as_path, route.export_class};
    }

    auto& sent = st.adj_out[n];
    std::set<PathLabel> labels;
    for (const auto& [label, w] : want) labels.insert(label);
    for (const auto& [label, p] : sent) labels.insert(label);
    for (const PathLabel& label : labels) {
      auto w = want.find(label);
      auto s = sent.find(label);
      if (w != want.end()) {
        if (s != sent.end() && s->second == w->second.first) continue;
        Route adv = st.local.at(label).route;
        UpdateMsg m = make_announce(me_, n, adv);
        m.label = label;
        m.rci = cause.rci;
        m.repaired = cause.repaired;
        out.push_back(std::move(m));
        sent[label] = w->second.first;
      } else if (s != sent.end()) {
        UpdateMsg m = make_withdraw(me_, n, dest, label);
        m.rci = cause.rci;
        m.repaired = cause.repaired;
        out.push_back(std::move(m));
        sent.erase(s);
      }
    }
    if (sent.empty()) st.adj_out.erase(n);
  }
}

void YamrSpeaker::recompute_into(AsId dest, const Cause& cause, Outbox& out) {
  DestState& st = dests_[dest];
  settle(dest, st);
  export_to_neighbors(dest, st, cause, out);
}

Outbox YamrSpeaker::recompute_all(const Cause& cause) {
  Outbox out;
  std::vector<AsId> keys;
  for (const auto& entry : dests_) keys.push_back(entry.first);
  for (AsId d : keys) recompute_into(d, cause, out);
  return out;
}

void YamrSpeaker::lose(DestState& st, const InKey& key, std::optional<LinkKey> cause) {
  auto it = st.rib_in.find(key);
  if (it == st.rib_in.end()) return;
  if (options_.hiding) {
    it->second.lame = true;
    it->second.cause = cause;
  } else {
    st.rib_in.erase(it);
  }
}

Outbox YamrSpeaker::originate(AsId dest) {
  if (dest != me_) {
    throw ValidationError("AS " + to_string(me_) + " cannot originate " + to_string(dest));
  }
  originated_.insert(dest);
  Outbox out;
  recompute_into(dest, {}, out);
  return out;
}

Outbox YamrSpeaker::receive(const UpdateMsg& msg) {
  if (msg.receiver != me_ || !graph_.has_link(me_, msg.sender)) {
    throw ValidationError("AS " + to_string(me_) + " got a message from non-neighbor " +
                          to_string(msg.sender));
  }
  if (is_miro(msg.kind) || msg.failover) {
    bump("ignored_messages");
    return {};
  }
  DestState& st = dests_[msg.dest];
  const InKey key{msg.sender, msg.label};
  if (msg.kind == MsgKind::Withdraw || path_contains(msg.path, me_)) {
    if (msg.kind == MsgKind::Announce) bump("loop_discards");
    lose(st, key, msg.rci);
  } else {
    Route r;
    r.dest = msg.dest;
    r.as_path.push_back(me_);
    r.as_path.insert(r.as_path.end(), msg.path.begin(), msg.path.end());
    r.learned_from = msg.sender;
    const Relation relation = rel(msg.sender);
    r.rank = import_rank(relation);
    r.export_class = learned_via(relation, msg.export_class);
    r.label = msg.label;
    st.rib_in[key] = InEntry{std::move(r), false, std::nullopt};
  }
  Outbox out;
  recompute_into(msg.dest, Cause{msg.rci, msg.repaired}, out);
  return out;
}

Outbox YamrSpeaker::link_down(AsId neighbor) {
  const LinkKey link(me_, neighbor);
  for (auto& [dest, st] : dests_) {
    std::vector<InKey> keys;
    for (const auto& [key, e] : st.rib_in) {
      if (key.first == neighbor) keys.push_back(key);
    }
    for (const InKey& key : keys) lose(st, key, link);
    st.adj_out.erase(neighbor);
  }
  return recompute_all(Cause{link, std::nullopt});
}

Outbox YamrSpeaker::link_up(AsId neighbor) {
  const LinkKey link(me_, neighbor);
  for (auto& [dest, st] : dests_) {
    for (auto it = st.rib_in.begin(); it != st.rib_in.end();) {
      if (it->second.lame && it->second.cause == link) {
        it = st.rib_in.erase(it);
      } else {
        ++it;
      }
    }
  }
  return recompute_all(Cause{std::nullopt, link});
}

ForwardStep YamrSpeaker::forward(AsId dest, const ForwardCtx& ctx,
                                 std::optional<AsId> prev) const {
  (void)prev;
  ForwardStep step{std::nullopt, ctx};
  step.ctx.mode = ForwardCtx::Mode::Plain;
  auto it = dests_.find(dest);
  if (it == dests_.end()) return step;
  const DestState& st = it->second;

  auto sel = st.local.end();
  if (!ctx.label.is_default()) sel = st.local.find(ctx.label);
  if (sel == st.local.end()) sel = st.local.find(PathLabel{});
  if (sel == st.local.end()) return step;

  if (auto d = st.deflect.find(sel->first); d != st.deflect.end()) {
    step.next = d->second.next_hop();
    step.ctx.label = d->second.label;
    return step;
  }
  step.next = sel->second.route.next_hop();
  return step;
}

}  // namespace irsim
