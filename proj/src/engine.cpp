#include "irsim/engine.hpp"

#include <algorithm>
#include <set>

namespace irsim {

std::string_view to_string(ProbeResult::Reason reason) {
  switch (reason) {
    case ProbeResult::Reason::None: return "none";
    case ProbeResult::Reason::NoRoute: return "no_route";
    case ProbeResult::Reason::Loop: return "loop";
  }
  return "?";
}

namespace {

std::unique_ptr<Speaker> make_speaker(AsId as, const AsGraph& graph, const SimConfig& config) {
  switch (config.protocol) {
    case Protocol::Bgp: return std::make_unique<BgpSpeaker>(as, graph);
    case Protocol::Rbgp: return std::make_unique<RbgpSpeaker>(as, graph, config.rbgp);
    case Protocol::Miro:
      return std::make_unique<MiroSpeaker>(as, graph, config.miro.options_for(as));
    case Protocol::Yamr: return std::make_unique<YamrSpeaker>(as, graph, YamrOptions{false});
    case Protocol::YamrHiding: return std::make_unique<YamrSpeaker>(as, graph, YamrOptions{true});
  }
  throw ValidationError("unknown protocol");
}

}  // namespace

Simulator::Simulator(AsGraph graph, SimConfig config)
    : graph_(std::move(graph)), config_(std::move(config)) {
  if (config_.default_delay == 0) throw ValidationError("link delay must be at least 1 tick");
  for (const auto& [link, d] : config_.link_delays) {
    if (!graph_.has_link(link.lo, link.hi)) {
      throw ValidationError("delay configured for unknown link " + to_string(link));
    }
    if (d == 0) throw ValidationError("link delay must be at least 1 tick");
  }
  for (AsId as : graph_.nodes()) {
    auto s = make_speaker(as, graph_, config_);
    s->set_clock(&now_);
    speakers_.emplace(as, std::move(s));
  }
}

Speaker& Simulator::speaker(AsId as) {
  auto it = speakers_.find(as);
  if (it == speakers_.end()) throw ValidationError("unknown AS " + to_string(as));
  return *it->second;
}

const Speaker& Simulator::speaker(AsId as) const {
  auto it = speakers_.find(as);
  if (it == speakers_.end()) throw ValidationError("unknown AS " + to_string(as));
  return *it->second;
}

Tick Simulator::delay(LinkKey link) const {
  auto it = config_.link_delays.find(link);
  return it == config_.link_delays.end() ? config_.default_delay : it->second;
}

void Simulator::schedule(const ScenarioEvent& event) {
  if (event.time < now_) {
    throw ValidationError("event at tick " + std::to_string(event.time) + " is in the past");
  }
  auto need = [&](AsId as) {
    if (!graph_.contains(as)) throw ValidationError("event names unknown AS " + to_string(as));
  };
  int phase = 0;
  if (const auto* e = std::get_if<OriginateEvent>(&event.what)) {
    need(e->as);
  } else if (const auto* e = std::get_if<LinkEvent>(&event.what)) {
    if (!graph_.has_link(e->a, e->b)) {
      throw ValidationError("unknown link " + to_string(e->a) + "-" + to_string(e->b));
    }
  } else if (const auto* e = std::get_if<ProbeEvent>(&event.what)) {
    need(e->src);
    need(e->dst);
    phase = 1;
  } else if (const auto* e = std::get_if<MiroIssueEvent>(&event.what)) {
    need(e->requester);
    need(e->request.responder);
    need(e->request.dest);
  }
  if (phase == 0) last_external_ = std::max(last_external_, event.time);
  Pending p;
  p.time = event.time;
  p.phase = phase;
  p.seq = seq_++;
  p.external = event;
  queue_.push(std::move(p));
}

void Simulator::load(const Scenario& scenario) {
  for (const ScenarioEvent& e : scenario.events) schedule(e);
  if (scenario.sampling) set_sampling(*scenario.sampling);
}

void Simulator::set_sampling(ProbeSampling sampling) {
  if (sampling.every == 0) throw ValidationError("probe interval must be at least 1 tick");
  for (const auto& [src, dst] : sampling.pairs) {
    if (!graph_.contains(src) || !graph_.contains(dst)) {
      throw ValidationError("probe pair names unknown AS");
    }
  }
  next_sample_ = std::max(sampling.start, now_);
  if (sampling.end && *sampling.end < next_sample_) next_sample_ = kNever;
  sampling_ = std::move(sampling);
}

void Simulator::inject_failure(Tick t, AsId a, AsId b) {
  schedule(ScenarioEvent{t, LinkEvent{a, b, false}});
}

void Simulator::run() { advance(kNever); }

void Simulator::run_until(Tick t) {
  advance(t);
  if (!halted_ && t != kNever && t > now_) now_ = t;
}

void Simulator::advance(Tick limit) {
  while (!halted_) {
    const Tick next_event = queue_.empty() ? kNever : queue_.top().time;
    const Tick t = std::min(next_event, next_sample_);
    if (t == kNever || t > limit) break;
    if (next_event == t && !queue_.top().external &&
        t > last_external_ + config_.quiesce_limit) {
      converged_ = false;
      halted_ = true;
      break;
    }
    now_ = t;
    while (!queue_.empty() && queue_.top().time == t) {
      Pending p = queue_.top();
      queue_.pop();
      handle(p);
    }
    if (next_sample_ == t) {
      for (const auto& [src, dst] : sampling_->pairs) record_probe(probe(src, dst));
      const Tick next = t + sampling_->every;
      const bool done = sampling_->end ? next > *sampling_->end : queue_.empty();
      next_sample_ = done ? kNever : next;
    }
  }
}

void Simulator::handle(const Pending& p) {
  if (!p.external) {
    deliver(p);
    return;
  }
  if (const auto* e = std::get_if<ProbeEvent>(&p.external->what)) {
    ForwardCtx ctx;
    ctx.label = e->label;
    ctx.traffic_class = e->traffic_class;
    record_probe(probe(e->src, e->dst, ctx));
    return;
  }
  quiescence_ = now_;
  apply(*p.external);
}

void Simulator::apply(const ScenarioEvent& event) {
  if (const auto* e = std::get_if<OriginateEvent>(&event.what)) {
    send_all(speaker(e->as).originate(e->as));
  } else if (const auto* e = std::get_if<LinkEvent>(&event.what)) {
    if (graph_.link_up(e->a, e->b) == e->up) {
      ++engine_counters_["noop_link_events"];
      return;
    }
    graph_.set_link_state(e->a, e->b, e->up);
    const LinkKey link(e->a, e->b);
    ++epoch_[link];
    if (!e->up && !first_failure_) first_failure_ = now_;
    for (auto [x, y] : {std::pair{link.lo, link.hi}, std::pair{link.hi, link.lo}}) {
      send_all(e->up ? speaker(x).link_up(y) : speaker(x).link_down(y));
    }
  } else if (const auto* e = std::get_if<MiroIssueEvent>(&event.what)) {
    auto* miro = dynamic_cast<MiroSpeaker*>(&speaker(e->requester));
    if (!miro || !miro->deployed()) {
      ++engine_counters_["miro_skipped"];
      return;
    }
    try {
      send(miro->issue_request(e->request));
    } catch (const ValidationError&) {
      ++engine_counters_["miro_request_errors"];
    }
  }
}

void Simulator::deliver(const Pending& p) {
  const UpdateMsg& msg = p.msg;
  const LinkKey link(msg.sender, msg.receiver);
  const bool live = graph_.link_up(msg.sender, msg.receiver) && epoch_[link] == p.epoch;
  if (config_.record_trace) trace_.push_back(TraceEntry{p.sent, now_, !live, msg});
  quiescence_ = now_;
  if (!live) {
    ++voided_;
    return;
  }
  if (!msg.relay.empty()) {
    UpdateMsg hop = msg;
    hop.sender = msg.receiver;
    hop.receiver = hop.relay.front();
    hop.relay.erase(hop.relay.begin());
    send(std::move(hop));
    return;
  }
  send_all(speaker(msg.receiver).receive(msg));
}

void Simulator::send(UpdateMsg msg) {
  ++messages_[std::string(to_string(msg.kind))];
  ++message_total_;
  if (!graph_.has_link(msg.sender, msg.receiver) || !graph_.link_up(msg.sender, msg.receiver)) {
    ++voided_;
    if (config_.record_trace) trace_.push_back(TraceEntry{now_, now_, true, msg});
    return;
  }
  const LinkKey link(msg.sender, msg.receiver);
  Tick at = now_ + delay(link);
  Tick& tail = channel_tail_[{msg.sender, msg.receiver}];
  at = std::max(at, tail);
  tail = at;

  Pending p;
  p.time = at;
  p.phase = 0;
  p.seq = seq_++;
  p.sent = now_;
  p.epoch = epoch_[link];
  p.msg = std::move(msg);
  queue_.push(std::move(p));
}

void Simulator::send_all(Outbox out) {
  for (UpdateMsg& m : out) send(std::move(m));
}

void Simulator::record_probe(ProbeResult result) { probes_.push_back(std::move(result)); }

ProbeResult Simulator::probe(AsId src, AsId dst, const ForwardCtx& start) const {
  if (!graph_.contains(src) || !graph_.contains(dst)) {
    throw ValidationError("probe names unknown AS");
  }
  ProbeResult r;
  r.src = src;
  r.dst = dst;
  r.time = now_;
  r.traversed = {src};

  const std::size_t limit = 2 * graph_.size();
  std::set<std::pair<AsId, ForwardCtx>> seen;
  AsId at = src;
  ForwardCtx ctx = start;
  std::optional<AsId> prev;
  auto drop = [&](ProbeResult::Reason reason) {
    r.outcome = ProbeResult::Outcome::Dropped;
    r.reason = reason;
    r.at = at;
    return r;
  };

  for (;;) {
    if (at == dst) {
      r.outcome = ProbeResult::Outcome::Delivered;
      r.at = at;
      return r;
    }
    if (r.traversed.size() > limit || !seen.emplace(at, ctx).second) {
      return drop(ProbeResult::Reason::Loop);
    }
    std::optional<AsId> next;
    if (ctx.mode == ForwardCtx::Mode::Tunnel && ctx.tunnel_endpoint != at) {
      const Path& path = ctx.tunnel_path;
      auto it = std::find(path.begin(), path.end(), at);
      if (it != path.end() && it + 1 != path.end()) next = *(it + 1);
    } else {
      ForwardStep step = speaker(at).forward(dst, ctx, prev);
      next = step.next;
      ctx = std::move(step.ctx);
    }
    if (!next || !graph_.has_link(at, *next) || !graph_.link_up(at, *next)) {
      return drop(ProbeResult::Reason::NoRoute);
    }
    prev = at;
    at = *next;
    r.traversed.push_back(at);
  }
}

MetricsReport Simulator::report() const {
  MetricsReport rep;
  rep.protocol = std::string(to_string(config_.protocol));
  rep.converged = converged_;
  rep.quiescence_time = quiescence_;
  rep.end_time = now_;
  rep.first_failure = first_failure_;
  rep.messages = messages_;
  rep.message_total = message_total_;
  rep.voided = voided_;

  std::map<std::pair<AsId, AsId>, std::optional<std::pair<Tick, Tick>>> open;
  for (const ProbeResult& p : probes_) {
    const auto key = std::make_pair(p.src, p.dst);
    PairStats& ps = rep.pairs[key];
    ++rep.probes;
    ++ps.probes;
    auto& run = open[key];
    if (p.delivered()) {
      ++rep.delivered;
      ++ps.delivered;
      if (run) {
        ps.intervals.push_back(*run);
        run.reset();
      }
      continue;
    }
    ++rep.dropped;
    ++ps.dropped;
    if (p.reason == ProbeResult::Reason::Loop) {
      ++rep.dropped_loop;
      ++ps.loops;
    } else {
      ++rep.dropped_no_route;
    }
    if (first_failure_ && p.time >= *first_failure_) {
      if (run) {
        run->second = p.time;
      } else {
        run = std::make_pair(p.time, p.time);
      }
    }
  }
  for (auto& [key, run] : open) {
    if (run) rep.pairs[key].intervals.push_back(*run);
  }
  for (const auto& [key, ps] : rep.pairs) {
    for (const auto& [a, b] : ps.intervals) rep.disconnectivity_ticks += b - a + 1;
  }

  for (const auto& [as, s] : speakers_) {
    const RibSize size = s->rib_size();
    rep.rib_in_total += size.rib_in;
    rep.rib_in_max = std::max(rep.rib_in_max, size.rib_in);
    rep.local_rib_total += size.local;
    rep.local_rib_max = std::max(rep.local_rib_max, size.local);
    for (const auto& [name, v] : s->counters()) rep.counters[name] += v;
    s->gauges(rep.counters);
  }
  for (const auto& [name, v] : engine_counters_) rep.counters[name] += v;

  // Variant metrics are always reported, even when zero.
  std::vector<std::string> always;
  switch (config_.protocol) {
    case Protocol::Rbgp: always = {"failover_adverts", "failover_switches", "rci_discards"}; break;
    case Protocol::Miro:
      always = {"miro_requests", "miro_tunnels_granted", "miro_tunnels_installed", "miro_teardowns"};
      break;
    case Protocol::Yamr:
    case Protocol::YamrHiding:
      always = {"labeled_rib_size", "lame_count", "hidden_failures", "deflection_switches"};
      break;
    case Protocol::Bgp: break;
  }
  for (const std::string& name : always) rep.counters.try_emplace(name, 0);
  return rep;
}

MetricsReport run(const AsGraph& graph, const SimConfig& config, const Scenario& scenario) {
  Simulator sim(graph, config);
  sim.load(scenario);
  sim.run();
  return sim.report();
}

}  // namespace irsim
