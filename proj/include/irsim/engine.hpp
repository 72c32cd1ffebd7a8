#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "irsim/miro.hpp"
#include "irsim/rbgp.hpp"
#include "irsim/speaker.hpp"
#include "irsim/yamr.hpp"

namespace irsim {

struct OriginateEvent {
  AsId as;
};

struct LinkEvent {
  AsId a;
  AsId b;
  bool up = false;
};

struct ProbeEvent {
  AsId src;
  AsId dst;
  PathLabel label;
  std::string traffic_class;
};

struct MiroIssueEvent {
  AsId requester;
  MiroRequest request;
};

struct ScenarioEvent {
  Tick time = 0;
  std::variant<OriginateEvent, LinkEvent, ProbeEvent, MiroIssueEvent> what;
};

/// Periodic probing of fixed pairs. Without `end`, sampling continues
/// until the control plane is idle.
struct ProbeSampling {
  std::vector<std::pair<AsId, AsId>> pairs;
  Tick start = 0;
  std::optional<Tick> end;
  Tick every = 1;
};

struct Scenario {
  std::vector<ScenarioEvent> events;
  std::optional<ProbeSampling> sampling;
};

struct SimConfig {
  Protocol protocol = Protocol::Bgp;
  Tick default_delay = 1;
  std::map<LinkKey, Tick> link_delays;
  /// Ticks allowed after the last external event before the run is
  /// declared non-convergent.
  Tick quiesce_limit = 10000;
  RbgpOptions rbgp;
  MiroConfig miro;
  bool record_trace = false;
};

struct ProbeResult {
  enum class Outcome { Delivered, Dropped };
  enum class Reason { None, NoRoute, Loop };

  Outcome outcome = Outcome::Dropped;
  Reason reason = Reason::None;
  AsId src;
  AsId dst;
  AsId at;  // drop point, or dst when delivered
  Path traversed;
  Tick time = 0;

  bool delivered() const { return outcome == Outcome::Delivered; }
};

std::string_view to_string(ProbeResult::Reason reason);

/// One delivered or voided control message.
struct TraceEntry {
  Tick sent = 0;
  Tick time = 0;
  bool voided = false;
  UpdateMsg msg;
};

struct PairStats {
  std::uint64_t probes = 0;
  std::uint64_t delivered = 0;
  std::uint64_t dropped = 0;
  std::uint64_t loops = 0;
  /// Runs of consecutive dropped samples at or after the first failure,
  /// as inclusive [first, last] ticks.
  std::vector<std::pair<Tick, Tick>> intervals;
};

struct MetricsReport {
  std::string protocol;
  bool converged = true;
  Tick quiescence_time = 0;
  Tick end_time = 0;
  std::optional<Tick> first_failure;
  std::map<std::string, std::uint64_t> messages;  // by kind
  std::uint64_t message_total = 0;
  std::uint64_t voided = 0;
  std::uint64_t probes = 0;
  std::uint64_t delivered = 0;
  std::uint64_t dropped = 0;
  std::uint64_t dropped_loop = 0;
  std::uint64_t dropped_no_route = 0;
  std::uint64_t disconnectivity_ticks = 0;
  std::map<std::pair<AsId, AsId>, PairStats> pairs;
  std::uint64_t rib_in_total = 0;
  std::uint64_t rib_in_max = 0;
  std::uint64_t local_rib_total = 0;
  std::uint64_t local_rib_max = 0;
  Counters counters;
};

/// Deterministic discrete-event simulation of one protocol variant over
/// one topology. Owns the graph and every AS's protocol state.
class Simulator {
 public:
  Simulator(AsGraph graph, SimConfig config);

  Simulator(const Simulator&) = delete;
  Simulator& operator=(const Simulator&) = delete;

  void schedule(const ScenarioEvent& event);
  void load(const Scenario& scenario);
  void set_sampling(ProbeSampling sampling);

  /// Schedules LinkDown(a, b) at `t`. Throws ValidationError on an unknown link.
  void inject_failure(Tick t, AsId a, AsId b);

  /// Processes events until the queue drains, sampling ends, or the
  /// quiesce limit trips.
  void run();
  /// Processes every event and sample at or before `t`.
  void run_until(Tick t);

  /// Walks the data plane at the current instant; no side effects.
  ProbeResult probe(AsId src, AsId dst, const ForwardCtx& ctx = {}) const;

  MetricsReport report() const;

  Tick now() const { return now_; }
  bool converged() const { return converged_; }
  bool idle() const { return queue_.empty(); }
  const AsGraph& graph() const { return graph_; }
  const SimConfig& config() const { return config_; }
  const std::vector<ProbeResult>& probes() const { return probes_; }
  const std::vector<TraceEntry>& trace() const { return trace_; }

  Speaker& speaker(AsId as);
  const Speaker& speaker(AsId as) const;

  template <typename T>
  T& speaker_as(AsId as) {
    auto* s = dynamic_cast<T*>(&speaker(as));
    if (!s) throw ValidationError("AS " + to_string(as) + " runs a different protocol");
    return *s;
  }

 private:
  struct Pending {
    Tick time = 0;
    int phase = 0;  // 0 control, 1 probe
    std::uint64_t seq = 0;
    std::optional<ScenarioEvent> external;
    UpdateMsg msg;
    Tick sent = 0;
    std::uint64_t epoch = 0;
  };

  struct Later {
    bool operator()(const Pending& a, const Pending& b) const {
      if (a.time != b.time) return a.time > b.time;
      if (a.phase != b.phase) return a.phase > b.phase;
      return a.seq > b.seq;
    }
  };

  static constexpr Tick kNever = std::numeric_limits<Tick>::max();

  void advance(Tick limit);
  void handle(const Pending& p);
  void apply(const ScenarioEvent& event);
  void deliver(const Pending& p);
  void send(UpdateMsg msg);
  void send_all(Outbox out);
  void record_probe(ProbeResult result);
  Tick delay(LinkKey link) const;

  AsGraph graph_;
  SimConfig config_;
  std::map<AsId, std::unique_ptr<Speaker>> speakers_;
  std::priority_queue<Pending, std::vector<Pending>, Later> queue_;
  std::uint64_t seq_ = 0;
  Tick now_ = 0;
  Tick last_external_ = 0;
  Tick quiescence_ = 0;
  bool converged_ = true;
  bool halted_ = false;
  std::optional<Tick> first_failure_;

  std::optional<ProbeSampling> sampling_;
  Tick next_sample_ = kNever;

  std::map<LinkKey, std::uint64_t> epoch_;
  std::map<std::pair<AsId, AsId>, Tick> channel_tail_;
  std::map<std::string, std::uint64_t> messages_;
  std::uint64_t message_total_ = 0;
  std::uint64_t voided_ = 0;
  std::vector<ProbeResult> probes_;
  std::vector<TraceEntry> trace_;
  std::map<std::string, std::uint64_t> engine_counters_;
};

/// Builds a simulator, loads the scenario, runs it, and returns the report.
MetricsReport run(const AsGraph& graph, const SimConfig& config, const Scenario& scenario);

}  // namespace irsim
