#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "irsim/route.hpp"
#include "irsim/topology.hpp"

namespace irsim {

enum class Protocol { Bgp, Rbgp, Miro, Yamr, YamrHiding };

std::string_view to_string(Protocol p);
std::optional<Protocol> parse_protocol(std::string_view name);

/// Per-packet forwarding state carried across hops during a probe walk.
struct ForwardCtx {
  enum class Mode : std::uint8_t { Plain, Failover, Tunnel };

  Mode mode = Mode::Plain;
  PathLabel label;
  std::string traffic_class;
  // Tunnel mode only.
  AsId tunnel_endpoint;
  std::uint32_t tunnel_id = 0;
  Path tunnel_path;

  auto operator<=>(const ForwardCtx&) const = default;
};

/// One forwarding decision. No next hop means the packet is dropped here.
struct ForwardStep {
  std::optional<AsId> next;
  ForwardCtx ctx;
};

struct RibSize {
  std::uint64_t rib_in = 0;
  std::uint64_t local = 0;
};

using Outbox = std::vector<UpdateMsg>;
using Counters = std::map<std::string, std::uint64_t>;

/// Why a speaker is recomputing; stamped onto the messages it emits.
struct Cause {
  std::optional<LinkKey> rci;
  std::optional<LinkKey> repaired;
};

/// Per-AS protocol state machine. Owned and driven by the simulator's
/// single-threaded event loop; every call returns the messages to send.
class Speaker {
 public:
  Speaker(AsId me, const AsGraph& graph) : me_(me), graph_(graph) {}
  virtual ~Speaker() = default;

  Speaker(const Speaker&) = delete;
  Speaker& operator=(const Speaker&) = delete;

  AsId id() const { return me_; }

  virtual Outbox originate(AsId dest) = 0;
  virtual Outbox receive(const UpdateMsg& msg) = 0;
  virtual Outbox link_down(AsId neighbor) = 0;
  virtual Outbox link_up(AsId neighbor) = 0;

  /// Data-plane decision for a packet to `dest` that arrived from `prev`.
  virtual ForwardStep forward(AsId dest, const ForwardCtx& ctx,
                              std::optional<AsId> prev) const = 0;

  /// Selected default route, if any.
  virtual std::optional<Route> best(AsId dest) const = 0;
  virtual RibSize rib_size() const = 0;

  /// End-of-run state gauges (e.g. lame entries); added to the report.
  virtual void gauges(Counters& out) const { (void)out; }

  const Counters& counters() const { return counters_; }
  void set_clock(const Tick* clock) { clock_ = clock; }

 protected:
  Tick now() const { return clock_ ? *clock_ : 0; }
  bool up(AsId n) const { return graph_.link_up(me_, n); }
  Relation rel(AsId n) const { return graph_.relation(me_, n); }
  void bump(const std::string& counter, std::uint64_t by = 1) { counters_[counter] += by; }

  AsId me_;
  const AsGraph& graph_;
  const Tick* clock_ = nullptr;
  Counters counters_;
};

}  // namespace irsim
