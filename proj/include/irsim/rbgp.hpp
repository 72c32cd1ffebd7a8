#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "irsim/bgp.hpp"

namespace irsim {

struct RbgpOptions {
  bool rci = true;
};

/// Candidate sharing the shortest suffix with `primary`; ties fall back to
/// the regular decision order. Nullopt iff `candidates` is empty.
std::optional<Route> select_failover(const Route& primary, std::span<const Route> candidates);

/// Candidates whose paths avoid every link in `failed`.
std::vector<Route> rci_filter(const std::set<LinkKey>& failed, std::span<const Route> candidates);

/// BGP plus one pre-advertised failover path per destination (sent only to
/// the primary next hop) and root-cause tagging of failure-driven updates.
class RbgpSpeaker : public BgpSpeaker {
 public:
  RbgpSpeaker(AsId me, const AsGraph& graph, RbgpOptions options = {})
      : BgpSpeaker(me, graph), options_(options) {}

  Outbox receive(const UpdateMsg& msg) override;
  Outbox link_down(AsId neighbor) override;
  Outbox link_up(AsId neighbor) override;
  ForwardStep forward(AsId dest, const ForwardCtx& ctx,
                      std::optional<AsId> prev) const override;
  RibSize rib_size() const override;

  struct FailoverAdvert {
    AsId to;
    Route route;
  };

  /// Data-plane entry. `failover` marks a received failover path; `stale`
  /// marks a previous next hop kept while no route exists.
  struct FibEntry {
    AsId next;
    bool failover = false;
    bool stale = false;
  };

  std::optional<FailoverAdvert> failover_advertised(AsId dest) const;
  const std::map<AsId, Route>& failover_received(AsId dest) const;
  std::optional<FibEntry> fib(AsId dest) const;
  const std::set<LinkKey>& known_failures() const { return failed_; }

 protected:
  std::vector<Route> eligible(AsId dest, const DestState& st) override;
  void after_decision(AsId dest, DestState& st, const Cause& cause, Outbox& out) override;

 private:
  struct FailoverState {
    std::map<AsId, Route> received;  // one slot per neighbor
    std::optional<FailoverAdvert> sent;
    std::optional<FibEntry> fib;
  };

  std::optional<Route> usable_failover(const FailoverState& fs) const;
  std::vector<Route> filtered(std::vector<Route> routes);

  RbgpOptions options_;
  std::map<AsId, FailoverState> failover_;
  std::set<LinkKey> failed_;
};

}  // namespace irsim
