#pragma once

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "irsim/speaker.hpp"

namespace irsim {

/// Baseline policy-based path-vector speaker. RIB_IN holds, per destination,
/// the latest route from each neighbor (already prefixed with this AS);
/// LOCAL_RIB holds the decision result. Exports follow Gao-Rexford and are
/// diffed against what each neighbor was last told.
class BgpSpeaker : public Speaker {
 public:
  BgpSpeaker(AsId me, const AsGraph& graph) : Speaker(me, graph) {}

  Outbox originate(AsId dest) override;
  Outbox receive(const UpdateMsg& msg) override;
  Outbox link_down(AsId neighbor) override;
  Outbox link_up(AsId neighbor) override;
  ForwardStep forward(AsId dest, const ForwardCtx& ctx,
                      std::optional<AsId> prev) const override;
  std::optional<Route> best(AsId dest) const override;
  RibSize rib_size() const override;

  Outbox process_update(const UpdateMsg& msg) { return receive(msg); }

  const std::map<AsId, Route>& rib_in(AsId dest) const;
  std::optional<Path> advertised(AsId dest, AsId neighbor) const;

 protected:
  struct Advert {
    Path path;
    Learned cls = Learned::Self;

    bool operator==(const Advert&) const = default;
  };

  struct DestState {
    std::map<AsId, Route> rib_in;
    std::optional<Route> best;
    std::map<AsId, Advert> adj_out;
  };

  /// Candidates the decision process may choose from.
  virtual std::vector<Route> eligible(AsId dest, const DestState& st);

  /// Hook run after selection and export for `dest`.
  virtual void after_decision(AsId dest, DestState& st, const Cause& cause, Outbox& out) {
    (void)dest, (void)st, (void)cause, (void)out;
  }

  void check_neighbor(const UpdateMsg& msg) const;
  Route candidate(const UpdateMsg& msg) const;
  void apply_route_update(const UpdateMsg& msg);
  void recompute_into(AsId dest, const Cause& cause, Outbox& out);
  Outbox recompute(AsId dest, const Cause& cause);
  Outbox recompute_all(const Cause& cause);
  void forget_neighbor(AsId neighbor);
  static void stamp(UpdateMsg& msg, const Cause& cause);

  const DestState* find(AsId dest) const;

  std::map<AsId, DestState> dests_;
  std::set<AsId> originated_;
};

}  // namespace irsim
