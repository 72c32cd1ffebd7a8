#pragma once

#include <map>
#include <optional>
#include <set>
#include <utility>

#include "irsim/speaker.hpp"

namespace irsim {

struct YamrOptions {
  bool hiding = false;
};

/// Labeled multipath speaker: a default path per destination plus one
/// alternative per default-path link, each labeled by the link it avoids.
/// With hiding on, withdrawn paths stay advertised as lame while traffic
/// follows a locally chosen deflection path.
class YamrSpeaker : public Speaker {
 public:
  YamrSpeaker(AsId me, const AsGraph& graph, YamrOptions options = {})
      : Speaker(me, graph), options_(options) {}

  Outbox originate(AsId dest) override;
  Outbox receive(const UpdateMsg& msg) override;
  Outbox link_down(AsId neighbor) override;
  Outbox link_up(AsId neighbor) override;
  ForwardStep forward(AsId dest, const ForwardCtx& ctx,
                      std::optional<AsId> prev) const override;
  std::optional<Route> best(AsId dest) const override;
  RibSize rib_size() const override;
  void gauges(Counters& out) const override;

  using InKey = std::pair<AsId, PathLabel>;

  struct InEntry {
    Route route;
    bool lame = false;
    std::optional<LinkKey> cause;
  };

  /// LOCAL_RIB for `dest`, keyed by label.
  std::map<PathLabel, Route> table(AsId dest) const;
  std::map<InKey, InEntry> rib_in(AsId dest) const;
  /// Deflection bound to the lame path selected under `label`, if any.
  std::optional<Route> deflection(AsId dest, const PathLabel& label) const;
  std::size_t lame_count() const;

 private:
  struct Selected {
    Route route;
    std::optional<InKey> source;  // nullopt: originated here
  };

  struct DestState {
    std::map<InKey, InEntry> rib_in;
    std::map<PathLabel, Selected> local;
    std::map<PathLabel, Route> deflect;
    std::map<AsId, std::map<PathLabel, Path>> adj_out;
  };

  void select(AsId dest, DestState& st) const;
  bool is_lame(const DestState& st, const Selected& sel) const;
  std::optional<Route> pick_deflection(const DestState& st, const PathLabel& label,
                                       std::optional<LinkKey> failed) const;
  void settle(AsId dest, DestState& st);
  void export_to_neighbors(AsId dest, DestState& st, const Cause& cause, Outbox& out);
  void recompute_into(AsId dest, const Cause& cause, Outbox& out);
  Outbox recompute_all(const Cause& cause);
  void lose(DestState& st, const InKey& key, std::optional<LinkKey> cause);

  YamrOptions options_;
  std::map<AsId, DestState> dests_;
  std::set<AsId> originated_;
};

}  // namespace irsim
