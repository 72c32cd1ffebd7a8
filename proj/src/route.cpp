#include "irsim/route.hpp"

#include <charconv>

namespace irsim {

std::string to_string(const PathLabel& label) {
  return label.avoid ? to_string(*label.avoid) : std::string("d");
}

std::optional<PathLabel> parse_label(std::string_view text) {
  if (text == "d") return PathLabel{};
  const auto dash = text.find('-');
  if (dash == std::string_view::npos) return std::nullopt;
  auto parse = [](std::string_view s, std::uint32_t& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size() && out != 0;
  };
  std::uint32_t a = 0, b = 0;
  if (!parse(text.substr(0, dash), a) || !parse(text.substr(dash + 1), b) || a == b) {
    return std::nullopt;
  }
  return PathLabel::avoiding(LinkKey(AsId(a), AsId(b)));
}

Route self_route(AsId me) {
  Route r;
  r.dest = me;
  r.as_path = {me};
  r.rank = PrefRank{0};
  r.export_class = Learned::Self;
  return r;
}

bool preferred(const Route& a, const Route& b) {
  if (a.rank != b.rank) return a.rank < b.rank;
  if (a.length() != b.length()) return a.length() < b.length();
  const AsId na = a.next_hop().value_or(AsId{});
  const AsId nb = b.next_hop().value_or(AsId{});
  return na < nb;
}

std::optional<Route> decide(std::span<const Route> candidates) {
  const Route* best = nullptr;
  for (const Route& r : candidates) {
    if (best == nullptr || preferred(r, *best)) best = &r;
  }
  if (best == nullptr) return std::nullopt;
  return *best;
}

bool Avoidance::permits(const Path& path) const {
  for (AsId as : path) {
    if (ases.count(as)) return false;
  }
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    if (links.count(LinkKey(path[i], path[i + 1]))) return false;
  }
  return true;
}

std::string_view to_string(MsgKind kind) {
  switch (kind) {
    case MsgKind::Announce: return "announce";
    case MsgKind::Withdraw: return "withdraw";
    case MsgKind::MiroRequest: return "miro_request";
    case MsgKind::MiroOffer: return "miro_offer";
    case MsgKind::MiroAccept: return "miro_accept";
    case MsgKind::MiroGrant: return "miro_grant";
    case MsgKind::MiroRefuse: return "miro_refuse";
    case MsgKind::MiroTeardown: return "miro_teardown";
  }
  return "?";
}

bool is_miro(MsgKind kind) {
  return kind != MsgKind::Announce && kind != MsgKind::Withdraw;
}

UpdateMsg make_announce(AsId from, AsId to, const Route& route) {
  UpdateMsg m;
  m.kind = MsgKind::Announce;
  m.sender = m.origin = from;
  m.receiver = m.target = to;
  m.dest = route.dest;
  m.path = route.as_path;
  m.export_class = route.export_class;
  m.label = route.label;
  return m;
}

UpdateMsg make_withdraw(AsId from, AsId to, AsId dest, PathLabel label) {
  UpdateMsg m;
  m.kind = MsgKind::Withdraw;
  m.sender = m.origin = from;
  m.receiver = m.target = to;
  m.dest = dest;
  m.label = label;
  return m;
}

UpdateMsg make_miro(MsgKind kind, AsId from, AsId to, AsId dest, MiroBody body) {
  UpdateMsg m;
  m.kind = kind;
  m.sender = m.origin = from;
  m.receiver = m.target = to;
  m.dest = dest;
  m.miro = std::move(body);
  return m;
}

}  // namespace irsim
