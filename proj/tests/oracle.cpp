#include "oracle.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <tuple>

namespace oracle {

Relations::Relations(const irsim::AsGraph& g) {
  for (irsim::AsId n : g.nodes()) {
    nodes_.push_back(n.value);
    adj_[n.value];
  }
  for (const irsim::Link& l : g.links()) {
    if (!l.up) continue;
    const std::uint32_t a = l.a.value;
    const std::uint32_t b = l.b.value;
    switch (l.rel) {
      case irsim::RelKind::ProviderToCustomer:
        kind_[{a, b}] = 0;
        kind_[{b, a}] = 3;
        break;
      case irsim::RelKind::Peer:
        kind_[{a, b}] = kind_[{b, a}] = 2;
        break;
      case irsim::RelKind::Sibling:
        kind_[{a, b}] = kind_[{b, a}] = 1;
        break;
    }
    adj_[a].push_back(b);
    adj_[b].push_back(a);
  }
  for (auto& [n, list] : adj_) std::sort(list.begin(), list.end());
}

int Relations::kind(std::uint32_t me, std::uint32_t n) const {
  auto it = kind_.find({me, n});
  if (it == kind_.end()) throw std::logic_error("oracle: not adjacent");
  return it->second;
}

bool Relations::adjacent(std::uint32_t a, std::uint32_t b) const { return kind_.count({a, b}) != 0; }

const std::vector<std::uint32_t>& Relations::neighbors(std::uint32_t me) const { return adj_.at(me); }

bool valley_free(const Relations& rel, const Hops& path) {
  bool descending = false;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const int k = rel.kind(path[i], path[i + 1]);
    if (k == 1) continue;
    if (k == 3) {
      if (descending) return false;
    } else if (k == 2) {
      if (descending) return false;
      descending = true;
    } else {
      descending = true;
    }
  }
  return true;
}

std::vector<Hops> simple_paths(const Relations& rel, std::uint32_t src, std::uint32_t dest) {
  std::vector<Hops> out;
  Hops cur{src};
  std::function<void(std::uint32_t)> walk = [&](std::uint32_t at) {
    if (at == dest) {
      out.push_back(cur);
      return;
    }
    for (std::uint32_t n : rel.neighbors(at)) {
      if (std::find(cur.begin(), cur.end(), n) != cur.end()) continue;
      cur.push_back(n);
      walk(n);
      cur.pop_back();
    }
  };
  walk(src);
  return out;
}

std::map<std::uint32_t, std::optional<Hops>> stable_routes(const irsim::AsGraph& g, std::uint32_t dest) {
  const Relations rel(g);
  std::map<std::uint32_t, std::optional<Hops>> route;
  for (std::uint32_t n : rel.nodes()) route[n] = std::nullopt;
  route[dest] = Hops{dest};

  // A holder exports its route to `to` when it originated it, learned it
  // from a customer, or `to` is its customer. Sibling-free graphs only.
  auto exports = [&](std::uint32_t holder, const Hops& r, std::uint32_t to) {
    if (r.size() == 1) return true;
    return rel.kind(holder, r[1]) == 0 || rel.kind(holder, to) == 0;
  };

  const std::size_t rounds = rel.nodes().size() * rel.nodes().size() + 4;
  for (std::size_t round = 0; round < rounds; ++round) {
    bool changed = false;
    for (std::uint32_t x : rel.nodes()) {
      if (x == dest) continue;
      std::optional<Hops> best;
      std::tuple<int, std::size_t, std::uint32_t> best_key{};
      for (std::uint32_t n : rel.neighbors(x)) {
        const auto& rn = route[n];
        if (!rn || std::find(rn->begin(), rn->end(), x) != rn->end()) continue;
        if (!exports(n, *rn, x)) continue;
        Hops cand{x};
        cand.insert(cand.end(), rn->begin(), rn->end());
        const std::tuple<int, std::size_t, std::uint32_t> key{rel.kind(x, n), cand.size(), n};
        if (!best || key < best_key) {
          best = cand;
          best_key = key;
        }
      }
      if (best != route[x]) {
        route[x] = best;
        changed = true;
      }
    }
    if (!changed) return route;
  }
  throw std::runtime_error("oracle: no stable solution reached");
}

std::size_t shared_suffix(const Hops& a, const Hops& b) {
  std::size_t n = 0;
  while (n < a.size() && n < b.size() && a[a.size() - 1 - n] == b[b.size() - 1 - n]) ++n;
  return n;
}

}  // namespace oracle
