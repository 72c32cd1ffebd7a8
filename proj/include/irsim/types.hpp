#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace irsim {

/// Simulation time in integer ticks.
using Tick = std::uint64_t;

/// Autonomous system identifier. Valid identifiers are >= 1.
struct AsId {
  std::uint32_t value = 0;

  constexpr AsId() = default;
  constexpr explicit AsId(std::uint32_t v) : value(v) {}

  auto operator<=>(const AsId&) const = default;
};

std::ostream& operator<<(std::ostream& os, AsId id);
std::string to_string(AsId id);

/// AS-level path, holder first and destination last.
using Path = std::vector<AsId>;

std::string to_string(const Path& path);

/// Unordered AS pair identifying an inter-AS link.
struct LinkKey {
  AsId lo;
  AsId hi;

  constexpr LinkKey() = default;
  constexpr LinkKey(AsId a, AsId b) : lo(a < b ? a : b), hi(a < b ? b : a) {}

  auto operator<=>(const LinkKey&) const = default;
};

std::string to_string(LinkKey link);

bool path_contains(const Path& path, AsId as);
bool path_contains_link(const Path& path, LinkKey link);

/// Number of trailing ASes shared by both paths (destination included).
std::size_t common_suffix(const Path& a, const Path& b);

/// Input that violates a documented contract: bad topology text, unknown
/// link, malformed scenario.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace irsim
