#pragma once

#include <initializer_list>
#include <string>
#include <vector>

#include "irsim/fixtures.hpp"
#include "irsim/types.hpp"

namespace testing {

inline irsim::Path P(std::initializer_list<std::uint32_t> ids) {
  irsim::Path out;
  for (std::uint32_t v : ids) out.emplace_back(v);
  return out;
}

/// Path by fixture AS names, e.g. named("fig3", {"ATT", "Sprint", "MIT"}).
inline irsim::Path named(const std::string& fixture, std::initializer_list<const char*> names) {
  irsim::Path out;
  for (const char* n : names) out.push_back(irsim::fixture_as(fixture, n));
  return out;
}

inline std::vector<std::uint32_t> raw(const irsim::Path& p) {
  std::vector<std::uint32_t> out;
  for (irsim::AsId a : p) out.push_back(a.value);
  return out;
}

}  // namespace testing
